#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef PRT_CLI_PATH
#define PRT_CLI_PATH "prt"
#endif

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string out;
};

CmdResult run_cli(const std::string& args) {
    const std::string cmd = std::string(PRT_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    CmdResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) res.out += buf.data();
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::string tmp_path(const std::string& name) {
    return std::string("cli_test_") + name;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("gen is byte-deterministic for a fixed seed") {
    const auto p1 = tmp_path("gen1.txt"), p2 = tmp_path("gen2.txt");
    CHECK(run_cli("gen --n 64 --dist zipf --seed 7 --out " + p1).exit_code == 0);
    CHECK(run_cli("gen --n 64 --dist zipf --seed 7 --out " + p2).exit_code == 0);
    const auto b1 = slurp(p1), b2 = slurp(p2);
    CHECK(!b1.empty());
    CHECK(b1 == b2);
    const auto p3 = tmp_path("gen3.txt");
    CHECK(run_cli("gen --n 64 --dist zipf --seed 8 --out " + p3).exit_code == 0);
    CHECK(slurp(p3) != b1);
}

TEST_CASE("query modes produce the expected records") {
    const auto pts = tmp_path("canon.txt");
    {
        std::ofstream os(pts);
        os << "# canonical\n1 5 16\n2 9 2\n3 4 8\n4 7 1\n5 1 32\n6 6 4\n";
    }
    auto r = run_cli("query --points " + pts + " --mode threshold3 --x1 2 --x2 6 --y 3 --w 4");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("count=2") != std::string::npos);
    CHECK(r.out.find("2:(3,4,8,3)") != std::string::npos);
    CHECK(r.out.find("5:(6,6,4,2)") != std::string::npos);
    CHECK(r.out.find("tree_nodes=") != std::string::npos);
    CHECK(r.out.find("micros=") != std::string::npos);

    r = run_cli("query --points " + pts + " --mode topk3 --x1 1 --x2 6 --y 0 --k 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("count=2") != std::string::npos);
    CHECK(r.out.find("4:(5,1,32,5)") != std::string::npos);

    r = run_cli("query --points " + pts + " --mode threshold4 --a 100 --b 200 --c 0 --d 1 --w 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("count=0") != std::string::npos);
}

TEST_CASE("batch queries run line by line") {
    const auto pts = tmp_path("batch_pts.txt");
    const auto batch = tmp_path("batch.txt");
    {
        std::ofstream os(pts);
        os << "1 5 16\n2 9 2\n3 4 8\n4 7 1\n5 1 32\n6 6 4\n";
        std::ofstream ob(batch);
        ob << "# comment\nthreshold3 2 6 3 4\nmax3 2 4 5\ntopk4 1 6 0 9 2\n";
    }
    const auto r = run_cli("query --points " + pts + " --batch " + batch);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("query=threshold3") != std::string::npos);
    CHECK(r.out.find("query=max3") != std::string::npos);
    CHECK(r.out.find("query=topk4") != std::string::npos);
}

TEST_CASE("verify passes clean and reports are identical across runs") {
    const auto r1 = run_cli("verify --n 128 --dist exp-freq --trials 60 --seed 5");
    CHECK(r1.exit_code == 0);
    const auto r2 = run_cli("verify --n 128 --dist exp-freq --trials 60 --seed 5");
    CHECK(r2.exit_code == 0);
    CHECK(r1.out == r2.out);
    CHECK(r1.out.find("all structures match") != std::string::npos);
}

TEST_CASE("verify passes on a single point") {
    CHECK(run_cli("verify --n 1 --trials 20").exit_code == 0);
}

TEST_CASE("injected faults are caught with a counterexample") {
    const auto r = run_cli("verify --n 128 --dist zipf --trials 40 --inject-fault");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("MISMATCH") != std::string::npos);
    CHECK(r.out.find("mode=") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("query --mode threshold3").exit_code == 2);       // missing --points
    CHECK(run_cli("gen --n 4 --dist gauss --out x.txt").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    const auto pts = tmp_path("w0.txt");
    {
        std::ofstream os(pts);
        os << "1 1 1\n";
    }
    CHECK(run_cli("query --points " + pts + " --mode threshold3 --x1 0 --x2 1 --y 0 --w 0")
              .exit_code == 2);
    CHECK(run_cli("query --points " + pts + " --mode topk3 --x1 0 --x2 1 --y 0 --k 0")
              .exit_code == 2);
    const auto bad = tmp_path("bad.txt");
    {
        std::ofstream os(bad);
        os << "1 2\n";
    }
    const auto r = run_cli("query --points " + bad + " --mode max3 --x1 0 --x2 1 --y 0");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("line 1") != std::string::npos);
}

TEST_CASE("bench writes the CSV schema with both structures") {
    const auto csv = tmp_path("bench.csv");
    const auto r = run_cli(
        "bench --dist zipf --n-min 256 --n-max 512 --queries 4 --structures "
        "prt,baseline,oracle --out " + csv);
    CHECK(r.exit_code == 0);
    const auto body = slurp(csv);
    CHECK(body.find("structure,n,distribution,build_ms,space_nodes,query,tree_nodes,"
                    "catalog_entries,heap_nodes,pq_ops,micros") != std::string::npos);
    CHECK(body.find("prt,256,zipf") != std::string::npos);
    CHECK(body.find("baseline,512,zipf") != std::string::npos);
    CHECK(body.find("oracle,256,zipf") != std::string::npos);
}

}  // TEST_SUITE
