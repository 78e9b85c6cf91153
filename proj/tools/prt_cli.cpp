// Command-line interface: dataset generation, query execution, oracle
// verification, and space/time benchmarking for the prioritized range index.
//
// Exit codes: 0 success, 1 verification mismatch, 2 usage or parse error.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prt/gen.hpp"
#include "prt/oracle.hpp"
#include "prt/prt.hpp"
#include "prt/wbpst.hpp"

namespace {

using namespace prt;

double wall_micros(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() -
                                                     t0)
        .count();
}

std::string counters_str(const QueryCounters& c) {
    std::ostringstream os;
    os << "tree_nodes=" << c.tree_nodes_visited
       << " catalog_entries=" << c.catalog_entries_scanned
       << " heap_nodes=" << c.heap_nodes_visited << " pq_ops=" << c.pq_operations;
    return os.str();
}

std::string points_str(std::vector<WeightedPoint> pts, bool sort_by_id) {
    if (sort_by_id) {
        std::sort(pts.begin(), pts.end(),
                  [](const WeightedPoint& a, const WeightedPoint& b) { return a.id < b.id; });
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) os << ";";
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%u:(%.17g,%.17g,%llu,%u)", pts[i].id, pts[i].x,
                      pts[i].y, static_cast<unsigned long long>(pts[i].w),
                      rank_of(pts[i].w));
        os << buf;
    }
    return os.str();
}

struct QuerySpec {
    std::string mode;
    double x1 = 0, x2 = 0, y = 0;
    double a = 0, b = 0, c = 0, d = 0;
    Weight w = 1;
    std::size_t k = 1;
};

// Runs one query against prebuilt structures and prints its record line.
int run_one_query(const PriorityRangeTree& t3, const FourSidedIndex& t4,
                  const QuerySpec& q, std::ostream& os) {
    QueryCounters counters;
    const auto t0 = std::chrono::steady_clock::now();
    std::ostringstream echo, results;
    if (q.mode == "threshold3") {
        echo << "query=threshold3 x1=" << q.x1 << " x2=" << q.x2 << " y=" << q.y
             << " w=" << q.w;
        auto res = t3.threshold_query({q.x1, q.x2, q.y}, q.w, &counters);
        results << "count=" << res.size() << " results=" << points_str(res, true);
    } else if (q.mode == "topk3") {
        echo << "query=topk3 x1=" << q.x1 << " x2=" << q.x2 << " y=" << q.y
             << " k=" << q.k;
        auto res = t3.top_k({q.x1, q.x2, q.y}, q.k, &counters);
        results << "count=" << res.size() << " results=" << points_str(res, false);
    } else if (q.mode == "max3") {
        echo << "query=max3 x1=" << q.x1 << " x2=" << q.x2 << " y=" << q.y;
        auto res = t3.max_report({q.x1, q.x2, q.y}, &counters);
        std::vector<WeightedPoint> v;
        if (res) v.push_back(*res);
        results << "count=" << v.size() << " results=" << points_str(v, false);
    } else if (q.mode == "threshold4") {
        echo << "query=threshold4 a=" << q.a << " b=" << q.b << " c=" << q.c
             << " d=" << q.d << " w=" << q.w;
        auto res = t4.threshold_query4({q.a, q.b, q.c, q.d}, q.w, &counters);
        results << "count=" << res.size() << " results=" << points_str(res, true);
    } else if (q.mode == "topk4") {
        echo << "query=topk4 a=" << q.a << " b=" << q.b << " c=" << q.c << " d=" << q.d
             << " k=" << q.k;
        auto res = t4.top_k4({q.a, q.b, q.c, q.d}, q.k, &counters);
        results << "count=" << res.size() << " results=" << points_str(res, false);
    } else {
        std::cerr << "unknown query mode: " << q.mode << "\n";
        return 2;
    }
    os << echo.str() << " | " << results.str() << " | " << counters_str(counters)
       << " | micros=" << static_cast<long long>(wall_micros(t0)) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyResult {
    std::size_t trials = 0;
    std::vector<std::string> mismatches;  // reproduction lines, trial-ordered
};

std::multiset<Rank> rank_multiset(const std::vector<WeightedPoint>& v) {
    std::multiset<Rank> m;
    for (const auto& p : v) m.insert(rank_of(p.w));
    return m;
}

std::set<PointId> id_set(const std::vector<WeightedPoint>& v) {
    std::set<PointId> s;
    for (const auto& p : v) s.insert(p.id);
    return s;
}

bool has_duplicate_id(const std::vector<WeightedPoint>& v) {
    return id_set(v).size() != v.size();
}

VerifyResult run_verify(const std::vector<WeightedPoint>& pts, std::size_t trials,
                        std::uint64_t seed, bool inject_fault) {
    // The indexed structures see a faulted copy when injection is on; the
    // oracle always sees the truth.
    std::vector<WeightedPoint> indexed = pts;
    if (inject_fault && !indexed.empty()) {
        std::size_t victim = 0;
        for (std::size_t i = 1; i < indexed.size(); ++i) {
            if (indexed[i].w > indexed[victim].w) victim = i;
        }
        indexed[victim].y += 1e9;  // displaced point: oracle disagreement
    }

    const PriorityRangeTree t3(indexed);
    const FourSidedIndex t4(indexed);
    const WbPst wb(indexed);
    const oracle::SuffixPstBaseline baseline(indexed);
    t3.audit();
    t4.audit();
    wb.audit();

    double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
    for (const auto& p : pts) {
        x_lo = std::min(x_lo, p.x);
        x_hi = std::max(x_hi, p.x);
        y_lo = std::min(y_lo, p.y);
        y_hi = std::max(y_hi, p.y);
    }
    Weight w_max = 1;
    for (const auto& p : pts) w_max = std::max(w_max, p.w);
    const Weight w_span = w_max > (Weight{1} << 62) ? ~Weight{0} : 2 * w_max;

    VerifyResult out;
    out.trials = trials;
    std::vector<std::vector<std::string>> per_trial(trials);

    // Queries are pure reads over immutable structures; trials fan out freely.
#pragma omp parallel for schedule(dynamic)
    for (long long ti = 0; ti < static_cast<long long>(trials); ++ti) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(ti) * 0x9e3779b97f4a7c15ull);
        auto& bad = per_trial[static_cast<std::size_t>(ti)];
        auto coord = [&](double lo, double hi) {
            double v = lo + (static_cast<double>(rng() >> 11) * 0x1.0p-53) * (hi - lo);
            if (!pts.empty() && rng() % 4 == 0) {
                const auto& p = pts[rng() % pts.size()];
                v = rng() % 2 ? p.x : p.y;
            }
            return v;
        };
        QuerySpec q;
        const double pad = (x_hi - x_lo + 1.0) * 0.1;
        if (ti == 0) {
            // Fixed full-coverage trial so structural faults are always caught.
            q.x1 = x_lo - pad;
            q.x2 = x_hi + pad;
            q.y = y_lo - pad;
            q.w = 1;
            q.k = pts.size() + 1;
        } else {
            q.x1 = coord(x_lo - pad, x_hi + pad);
            q.x2 = coord(x_lo - pad, x_hi + pad);
            if (q.x1 > q.x2) std::swap(q.x1, q.x2);
            q.y = coord(y_lo - pad, y_hi + pad);
            q.w = 1 + rng() % w_span;
            q.k = 1 + rng() % (pts.size() + 2);
        }
        char repro[256];
        const ThreeSidedRange r3{q.x1, q.x2, q.y};

        auto want3 = oracle::threshold(pts, r3, q.w);
        auto got3 = t3.threshold_query(r3, q.w);
        if (id_set(got3) != id_set(want3) || has_duplicate_id(got3)) {
            std::snprintf(repro, sizeof(repro),
                          "MISMATCH trial=%lld mode=threshold3 x1=%.17g x2=%.17g y=%.17g w=%llu",
                          ti, q.x1, q.x2, q.y, static_cast<unsigned long long>(q.w));
            bad.push_back(repro);
        }
        auto base3 = baseline.threshold_query(r3, q.w);
        if (id_set(base3) != id_set(want3)) {
            std::snprintf(repro, sizeof(repro),
                          "MISMATCH trial=%lld mode=baseline3 x1=%.17g x2=%.17g y=%.17g w=%llu",
                          ti, q.x1, q.x2, q.y, static_cast<unsigned long long>(q.w));
            bad.push_back(repro);
        }
        auto wantk = oracle::top_k(pts, r3, q.k);
        auto gotk = t3.top_k(r3, q.k);
        bool k_ok = rank_multiset(gotk) == rank_multiset(wantk) && !has_duplicate_id(gotk);
        for (const auto& p : gotk) {
            if (!contains(r3, p)) k_ok = false;
        }
        if (!k_ok) {
            std::snprintf(repro, sizeof(repro),
                          "MISMATCH trial=%lld mode=topk3 x1=%.17g x2=%.17g y=%.17g k=%zu",
                          ti, q.x1, q.x2, q.y, q.k);
            bad.push_back(repro);
        }
        auto wantm = oracle::max_rank(pts, r3);
        auto gotm = t3.max_report(r3);
        if (wantm.has_value() != gotm.has_value() ||
            (gotm && (!contains(r3, *gotm) || rank_of(gotm->w) != *wantm))) {
            std::snprintf(repro, sizeof(repro),
                          "MISMATCH trial=%lld mode=max3 x1=%.17g x2=%.17g y=%.17g", ti,
                          q.x1, q.x2, q.y);
            bad.push_back(repro);
        }
        // 1-D interval threshold
        {
            auto got1 = wb.threshold_query(q.x1, q.x2, q.w);
            std::vector<WeightedPoint> want1;
            for (const auto& p : pts) {
                if (q.x1 <= p.x && p.x <= q.x2 && p.w >= q.w) want1.push_back(p);
            }
            if (id_set(got1) != id_set(want1)) {
                std::snprintf(repro, sizeof(repro),
                              "MISMATCH trial=%lld mode=interval1d a=%.17g b=%.17g w=%llu",
                              ti, q.x1, q.x2, static_cast<unsigned long long>(q.w));
                bad.push_back(repro);
            }
        }
        // 4-sided
        double c = coord(y_lo - pad, y_hi + pad), d = coord(y_lo - pad, y_hi + pad);
        if (c > d) std::swap(c, d);
        if (ti == 0) {
            c = y_lo - pad;
            d = y_hi + pad;
        }
        const FourSidedRange r4{q.x1, q.x2, c, d};
        auto want4 = oracle::threshold(pts, r4, q.w);
        auto got4 = t4.threshold_query4(r4, q.w);
        if (id_set(got4) != id_set(want4) || has_duplicate_id(got4)) {
            std::snprintf(repro, sizeof(repro),
                          "MISMATCH trial=%lld mode=threshold4 a=%.17g b=%.17g c=%.17g d=%.17g w=%llu",
                          ti, q.x1, q.x2, c, d, static_cast<unsigned long long>(q.w));
            bad.push_back(repro);
        }
        auto want4k = oracle::top_k(pts, r4, q.k);
        auto got4k = t4.top_k4(r4, q.k);
        bool k4_ok =
            rank_multiset(got4k) == rank_multiset(want4k) && !has_duplicate_id(got4k);
        for (const auto& p : got4k) {
            if (!contains(r4, p)) k4_ok = false;
        }
        if (!k4_ok) {
            std::snprintf(repro, sizeof(repro),
                          "MISMATCH trial=%lld mode=topk4 a=%.17g b=%.17g c=%.17g d=%.17g k=%zu",
                          ti, q.x1, q.x2, c, d, q.k);
            bad.push_back(repro);
        }
    }
    for (auto& v : per_trial) {
        for (auto& s : v) out.mismatches.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// bench

int run_bench(const std::string& dist_name, double zipf_s, std::size_t n_min,
              std::size_t n_max, std::uint64_t seed, std::size_t queries,
              const std::vector<std::string>& structures, const std::string& out_path) {
    std::ofstream os(out_path, std::ios::binary);
    if (!os) {
        std::cerr << "cannot open for writing: " << out_path << "\n";
        return 2;
    }
    os << "structure,n,distribution,build_ms,space_nodes,query,tree_nodes,"
          "catalog_entries,heap_nodes,pq_ops,micros\n";
    const gen::Distribution dist = gen::parse_distribution(dist_name);
    for (std::size_t n = n_min; n <= n_max; n *= 2) {
        gen::GeneratorSpec spec;
        spec.n = n;
        spec.dist = dist;
        spec.zipf_s = zipf_s;
        spec.seed = seed ^ (n * 0x9e3779b97f4a7c15ull);
        const auto pts = gen::generate(spec);
        Weight w_max = 1;
        for (const auto& p : pts) w_max = std::max(w_max, p.w);

        std::mt19937_64 rng(seed + n);
        std::vector<QuerySpec> qs(queries);
        for (auto& q : qs) {
            const double a = (rng() % 1000) / 1000.0 * spec.x_hi;
            const double b = (rng() % 1000) / 1000.0 * spec.x_hi;
            q.x1 = std::min(a, b);
            q.x2 = std::max(a, b);
            q.y = (rng() % 1000) / 1000.0 * spec.y_hi;
            q.w = 1 + rng() % w_max;
        }

        for (const std::string& s : structures) {
            double build_ms = 0;
            std::size_t space = 0;
            std::function<std::vector<WeightedPoint>(const QuerySpec&, QueryCounters*)> run;
            std::unique_ptr<PriorityRangeTree> t3;
            std::unique_ptr<oracle::SuffixPstBaseline> base;
            const auto b0 = std::chrono::steady_clock::now();
            if (s == "prt") {
                t3 = std::make_unique<PriorityRangeTree>(pts);
                build_ms = wall_micros(b0) / 1000.0;
                space = t3->space_census().total();
                run = [&t3](const QuerySpec& q2, QueryCounters* c) {
                    return t3->threshold_query({q2.x1, q2.x2, q2.y}, q2.w, c);
                };
            } else if (s == "baseline") {
                base = std::make_unique<oracle::SuffixPstBaseline>(pts);
                build_ms = wall_micros(b0) / 1000.0;
                space = base->space_nodes();
                run = [&base](const QuerySpec& q2, QueryCounters* c) {
                    return base->threshold_query({q2.x1, q2.x2, q2.y}, q2.w, c);
                };
            } else if (s == "oracle") {
                space = pts.size();
                run = [&pts](const QuerySpec& q2, QueryCounters* c) {
                    if (c) c->reset();
                    const ThreeSidedRange r3{q2.x1, q2.x2, q2.y};
                    return oracle::threshold(pts, r3, q2.w);
                };
            } else {
                std::cerr << "unknown structure: " << s << "\n";
                return 2;
            }
            for (std::size_t qi = 0; qi < qs.size(); ++qi) {
                QueryCounters counters;
                const auto q0 = std::chrono::steady_clock::now();
                auto res = run(qs[qi], &counters);
                const double us = wall_micros(q0);
                os << s << "," << n << "," << dist_name << "," << build_ms << ","
                   << space << ",threshold3[w=" << qs[qi].w << " k=" << res.size()
                   << "]," << counters.tree_nodes_visited << ","
                   << counters.catalog_entries_scanned << ","
                   << counters.heap_nodes_visited << "," << counters.pq_operations
                   << "," << us << "\n";
            }
        }
    }
    return os ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"prioritized orthogonal range reporting index"};
    app.require_subcommand(1);

    // gen
    auto* cmd_gen = app.add_subcommand("gen", "generate a synthetic point file");
    gen::GeneratorSpec spec;
    std::string dist_name = "uniform";
    std::string out_path;
    cmd_gen->add_option("--n", spec.n, "point count")->required();
    cmd_gen->add_option("--dist", dist_name, "uniform|exp-freq|zipf");
    cmd_gen->add_option("--zipf-s", spec.zipf_s, "zipf exponent");
    cmd_gen->add_option("--seed", spec.seed, "rng seed");
    cmd_gen->add_option("--xmin", spec.x_lo);
    cmd_gen->add_option("--xmax", spec.x_hi);
    cmd_gen->add_option("--ymin", spec.y_lo);
    cmd_gen->add_option("--ymax", spec.y_hi);
    cmd_gen->add_option("--out", out_path, "output path")->required();

    // query
    auto* cmd_query = app.add_subcommand("query", "run queries against a point file");
    std::string points_path, batch_path, mode;
    QuerySpec q;
    cmd_query->add_option("--points", points_path, "point file")->required();
    cmd_query->add_option("--mode", mode, "threshold3|topk3|max3|threshold4|topk4");
    cmd_query->add_option("--x1", q.x1);
    cmd_query->add_option("--x2", q.x2);
    cmd_query->add_option("--y", q.y);
    cmd_query->add_option("--a", q.a);
    cmd_query->add_option("--b", q.b);
    cmd_query->add_option("--c", q.c);
    cmd_query->add_option("--d", q.d);
    cmd_query->add_option("--w", q.w);
    cmd_query->add_option("--k", q.k);
    cmd_query->add_option("--batch", batch_path, "file of lines: mode p1 p2 p3 [p4 p5]");

    // verify
    auto* cmd_verify = app.add_subcommand("verify", "cross-check against the oracle");
    std::string v_points;
    std::size_t v_trials = 100;
    std::uint64_t v_seed = 1;
    std::size_t v_n = 0;
    std::string v_dist = "uniform";
    std::uint64_t v_gen_seed = 7;
    bool inject_fault = false;
    cmd_verify->add_option("--points", v_points, "point file (else use --n/--dist)");
    cmd_verify->add_option("--trials", v_trials)->check(CLI::PositiveNumber);
    cmd_verify->add_option("--seed", v_seed, "query rng seed");
    cmd_verify->add_option("--n", v_n, "generate n points instead of reading a file");
    cmd_verify->add_option("--dist", v_dist);
    cmd_verify->add_option("--gen-seed", v_gen_seed);
    cmd_verify->add_flag("--inject-fault", inject_fault,
                         "corrupt the indexed copy (testing hook)");

    // bench
    auto* cmd_bench = app.add_subcommand("bench", "space/time benchmark to CSV");
    std::string b_dist = "zipf";
    double b_zipf_s = 1.0;
    std::size_t b_nmin = 1024, b_nmax = 16384, b_queries = 32;
    std::uint64_t b_seed = 99;
    std::string b_structures = "prt,baseline";
    std::string b_out;
    cmd_bench->add_option("--dist", b_dist);
    cmd_bench->add_option("--zipf-s", b_zipf_s);
    cmd_bench->add_option("--n-min", b_nmin);
    cmd_bench->add_option("--n-max", b_nmax);
    cmd_bench->add_option("--queries", b_queries);
    cmd_bench->add_option("--seed", b_seed);
    cmd_bench->add_option("--structures", b_structures, "comma list: prt,baseline,oracle");
    cmd_bench->add_option("--out", b_out, "CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
            return app.exit(e);
        }
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (*cmd_gen) {
            spec.dist = gen::parse_distribution(dist_name);
            const auto pts = gen::generate(spec);
            std::ostringstream header;
            header << "n=" << spec.n << " dist=" << dist_name << " seed=" << spec.seed;
            gen::write_points_file(out_path, pts, header.str());
            std::cout << "wrote " << pts.size() << " points to " << out_path << "\n";
            return 0;
        }
        if (*cmd_query) {
            const auto pts = gen::read_points_file(points_path);
            const PriorityRangeTree t3(pts);
            const FourSidedIndex t4(pts);
            if (!batch_path.empty()) {
                std::ifstream bf(batch_path);
                if (!bf) {
                    std::cerr << "cannot open: " << batch_path << "\n";
                    return 2;
                }
                std::string line;
                std::size_t lineno = 0;
                while (std::getline(bf, line)) {
                    ++lineno;
                    if (line.empty() || line[0] == '#') continue;
                    std::istringstream ls(line);
                    QuerySpec bq;
                    ls >> bq.mode;
                    bool ok = true;
                    if (bq.mode == "threshold3") {
                        ok = static_cast<bool>(ls >> bq.x1 >> bq.x2 >> bq.y >> bq.w);
                    } else if (bq.mode == "topk3") {
                        ok = static_cast<bool>(ls >> bq.x1 >> bq.x2 >> bq.y >> bq.k);
                    } else if (bq.mode == "max3") {
                        ok = static_cast<bool>(ls >> bq.x1 >> bq.x2 >> bq.y);
                    } else if (bq.mode == "threshold4") {
                        ok = static_cast<bool>(ls >> bq.a >> bq.b >> bq.c >> bq.d >> bq.w);
                    } else if (bq.mode == "topk4") {
                        ok = static_cast<bool>(ls >> bq.a >> bq.b >> bq.c >> bq.d >> bq.k);
                    } else {
                        ok = false;
                    }
                    if (!ok) {
                        std::cerr << batch_path << ":" << lineno << ": bad query line\n";
                        return 2;
                    }
                    if (bq.w == 0 || bq.k == 0) {
                        std::cerr << batch_path << ":" << lineno
                                  << ": w and k must be >= 1\n";
                        return 2;
                    }
                    const int rc = run_one_query(t3, t4, bq, std::cout);
                    if (rc) return rc;
                }
                return 0;
            }
            if (mode.empty()) {
                std::cerr << "either --mode or --batch is required\n";
                return 2;
            }
            if (q.w == 0 || q.k == 0) {
                std::cerr << "w and k must be >= 1\n";
                return 2;
            }
            q.mode = mode;
            return run_one_query(t3, t4, q, std::cout);
        }
        if (*cmd_verify) {
            std::vector<WeightedPoint> pts;
            if (!v_points.empty()) {
                pts = gen::read_points_file(v_points);
            } else if (v_n > 0) {
                gen::GeneratorSpec gs;
                gs.n = v_n;
                gs.dist = gen::parse_distribution(v_dist);
                gs.seed = v_gen_seed;
                pts = gen::generate(gs);
            } else {
                std::cerr << "verify needs --points or --n\n";
                return 2;
            }
            const VerifyResult res = run_verify(pts, v_trials, v_seed, inject_fault);
            if (res.mismatches.empty()) {
                std::cout << "verify: " << res.trials << " trials over " << pts.size()
                          << " points, all structures match the oracle\n";
                return 0;
            }
            std::cout << "verify: " << res.mismatches.size() << " mismatching checks in "
                      << res.trials << " trials\n";
            for (const auto& m : res.mismatches) std::cout << m << "\n";
            return 1;
        }
        if (*cmd_bench) {
            std::vector<std::string> structures;
            std::stringstream ss(b_structures);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (!item.empty()) structures.push_back(item);
            }
            return run_bench(b_dist, b_zipf_s, b_nmin, b_nmax, b_seed, b_queries,
                             structures, b_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
