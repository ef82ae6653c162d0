#include "rllfb/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "rllfb/capacity.hpp"
#include "rllfb/cli.hpp"
#include "rllfb/constraint.hpp"
#include "rllfb/feedback_scheme.hpp"
#include "rllfb/qgraph.hpp"
#include "rllfb/rm.hpp"

namespace rllfb {

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void fail(const std::string& why) {
        if (!pass) detail << "; ";
        else detail.str("");
        pass = false;
        detail << why;
    }
};

std::string fmt(double v, int prec = 9) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

std::vector<double> grid(double start, double stop, double step) {
    std::vector<double> out;
    const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9));
    for (int i = 0; i <= n; ++i) out.push_back(std::min(stop, start + i * step));
    return out;
}

// Largest real root of x^(d+1) = x^d + 1, by bisection on [1, 2].
double perron_root_oracle(int d) {
    double lo = 1.0, hi = 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (std::pow(mid, d + 1) - std::pow(mid, d) - 1.0 < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Outcome unconstrained() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double eps : grid(0.0, 1.0, 0.05)) {
        const double err = std::abs(solve_feedback_capacity(eps, 0).value - (1.0 - eps));
        worst = std::max(worst, err);
        if (err > 1e-9) o.fail("eps=" + fmt(eps) + " error " + fmt(err, 3));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 1.0) o.fail("runtime " + fmt(secs, 3) + " s");
    if (o.pass) o.detail << "21 points, max error " << fmt(worst, 3);
    return o;
}

Outcome noiseless_endpoint() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int d = 1; d <= 5; ++d) {
        const double oracle = std::log2(perron_root_oracle(d));
        const double err = std::abs(solve_feedback_capacity(0.0, d).value - oracle);
        worst = std::max(worst, err);
        if (err > 1e-6) o.fail("d=" + std::to_string(d) + " error " + fmt(err, 3));
    }
    const double c1 = solve_feedback_capacity(0.0, 1).value;
    if (std::abs(c1 - 0.694242) > 1e-6) o.fail("d=1 value " + fmt(c1));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 5.0) o.fail("runtime " + fmt(secs, 3) + " s");
    if (o.pass) o.detail << "d=1..5 max error " << fmt(worst, 3) << ", d=1 " << fmt(c1, 7);
    return o;
}

Outcome solver_consistency() {
    Outcome o;
    int interior = 0, face = 0;
    for (int d = 1; d <= 3; ++d)
        for (double eps : grid(0.0, 0.95, 0.05)) {
            const auto full = solve_full_simplex(eps, d);
            const double sum = full.argmax.sum();
            if (!(sum <= 1.0 - 1e-6 || std::abs(sum - 1.0) <= 1e-6))
                o.fail("d=" + std::to_string(d) + " eps=" + fmt(eps) + " argmax sum " + fmt(sum));
            if (full.regime == Regime::Interior) {
                ++interior;
                const double simple = solve_simplified(eps, d).value;
                if (std::abs(full.value - simple) > 1e-6)
                    o.fail("d=" + std::to_string(d) + " eps=" + fmt(eps) + " Interior but full " + fmt(full.value) +
                           " vs simplified " + fmt(simple));
            } else {
                ++face;
            }
        }
    if (o.pass) o.detail << interior << " Interior points agree, " << face << " face points";
    return o;
}

Outcome equality_ranges() {
    Outcome o;
    double worst = 0.0;
    for (double eps : grid(0.0, 0.99, 0.01)) {
        const double gap = std::abs(solve_feedback_capacity(eps, 1).value - noncausal_capacity(eps, 1));
        worst = std::max(worst, gap);
        if (gap > 1e-6) o.fail("d=1 eps=" + fmt(eps) + " gap " + fmt(gap, 3));
    }
    if (solve_feedback_capacity(1.0, 1).value != 0.0) o.fail("d=1 eps=1 not 0");
    auto d2 = grid(0.0, 0.14, 0.01);
    d2.push_back(0.1452);
    for (double eps : d2) {
        const double gap = std::abs(solve_feedback_capacity(eps, 2).value - noncausal_capacity(eps, 2));
        worst = std::max(worst, gap);
        if (gap > 1e-6) o.fail("d=2 eps=" + fmt(eps) + " gap " + fmt(gap, 3));
    }
    const double threshold = 1.0 - 1.0 / (2.0 * std::log2(1.5));
    if (std::abs(d2_equality_threshold() - threshold) > 1e-9) o.fail("threshold " + fmt(d2_equality_threshold()));
    if (o.pass) o.detail << "max gap " << fmt(worst, 3) << ", threshold " << fmt(d2_equality_threshold());
    return o;
}

Outcome scheme_correctness(std::uint64_t seed) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SimulationOptions opts;
    opts.check_synchrony = true;
    opts.check_containment = true;
    opts.record_transcript = true;
    std::vector<SplitVector> optimal;
    for (int d = 1; d <= 3; ++d)
        for (double eps : {0.1, 0.5, 0.9}) optimal.push_back(solve_feedback_capacity(eps, d).argmax);
    std::uint64_t errors = 0, violations = 0, desync = 0, incomplete = 0, uses = 0;
    const int sessions = 10000;
    for (int t = 0; t < sessions; ++t) {
        const int cell = t % 9;
        const int d = 1 + cell / 3;
        const double eps = std::array{0.1, 0.5, 0.9}[cell % 3];
        SplitVector delta = optimal[cell];
        if (t % 3 == 2) {
            std::vector<double> v(d + 1);
            double s = 0.0;
            for (auto& x : v) s += (x = 0.05 + u(rng));
            const double scale = (0.5 + 0.5 * u(rng)) / s;
            for (auto& x : v) x *= scale;
            delta = SplitVector(v);
        }
        std::vector<std::uint8_t> bits(8 + rng() % 57);
        for (auto& b : bits) b = static_cast<std::uint8_t>(rng() >> 63);
        const auto r = simulate(bits, eps, delta, d, rng(), opts);
        uses += r.channel_uses;
        errors += r.errors;
        desync += r.synchrony_failures;
        incomplete += !r.completed;
        std::vector<std::uint8_t> xs;
        xs.reserve(r.transcript.size());
        for (const auto& e : r.transcript) xs.push_back(static_cast<std::uint8_t>(e.x));
        if (!r.constraint_ok || !check_sequence(ConstraintSpec::dinf(d), xs)) ++violations;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (errors) o.fail(std::to_string(errors) + " decoding errors");
    if (violations) o.fail(std::to_string(violations) + " constraint violations");
    if (desync) o.fail(std::to_string(desync) + " synchrony failures");
    if (incomplete) o.fail(std::to_string(incomplete) + " unfinished sessions");
    if (secs >= 120.0) o.fail("runtime " + fmt(secs, 3) + " s");
    if (o.pass) o.detail << sessions << " sessions, " << uses << " channel uses";
    return o;
}

Outcome scheme_rate(std::uint64_t seed) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_analytic = 0.0;
    for (int t = 0; t < 100; ++t) {
        const int d = static_cast<int>(rng() % 4);
        const double eps = 0.95 * u(rng);
        std::vector<double> v(d + 1);
        double s = 0.0;
        for (auto& x : v) s += (x = u(rng));
        const double scale = u(rng) / s;
        for (auto& x : v) x *= scale;
        const SplitVector delta(v);
        const double gap = std::abs(analytic_rate(delta, eps, d) - rate_R(delta, eps, d));
        worst_analytic = std::max(worst_analytic, gap);
    }
    if (worst_analytic > 1e-12) o.fail("analytic vs rate_R gap " + fmt(worst_analytic, 3));
    double worst_rel = 0.0;
    for (int d = 1; d <= 3; ++d)
        for (double eps : {0.1, 0.5, 0.9}) {
            const auto cap = solve_feedback_capacity(eps, d);
            const auto m = measure_rate(cap.argmax, eps, d, 1'000'000, rng());
            const double rel = (m.empirical_rate - cap.value) / cap.value;
            if (std::abs(rel) > std::abs(worst_rel)) worst_rel = rel;
            if (std::abs(rel) > 0.01 || m.errors != 0 || !m.constraint_ok)
                o.fail("d=" + std::to_string(d) + " eps=" + fmt(eps) + " empirical " + fmt(m.empirical_rate, 6) +
                       " vs " + fmt(cap.value, 6));
        }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 300.0) o.fail("runtime " + fmt(secs, 3) + " s");
    if (o.pass)
        o.detail << "analytic gap " << fmt(worst_analytic, 3) << ", worst empirical deviation " << fmt(100 * worst_rel, 3)
                 << "%";
    return o;
}

Outcome qgraph_bound(std::uint64_t seed) {
    Outcome o;
    double worst = 0.0, worst_bcjr = 0.0;
    for (int d = 1; d <= 2; ++d) {
        const auto sq_family = build_q_graph_family(d);
        const ConstraintAutomaton automaton(ConstraintSpec::dinf(d));
        for (double eps : grid(0.1, 0.9, 0.1)) {
            const auto cap = solve_feedback_capacity(eps, d);
            const auto sq = build_sq_graph(automaton, sq_family, eps);
            BoundOptions opts;
            opts.seed = seed;
            opts.warm_starts.push_back(scheme_induced_policy(cap.argmax, d));
            const auto bound = optimize_upper_bound(sq, opts);
            const double gap = bound.value - cap.value;
            worst = std::max(worst, std::abs(gap));
            const std::string at = "d=" + std::to_string(d) + " eps=" + fmt(eps);
            if (gap < -1e-4) o.fail(at + " bound " + fmt(bound.value) + " below capacity " + fmt(cap.value));
            if (gap > 1e-3)
                o.fail(at + " bound exceeds capacity by " + fmt(gap, 3) +
                       ": the Q-graph family is not tight here and needs finer cycle-phase tracking");
            if (d == 1) {
                const auto bcjr = check_bcjr_invariance(sq, scheme_induced_policy(cap.argmax, d));
                worst_bcjr = std::max(worst_bcjr, bcjr.max_residual);
                if (!bcjr.holds || bcjr.max_residual > 1e-9)
                    o.fail(at + " BCJR residual " + fmt(bcjr.max_residual, 3));
            }
        }
    }
    if (o.pass) o.detail << "max |bound - capacity| " << fmt(worst, 3) << ", d=1 BCJR residual " << fmt(worst_bcjr, 3);
    return o;
}

Outcome rm_achievability(std::uint64_t seed) {
    Outcome o;
    std::mt19937_64 rng(seed);
    std::uint64_t exhaustive = 0, sampled = 0;
    for (int m = 2; m <= 10; ++m)
        for (int d = 1; d <= 3; ++d)
            for (int r = dinf_shift(d); r <= m; ++r) {
                if (dinf_shift(d) > m) continue;
                const auto sub = build_dinf_subcode(m, r, d);
                const auto spec = ConstraintSpec::dinf(d);
                const std::size_t n = std::size_t{1} << m;
                const std::string at = "m=" + std::to_string(m) + " r=" + std::to_string(r) + " d=" + std::to_string(d);
                if (mpz_class(sub.rows.size()) != dinf_subcode_dimension(m, r, d)) o.fail(at + " dimension mismatch");
                std::uint64_t bad = 0;
                if (sub.rows.size() <= kMaxExhaustiveDimension) {
                    struct Count {
                        std::uint64_t seen = 0, bad = 0;
                        Count& operator+=(const Count& c) {
                            seen += c.seen;
                            bad += c.bad;
                            return *this;
                        }
                    };
                    const auto c = sweep_codewords<Count>(sub.rows, n, [&](Count& acc, const BitVec& v) {
                        ++acc.seen;
                        acc.bad += !satisfies(v, spec);
                    });
                    exhaustive += c.seen;
                    bad = c.bad;
                } else {
                    for (int s = 0; s < 100000; ++s) {
                        BitVec v(n);
                        for (std::size_t i = 0; i < sub.rows.size(); i += 64) {
                            const std::uint64_t word = rng();
                            for (std::size_t j = i; j < std::min(i + 64, sub.rows.size()); ++j)
                                if (word >> (j - i) & 1) v ^= sub.rows[j];
                        }
                        bad += !satisfies(v, spec);
                    }
                    sampled += 100000;
                }
                if (bad) o.fail(at + " " + std::to_string(bad) + " invalid codewords");
            }

    double worst_asym = 0.0;
    int asym_points = 0, asym_misses = 0;
    for (int d = 1; d <= 3; ++d) {
        const int z = dinf_shift(d);
        for (double rate : grid(0.1, 0.9, 0.1)) {
            for (int m = std::max(2, z); m <= 64; ++m) {
                const int r = choose_rm_degree(m, rate);
                mpz_class dim = 0;
                for (int i = 0; i <= r - z && i <= m - z; ++i) {
                    mpz_class c;
                    mpz_bin_uiui(c.get_mpz_t(), m - z, i);
                    dim += c;
                }
                mpq_class expect(dim, mpz_class(1) << m);
                expect.canonicalize();
                if (dinf_subcode_rate_at(m, rate, d) != expect)
                    o.fail("rate formula mismatch at m=" + std::to_string(m) + " d=" + std::to_string(d));
            }
            const double gap = std::abs(dinf_subcode_rate_at(64, rate, d).get_d() - dinf_asymptotic_rate(rate, d));
            worst_asym = std::max(worst_asym, gap);
            ++asym_points;
            if (gap > 0.02) {
                ++asym_misses;
                o.fail("m=64 d=" + std::to_string(d) + " R=" + fmt(rate) + " off the asymptote by " + fmt(gap, 3));
            }
        }
    }
    for (double eps : grid(0.0, 0.95, 0.05)) {
        const double got = dinf_asymptotic_rate(1.0 - eps, 1);
        if (std::abs(got - (1.0 - eps) / 2.0) > 1e-15) o.fail("d=1 R=1-eps rate " + fmt(got));
    }
    o.detail << (o.pass ? "" : "; ") << exhaustive << " codewords exhaustive, " << sampled << " sampled, m=64 within 0.02 of "
             << "the asymptote at " << asym_points - asym_misses << "/" << asym_points << " (d,R) points, worst gap "
             << fmt(worst_asym, 3);
    return o;
}

Outcome rm_converse(std::uint64_t seed) {
    Outcome o;
    for (int m : {4, 5}) {
        const auto rep = verify_necessary_condition(m, 2);
        if (rep.violations) o.fail("RM(" + std::to_string(m) + ",2) " + std::to_string(rep.violations) + " violations");
    }

    const auto worked = count_covering_codewords(3, 1, BitVec::from_string("11110000"));
    if (worked.count != 2 || worked.bound != 2) o.fail("worked covering case count " + worked.count.get_str());
    std::mt19937_64 rng(seed);
    std::uint64_t covering_cases = 0;
    for (int n = 2; n <= 5; ++n)
        for (int r = 0; r <= n; ++r) {
            const bool exhaustive_g = n <= 3;
            const std::uint64_t trials = exhaustive_g ? (std::uint64_t{1} << (1u << n)) : 200;
            for (std::uint64_t t = 0; t < trials; ++t) {
                BitVec g(std::size_t{1} << n);
                if (exhaustive_g) {
                    for (std::size_t i = 0; i < g.size(); ++i) g.set(i, t >> i & 1);
                    if (g.weight() < (std::size_t{1} << (n - 1))) continue;
                } else {
                    while (g.weight() < (std::size_t{1} << (n - 1))) g.set(rng() % g.size());
                }
                const auto c = count_covering_codewords(n, r, g);
                ++covering_cases;
                if (!c.within_bound) o.fail("covering bound violated n=" + std::to_string(n) + " r=" + std::to_string(r));
            }
        }

    std::uint64_t subsets = 0, strict_fail = 0, weak_fail = 0;
    for (std::uint32_t mask = 0; mask < (1u << 16); ++mask) {
        if (std::popcount(mask) < 8) continue;
        std::vector<std::size_t> cols;
        for (std::size_t i = 0; i < 16; ++i)
            if (mask >> i & 1) cols.push_back(i);
        const auto rc = shortened_rank_check(4, 1, cols, 1);
        ++subsets;
        strict_fail += !rc.strict;
        weak_fail += !rc.weak;
    }
    if (strict_fail)
        o.fail("strict rank inequality fails on " + std::to_string(strict_fail) + " of " + std::to_string(subsets) +
               " column sets of the m=4 sweep (rank equals the threshold; the weak form fails on " +
               std::to_string(weak_fail) + ")");

    for (int m = 1; m <= 6; ++m)
        for (int r = 0; r <= m; ++r) {
            const auto a = weight_distribution(m, r);
            const std::size_t n = a.size() - 1;
            for (std::size_t w = 0; w <= n; ++w)
                if (a[w] != a[n - w]) {
                    o.fail("weights not symmetric for RM(" + std::to_string(m) + "," + std::to_string(r) + ")");
                    break;
                }
        }

    const double rs = rstar();
    if (std::abs(rs - 0.3715) > 1e-3 || !(rs < 0.5)) o.fail("rstar " + fmt(rs));
    for (int i = 1; i <= 1000; ++i) {
        const double rate = rs * i / 1001.0;
        if (!(rm_upper_bound(rate) < rate)) {
            o.fail("bound(R) >= R at R=" + fmt(rate));
            break;
        }
    }
    o.detail << (o.pass ? "" : "; ") << "necessary condition clean, " << covering_cases << " covering cases, " << subsets
                 << " rank subsets, rstar " << fmt(rs, 6);
    return o;
}

Outcome figure_curves(const std::string& golden_dir) {
    Outcome o;
    const auto g = EpsGrid::parse("0:1:0.01");
    const double noiseless[] = {0.6942, 0.5515, 0.4650};
    for (int d = 1; d <= 3; ++d) {
        const std::string csv = capacity_csv(d, g);
        if (csv != capacity_csv(d, g, 1)) o.fail("d=" + std::to_string(d) + " output differs between runs");
        std::istringstream in(csv);
        std::string line;
        std::getline(in, line);
        std::vector<double> cap;
        while (std::getline(in, line)) {
            const auto a = line.find(','), b = line.find(',', a + 1);
            cap.push_back(std::stod(line.substr(a + 1, b - a - 1)));
        }
        const std::string at = "d=" + std::to_string(d);
        if (cap.size() != 101) o.fail(at + " has " + std::to_string(cap.size()) + " rows");
        if (std::abs(cap.front() - noiseless[d - 1]) > 1e-4) o.fail(at + " starts at " + fmt(cap.front()));
        if (cap.back() != 0.0) o.fail(at + " ends at " + fmt(cap.back()));
        for (std::size_t i = 1; i < cap.size(); ++i)
            if (!(cap[i] < cap[i - 1])) {
                o.fail(at + " not decreasing at row " + std::to_string(i));
                break;
            }
        if (!golden_dir.empty()) {
            std::ifstream f(golden_dir + "/capacity_d" + std::to_string(d) + ".csv", std::ios::binary);
            std::stringstream buf;
            buf << f.rdbuf();
            if (!f) o.fail(at + " golden file missing");
            else if (buf.str() != csv) o.fail(at + " differs from the golden file");
        }
    }
    if (o.pass) o.detail << "3 curves decreasing from the noiseless capacities to 0" << (golden_dir.empty() ? "" : ", golden match");
    return o;
}

}  // namespace

std::vector<CriterionResult> run_verification(const VerifyOptions& options,
                                              const std::function<void(const CriterionResult&)>& on_result) {
    const std::uint64_t seed = options.seed;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"unconstrained capacity is 1-eps", [] { return unconstrained(); }},
        {"noiseless endpoint matches the Perron root", [] { return noiseless_endpoint(); }},
        {"full and 1-D solvers agree on Interior points", [] { return solver_consistency(); }},
        {"feedback equals non-causal capacity for d=1 and small-eps d=2", [] { return equality_ranges(); }},
        {"scheme is zero-error, constrained and synchronized", [seed] { return scheme_correctness(seed); }},
        {"scheme rate matches the rate formula and capacity", [seed] { return scheme_rate(seed); }},
        {"Q-graph bound is tight and the scheme policy is BCJR-invariant", [seed] { return qgraph_bound(seed); }},
        {"RM (d,inf) subcode validity and rates", [seed] { return rm_achievability(seed); }},
        {"RM converse ingredients", [seed] { return rm_converse(seed); }},
        {"capacity curves for d=1,2,3", [&] { return figure_curves(options.golden_dir); }},
    };
    std::vector<CriterionResult> out;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end())
            continue;
        CriterionResult r;
        r.id = id;
        r.name = criteria[i].first;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            auto o = criteria[i].second();
            r.pass = o.pass;
            r.detail = o.detail.str();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_result(const CriterionResult& r) {
    char head[64];
    std::snprintf(head, sizeof head, "%s %2d  ", r.pass ? "PASS" : "FAIL", r.id);
    char secs[32];
    std::snprintf(secs, sizeof secs, "  (%.1f s)", r.seconds);
    return head + r.name + secs + (r.detail.empty() ? "" : "  " + r.detail);
}

}  // namespace rllfb
