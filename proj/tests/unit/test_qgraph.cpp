#include "doctest.h"

#include <random>
#include <set>

#include "rllfb/qgraph.hpp"

using namespace rllfb;

namespace {

SQGraph family_product(int d, double eps) {
    return build_sq_graph(ConstraintAutomaton(ConstraintSpec::dinf(d)), build_q_graph_family(d), eps);
}

InputPolicy random_policy(const SQGraph& sq, std::mt19937_64& rng, double lo = 0.05, double hi = 0.95) {
    std::uniform_real_distribution<double> u(lo, hi);
    auto p = InputPolicy::zeros(sq.num_s(), sq.num_q());
    for (int s = 0; s < sq.num_s(); ++s)
        for (int q = 0; q < sq.num_q(); ++q)
            if (sq.automaton.allows(s, 1)) p.at(s, q) = sq.automaton.allows(s, 0) ? u(rng) : 1.0;
    return p;
}

// Brute-force reachability closure; classes are the mutual-reachability blocks.
std::set<std::vector<int>> reach_classes(const std::vector<double>& p, int n) {
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) {
        r[i][i] = true;
        for (int j = 0; j < n; ++j)
            if (p[i * n + j] > 0) r[i][j] = true;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (r[i][k] && r[k][j]) r[i][j] = true;
    std::set<std::vector<int>> out;
    for (int i = 0; i < n; ++i) {
        std::vector<int> c;
        for (int j = 0; j < n; ++j)
            if (r[i][j] && r[j][i]) c.push_back(j);
        out.insert(c);
    }
    return out;
}

}  // namespace

TEST_CASE("family structure") {
    CHECK(build_q_graph_family(1).num_nodes() == 5);
    CHECK(build_q_graph_family(0).num_nodes() == 2);
    for (int d = 0; d <= 5; ++d) {
        const auto g = build_q_graph_family(d);
        CHECK(g.num_nodes() == 3 * d + 2);
        CHECK_NOTHROW(g.validate());
        for (const auto& row : g.next)
            for (int t : row) CHECK((t >= 0 && t < g.num_nodes()));
    }
    const auto g = build_q_graph_family(2);
    CHECK(g.phi(2, ChannelOutput::Erasure) == 3);  // A2 -> A'0
    CHECK(g.phi(5, ChannelOutput::Erasure) == 3);  // A'2 -> A'0
    CHECK(g.phi(4, ChannelOutput::Zero) == 0);
    CHECK(g.phi(1, ChannelOutput::One) == 6);      // -> F1
    CHECK(g.phi(7, ChannelOutput::One) == 0);      // F2 -> A0
    QGraph broken;
    broken.next = {{0, 0, 0}, {1, 1, 1}};
    CHECK_THROWS(broken.validate());
}

TEST_CASE("product graph construction") {
    const auto sq = family_product(1, 0.3);
    CHECK(sq.num_nodes() == 10);
    const auto single =
        build_sq_graph(ConstraintAutomaton(ConstraintSpec::dinf(1)), [] {
            QGraph g;
            g.next = {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}};
            return g;
        }(), 0.3);
    CHECK(single.num_nodes() == 6);

    const auto clean = family_product(2, 0.0);
    for (const auto& e : clean.edges) CHECK(e.y != ChannelOutput::Erasure);

    bool found = false;
    for (const auto& e : sq.edges)
        if (e.from == sq.index(1, 0) && e.x == 1 && e.y == ChannelOutput::One)
            found = found || e.to == sq.index(0, sq.q_graph.phi(0, ChannelOutput::One));
    CHECK(found);

    // Every edge satisfies s' = f(s,x), q' = phi(q,y), P(y|x) > 0, and every such triple is present.
    for (int d = 0; d <= 3; ++d)
        for (double eps : {0.0, 0.4, 1.0}) {
            const auto g = family_product(d, eps);
            std::size_t expected = 0;
            for (int s = 0; s < g.num_s(); ++s)
                for (int q = 0; q < g.num_q(); ++q)
                    for (int x = 0; x <= 1; ++x)
                        if (g.automaton.allows(s, x)) expected += (eps > 0) + (eps < 1);
            CHECK(g.edges.size() == expected);
            for (const auto& e : g.edges) {
                const int s = e.from / g.num_q(), q = e.from % g.num_q();
                CHECK(e.to / g.num_q() == g.automaton.next(s, e.x));
                CHECK(e.to % g.num_q() == g.q_graph.phi(q, e.y));
                CHECK(e.prob > 0.0);
                if (e.y != ChannelOutput::Erasure) CHECK(static_cast<int>(e.y) == 2 * e.x);
            }
        }
}

TEST_CASE("serialization formats") {
    const auto g = build_q_graph_family(1);
    const auto text = g.serialize();
    CHECK(text.find("node 0\n") != std::string::npos);
    CHECK(text.find("edge 1 ? 2\n") != std::string::npos);
    CHECK(text.find("edge 4 1 0\n") != std::string::npos);
    const auto sq = family_product(1, 0.5).serialize();
    CHECK(sq.find("node 1,4\n") != std::string::npos);
    CHECK(sq.find("edge 1,0 1,1,0.5 0,4\n") != std::string::npos);
    CHECK(sq.find("edge 1,0 0,?,0.5 1,1\n") != std::string::npos);
}

TEST_CASE("chain analysis") {
    SUBCASE("all-zero policy collapses to a single closed class at s = d") {
        const auto sq = family_product(1, 0.3);
        const auto a = analyze_chain(sq, InputPolicy::zeros(2, 5));
        CHECK(a.in_omega);
        CHECK(a.aperiodic);
        REQUIRE(a.has_pi());
        double at_d = 0.0;
        for (int q = 0; q < 5; ++q) at_d += a.pi[sq.index(1, q)];
        CHECK(at_d == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(a.pi[sq.index(1, 0)] == doctest::Approx(0.7));
    }
    SUBCASE("periodic two-cycle") {
        const auto sq = family_product(1, 0.0);
        auto p = InputPolicy::zeros(2, 5);
        for (int q = 0; q < 5; ++q) p.at(1, q) = 1.0;
        const auto a = analyze_chain(sq, p);
        CHECK(a.in_omega);
        CHECK(a.period == 2);
        CHECK_FALSE(a.aperiodic);
        CHECK_FALSE(a.has_pi());
        CHECK_THROWS_AS(conditional_mutual_information(sq, p), std::domain_error);
    }
    SUBCASE("random policies: classes match brute force, pi is stationary") {
        std::mt19937_64 rng(17);
        for (int t = 0; t < 60; ++t) {
            const int d = static_cast<int>(rng() % 4);
            const double eps = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            const auto sq = family_product(d, eps);
            REQUIRE(sq.num_nodes() <= 50);
            // Some zero and one entries to exercise reducible chains.
            auto p = random_policy(sq, rng);
            for (auto& v : p.p1)
                if (v > 0 && rng() % 5 == 0) v = rng() % 2 ? 1.0 : 0.0;
            const auto a = analyze_chain(sq, p);
            const auto brute = reach_classes(transition_matrix(sq, p), sq.num_nodes());
            CHECK(std::set<std::vector<int>>(a.classes.begin(), a.classes.end()) == brute);
            if (a.has_pi()) {
                double total = 0;
                for (double v : a.pi) total += v;
                CHECK(std::abs(total - 1.0) < 1e-14);
                CHECK(a.residual <= 1e-12);
            }
        }
    }
    CHECK_THROWS_AS(analyze_chain(family_product(1, 0.3), [] {
                        auto p = InputPolicy::zeros(2, 5);
                        p.at(0, 0) = 0.5;  // 1 forbidden at s = 0
                        return p;
                    }()),
                    std::invalid_argument);
}

TEST_CASE("conditional mutual information") {
    const auto sq0 = build_sq_graph(ConstraintAutomaton(ConstraintSpec::dinf(0)), single_node_q_graph(), 0.3);
    auto half = InputPolicy::zeros(1, 1);
    half.at(0, 0) = 0.5;
    CHECK(std::abs(conditional_mutual_information(sq0, half) - 0.7) < 1e-12);
    CHECK(std::abs(conditional_mutual_information(family_product(2, 0.3), InputPolicy::zeros(3, 8))) < 1e-15);

    std::mt19937_64 rng(23);
    for (int t = 0; t < 100; ++t) {
        const int d = static_cast<int>(rng() % 4);
        const double eps = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const auto sq = family_product(d, eps);
        const auto p = random_policy(sq, rng);
        for (double term : conditional_mutual_information_terms(sq, p)) CHECK(term <= 1 - eps + 1e-12);
        CHECK(conditional_mutual_information(sq, p) <= 1 - eps + 1e-12);
    }
}

TEST_CASE("scheme-induced policy") {
    const auto p = scheme_induced_policy(SplitVector({0.5, 0.5}), 1);
    CHECK(p.at(1, 0) == 0.5);
    CHECK(p.at(1, 1) == 1.0);
    CHECK(p.at(0, 0) == 0.0);
    const auto z = scheme_induced_policy(SplitVector::zeros(3), 3);
    for (double v : z.p1) CHECK(v == 0.0);

    for (int i = 1; i <= 9; ++i) {
        const double eps = i / 10.0;
        const auto c = solve_feedback_capacity(eps, 1);
        const auto sq = family_product(1, eps);
        const auto sp = scheme_induced_policy(c.argmax, 1);
        CHECK(std::abs(conditional_mutual_information(sq, sp) - c.value) < 1e-9);
        const auto b = check_bcjr_invariance(sq, sp);
        CHECK(b.holds);
        CHECK(b.max_residual <= 1e-9);
    }
    // d >= 2: the formula misses the cooldown states and falls below capacity.
    const auto c2 = solve_feedback_capacity(0.5, 2);
    const double s2 = conditional_mutual_information(family_product(2, 0.5), scheme_induced_policy(c2.argmax, 2));
    CHECK(s2 < c2.value - 1e-3);
}

TEST_CASE("BCJR invariance edge cases") {
    // Deterministic input on a noiseless channel: posteriors are point masses.
    const auto sq = family_product(1, 0.0);
    const auto a = check_bcjr_invariance(sq, InputPolicy::zeros(2, 5));
    CHECK(a.holds);
    std::mt19937_64 rng(4);
    const auto noisy = family_product(1, 0.5);
    const auto r = check_bcjr_invariance(noisy, random_policy(noisy, rng));
    CHECK_FALSE(r.holds);
    CHECK(r.max_residual > 1e-3);
}

TEST_CASE("upper bound optimizer") {
    const auto sq0 = build_sq_graph(ConstraintAutomaton(ConstraintSpec::dinf(0)), single_node_q_graph(), 0.35);
    CHECK(std::abs(optimize_upper_bound(sq0).value - 0.65) < 1e-9);

    for (int d = 1; d <= 2; ++d)
        for (int i = 1; i <= 9; i += 4) {
            const double eps = i / 10.0;
            const auto c = solve_feedback_capacity(eps, d);
            const auto sq = family_product(d, eps);
            BoundOptions o;
            o.warm_starts = {scheme_induced_policy(c.argmax, d)};
            const auto r = optimize_upper_bound(sq, o);
            INFO("d=" << d << " eps=" << eps);
            CHECK(r.value >= c.value - 1e-4);
            CHECK(r.value <= c.value + 1e-3);
            CHECK(std::abs(conditional_mutual_information(sq, r.policy) - r.value) < 1e-12);
        }
    // Random restarts alone, no warm start.
    const auto c = solve_feedback_capacity(0.5, 1);
    const auto r = optimize_upper_bound(family_product(1, 0.5));
    CHECK(std::abs(r.value - c.value) < 1e-4);
    CHECK_THROWS(optimize_upper_bound(family_product(1, 0.5), BoundOptions{0}));
}
