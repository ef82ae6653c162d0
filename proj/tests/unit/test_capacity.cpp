#include "doctest.h"

#include <cmath>
#include <random>

#include "rllfb/capacity.hpp"

using namespace rllfb;

TEST_CASE("binary entropy and Q inverse") {
    CHECK(binary_entropy(0.5) == 1.0);
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(std::abs(binary_entropy(0.11) - 0.4999) < 1e-3);
    CHECK_THROWS_AS(binary_entropy(1.5), std::domain_error);
    CHECK_THROWS_AS(binary_entropy(-0.1), std::domain_error);

    CHECK(std::abs(q_inverse(0.5)) < 1e-10);
    for (double p : {0.1, 0.3, 0.7}) CHECK(std::abs(q_function(q_inverse(p)) - p) < 1e-12);
    CHECK(std::abs(q_inverse(0.8) + 0.841621) < 1e-6);
    CHECK_THROWS(q_inverse(0.0));
    CHECK_THROWS(q_inverse(1.0));
}

TEST_CASE("split vector validation") {
    CHECK_THROWS_AS(SplitVector({0.6, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(SplitVector({-0.1}), std::invalid_argument);
    CHECK_NOTHROW(SplitVector({0.5, 0.5}));
    CHECK(classify_regime(SplitVector({0.3, 0.3})) == Regime::Interior);
    CHECK(classify_regime(SplitVector({0.5, 0.5})) == Regime::SimplexFace);
}

TEST_CASE("rate_R examples") {
    for (double eps : {0.0, 0.2, 0.7, 1.0}) CHECK(std::abs(rate_R(SplitVector({0.5}), eps, 0) - (1 - eps)) < 1e-15);
    CHECK(rate_R(SplitVector::zeros(3), 0.4, 3) == 0.0);
    const double g = (3 - std::sqrt(5.0)) / 2;
    CHECK(std::abs(rate_R(SplitVector({g, g}), 0.0, 1) - 0.694242) < 1e-6);
    CHECK_THROWS(rate_R(SplitVector({0.5}), 0.2, 1));
    CHECK_THROWS(rate_R(SplitVector({0.5}), 1.2, 0));
}

TEST_CASE("capacity matches frozen multistart oracle") {
    // Multistart SLSQP over the simplex, 60 random starts per point.
    struct Row {
        int d;
        double eps, value, sum;
    };
    const Row rows[] = {
        {1, 0.1, 0.642723981979, 0.78086132}, {1, 0.5, 0.405685231376, 0.86031942},
        {1, 0.9, 0.095313045283, 0.96697901}, {2, 0.1, 0.516588971590, 0.98472772},
        {2, 0.5, 0.345099433962, 1.0},        {2, 0.9, 0.086126683630, 1.0},
        {3, 0.1, 0.438487739524, 1.0},        {3, 0.5, 0.299883963763, 1.0},
        {3, 0.9, 0.075621211216, 1.0},
    };
    for (const auto& r : rows) {
        const auto c = solve_feedback_capacity(r.eps, r.d);
        INFO("d=" << r.d << " eps=" << r.eps);
        CHECK(std::abs(c.value - r.value) < 1e-7);
        CHECK(std::abs(c.argmax.sum() - r.sum) < 1e-5);
        CHECK(c.regime == (r.sum < 1 - 1e-6 ? Regime::Interior : Regime::SimplexFace));
        CHECK(std::abs(c.value - rate_R(c.argmax, r.eps, r.d)) < 1e-9);
    }
}

TEST_CASE("capacity beats a random search oracle") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int d = 1; d <= 3; ++d)
        for (double eps : {0.05, 0.3, 0.6, 0.95}) {
            const double c = solve_feedback_capacity(eps, d).value;
            double best = 0.0;
            for (int t = 0; t < 20000; ++t) {
                std::vector<double> v(d + 1);
                double s = 0;
                for (auto& x : v) s += (x = u(rng));
                const double scale = u(rng) / s;
                for (auto& x : v) x *= scale;
                best = std::max(best, rate_R(SplitVector(v), eps, d));
            }
            CHECK(c >= best - 1e-12);
        }
}

TEST_CASE("capacity examples and identities") {
    auto c0 = solve_feedback_capacity(0.3, 0);
    CHECK(std::abs(c0.value - 0.7) < 1e-9);
    CHECK(std::abs(c0.argmax[0] - 0.5) < 1e-6);
    for (int d = 1; d <= 5; ++d)
        CHECK(std::abs(solve_feedback_capacity(0.0, d).value - noiseless_capacity(ConstraintSpec::dinf(d))) < 1e-6);
    for (int i = 0; i <= 10; ++i) {
        const double eps = i / 10.0;
        CHECK(std::abs(solve_feedback_capacity(eps, 0).value - (1 - eps)) < 1e-9);
    }
    const auto one = solve_feedback_capacity(1.0, 2);
    CHECK(one.value == 0.0);
    CHECK(one.argmax.sum() == 0.0);

    CHECK(std::abs(solve_feedback_capacity(0.1, 2).value - noncausal_capacity(0.1, 2)) < 1e-6);
    const double th = d2_equality_threshold();
    CHECK(std::abs(th - 0.1452444) < 1e-6);
    CHECK(std::abs(solve_feedback_capacity(th, 2).value - noncausal_capacity(th, 2)) < 1e-6);
    CHECK(noncausal_capacity(0.3, 2) > solve_feedback_capacity(0.3, 2).value + 1e-4);
    for (int i = 1; i <= 9; ++i)
        CHECK(std::abs(noncausal_capacity(i / 10.0, 1) - solve_feedback_capacity(i / 10.0, 1).value) < 1e-6);
    CHECK(std::abs(noncausal_capacity(0.25, 0) - 0.75) < 1e-9);
    CHECK_THROWS(noncausal_capacity(1.0, 1));
}

TEST_CASE("simplified solver") {
    auto s = solve_simplified(0.5, 0);
    CHECK(std::abs(s.value - 0.5) < 1e-9);
    CHECK(std::abs(s.argmax[0] - 0.5) < 1e-6);
    auto g = solve_simplified(0.0, 1);
    CHECK(std::abs(g.value - 0.694242) < 1e-6);
    CHECK(std::abs(g.argmax[0] - 0.381966) < 1e-5);
    CHECK_THROWS(solve_simplified(1.0, 1));
}

TEST_CASE("capacity grid properties") {
    for (int d = 1; d <= 4; ++d) {
        double prev = 2.0;
        for (int i = 0; i <= 100; ++i) {
            const double eps = i / 100.0;
            const auto full = solve_full_simplex(eps, d);
            const auto c = solve_feedback_capacity(eps, d);
            CHECK(c.value <= prev + 1e-12);
            prev = c.value;
            const double s = c.argmax.sum();
            CHECK((s <= 1 - 1e-6 || std::abs(s - 1) <= 1e-6));
            CHECK(linear_lower_bound(eps, ConstraintSpec::dinf(d)) <= c.value + 1e-6);
            if (eps < 1.0) {
                const auto simple = solve_simplified(eps, d);
                CHECK(full.value >= simple.value - 1e-7);
                if (full.regime == Regime::Interior && eps > 0.0)
                    CHECK(std::abs(full.value - simple.value) < 1e-6);
            }
        }
    }
}

TEST_CASE("eps = 0 leaves delta_1..d free, so the 1-D cap can bind") {
    // Optimal delta_0 for d = 3 is above 1/(d+1); the full solver finds it, the 1-D solver cannot.
    const auto full = solve_full_simplex(0.0, 3);
    const auto simple = solve_simplified(0.0, 3);
    CHECK(full.regime == Regime::Interior);
    CHECK(full.argmax[0] > 0.25);
    CHECK(simple.value < full.value - 1e-3);
    CHECK(std::abs(full.value - noiseless_capacity(ConstraintSpec::dinf(3))) < 1e-9);
}

TEST_CASE("linear lower bound") {
    CHECK(std::abs(linear_lower_bound(0.0, ConstraintSpec::dinf(1)) - 0.694242) < 1e-6);
    CHECK(linear_lower_bound(1.0, ConstraintSpec::dk(1, 3)) == 0.0);
    CHECK(std::abs(linear_lower_bound(0.5, ConstraintSpec::dinf(1)) - 0.347121) < 1e-6);
    CHECK(linear_lower_bound(0.5, ConstraintSpec::dinf(1)) <= solve_feedback_capacity(0.5, 1).value);
}
