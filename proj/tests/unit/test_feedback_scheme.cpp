#include "doctest.h"

#include <random>

#include "rllfb/constraint.hpp"
#include "rllfb/feedback_scheme.hpp"

using namespace rllfb;

namespace {

DyadicPoint point_at(double x) {
    DyadicPoint p;
    p.exponent = 60;
    p.numerator = static_cast<unsigned long>(std::ldexp(x, 60));
    return p;
}

std::vector<std::uint8_t> random_bits(std::mt19937_64& rng, int n) {
    std::vector<std::uint8_t> v(n);
    for (auto& b : v) b = rng() & 1;
    return v;
}

}  // namespace

TEST_CASE("fresh partition") {
    CodingSessionState s(1, SplitVector({0.5, 0.5}));
    CHECK(s.round_active());
    CHECK(s.cell_measure(0) == mpq_class(1, 2));
    CHECK(s.cell_measure(1) == mpq_class(1, 2));
    CHECK(s.cell_measure(RegionSegment::kRemainder) == 0);
    CHECK(s.encoder_step(point_at(0.3)) == 1);
    CHECK(s.encoder_step(point_at(0.7)) == 0);

    CodingSessionState q(1, SplitVector({0.25, 0.25}));
    CHECK(q.cell_measure(RegionSegment::kRemainder) == mpq_class(1, 2));
    CHECK(q.encoder_step(point_at(0.9)) == 0);
}

TEST_CASE("decoder transitions") {
    SUBCASE("one narrows to the cell and forces zeros") {
        CodingSessionState s(2, SplitVector({0.25, 0.25, 0.25}));
        s.decoder_step(ChannelOutput::One);
        CHECK(s.region_measure() == mpq_class(1, 4));
        CHECK(s.forced_zero_countdown() == 2);
        CHECK(s.encoder_step(point_at(0.1)) == 0);
        s.decoder_step(ChannelOutput::Zero);
        s.decoder_step(ChannelOutput::Erasure);
        CHECK(s.forced_zero_countdown() == 0);
        CHECK(s.round_active());
        CHECK(s.cell_measure(0) == mpq_class(1, 16));
    }
    SUBCASE("zero removes the cell") {
        CodingSessionState s(1, SplitVector({0.25, 0.25}));
        s.decoder_step(ChannelOutput::Zero);
        CHECK(s.region_measure() == mpq_class(3, 4));
        CHECK(s.attempt_index() == 0);
    }
    SUBCASE("erasure wraps to a repeat of the same partition") {
        CodingSessionState s(1, SplitVector({0.5, 0.5}));
        const auto before = s.segments();
        s.decoder_step(ChannelOutput::Erasure);
        CHECK(s.attempt_index() == 1);
        s.decoder_step(ChannelOutput::Erasure);
        CHECK(s.attempt_index() == 0);
        CHECK(s.cycle_phase() == CyclePhase::Repeat);
        CHECK(s.region_measure() == 1);
        REQUIRE(s.segments().size() == before.size());
        for (std::size_t i = 0; i < before.size(); ++i) CHECK(s.segments()[i].cell == before[i].cell);
    }
    SUBCASE("one in a forced slot is a contradiction") {
        CodingSessionState s(1, SplitVector({0.5, 0.5}));
        s.decoder_step(ChannelOutput::One);
        CHECK_THROWS_AS(s.decoder_step(ChannelOutput::One), std::logic_error);
    }
}

TEST_CASE("analytic rate equals rate_R") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        const int d = static_cast<int>(rng() % 6);
        const double eps = u(rng);
        std::vector<double> v(d + 1);
        double s = 0;
        for (auto& x : v) s += (x = u(rng));
        const double scale = u(rng) / s;
        for (auto& x : v) x *= scale;
        const SplitVector delta(v);
        CHECK(std::abs(analytic_rate(delta, eps, d) - rate_R(delta, eps, d)) < 1e-12);
    }
    CHECK(analytic_rate(SplitVector::zeros(2), 0.3, 2) == 0.0);
}

TEST_CASE("short sessions are zero-error, constrained and synchronized") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SimulationOptions opts;
    opts.check_synchrony = true;
    opts.check_containment = true;
    opts.record_transcript = true;
    for (int t = 0; t < 300; ++t) {
        opts.shortfall = t % 3 == 0 ? ShortfallPolicy::Idle : ShortfallPolicy::Truncate;
        const int d = static_cast<int>(rng() % 4);
        const double eps = std::min(0.95, u(rng));
        std::vector<double> v(d + 1);
        double s = 0;
        for (auto& x : v) s += (x = u(rng));
        const double scale = (0.5 + 0.5 * u(rng)) / s;
        for (auto& x : v) x *= scale;
        const auto bits = random_bits(rng, 20);
        const auto r = simulate(bits, eps, SplitVector(v), d, rng(), opts);
        REQUIRE(r.completed);
        CHECK(r.errors == 0);
        CHECK(r.synchrony_failures == 0);
        CHECK(r.constraint_ok);
        std::vector<std::uint8_t> xs;
        for (const auto& e : r.transcript) xs.push_back(static_cast<std::uint8_t>(e.x));
        CHECK(check_sequence(ConstraintSpec::dinf(d), xs));
    }
}

TEST_CASE("simulation determinism and budgets") {
    std::mt19937_64 rng(3);
    const auto bits = random_bits(rng, 200);
    SimulationOptions opts;
    opts.record_transcript = true;
    const SplitVector delta({0.3, 0.3, 0.3});
    const auto a = simulate(bits, 0.4, delta, 2, 99, opts);
    const auto b = simulate(bits, 0.4, delta, 2, 99, opts);
    CHECK(a.to_json() == b.to_json());
    REQUIRE(a.transcript.size() == b.transcript.size());
    for (std::size_t i = 0; i < a.transcript.size(); ++i) {
        CHECK(a.transcript[i].x == b.transcript[i].x);
        CHECK(a.transcript[i].y == b.transcript[i].y);
    }

    SimulationOptions budget;
    budget.max_channel_uses = 1000;
    const auto dead = simulate(bits, 1.0, delta, 2, 1, budget);
    CHECK_FALSE(dead.completed);
    CHECK(dead.resolved_bits == 0);
    CHECK(dead.empirical_rate == 0.0);
    CHECK(dead.channel_uses == 1000);
}

TEST_CASE("report json keys") {
    std::mt19937_64 rng(1);
    const auto r = simulate(random_bits(rng, 16), 0.2, SplitVector({0.5}), 0, 42);
    const auto j = r.to_json();
    for (const char* key : {"channel_uses", "resolved_bits", "empirical_rate", "analytic_rate", "errors",
                            "constraint_ok", "seed"})
        CHECK(j.find(std::string("\"") + key + "\"") != std::string::npos);
}
