#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "rllfb/capacity.hpp"

namespace rllfb {

enum class ChannelOutput : std::uint8_t { Zero = 0, Erasure = 1, One = 2 };

char to_char(ChannelOutput y);

/// numerator / 2^exponent, a point of [0,1).
struct DyadicPoint {
    mpz_class numerator;
    unsigned exponent = 0;

    /// The midpoint of the length-n dyadic bin named by `bits` (first bit most significant).
    static DyadicPoint bin_midpoint(const std::vector<std::uint8_t>& bits);
};

enum class CyclePhase { FirstCycle, Repeat };

/// What a round does when cooled-down points cannot fill the cells at full size.
/// Idle: send 0 and retry next slot. Truncate: shrink the cells that cannot be filled.
enum class ShortfallPolicy { Idle, Truncate };

/// Piece [lo, hi) of the decoder's uncertainty region, in units of 2^-scale.
struct RegionSegment {
    static constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::min();

    mpz_class lo;
    mpz_class hi;
    std::int64_t last_one = kNever;  // slot of the most recent (erased) 1 sent by these points
    int cell = kRemainder;           // 0..d, or kRemainder

    static constexpr int kRemainder = -1;
};

/// State of the labelling scheme shared by encoder and decoder. Every transition is
/// driven by the channel output alone, so two copies fed the same outputs stay identical.
///
/// A round partitions the region into cells A_0..A_d (relative measures delta_i) and a
/// remainder. Attempt i of a cycle sends 1 exactly from A_i. An erasure moves to the next
/// attempt, wrapping after A_d and reusing the partition, so a point in A_i sends its 1s
/// exactly d+1 slots apart. An unerased 1 narrows the region to A_i and forces d zeros;
/// an unerased 0 removes A_i. Points that sent an erased 1 within the last d slots carry
/// a cooldown c and may only be placed in cells A_j with j >= c.
class CodingSessionState {
public:
    /// `delta` is rounded once to 53-bit dyadic fractions; `initial_scale` is the
    /// starting denominator exponent (at least the message point's exponent).
    CodingSessionState(int d, const SplitVector& delta, unsigned initial_scale = 64,
                       ShortfallPolicy policy = ShortfallPolicy::Truncate);

    int d() const { return d_; }
    const std::vector<std::uint64_t>& dyadic_split() const { return split_; }

    /// Builds a fresh partition at the current slot. Returns false (and leaves the round
    /// inactive) when the cooldown-eligible mass cannot fill the cells; that slot idles.
    bool start_round();

    /// Input for the current slot, for a message located at `point`.
    int encoder_step(const DyadicPoint& point) const;
    /// Consumes the output of the current slot and advances one slot.
    void decoder_step(ChannelOutput y);

    bool contains(const DyadicPoint& point) const;
    /// True once the region lies inside a single length-`bits` dyadic bin; its index goes to *bin.
    bool resolved(unsigned bits, mpz_class* bin = nullptr) const;

    std::int64_t slot() const { return slot_; }
    int attempt_index() const { return attempt_; }
    CyclePhase cycle_phase() const { return phase_; }
    int forced_zero_countdown() const { return forced_; }
    bool round_active() const { return round_active_; }
    std::uint64_t idle_slots() const { return idle_slots_; }
    std::uint64_t short_rounds() const { return short_rounds_; }
    unsigned scale() const { return scale_; }
    const std::vector<RegionSegment>& segments() const { return segments_; }

    /// Exact measures as fractions of [0,1).
    mpq_class region_measure() const;
    mpq_class cell_measure(int cell) const;
    /// Cooldown of a segment at the current slot.
    int cooldown(const RegionSegment& seg) const;

    std::string serialize() const;

private:
    void rescale();
    void normalize_segments();
    void begin_round();
    const RegionSegment* locate(const DyadicPoint& point) const;

    int d_;
    std::vector<std::uint64_t> split_;  // delta_i * 2^53
    unsigned scale_;
    std::vector<RegionSegment> segments_;
    std::int64_t slot_ = 0;
    int attempt_ = 0;
    CyclePhase phase_ = CyclePhase::FirstCycle;
    int forced_ = 0;
    bool round_active_ = false;
    std::uint64_t idle_slots_ = 0;
    std::uint64_t short_rounds_ = 0;
    ShortfallPolicy policy_;
};

struct SimulationOptions {
    /// Stop after this many channel uses (0 = no budget).
    std::uint64_t max_channel_uses = 0;
    /// Run separate encoder and decoder states and compare their serializations each step.
    bool check_synchrony = false;
    /// Check after every step that the decoder's region still holds the message point.
    bool check_containment = false;
    bool record_transcript = false;
    ShortfallPolicy shortfall = ShortfallPolicy::Truncate;
};

struct TranscriptEntry {
    int x;
    ChannelOutput y;
};

struct SimulationReport {
    std::uint64_t channel_uses = 0;
    std::uint64_t resolved_bits = 0;
    double empirical_rate = 0.0;
    double analytic_rate = 0.0;
    std::uint64_t errors = 0;
    bool constraint_ok = true;
    std::uint64_t seed = 0;
    std::uint64_t idle_slots = 0;
    std::uint64_t short_rounds = 0;
    std::uint64_t synchrony_failures = 0;
    std::uint64_t containment_failures = 0;
    bool completed = false;
    std::vector<TranscriptEntry> transcript;

    std::string to_json() const;
};

/// Erasure channel driven by a seeded mt19937_64; one draw per use, erased iff
/// (draw >> 11) * 2^-53 < eps.
class ErasureChannel {
public:
    ErasureChannel(double eps, std::uint64_t seed);
    ChannelOutput transmit(int x);

private:
    double eps_;
    std::mt19937_64 rng_;
};

SimulationReport simulate(const std::vector<std::uint8_t>& message_bits, double eps,
                          const SplitVector& delta, int d, std::uint64_t seed,
                          const SimulationOptions& options = {});

struct RateMeasurement {
    std::uint64_t sessions = 0;
    std::uint64_t channel_uses = 0;
    std::uint64_t resolved_bits = 0;
    std::uint64_t errors = 0;
    bool constraint_ok = true;
    double empirical_rate = 0.0;
};

/// Back-to-back sessions of `session_bits` random message bits until at least `channel_uses`
/// uses have been spent. Messages and per-session seeds come from one generator seeded with
/// `seed`; the rate is total resolved bits over total uses.
RateMeasurement measure_rate(const SplitVector& delta, double eps, int d, std::uint64_t channel_uses,
                             std::uint64_t seed, std::size_t session_bits = 4096,
                             ShortfallPolicy shortfall = ShortfallPolicy::Truncate);

/// Expected information over expected duration of one scheme cycle, solved from the
/// cycle's absorbing Markov chain.
double analytic_rate(const SplitVector& delta, double eps, int d);

}  // namespace rllfb
