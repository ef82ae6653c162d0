#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace rllfb {

/// Runlength-limited constraint (d,k): at least d and at most k zeros between
/// successive ones. k = nullopt encodes k = infinity.
struct ConstraintSpec {
    int d = 0;
    std::optional<int> k;

    static ConstraintSpec dinf(int d) { return {d, std::nullopt}; }
    static ConstraintSpec dk(int d, int k) { return {d, k}; }

    bool unbounded() const { return !k.has_value(); }
    void validate() const;
};

struct ConstraintEdge {
    int from;
    int bit;
    int to;
};

/// Deterministic labelled presentation of an RLL constraint. State s counts
/// the zeros seen since the last one (saturating at d when k is infinite).
class ConstraintAutomaton {
public:
    explicit ConstraintAutomaton(ConstraintSpec spec);

    const ConstraintSpec& spec() const { return spec_; }
    int num_states() const { return num_states_; }
    /// Start state s0 = d, so a leading 1 is legal.
    int initial_state() const { return spec_.d; }

    bool allows(int state, int bit) const;
    /// Next state, or -1 when the bit is forbidden in `state`.
    int next(int state, int bit) const;
    std::vector<ConstraintEdge> edges() const;
    /// Adjacency counts A[s][t] = number of edges s -> t.
    std::vector<std::vector<int>> adjacency() const;

private:
    ConstraintSpec spec_;
    int num_states_;
};

ConstraintAutomaton build_rll_automaton(const ConstraintSpec& spec);

/// Bits given as '0'/'1' characters.
bool check_sequence(const ConstraintSpec& spec, std::string_view bits);
bool check_sequence(const ConstraintSpec& spec, std::span<const std::uint8_t> bits);

/// Number of length-n strings accepted from s0 = d (transfer-matrix DP).
mpz_class count_sequences(const ConstraintSpec& spec, int n);

/// log2 of the Perron root of the automaton's adjacency matrix.
double noiseless_capacity(const ConstraintSpec& spec);

}  // namespace rllfb
