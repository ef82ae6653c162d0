#include "rllfb/constraint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rllfb {

void ConstraintSpec::validate() const {
    if (d < 0) throw std::invalid_argument("RLL constraint: d must be non-negative");
    if (k) {
        if (*k < 1) throw std::invalid_argument("RLL constraint: k must be positive");
        if (d > *k) throw std::invalid_argument("RLL constraint: d > k");
    }
}

ConstraintAutomaton::ConstraintAutomaton(ConstraintSpec spec) : spec_(spec) {
    spec_.validate();
    num_states_ = spec_.k ? *spec_.k + 1 : spec_.d + 1;
}

bool ConstraintAutomaton::allows(int state, int bit) const {
    if (state < 0 || state >= num_states_) return false;
    if (bit == 1) return state >= spec_.d;
    return !spec_.k || state < *spec_.k;
}

int ConstraintAutomaton::next(int state, int bit) const {
    if (!allows(state, bit)) return -1;
    if (bit == 1) return 0;
    return spec_.k ? state + 1 : std::min(state + 1, spec_.d);
}

std::vector<ConstraintEdge> ConstraintAutomaton::edges() const {
    std::vector<ConstraintEdge> out;
    for (int s = 0; s < num_states_; ++s)
        for (int b = 0; b <= 1; ++b)
            if (int t = next(s, b); t >= 0) out.push_back({s, b, t});
    return out;
}

std::vector<std::vector<int>> ConstraintAutomaton::adjacency() const {
    std::vector<std::vector<int>> a(num_states_, std::vector<int>(num_states_, 0));
    for (const auto& e : edges()) ++a[e.from][e.to];
    return a;
}

ConstraintAutomaton build_rll_automaton(const ConstraintSpec& spec) {
    return ConstraintAutomaton(spec);
}

namespace {

template <typename Range, typename ToBit>
bool run_automaton(const ConstraintSpec& spec, const Range& bits, ToBit to_bit) {
    const ConstraintAutomaton a(spec);
    int s = a.initial_state();
    for (auto c : bits) {
        const int b = to_bit(c);
        if (b < 0) return false;
        s = a.next(s, b);
        if (s < 0) return false;
    }
    return true;
}

}  // namespace

bool check_sequence(const ConstraintSpec& spec, std::string_view bits) {
    return run_automaton(spec, bits, [](char c) { return c == '0' ? 0 : c == '1' ? 1 : -1; });
}

bool check_sequence(const ConstraintSpec& spec, std::span<const std::uint8_t> bits) {
    return run_automaton(spec, bits, [](std::uint8_t b) { return b <= 1 ? int(b) : -1; });
}

mpz_class count_sequences(const ConstraintSpec& spec, int n) {
    if (n < 0) throw std::invalid_argument("count_sequences: negative length");
    const ConstraintAutomaton a(spec);
    std::vector<mpz_class> ways(a.num_states()), next(a.num_states());
    ways[a.initial_state()] = 1;
    const auto edges = a.edges();
    for (int i = 0; i < n; ++i) {
        for (auto& v : next) v = 0;
        for (const auto& e : edges) next[e.to] += ways[e.from];
        ways.swap(next);
    }
    mpz_class total = 0;
    for (const auto& v : ways) total += v;
    return total;
}

double noiseless_capacity(const ConstraintSpec& spec) {
    const ConstraintAutomaton a(spec);
    const auto adj = a.adjacency();
    const int n = a.num_states();
    // Iterate on A + I: same Perron vector, and primitive even when A is periodic (d = k).
    std::vector<double> v(n, 1.0), w(n);
    double lambda = 0.0;
    for (int it = 0; it < 1'000'000; ++it) {
        for (int s = 0; s < n; ++s) {
            double acc = v[s];
            for (int t = 0; t < n; ++t) acc += adj[s][t] * v[t];
            w[s] = acc;
        }
        const double norm = *std::max_element(w.begin(), w.end());
        for (auto& x : w) x /= norm;
        double residual = 0.0;
        for (int s = 0; s < n; ++s) residual = std::max(residual, std::abs(w[s] - v[s]));
        v.swap(w);
        lambda = norm;
        if (residual < 1e-13) break;
    }
    return std::log2(lambda - 1.0);
}

}  // namespace rllfb
