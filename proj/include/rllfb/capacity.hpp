#pragma once

#include <string_view>
#include <vector>

#include "rllfb/constraint.hpp"

namespace rllfb {

/// Point of the simplex {delta in [0,1]^(d+1) : sum delta_i <= 1}.
class SplitVector {
public:
    SplitVector() = default;
    /// Throws std::invalid_argument outside the simplex (slack 1e-12 on the sum).
    explicit SplitVector(std::vector<double> delta);

    static SplitVector zeros(int d) { return SplitVector(std::vector<double>(d + 1, 0.0)); }
    static SplitVector uniform(int d, double value) {
        return SplitVector(std::vector<double>(d + 1, value));
    }

    int d() const { return static_cast<int>(delta_.size()) - 1; }
    std::size_t size() const { return delta_.size(); }
    double operator[](std::size_t i) const { return delta_[i]; }
    const std::vector<double>& values() const { return delta_; }
    double sum() const;

private:
    std::vector<double> delta_;
};

enum class Regime { Interior, SimplexFace };
enum class SolverMethod { FullSimplex, Simplified1D, Grid };

std::string_view to_string(Regime r);
std::string_view to_string(SolverMethod m);

struct CapacityResult {
    double value = 0.0;
    SplitVector argmax;
    Regime regime = Regime::Interior;
    SolverMethod method = SolverMethod::FullSimplex;
};

/// Sum below 1 - 1e-6 is Interior, otherwise SimplexFace.
Regime classify_regime(const SplitVector& delta);

double binary_entropy(double p);

/// Inverse of the Gaussian tail Q(x) = P(N(0,1) > x).
double q_function(double x);
double q_inverse(double p);

/// Feedback rate of a split vector:
///   (1-eps) * sum eps^i h(delta_i) / (sum eps^i + d (1-eps) sum eps^i delta_i).
double rate_R(const SplitVector& delta, double eps, int d);

/// Maximum of rate_R over the simplex, cross-checked with the 1-D solver.
CapacityResult solve_feedback_capacity(double eps, int d);

/// Dinkelbach iteration on the full simplex only (no 1-D cross-check).
CapacityResult solve_full_simplex(double eps, int d);

/// max over delta in [0, 1/(d+1)] of h(delta) / (d delta + 1/(1-eps)). Rejects eps = 1.
CapacityResult solve_simplified(double eps, int d);

/// Capacity with non-causal erasure knowledge: the same ratio maximized over [0, 1/2].
double noncausal_capacity(double eps, int d);

double linear_lower_bound(double eps, const ConstraintSpec& spec);

/// Upper end of the erasure range on which the d = 2 feedback and non-causal capacities agree.
double d2_equality_threshold();

}  // namespace rllfb
