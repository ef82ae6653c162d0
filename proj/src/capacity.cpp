#include "rllfb/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rllfb {

SplitVector::SplitVector(std::vector<double> delta) : delta_(std::move(delta)) {
    if (delta_.empty()) throw std::invalid_argument("SplitVector: empty");
    for (double x : delta_)
        if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("SplitVector: entry outside [0,1]");
    if (sum() > 1.0 + 1e-12) throw std::invalid_argument("SplitVector: sum exceeds 1");
}

double SplitVector::sum() const { return std::accumulate(delta_.begin(), delta_.end(), 0.0); }

std::string_view to_string(Regime r) {
    return r == Regime::Interior ? "Interior" : "SimplexFace";
}

std::string_view to_string(SolverMethod m) {
    switch (m) {
        case SolverMethod::FullSimplex: return "FullSimplex";
        case SolverMethod::Simplified1D: return "Simplified1D";
        case SolverMethod::Grid: return "Grid";
    }
    return "?";
}

Regime classify_regime(const SplitVector& delta) {
    return delta.sum() < 1.0 - 1e-6 ? Regime::Interior : Regime::SimplexFace;
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary_entropy: p outside [0,1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double q_inverse(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("q_inverse: p outside (0,1)");
    double lo = -40.0, hi = 40.0;  // Q is decreasing
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (q_function(mid) > p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

void check_eps(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("erasure probability outside [0,1]");
}

void check_d(int d) {
    if (d < 0) throw std::invalid_argument("d must be non-negative");
}

// Numerator and denominator of rate_R split into per-coordinate weights.
struct FractionalProgram {
    int d;
    std::vector<double> info_weight;  // (1-eps) eps^i
    double base_cost;                 // sum eps^i

    FractionalProgram(double eps, int d_) : d(d_), info_weight(d_ + 1), base_cost(0.0) {
        for (int i = 0; i <= d; ++i) {
            const double e = std::pow(eps, i);
            info_weight[i] = (1.0 - eps) * e;
            base_cost += e;
        }
    }

    double numerator(const std::vector<double>& delta) const {
        double n = 0.0;
        for (int i = 0; i <= d; ++i) n += info_weight[i] * binary_entropy(delta[i]);
        return n;
    }

    double denominator(const std::vector<double>& delta) const {
        double s = 0.0;
        for (int i = 0; i <= d; ++i) s += info_weight[i] * delta[i];
        return base_cost + d * s;
    }

    // argmax of numerator - lambda * denominator over the simplex. Per coordinate the
    // optimum is 1 / (1 + 2^(lambda d + mu / w_i)) for the simplex multiplier mu.
    std::vector<double> inner(double lambda) const {
        auto at = [&](double mu) {
            std::vector<double> delta(d + 1, 0.0);
            for (int i = 0; i <= d; ++i)
                if (info_weight[i] > 0.0)
                    delta[i] = 1.0 / (1.0 + std::exp2(lambda * d + mu / info_weight[i]));
            return delta;
        };
        auto total = [](const std::vector<double>& v) {
            return std::accumulate(v.begin(), v.end(), 0.0);
        };
        auto delta = at(0.0);
        if (total(delta) <= 1.0) return delta;
        double lo = 0.0, hi = 1.0;
        while (total(at(hi)) > 1.0) hi *= 2.0;
        for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            (total(at(mid)) > 1.0 ? lo : hi) = mid;
        }
        return at(hi);
    }
};

std::vector<double> dinkelbach(const FractionalProgram& fp, double lambda) {
    std::vector<double> delta = fp.inner(lambda);
    for (int it = 0; it < 500; ++it) {
        const double n = fp.numerator(delta), den = fp.denominator(delta);
        if (n - lambda * den <= 1e-12) break;
        lambda = n / den;
        delta = fp.inner(lambda);
    }
    return delta;
}

// Maximizes h(delta) / (d delta + kappa) on [0, upper] by bisection on the sign of the
// derivative numerator (kappa + d) ln(1 - delta) - kappa ln(delta), which is decreasing.
double ratio_argmax(double kappa, int d, double upper) {
    auto slope = [&](double x) { return (kappa + d) * std::log1p(-x) - kappa * std::log(x); };
    double lo = 1e-15, hi = std::min(upper, 1.0 - 1e-15);
    if (slope(hi) >= 0.0) return upper;
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (slope(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double ratio_value(double delta, double kappa, int d) {
    return binary_entropy(delta) / (d * delta + kappa);
}

CapacityResult make_result(std::vector<double> delta, double eps, int d, SolverMethod m) {
    // Dinkelbach may overshoot the simplex face by an ulp or two.
    double s = std::accumulate(delta.begin(), delta.end(), 0.0);
    if (s > 1.0)
        for (auto& x : delta) x /= s;
    CapacityResult r;
    r.argmax = SplitVector(std::move(delta));
    r.value = rate_R(r.argmax, eps, d);
    r.regime = classify_regime(r.argmax);
    r.method = m;
    return r;
}

}  // namespace

double rate_R(const SplitVector& delta, double eps, int d) {
    check_eps(eps);
    check_d(d);
    if (static_cast<int>(delta.size()) != d + 1)
        throw std::invalid_argument("rate_R: split vector length must be d+1");
    const FractionalProgram fp(eps, d);
    return fp.numerator(delta.values()) / fp.denominator(delta.values());
}

CapacityResult solve_full_simplex(double eps, int d) {
    check_eps(eps);
    check_d(d);
    if (eps == 1.0) return make_result(std::vector<double>(d + 1, 0.0), eps, d, SolverMethod::FullSimplex);

    const FractionalProgram fp(eps, d);
    // Starting ratios from a coarse 0.01 grid of equal splits.
    std::vector<double> starts{0.0};
    double best_grid = 0.0;
    for (int j = 1; j * 0.01 <= 1.0 / (d + 1) + 1e-12; ++j) {
        const std::vector<double> v(d + 1, j * 0.01);
        best_grid = std::max(best_grid, fp.numerator(v) / fp.denominator(v));
    }
    starts.push_back(best_grid);

    std::vector<double> best;
    double best_value = -1.0;
    for (double lambda0 : starts) {
        auto delta = dinkelbach(fp, lambda0);
        const double v = fp.numerator(delta) / fp.denominator(delta);
        const bool better = v > best_value + 1e-15;
        const bool tie = std::abs(v - best_value) <= 1e-15 &&
                         std::lexicographical_compare(delta.begin(), delta.end(), best.begin(), best.end());
        if (better || tie) {
            best = std::move(delta);
            best_value = v;
        }
    }
    return make_result(std::move(best), eps, d, SolverMethod::FullSimplex);
}

CapacityResult solve_simplified(double eps, int d) {
    check_eps(eps);
    check_d(d);
    if (eps == 1.0) throw std::invalid_argument("solve_simplified: eps = 1 leaves kappa undefined");
    const double kappa = 1.0 / (1.0 - eps);
    const double delta = ratio_argmax(kappa, d, 1.0 / (d + 1));
    return make_result(std::vector<double>(d + 1, delta), eps, d, SolverMethod::Simplified1D);
}

CapacityResult solve_feedback_capacity(double eps, int d) {
    auto full = solve_full_simplex(eps, d);
    if (eps == 1.0) return full;
    auto simple = solve_simplified(eps, d);
    return simple.value > full.value ? simple : full;
}

double noncausal_capacity(double eps, int d) {
    check_eps(eps);
    check_d(d);
    if (eps == 1.0) throw std::invalid_argument("noncausal_capacity: eps = 1 leaves kappa undefined");
    const double kappa = 1.0 / (1.0 - eps);
    return ratio_value(ratio_argmax(kappa, d, 0.5), kappa, d);
}

double linear_lower_bound(double eps, const ConstraintSpec& spec) {
    check_eps(eps);
    return noiseless_capacity(spec) * (1.0 - eps);
}

double d2_equality_threshold() { return 1.0 - 1.0 / (2.0 * std::log2(1.5)); }

}  // namespace rllfb
