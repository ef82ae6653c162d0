#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <gmpxx.h>

#include "rllfb/constraint.hpp"

namespace rllfb {

/// Bit-packed binary vector; bit i is word i / 64, position i % 64.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}
    /// From a '0'/'1' string, first character is bit 0.
    static BitVec from_string(std::string_view s);

    std::size_t size() const { return bits_; }
    std::size_t num_words() const { return words_.size(); }
    const std::uint64_t* data() const { return words_.data(); }
    std::uint64_t* data() { return words_.data(); }

    bool get(std::size_t i) const { return words_[i >> 6] >> (i & 63) & 1; }
    void set(std::size_t i, bool v = true);
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVec& operator^=(const BitVec& o);
    BitVec operator^(const BitVec& o) const;
    BitVec operator&(const BitVec& o) const;
    bool operator==(const BitVec& o) const = default;
    bool any() const;

    std::uint64_t weight() const;
    bool subset_of(const BitVec& o) const;
    std::vector<std::size_t> support() const;

    std::string to_string() const;
    /// Words from least to most significant, 16 hex digits each.
    std::string to_hex() const;

private:
    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Evaluation vector of a Boolean function on F_2^m; point (y_1..y_m) has index
/// sum y_i 2^(m-i), so x_1 is the most significant coordinate.
using EvalVector = BitVec;

/// Constraint test on a binary string stored as a BitVec, starting from s0 = d.
bool satisfies(const BitVec& v, const ConstraintSpec& spec);

/// Polynomial in algebraic normal form over x_1..x_m. A monomial is a bit mask with
/// bit i-1 standing for x_i.
class BooleanPoly {
public:
    explicit BooleanPoly(int m = 0);
    BooleanPoly(int m, std::vector<std::uint32_t> monomials);

    static BooleanPoly zero(int m) { return BooleanPoly(m); }
    static BooleanPoly one(int m) { return BooleanPoly(m, {0}); }
    /// x_i, 1-based.
    static BooleanPoly variable(int m, int i);
    /// prod of x_i over i in `vars` (1-based).
    static BooleanPoly monomial(int m, const std::vector<int>& vars);

    int m() const { return m_; }
    const std::vector<std::uint32_t>& monomials() const { return monomials_; }
    int degree() const;  // -1 for the zero polynomial
    bool is_zero() const { return monomials_.empty(); }

    BooleanPoly operator+(const BooleanPoly& o) const;
    BooleanPoly operator*(const BooleanPoly& o) const;
    bool operator==(const BooleanPoly& o) const = default;

    /// Same polynomial viewed in more variables.
    BooleanPoly extended(int m) const;
    std::string to_string() const;

private:
    int m_;
    std::vector<std::uint32_t> monomials_;  // sorted, unique
};

inline constexpr int kMaxEvalVariables = 24;

EvalVector evaluate(const BooleanPoly& f);
/// Inverse of evaluate: the unique ANF with the given evaluation vector (length 2^m).
BooleanPoly interpolate(const EvalVector& v, int m);

/// sum_{i <= r} C(m, i); zero for r < 0.
mpz_class binomial_sum(int m, int r);
mpz_class binomial(int n, int k);

struct RMCode {
    int m = 0;
    int r = 0;
    std::vector<std::uint32_t> monomials;  // one per generator row
    std::vector<BitVec> rows;

    std::size_t dimension() const { return rows.size(); }
    std::size_t length() const { return std::size_t{1} << m; }
    /// Generator rows as CSV: "monomial,b_0,...,b_{n-1}".
    std::string to_csv() const;
};

/// Rows are Eval of every monomial of degree <= r, ordered by degree then by mask.
RMCode rm_generator(int m, int r);

std::size_t gf2_rank(std::vector<BitVec> rows);

/// max(floor(m/2 + sqrt(m)/2 * Q^-1(1-R)), 0), clamped to m.
int choose_rm_degree(int m, double rate);

/// Sweeps every codeword of the span of `rows` once. Workers take disjoint slices of the
/// message space (fixed top bits) and walk them in Gray-code order; each worker folds into
/// its own Acc, and the partial results are combined with +=.
template <typename Acc, typename Visit>
Acc sweep_codewords(const std::vector<BitVec>& rows, std::size_t length, Visit visit, int workers = 0);

/// Exhaustive sweeps stop at this dimension.
inline constexpr std::size_t kMaxExhaustiveDimension = 22;

// Achievability.

/// z = ceil(log2(d+1)).
int dinf_shift(int d);
/// t = floor(log2(k+1)).
int zero_k_shift(int k);

struct DinfSubcode {
    int m = 0, r = 0, d = 0, z = 0;
    bool trivial = false;  // r < z: only the zero word
    std::vector<BitVec> rows;  // Eval((prod_{i>m-z} x_i) * x_T), |T| <= r-z, T within x_1..x_{m-z}
};

DinfSubcode build_dinf_subcode(int m, int r, int d);
mpz_class dinf_subcode_dimension(int m, int r, int d);
/// dimension / 2^m, exact.
mpq_class dinf_subcode_rate(int m, int r, int d);
/// Finite-m rate with r = choose_rm_degree(m, R).
mpq_class dinf_subcode_rate_at(int m, double rate, int d);
/// 2^-z R.
double dinf_asymptotic_rate(double rate, int d);

struct ZeroKFamily {
    std::uint32_t subset;    // S as a mask over x_{m-t+1}..x_m (bit i-1 for x_i)
    int g_degree;            // r - |S|
    mpz_class g_dimension;   // C(m-t, <= r-|S|)
};

struct ZeroKSubcode {
    int m = 0, r = 0, k = 0, t = 0;
    std::vector<ZeroKFamily> families;
    mpz_class exact_size;          // 1 + sum_S (2^{D_S} - 1)
    mpz_class stated_lower_bound;  // 2^t * 2^{C(m-t, <= r-t)}, as the proof counts subsets
    mpz_class corrected_lower_bound;  // (2^t - 1)(2^{C(m-t, <= r-t)} - 1) + 1
};

ZeroKSubcode build_0k_subcode(int m, int r, int k);
/// Every vector of the (0,k) subcode, deduplicated and sorted. Requires 2^m <= 2^20 and
/// a total size small enough to list.
std::vector<BitVec> list_0k_subcode(const ZeroKSubcode& code, std::size_t max_size = std::size_t{1} << 22);
/// Eval(1 + (1 + x_S) g) for a g in x_1..x_{m-t}.
EvalVector zero_k_codeword(int m, std::uint32_t subset, const BooleanPoly& g);
/// 2^-t R.
double zero_k_asymptotic_rate(double rate, int k);

// Converse ingredients.

struct Decomposition {
    BooleanPoly g;  // part free of x_m, in m-1 variables
    BooleanPoly h;  // coefficient of x_m, in m-1 variables
};

Decomposition decompose_by_last_variable(const BooleanPoly& f);

struct NecessaryConditionReport {
    std::uint64_t codewords = 0;
    std::uint64_t constrained = 0;  // codewords in S_(1,inf)
    std::uint64_t violations = 0;   // constrained codewords with supp(g) not inside supp(h)
};

/// Exhaustive over RM(m,r); requires dimension <= kMaxExhaustiveDimension.
NecessaryConditionReport verify_necessary_condition(int m, int r);

struct CoveringCount {
    mpz_class count;  // h in RM(n, r) with h = 1 on supp(g)
    int u = 0;        // smallest u with wt(g) >= 2^(n-u)
    mpz_class bound;  // 2^(C(n, <= r) - C(n-u, <= r))
    bool within_bound = false;
};

/// g has length 2^n, n = m-1. The count is 2^(dim - rank of G(n,r) on supp(g)).
CoveringCount count_covering_codewords(int n, int r, const EvalVector& g);
/// Same count by listing every codeword; requires dimension <= kMaxExhaustiveDimension.
mpz_class count_covering_codewords_exhaustive(int n, int r, const EvalVector& g);

/// A(w) for w = 0..2^m. Exhaustive when the dimension allows, otherwise MacWilliams from the
/// dual RM(m, m-r-1); throws if neither side is small enough.
std::vector<mpz_class> weight_distribution(int m, int r);
std::string weight_table_csv(const std::vector<mpz_class>& a);

struct RankCheck {
    std::size_t rank = 0;
    mpz_class threshold;  // C(m-u, <= r)
    bool strict = false;  // rank > threshold
    bool weak = false;    // rank >= threshold
};

/// GF(2) rank of the columns of G(m,r) indexed by V; requires |V| >= 2^(m-u).
RankCheck shortened_rank_check(int m, int r, const std::vector<std::size_t>& columns, int u);

// Upper-bound curve.

/// 3R/8 + ln(1/(1-R))/2.
double rm_upper_bound(double rate);
/// min(rm_upper_bound(R), R).
double rm_upper_bound_capped(double rate);
/// Root of ln(1/(1-R)) = 5R/4 in (0,1), to 1e-12.
double rstar();

/// |{c in RM(m,r) : c satisfies spec}|, exhaustive.
mpz_class enumerate_largest_constrained_subcode(int m, int r, const ConstraintSpec& spec);

template <typename Acc, typename Visit>
Acc sweep_codewords(const std::vector<BitVec>& rows, std::size_t length, Visit visit, int workers) {
    const std::size_t k = rows.size();
    if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::size_t split = std::bit_width(static_cast<unsigned>(workers)) - 1;
    split = std::min(split, k);
    const std::size_t low = k - split;

    auto run = [&](std::size_t slice, Acc& acc) {
        BitVec c(length);
        for (std::size_t b = 0; b < split; ++b)
            if (slice >> b & 1) c ^= rows[low + b];
        visit(acc, c);
        const std::uint64_t steps = std::uint64_t{1} << low;
        for (std::uint64_t i = 1; i < steps; ++i) {
            c ^= rows[std::countr_zero(i)];
            visit(acc, c);
        }
    };

    const std::size_t slices = std::size_t{1} << split;
    std::vector<Acc> partial(slices);
    if (slices == 1) {
        run(0, partial[0]);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < slices; ++j) pool.emplace_back(run, j, std::ref(partial[j]));
        for (auto& t : pool) t.join();
    }
    Acc total = std::move(partial[0]);
    for (std::size_t j = 1; j < slices; ++j) total += partial[j];
    return total;
}

}  // namespace rllfb
