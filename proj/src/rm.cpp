#include "rllfb/rm.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rllfb/capacity.hpp"
#include "rllfb/kernels.hpp"

namespace rllfb {

// BitVec

BitVec BitVec::from_string(std::string_view s) {
    BitVec v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1') throw std::invalid_argument("BitVec: expected '0' or '1'");
        if (s[i] == '1') v.set(i);
    }
    return v;
}

void BitVec::set(std::size_t i, bool v) {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (v)
        words_[i >> 6] |= bit;
    else
        words_[i >> 6] &= ~bit;
}

BitVec& BitVec::operator^=(const BitVec& o) {
    if (o.bits_ != bits_) throw std::invalid_argument("BitVec: length mismatch");
    kernels::ops().xor_into(words_.data(), o.words_.data(), words_.size());
    return *this;
}

BitVec BitVec::operator^(const BitVec& o) const {
    BitVec r = *this;
    r ^= o;
    return r;
}

BitVec BitVec::operator&(const BitVec& o) const {
    if (o.bits_ != bits_) throw std::invalid_argument("BitVec: length mismatch");
    BitVec r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
    return r;
}

bool BitVec::any() const {
    return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
}

std::uint64_t BitVec::weight() const { return kernels::ops().popcount(words_.data(), words_.size()); }

bool BitVec::subset_of(const BitVec& o) const {
    if (o.bits_ != bits_) throw std::invalid_argument("BitVec: length mismatch");
    return kernels::ops().subset_of(words_.data(), o.words_.data(), words_.size());
}

std::vector<std::size_t> BitVec::support() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w)
        for (std::uint64_t x = words_[w]; x; x &= x - 1) out.push_back(w * 64 + std::countr_zero(x));
    return out;
}

std::string BitVec::to_string() const {
    std::string s(bits_, '0');
    for (std::size_t i = 0; i < bits_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

std::string BitVec::to_hex() const {
    std::string s;
    char buf[17];
    for (auto w : words_) {
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(w));
        s += buf;
    }
    return s;
}

bool satisfies(const BitVec& v, const ConstraintSpec& spec) {
    spec.validate();
    const auto& k = kernels::ops();
    if (!spec.k) {
        if (spec.d == 0) return true;
        if (spec.d <= 63) return !k.has_close_ones(v.data(), v.size(), spec.d);
    } else if (spec.d == 0 && *spec.k <= 62) {
        return !k.has_zero_run_longer(v.data(), v.size(), *spec.k);
    }
    std::vector<std::uint8_t> bytes(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) bytes[i] = v.get(i);
    return check_sequence(spec, bytes);
}

// BooleanPoly

namespace {

void check_vars(int m) {
    if (m < 0 || m > 31) throw std::invalid_argument("BooleanPoly: variable count outside [0,31]");
}

std::vector<std::uint32_t> canonical(std::vector<std::uint32_t> terms) {
    std::sort(terms.begin(), terms.end());
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < terms.size();) {
        std::size_t j = i;
        while (j < terms.size() && terms[j] == terms[i]) ++j;
        if ((j - i) & 1) out.push_back(terms[i]);
        i = j;
    }
    return out;
}

// Point index of the monomial's indicator point: x_i sits at bit m - i.
std::size_t mask_to_point(std::uint32_t mask, int m) {
    std::size_t p = 0;
    for (int i = 1; i <= m; ++i)
        if (mask >> (i - 1) & 1) p |= std::size_t{1} << (m - i);
    return p;
}

std::uint32_t point_to_mask(std::size_t p, int m) {
    std::uint32_t mask = 0;
    for (int i = 1; i <= m; ++i)
        if (p >> (m - i) & 1) mask |= 1u << (i - 1);
    return mask;
}

// In-place subset-sum (Moebius) transform over GF(2); it is its own inverse.
void moebius(BitVec& v, int m) {
    static constexpr std::uint64_t kLow[6] = {0x5555555555555555ull, 0x3333333333333333ull, 0x0f0f0f0f0f0f0f0full,
                                              0x00ff00ff00ff00ffull, 0x0000ffff0000ffffull, 0x00000000ffffffffull};
    std::uint64_t* w = v.data();
    const std::size_t words = v.num_words();
    for (int b = 0; b < std::min(m, 6); ++b)
        for (std::size_t i = 0; i < words; ++i) w[i] ^= (w[i] & kLow[b]) << (1u << b);
    for (int b = 6; b < m; ++b) {
        const std::size_t stride = std::size_t{1} << (b - 6);
        for (std::size_t i = 0; i < words; ++i)
            if (i & stride) w[i] ^= w[i ^ stride];
    }
}

std::string monomial_name(std::uint32_t mask) {
    if (mask == 0) return "1";
    std::string s;
    for (int i = 0; i < 32; ++i)
        if (mask >> i & 1) s += "x" + std::to_string(i + 1);
    return s;
}

}  // namespace

BooleanPoly::BooleanPoly(int m) : m_(m) { check_vars(m); }

BooleanPoly::BooleanPoly(int m, std::vector<std::uint32_t> monomials) : m_(m) {
    check_vars(m);
    const std::uint32_t allowed = m == 32 ? ~0u : (1u << m) - 1;
    for (auto t : monomials)
        if (t & ~allowed) throw std::invalid_argument("BooleanPoly: monomial uses a variable beyond m");
    monomials_ = canonical(std::move(monomials));
}

BooleanPoly BooleanPoly::variable(int m, int i) { return monomial(m, {i}); }

BooleanPoly BooleanPoly::monomial(int m, const std::vector<int>& vars) {
    std::uint32_t mask = 0;
    for (int i : vars) {
        if (i < 1 || i > m) throw std::invalid_argument("BooleanPoly: variable index out of range");
        mask |= 1u << (i - 1);
    }
    return BooleanPoly(m, {mask});
}

int BooleanPoly::degree() const {
    int d = -1;
    for (auto t : monomials_) d = std::max(d, std::popcount(t));
    return d;
}

BooleanPoly BooleanPoly::operator+(const BooleanPoly& o) const {
    if (o.m_ != m_) throw std::invalid_argument("BooleanPoly: variable count mismatch");
    std::vector<std::uint32_t> terms = monomials_;
    terms.insert(terms.end(), o.monomials_.begin(), o.monomials_.end());
    return BooleanPoly(m_, std::move(terms));
}

BooleanPoly BooleanPoly::operator*(const BooleanPoly& o) const {
    if (o.m_ != m_) throw std::invalid_argument("BooleanPoly: variable count mismatch");
    std::vector<std::uint32_t> terms;
    terms.reserve(monomials_.size() * o.monomials_.size());
    for (auto a : monomials_)
        for (auto b : o.monomials_) terms.push_back(a | b);
    return BooleanPoly(m_, std::move(terms));
}

BooleanPoly BooleanPoly::extended(int m) const {
    if (m < m_) throw std::invalid_argument("BooleanPoly: cannot drop variables");
    return BooleanPoly(m, monomials_);
}

std::string BooleanPoly::to_string() const {
    if (monomials_.empty()) return "0";
    std::string s;
    for (auto t : monomials_) {
        if (!s.empty()) s += " + ";
        s += monomial_name(t);
    }
    return s;
}

EvalVector evaluate(const BooleanPoly& f) {
    const int m = f.m();
    if (m > kMaxEvalVariables) throw std::invalid_argument("evaluate: too many variables");
    EvalVector v(std::size_t{1} << m);
    for (auto t : f.monomials()) v.flip(mask_to_point(t, m));
    moebius(v, m);
    return v;
}

BooleanPoly interpolate(const EvalVector& v, int m) {
    if (m > kMaxEvalVariables || v.size() != (std::size_t{1} << m))
        throw std::invalid_argument("interpolate: length is not 2^m");
    EvalVector c = v;
    moebius(c, m);
    std::vector<std::uint32_t> terms;
    for (auto p : c.support()) terms.push_back(point_to_mask(p, m));
    return BooleanPoly(m, std::move(terms));
}

mpz_class binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

mpz_class binomial_sum(int m, int r) {
    mpz_class s = 0;
    for (int i = 0; i <= std::min(r, m); ++i) s += binomial(m, i);
    return s;
}

std::string RMCode::to_csv() const {
    std::string out = "monomial";
    for (std::size_t j = 0; j < length(); ++j) out += ",c" + std::to_string(j);
    out += '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out += monomial_name(monomials[i]);
        for (std::size_t j = 0; j < length(); ++j) out += rows[i].get(j) ? ",1" : ",0";
        out += '\n';
    }
    return out;
}

RMCode rm_generator(int m, int r) {
    if (m < 0 || m > kMaxEvalVariables) throw std::invalid_argument("rm_generator: m outside [0,24]");
    RMCode code;
    code.m = m;
    code.r = r;
    if (r < 0) return code;
    for (int deg = 0; deg <= std::min(r, m); ++deg)
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask)
            if (std::popcount(mask) == deg) {
                code.monomials.push_back(mask);
                code.rows.push_back(evaluate(BooleanPoly(m, {mask})));
            }
    return code;
}

std::size_t gf2_rank(std::vector<BitVec> rows) {
    std::size_t rank = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto sup = rows[i].support();
        if (sup.empty()) continue;
        const std::size_t pivot = sup.front();
        ++rank;
        for (std::size_t j = i + 1; j < rows.size(); ++j)
            if (rows[j].get(pivot)) rows[j] ^= rows[i];
    }
    return rank;
}

int choose_rm_degree(int m, double rate) {
    if (!(rate > 0.0 && rate < 1.0)) throw std::invalid_argument("choose_rm_degree: rate outside (0,1)");
    const double v = m / 2.0 + std::sqrt(static_cast<double>(m)) / 2.0 * q_inverse(1.0 - rate);
    return std::clamp(static_cast<int>(std::floor(v)), 0, m);
}

// Achievability

int dinf_shift(int d) {
    if (d < 0) throw std::invalid_argument("dinf_shift: negative d");
    int z = 0;
    while ((1 << z) < d + 1) ++z;
    return z;
}

int zero_k_shift(int k) {
    if (k < 1) throw std::invalid_argument("zero_k_shift: k must be positive");
    return std::bit_width(static_cast<unsigned>(k + 1)) - 1;
}

DinfSubcode build_dinf_subcode(int m, int r, int d) {
    DinfSubcode c;
    c.m = m;
    c.r = r;
    c.d = d;
    c.z = dinf_shift(d);
    if (c.z > m) throw std::invalid_argument("build_dinf_subcode: 2^m points cannot host the constraint");
    if (r < c.z) {
        c.trivial = true;
        return c;
    }
    std::uint32_t tail = 0;
    for (int i = m - c.z + 1; i <= m; ++i) tail |= 1u << (i - 1);
    const int free_vars = m - c.z;
    for (int deg = 0; deg <= std::min(r - c.z, free_vars); ++deg)
        for (std::uint32_t t = 0; t < (1u << free_vars); ++t)
            if (std::popcount(t) == deg) c.rows.push_back(evaluate(BooleanPoly(m, {t | tail})));
    return c;
}

mpz_class dinf_subcode_dimension(int m, int r, int d) {
    const int z = dinf_shift(d);
    return binomial_sum(m - z, r - z);
}

mpq_class dinf_subcode_rate(int m, int r, int d) {
    mpz_class den = 1;
    den <<= m;
    mpq_class q(dinf_subcode_dimension(m, r, d), den);
    q.canonicalize();
    return q;
}

mpq_class dinf_subcode_rate_at(int m, double rate, int d) { return dinf_subcode_rate(m, choose_rm_degree(m, rate), d); }

double dinf_asymptotic_rate(double rate, int d) { return std::ldexp(rate, -dinf_shift(d)); }

ZeroKSubcode build_0k_subcode(int m, int r, int k) {
    ZeroKSubcode c;
    c.m = m;
    c.r = r;
    c.k = k;
    c.t = zero_k_shift(k);
    if (c.t > r) throw std::invalid_argument("build_0k_subcode: requires r >= t");
    if (c.t > m) throw std::invalid_argument("build_0k_subcode: requires m >= t");
    const int free_vars = m - c.t;
    c.exact_size = 1;
    for (std::uint32_t s = 1; s < (1u << c.t); ++s) {
        const std::uint32_t subset = s << free_vars;  // x_{m-t+1}..x_m
        const int deg = r - std::popcount(s);
        ZeroKFamily fam{subset, deg, binomial_sum(free_vars, deg)};
        mpz_class size = 1;
        size <<= fam.g_dimension.get_ui();
        c.exact_size += size - 1;
        c.families.push_back(std::move(fam));
    }
    const mpz_class smallest = binomial_sum(free_vars, r - c.t);
    mpz_class per = 1;
    per <<= smallest.get_ui();
    c.stated_lower_bound = per << c.t;
    c.corrected_lower_bound = ((mpz_class(1) << c.t) - 1) * (per - 1) + 1;
    return c;
}

EvalVector zero_k_codeword(int m, std::uint32_t subset, const BooleanPoly& g) {
    const BooleanPoly one = BooleanPoly::one(m);
    const BooleanPoly xs(m, {subset});
    return evaluate(one + (one + xs) * g.extended(m));
}

std::vector<BitVec> list_0k_subcode(const ZeroKSubcode& code, std::size_t max_size) {
    if (code.exact_size > max_size) throw std::invalid_argument("list_0k_subcode: code too large to list");
    const int m = code.m, free_vars = m - code.t;
    const std::size_t n = std::size_t{1} << m;
    BitVec all(n);
    for (std::size_t i = 0; i < n; ++i) all.set(i);

    std::vector<BitVec> out;
    for (const auto& fam : code.families) {
        // Eval(1 + x_S) masks Eval(g); the codeword is the complement of that product.
        const BitVec not_xs = all ^ evaluate(BooleanPoly(m, {fam.subset}));
        std::vector<BitVec> rows;
        for (auto mono : rm_generator(free_vars, fam.g_degree).monomials)
            rows.push_back(evaluate(BooleanPoly(m, {mono})) & not_xs);
        struct Collect {
            std::vector<BitVec> items;
            Collect& operator+=(const Collect& o) {
                items.insert(items.end(), o.items.begin(), o.items.end());
                return *this;
            }
        };
        auto got = sweep_codewords<Collect>(
            rows, n, [&](Collect& acc, const BitVec& c) { acc.items.push_back(all ^ c); }, 1);
        out.insert(out.end(), got.items.begin(), got.items.end());
    }
    if (code.families.empty()) out.push_back(all);
    auto key = [](const BitVec& a, const BitVec& b) {
        return std::lexicographical_compare(a.data(), a.data() + a.num_words(), b.data(), b.data() + b.num_words());
    };
    std::sort(out.begin(), out.end(), key);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double zero_k_asymptotic_rate(double rate, int k) { return std::ldexp(rate, -zero_k_shift(k)); }

// Converse

Decomposition decompose_by_last_variable(const BooleanPoly& f) {
    const int m = f.m();
    if (m < 1) throw std::invalid_argument("decompose_by_last_variable: needs m >= 1");
    const std::uint32_t last = 1u << (m - 1);
    std::vector<std::uint32_t> g, h;
    for (auto t : f.monomials()) (t & last ? h : g).push_back(t & ~last);
    return {BooleanPoly(m - 1, std::move(g)), BooleanPoly(m - 1, std::move(h))};
}

NecessaryConditionReport verify_necessary_condition(int m, int r) {
    const auto code = rm_generator(m, r);
    if (code.dimension() > kMaxExhaustiveDimension)
        throw std::invalid_argument("verify_necessary_condition: dimension above the exhaustive cap");
    // Each generator monomial feeds either g or h; track Eval(f), Eval(g), Eval(h) together.
    const std::size_t half = std::size_t{1} << (m - 1);
    std::vector<BitVec> g_rows, h_rows;
    for (auto mono : code.monomials) {
        const auto parts = decompose_by_last_variable(BooleanPoly(m, {mono}));
        g_rows.push_back(evaluate(parts.g));
        h_rows.push_back(evaluate(parts.h));
    }
    const auto spec = ConstraintSpec::dinf(1);
    NecessaryConditionReport rep;
    BitVec c(code.length()), g(half), h(half);
    auto check = [&] {
        ++rep.codewords;
        if (!satisfies(c, spec)) return;
        ++rep.constrained;
        if (!g.subset_of(h)) ++rep.violations;
    };
    check();
    const std::uint64_t total = std::uint64_t{1} << code.dimension();
    for (std::uint64_t i = 1; i < total; ++i) {
        const int row = std::countr_zero(i);
        c ^= code.rows[row];
        g ^= g_rows[row];
        h ^= h_rows[row];
        check();
    }
    return rep;
}

CoveringCount count_covering_codewords(int n, int r, const EvalVector& g) {
    const auto code = rm_generator(n, r);
    if (g.size() != code.length()) throw std::invalid_argument("count_covering_codewords: g has the wrong length");
    const auto sup = g.support();
    std::vector<BitVec> cols;
    for (auto j : sup) {
        BitVec col(code.dimension());
        for (std::size_t i = 0; i < code.dimension(); ++i)
            if (code.rows[i].get(j)) col.set(i);
        cols.push_back(std::move(col));
    }
    // h = 1 is always a solution, so the solution set is a coset of the kernel.
    CoveringCount out;
    out.count = mpz_class(1) << static_cast<mp_bitcnt_t>(code.dimension() - gf2_rank(std::move(cols)));
    const mpz_class dim = binomial_sum(n, r);
    if (sup.empty()) {
        out.u = -1;
        out.bound = mpz_class(1) << static_cast<mp_bitcnt_t>(dim.get_ui());
    } else {
        out.u = n - (static_cast<int>(std::bit_width(sup.size())) - 1);
        const mpz_class e = dim - binomial_sum(n - out.u, r);
        out.bound = mpz_class(1) << static_cast<mp_bitcnt_t>(e.get_ui());
    }
    out.within_bound = out.count <= out.bound;
    return out;
}

mpz_class count_covering_codewords_exhaustive(int n, int r, const EvalVector& g) {
    const auto code = rm_generator(n, r);
    if (code.dimension() > kMaxExhaustiveDimension)
        throw std::invalid_argument("count_covering_codewords_exhaustive: dimension above the exhaustive cap");
    struct Count {
        std::uint64_t n = 0;
        Count& operator+=(const Count& o) {
            n += o.n;
            return *this;
        }
    };
    const auto c = sweep_codewords<Count>(code.rows, code.length(),
                                          [&](Count& acc, const BitVec& h) { acc.n += g.subset_of(h); });
    return mpz_class(static_cast<unsigned long>(c.n));
}

namespace {

std::vector<mpz_class> exhaustive_weights(const RMCode& code) {
    struct Hist {
        std::vector<std::uint64_t> a;
        Hist& operator+=(const Hist& o) {
            if (a.size() < o.a.size()) a.resize(o.a.size());
            for (std::size_t i = 0; i < o.a.size(); ++i) a[i] += o.a[i];
            return *this;
        }
    };
    const std::size_t n = code.length();
    const auto h = sweep_codewords<Hist>(code.rows, n, [n](Hist& acc, const BitVec& c) {
        if (acc.a.empty()) acc.a.assign(n + 1, 0);
        ++acc.a[c.weight()];
    });
    std::vector<mpz_class> out(n + 1);
    for (std::size_t w = 0; w < h.a.size(); ++w) out[w] = static_cast<unsigned long>(h.a[w]);
    return out;
}

}  // namespace

std::vector<mpz_class> weight_distribution(int m, int r) {
    const std::size_t n = std::size_t{1} << m;
    const auto dim = binomial_sum(m, r);
    if (dim <= kMaxExhaustiveDimension) return exhaustive_weights(rm_generator(m, r));

    const int dual_r = m - r - 1;
    std::vector<mpz_class> dual(n + 1);
    if (dual_r < 0) {
        dual[0] = 1;
    } else {
        if (binomial_sum(m, dual_r) > kMaxExhaustiveDimension)
            throw std::invalid_argument("weight_distribution: neither the code nor its dual is small enough");
        dual = exhaustive_weights(rm_generator(m, dual_r));
    }
    // MacWilliams: A_w = |C_dual|^-1 sum_j B_j K_w(j), K_w(j) = sum_i (-1)^i C(j,i) C(n-j,w-i).
    mpz_class dual_size = 0;
    for (const auto& b : dual) dual_size += b;
    const int nn = static_cast<int>(n);
    std::vector<mpz_class> a(n + 1);
    for (int w = 0; w <= nn; ++w) {
        mpz_class acc = 0;
        for (int j = 0; j <= nn; ++j) {
            if (dual[j] == 0) continue;
            mpz_class k = 0;
            for (int i = 0; i <= std::min(j, w); ++i) {
                const mpz_class term = binomial(j, i) * binomial(nn - j, w - i);
                if (i & 1)
                    k -= term;
                else
                    k += term;
            }
            acc += dual[j] * k;
        }
        if (acc % dual_size != 0) throw std::logic_error("weight_distribution: MacWilliams sum not divisible");
        a[w] = acc / dual_size;
    }
    return a;
}

std::string weight_table_csv(const std::vector<mpz_class>& a) {
    std::string out = "weight,count\n";
    for (std::size_t w = 0; w < a.size(); ++w)
        if (a[w] != 0) out += std::to_string(w) + "," + a[w].get_str() + "\n";
    return out;
}

RankCheck shortened_rank_check(int m, int r, const std::vector<std::size_t>& columns, int u) {
    if (u < 0 || u > m) throw std::invalid_argument("shortened_rank_check: u outside [0,m]");
    if (columns.size() < (std::size_t{1} << (m - u)))
        throw std::invalid_argument("shortened_rank_check: fewer than 2^(m-u) columns");
    const auto code = rm_generator(m, r);
    std::vector<BitVec> cols;
    for (auto j : columns) {
        if (j >= code.length()) throw std::invalid_argument("shortened_rank_check: column index out of range");
        BitVec col(code.dimension());
        for (std::size_t i = 0; i < code.dimension(); ++i)
            if (code.rows[i].get(j)) col.set(i);
        cols.push_back(std::move(col));
    }
    RankCheck out;
    out.rank = gf2_rank(std::move(cols));
    out.threshold = binomial_sum(m - u, r);
    out.strict = out.threshold < static_cast<unsigned long>(out.rank);
    out.weak = out.threshold <= static_cast<unsigned long>(out.rank);
    return out;
}

double rm_upper_bound(double rate) {
    if (!(rate > 0.0 && rate < 1.0)) throw std::invalid_argument("rm_upper_bound: rate outside (0,1)");
    return 3.0 * rate / 8.0 - 0.5 * std::log1p(-rate);
}

double rm_upper_bound_capped(double rate) { return std::min(rm_upper_bound(rate), rate); }

double rstar() {
    auto phi = [](double x) { return -std::log1p(-x) - 1.25 * x; };
    double lo = 1e-6, hi = 0.99;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        (phi(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

mpz_class enumerate_largest_constrained_subcode(int m, int r, const ConstraintSpec& spec) {
    const auto code = rm_generator(m, r);
    if (code.dimension() > kMaxExhaustiveDimension)
        throw std::invalid_argument("enumerate_largest_constrained_subcode: dimension above the exhaustive cap");
    struct Count {
        std::uint64_t n = 0;
        Count& operator+=(const Count& o) {
            n += o.n;
            return *this;
        }
    };
    const auto c = sweep_codewords<Count>(code.rows, code.length(),
                                          [&](Count& acc, const BitVec& v) { acc.n += satisfies(v, spec); });
    return mpz_class(static_cast<unsigned long>(c.n));
}

}  // namespace rllfb
