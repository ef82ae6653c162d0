#include "rllfb/feedback_scheme.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include "json.hpp"

#include "rllfb/constraint.hpp"

namespace rllfb {

namespace {

constexpr unsigned kSplitBits = 53;
constexpr unsigned kMinWidthBits = 64;

mpz_class pow2(unsigned e) {
    mpz_class r = 1;
    r <<= e;
    return r;
}

std::size_t bit_length(const mpz_class& v) { return v == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2); }

}  // namespace

char to_char(ChannelOutput y) {
    switch (y) {
        case ChannelOutput::Zero: return '0';
        case ChannelOutput::Erasure: return '?';
        case ChannelOutput::One: return '1';
    }
    return '!';
}

DyadicPoint DyadicPoint::bin_midpoint(const std::vector<std::uint8_t>& bits) {
    DyadicPoint p;
    p.numerator = 0;
    for (auto b : bits) {
        p.numerator <<= 1;
        if (b) p.numerator += 1;
    }
    p.numerator = p.numerator * 2 + 1;
    p.exponent = static_cast<unsigned>(bits.size()) + 1;
    return p;
}

CodingSessionState::CodingSessionState(int d, const SplitVector& delta, unsigned initial_scale,
                                       ShortfallPolicy policy)
    : d_(d), scale_(std::max(initial_scale, 1u)), policy_(policy) {
    if (d < 0) throw std::invalid_argument("CodingSessionState: negative d");
    if (static_cast<int>(delta.size()) != d + 1)
        throw std::invalid_argument("CodingSessionState: split vector length must be d+1");
    const std::uint64_t one = std::uint64_t{1} << kSplitBits;
    split_.resize(d + 1);
    std::uint64_t total = 0;
    for (int i = 0; i <= d; ++i) {
        split_[i] = static_cast<std::uint64_t>(std::llround(std::ldexp(delta[i], kSplitBits)));
        total += split_[i];
    }
    while (total > one) {
        auto it = std::max_element(split_.begin(), split_.end());
        const std::uint64_t cut = std::min(*it, total - one);
        *it -= cut;
        total -= cut;
    }
    segments_.push_back({0, pow2(scale_), RegionSegment::kNever, RegionSegment::kRemainder});
    begin_round();
}

int CodingSessionState::cooldown(const RegionSegment& seg) const {
    if (seg.last_one == RegionSegment::kNever) return 0;
    return static_cast<int>(std::max<std::int64_t>(0, seg.last_one + d_ + 1 - slot_));
}

void CodingSessionState::rescale() {
    mpz_class width = 0;
    for (const auto& s : segments_) width += s.hi - s.lo;
    const std::size_t len = bit_length(width);
    if (len > kMinWidthBits) return;
    const unsigned shift = static_cast<unsigned>(kMinWidthBits + 1 - len);
    for (auto& s : segments_) {
        s.lo <<= shift;
        s.hi <<= shift;
    }
    scale_ += shift;
}

void CodingSessionState::normalize_segments() {
    std::vector<RegionSegment> merged;
    merged.reserve(segments_.size());
    for (auto& s : segments_) {
        if (cooldown(s) == 0) s.last_one = RegionSegment::kNever;
        s.cell = RegionSegment::kRemainder;
        if (!merged.empty() && merged.back().hi == s.lo && merged.back().last_one == s.last_one)
            merged.back().hi = s.hi;
        else
            merged.push_back(std::move(s));
    }
    segments_ = std::move(merged);
}

bool CodingSessionState::start_round() {
    rescale();
    normalize_segments();

    mpz_class width = 0;
    std::vector<mpz_class> mass_by_cooldown(d_ + 1);
    for (const auto& s : segments_) {
        width += s.hi - s.lo;
        mass_by_cooldown[cooldown(s)] += s.hi - s.lo;
    }
    std::vector<mpz_class> size(d_ + 1);
    for (int j = 0; j <= d_; ++j) {
        size[j] = mpz_class(static_cast<unsigned long>(split_[j])) * width;
        size[j] >>= kSplitBits;
    }

    // Cell A_j accepts cooldowns <= j; the eligible sets are nested, so cumulative mass decides.
    mpz_class need = 0, have = 0;
    bool feasible = true;
    for (int j = 0; j <= d_; ++j) {
        need += size[j];
        have += mass_by_cooldown[j];
        if (need > have) feasible = false;
    }
    if (!feasible) {
        if (policy_ == ShortfallPolicy::Idle) {
            round_active_ = false;
            return false;
        }
        // Each cell takes what eligible mass is left, up to its target.
        mpz_class spare = 0;
        bool any = false;
        for (int j = 0; j <= d_; ++j) {
            spare += mass_by_cooldown[j];
            if (size[j] > spare) size[j] = spare;
            spare -= size[j];
            any = any || size[j] > 0;
        }
        if (!any) {
            round_active_ = false;
            return false;
        }
        ++short_rounds_;
    }

    struct Piece {
        RegionSegment seg;
        int cooldown;
    };
    std::vector<Piece> pool;
    pool.reserve(segments_.size() + d_ + 1);
    for (auto& s : segments_) {
        const int c = cooldown(s);
        pool.push_back({std::move(s), c});
    }
    // Fresh points fill the cells first; cooled-down points go to later cells or the remainder.
    std::stable_sort(pool.begin(), pool.end(),
                     [](const Piece& a, const Piece& b) { return a.cooldown < b.cooldown; });
    for (int j = 0; j <= d_; ++j) {
        mpz_class remaining = size[j];
        for (std::size_t p = 0; p < pool.size() && remaining > 0; ++p) {
            auto& piece = pool[p];
            if (piece.seg.cell != RegionSegment::kRemainder || piece.cooldown > j) continue;
            const mpz_class len = piece.seg.hi - piece.seg.lo;
            if (len <= remaining) {
                piece.seg.cell = j;
                remaining -= len;
            } else {
                Piece rest{{piece.seg.lo + remaining, piece.seg.hi, piece.seg.last_one,
                            RegionSegment::kRemainder},
                           piece.cooldown};
                piece.seg.hi = piece.seg.lo + remaining;
                piece.seg.cell = j;
                remaining = 0;
                pool.insert(pool.begin() + static_cast<std::ptrdiff_t>(p) + 1, std::move(rest));
            }
        }
        if (remaining != 0) throw std::logic_error("start_round: cell assignment failed");
    }

    segments_.clear();
    for (auto& p : pool) segments_.push_back(std::move(p.seg));
    std::sort(segments_.begin(), segments_.end(),
              [](const RegionSegment& a, const RegionSegment& b) { return a.lo < b.lo; });
    attempt_ = 0;
    phase_ = CyclePhase::FirstCycle;
    round_active_ = true;
    return true;
}

void CodingSessionState::begin_round() {
    if (!start_round()) round_active_ = false;
}

const RegionSegment* CodingSessionState::locate(const DyadicPoint& point) const {
    // Compare point = num / 2^e against bounds b / 2^scale at a common denominator.
    const unsigned e = point.exponent;
    mpz_class num = point.numerator;
    unsigned seg_shift = 0;
    if (e <= scale_)
        num <<= (scale_ - e);
    else
        seg_shift = e - scale_;
    auto shifted = [&](const mpz_class& b) {
        if (seg_shift == 0) return b;
        mpz_class r = b;
        r <<= seg_shift;
        return r;
    };
    auto it = std::upper_bound(segments_.begin(), segments_.end(), num,
                               [&](const mpz_class& v, const RegionSegment& s) { return v < shifted(s.lo); });
    if (it == segments_.begin()) return nullptr;
    --it;
    return num < shifted(it->hi) ? &*it : nullptr;
}

bool CodingSessionState::contains(const DyadicPoint& point) const { return locate(point) != nullptr; }

int CodingSessionState::encoder_step(const DyadicPoint& point) const {
    if (forced_ > 0 || !round_active_) return 0;
    const RegionSegment* seg = locate(point);
    if (!seg) throw std::logic_error("encoder_step: message point outside the decoder's region");
    return seg->cell == attempt_ ? 1 : 0;
}

void CodingSessionState::decoder_step(ChannelOutput y) {
    if (forced_ > 0 || !round_active_) {
        if (y == ChannelOutput::One) throw std::logic_error("decoder_step: 1 received in a forced-zero slot");
        if (forced_ > 0)
            --forced_;
        else
            ++idle_slots_;
        ++slot_;
        if (forced_ == 0) begin_round();
        return;
    }

    const int a = attempt_;
    switch (y) {
        case ChannelOutput::Erasure:
            for (auto& s : segments_)
                if (s.cell == a) s.last_one = slot_;
            if (++attempt_ > d_) {
                attempt_ = 0;
                phase_ = CyclePhase::Repeat;
            }
            ++slot_;
            return;
        case ChannelOutput::One: {
            std::erase_if(segments_, [a](const RegionSegment& s) { return s.cell != a; });
            if (segments_.empty()) throw std::logic_error("decoder_step: region became empty");
            for (auto& s : segments_) s.last_one = slot_;
            round_active_ = false;
            forced_ = d_;
            ++slot_;
            if (forced_ == 0) begin_round();
            return;
        }
        case ChannelOutput::Zero:
            std::erase_if(segments_, [a](const RegionSegment& s) { return s.cell == a; });
            if (segments_.empty()) throw std::logic_error("decoder_step: region became empty");
            round_active_ = false;
            ++slot_;
            begin_round();
            return;
    }
}

bool CodingSessionState::resolved(unsigned bits, mpz_class* bin) const {
    if (segments_.empty() || scale_ < bits) return false;
    const unsigned shift = scale_ - bits;
    mpz_class index = segments_.front().lo >> shift;
    mpz_class end = index + 1;
    end <<= shift;
    if (segments_.back().hi > end) return false;
    if (bin) *bin = index;
    return true;
}

mpq_class CodingSessionState::region_measure() const {
    mpz_class w = 0;
    for (const auto& s : segments_) w += s.hi - s.lo;
    mpq_class q(w, pow2(scale_));
    q.canonicalize();
    return q;
}

mpq_class CodingSessionState::cell_measure(int cell) const {
    mpz_class w = 0;
    for (const auto& s : segments_)
        if (s.cell == cell) w += s.hi - s.lo;
    mpq_class q(w, pow2(scale_));
    q.canonicalize();
    return q;
}

std::string CodingSessionState::serialize() const {
    std::ostringstream os;
    os << "d=" << d_ << ";scale=" << scale_ << ";slot=" << slot_ << ";attempt=" << attempt_
       << ";phase=" << (phase_ == CyclePhase::FirstCycle ? 'F' : 'R') << ";forced=" << forced_
       << ";active=" << round_active_ << ";idle=" << idle_slots_ << ";short=" << short_rounds_ << ";segments=";
    for (const auto& s : segments_) {
        os << '[' << s.lo.get_str(16) << ',' << s.hi.get_str(16) << ',';
        if (s.last_one == RegionSegment::kNever)
            os << '-';
        else
            os << s.last_one;
        os << ',' << s.cell << ']';
    }
    return os.str();
}

ErasureChannel::ErasureChannel(double eps, std::uint64_t seed) : eps_(eps), rng_(seed) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("ErasureChannel: eps outside [0,1]");
}

ChannelOutput ErasureChannel::transmit(int x) {
    const double u = std::ldexp(static_cast<double>(rng_() >> 11), -53);
    if (u < eps_) return ChannelOutput::Erasure;
    return x ? ChannelOutput::One : ChannelOutput::Zero;
}

std::string SimulationReport::to_json() const {
    nlohmann::ordered_json j;
    j["channel_uses"] = channel_uses;
    j["resolved_bits"] = resolved_bits;
    j["empirical_rate"] = empirical_rate;
    j["analytic_rate"] = analytic_rate;
    j["errors"] = errors;
    j["constraint_ok"] = constraint_ok;
    j["seed"] = seed;
    return j.dump(2);
}

SimulationReport simulate(const std::vector<std::uint8_t>& message_bits, double eps,
                          const SplitVector& delta, int d, std::uint64_t seed,
                          const SimulationOptions& options) {
    SimulationReport report;
    report.seed = seed;
    report.analytic_rate = analytic_rate(delta, eps, d);

    const auto bits = static_cast<unsigned>(message_bits.size());
    const DyadicPoint point = DyadicPoint::bin_midpoint(message_bits);
    const unsigned scale = std::max(kMinWidthBits, bits + 1);

    CodingSessionState encoder(d, delta, scale, options.shortfall);
    std::optional<CodingSessionState> separate_decoder;
    if (options.check_synchrony) separate_decoder.emplace(d, delta, scale, options.shortfall);
    CodingSessionState& decoder = separate_decoder ? *separate_decoder : encoder;

    const ConstraintAutomaton automaton(ConstraintSpec::dinf(d));
    int state = automaton.initial_state();
    ErasureChannel channel(eps, seed);
    const mpz_class message_index = point.numerator >> 1;

    for (;;) {
        mpz_class decoded;
        if (decoder.resolved(bits, &decoded)) {
            report.completed = true;
            report.resolved_bits = bits;
            if (decoded != message_index) ++report.errors;
            break;
        }
        if (options.max_channel_uses && report.channel_uses >= options.max_channel_uses) break;

        const int x = encoder.encoder_step(point);
        const int next = automaton.next(state, x);
        if (next < 0) {
            report.constraint_ok = false;
            state = x ? 0 : std::min(state + 1, d);
        } else {
            state = next;
        }
        const ChannelOutput y = channel.transmit(x);
        encoder.decoder_step(y);
        if (separate_decoder) {
            decoder.decoder_step(y);
            if (encoder.serialize() != decoder.serialize()) ++report.synchrony_failures;
        }
        if (options.check_containment && !decoder.contains(point)) ++report.containment_failures;
        if (options.record_transcript) report.transcript.push_back({x, y});
        ++report.channel_uses;
    }
    report.errors += report.containment_failures;
    report.idle_slots = decoder.idle_slots();
    report.short_rounds = decoder.short_rounds();
    report.empirical_rate =
        report.channel_uses ? static_cast<double>(report.resolved_bits) / report.channel_uses : 0.0;
    return report;
}

double analytic_rate(const SplitVector& delta, double eps, int d) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("analytic_rate: eps outside [0,1]");
    if (static_cast<int>(delta.size()) != d + 1)
        throw std::invalid_argument("analytic_rate: split vector length must be d+1");
    // Transient states: attempts 0..d, then forced zeros 1..d. Leaving them ends the cycle.
    const int n = 2 * d + 1;
    auto forced = [d](int j) { return d + j; };  // j = 1..d
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd reward = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= d; ++i) {
        if (i < d) t(i, i + 1) += eps;
        if (d > 0) t(i, forced(1)) += (1.0 - eps) * delta[i];
        reward(i) = (1.0 - eps) * binary_entropy(delta[i]);
    }
    for (int j = 1; j < d; ++j) t(forced(j), forced(j + 1)) = 1.0;

    const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - t;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    const Eigen::VectorXd info = lu.solve(reward);
    const Eigen::VectorXd duration = lu.solve(Eigen::VectorXd::Ones(n));
    return info(0) / duration(0);
}

RateMeasurement measure_rate(const SplitVector& delta, double eps, int d, std::uint64_t channel_uses,
                             std::uint64_t seed, std::size_t session_bits, ShortfallPolicy shortfall) {
    if (session_bits == 0) throw std::invalid_argument("measure_rate: empty sessions");
    if (eps >= 1.0) throw std::invalid_argument("measure_rate: eps = 1 never resolves a bit");
    std::mt19937_64 master(seed);
    SimulationOptions opts;
    opts.shortfall = shortfall;
    RateMeasurement out;
    std::vector<std::uint8_t> bits(session_bits);
    while (out.channel_uses < channel_uses) {
        for (auto& b : bits) b = static_cast<std::uint8_t>(master() >> 63);
        const auto r = simulate(bits, eps, delta, d, master(), opts);
        ++out.sessions;
        out.channel_uses += r.channel_uses;
        out.resolved_bits += r.resolved_bits;
        out.errors += r.errors;
        out.constraint_ok = out.constraint_ok && r.constraint_ok;
    }
    out.empirical_rate = static_cast<double>(out.resolved_bits) / static_cast<double>(out.channel_uses);
    return out;
}

}  // namespace rllfb
