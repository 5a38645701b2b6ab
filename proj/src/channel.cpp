#include "blinkid/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace blinkid {

namespace {

double q_func(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// adaptive Simpson, absolute tolerance, recursion depth capped
template <class F>
double simpson(const F& f, double a, double m, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double integrate(const F& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, a, m, b, fa, fm, fb, whole, tol, 48);
}

} // namespace

Clock::Clock(const ClockModel& model, Rng& rng) : model_(model) {
    if (model.period <= 0.0)
        throw std::invalid_argument("Clock: period must be positive");
    if (model.period_sd < 0.0)
        throw std::invalid_argument("Clock: period_sd must be >= 0");
    period_ = model.period;
    if (model.period_sd > 0.0)
        period_ = rng.normal(model.period, model.period_sd);
    if (period_ <= 0.0)
        throw std::runtime_error("Clock: realized period not positive");
    if (model.jitter != Jitter::none) jitter_seed_ = rng.u64();
}

void Clock::extend_jitter(int64_t k) {
    while (int64_t(jitter_.size()) <= k) {
        Rng r(derive_seed(jitter_seed_, jitter_.size()));
        double j = 0.0;
        if (model_.jitter == Jitter::gaussian)
            j = r.normal(0.0, model_.jitter_scale);
        else if (model_.jitter == Jitter::laplace)
            j = r.laplace(0.0, model_.jitter_scale);
        jitter_.push_back(j);
    }
}

double Clock::edge(int64_t k) {
    if (k < 0) throw std::invalid_argument("Clock::edge: k must be >= 0");
    double t = model_.start + double(k) * period_;
    if (model_.jitter != Jitter::none) {
        extend_jitter(k);
        t += jitter_[size_t(k)];
    }
    return t;
}

int64_t Clock::index_at(double t) {
    const int64_t guess = int64_t(std::floor((t - model_.start) / period_));
    if (model_.jitter == Jitter::none) return guess;
    if (guess < 0 && t < edge(0)) return guess;
    int64_t n = guess < 0 ? 0 : guess;
    while (n > 0 && edge(n) > t) --n;
    if (edge(n) > t) return -1;
    while (edge(n + 1) <= t) ++n;
    return n;
}

int64_t sample_index_map(Clock& tx, Clock& rx, int64_t k0) {
    return tx.index_at(rx.edge(k0));
}

double clock_delta(const Clock& rx, const Clock& tx) {
    return rx.period() / tx.period() - 1.0;
}

SeqStats dictionary_stats(const std::vector<BitSeq>& rows) {
    if (rows.empty())
        throw std::invalid_argument("dictionary_stats: empty dictionary");
    int64_t ones = 0, pairs = 0, total = 0;
    for (const BitSeq& r : rows) {
        const int L = r.length();
        total += L;
        ones += r.weight();
        for (int k = 0; k < L; ++k) pairs += r.bit(k) & r.bit(k + 1);
    }
    return {double(ones) / double(total), double(pairs) / double(total)};
}

double lambertian_gain(double k, double d, double phi, double phi_half) {
    if (d <= 0.0)
        throw std::invalid_argument("lambertian_gain: distance must be > 0");
    const double c = std::cos(phi_half);
    if (c <= 0.0 || c >= 1.0)
        throw std::invalid_argument("lambertian_gain: phi_half in (0, pi/2)");
    const double m = -std::log(2.0) / std::log(c);
    const double pi = std::acos(-1.0);
    return k * (m + 1.0) * std::pow(std::cos(phi), m) / (2.0 * pi * d * d);
}

double exposure_mixing_sample(double exposure, double period, Rng& rng) {
    if (period <= 0.0)
        throw std::invalid_argument("exposure_mixing_sample: period > 0");
    if (exposure <= 0.0) return 1.0;
    if (exposure >= period)
        throw std::invalid_argument("exposure_mixing_sample: exposure < period");
    return rng.uniform() < (period - exposure) / period ? 1.0 : rng.uniform();
}

namespace {

double noise_variance(const PhysicalParams& p, double seq_mean) {
    return p.th2 +
           (p.th1 + (p.ambient + p.gain * p.power * seq_mean) * p.shot) *
               p.exposure;
}

} // namespace

double snr(const PhysicalParams& p, const SeqStats& stats) {
    if (p.exposure <= 0.0 || p.period <= 0.0 || p.exposure >= p.period)
        throw std::invalid_argument("snr: need 0 < exposure < period");
    const double mix = p.exposure / (3.0 * p.period);
    const double sig = p.gain * p.gain * p.power * p.power * p.exposure *
                       p.exposure *
                       ((1.0 - mix) * stats.mean + mix * stats.pair_mean);
    const double amb = p.ambient * p.exposure;
    const double den = amb * amb + noise_variance(p, stats.mean);
    if (den <= 0.0)
        throw std::invalid_argument("snr: noise power must be positive");
    return sig / den;
}

double bit_error_probability(const PhysicalParams& p,
                             const std::vector<BitSeq>& rows) {
    if (rows.empty())
        throw std::invalid_argument("bit_error_probability: empty dictionary");
    if (p.exposure <= 0.0 || p.period <= 0.0 || p.exposure >= p.period)
        throw std::invalid_argument("bit_error_probability: 0 < exposure < period");

    // circular transition priors Pr(s_k = a, s_{k+1} = b)
    double prior[2][2] = {{0, 0}, {0, 0}};
    int64_t total = 0;
    for (const BitSeq& r : rows) {
        for (int k = 0; k < r.length(); ++k)
            prior[r.bit(k)][r.bit(k + 1)] += 1.0;
        total += r.length();
    }
    for (auto& row : prior)
        for (double& v : row) v /= double(total);

    const SeqStats stats = dictionary_stats(rows);
    const double sd = std::sqrt(noise_variance(p, stats.mean));
    const double mu0 = p.ambient * p.exposure;       // pixel mean, LED off
    const double swing = p.gain * p.power * p.exposure;
    const double p_whole = (p.period - p.exposure) / p.period;
    const double p_mix = p.exposure / p.period;

    // Pr(x on the wrong side of eta_b | levels), error defined against s_k
    auto err = [&](int sk, double level) {
        const double z = (p.threshold - mu0 - level) / sd;
        return sk == 0 ? q_func(z) : 1.0 - q_func(z);
    };
    auto cond = [&](int sk, int sk1) {
        const double whole = err(sk, swing * sk);
        if (sk == sk1) return whole;  // no transition, mixing irrelevant
        auto f = [&](double a) {
            return err(sk, swing * (a * sk + (1.0 - a) * sk1));
        };
        return p_whole * whole + p_mix * integrate(f, 0.0, 1.0, 1e-9);
    };

    double pb = 0.0;
    for (int sk = 0; sk < 2; ++sk)
        for (int sk1 = 0; sk1 < 2; ++sk1)
            if (prior[sk][sk1] > 0.0) pb += prior[sk][sk1] * cond(sk, sk1);
    return std::min(std::max(pb, 0.0), 1.0);
}

TransmitResult transmit(const BitSeq& row, int64_t n,
                        const ChannelParams& channel, const ClockModel& txm,
                        const ClockModel& rxm, int phase, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("transmit: n must be >= 1");
    const int L = row.length();

    Rng tx_rng(derive_seed(seed, 0));
    Rng rx_rng(derive_seed(seed, 1));
    Rng noise(derive_seed(seed, 2));
    Clock tx(txm, tx_rng);
    Clock rx(rxm, rx_rng);

    const PhysicalParams& ph = channel.phys;
    const bool physical = channel.mode == ChannelParams::Mode::physical;
    double sd = 0.0, mu0 = 0.0, swing = 0.0;
    if (physical) {
        const double mean = double(row.weight()) / double(L);
        sd = std::sqrt(noise_variance(ph, mean));
        mu0 = ph.ambient * ph.exposure;
        swing = ph.gain * ph.power * ph.exposure;
    } else if (channel.pb < 0.0 || channel.pb >= 1.0) {
        throw std::invalid_argument("transmit: pb must be in [0, 1)");
    }

    TransmitResult out;
    out.bits.resize(size_t(n));
    out.drift.delta = clock_delta(rx, tx);
    int64_t prev_kt = -1;
    bool have_prev = false;

    for (int64_t k = 0; k < n; ++k) {
        const int64_t kt = sample_index_map(tx, rx, k);
        if (kt < 0) {
            out.pre_birth++;
            out.bits[size_t(k)] = 0;
            continue;
        }
        if (have_prev) {
            for (int64_t step = prev_kt + 1; step < kt; ++step)
                out.drift.slips.push_back({k, +1});
            if (kt == prev_kt) out.drift.slips.push_back({k, -1});
        }
        prev_kt = kt;
        have_prev = true;

        const int s0 = row.bit(int((kt + phase) % L));
        uint8_t y;
        if (!physical) {
            y = uint8_t(s0 ^ (noise.uniform() < channel.pb ? 1 : 0));
        } else {
            const int s1 = row.bit(int((kt + 1 + phase) % L));
            const double a = exposure_mixing_sample(ph.exposure, ph.period, noise);
            const double level = swing * (a * s0 + (1.0 - a) * s1);
            const double pixel = noise.normal(mu0 + level, sd);
            y = pixel > ph.threshold ? 1 : 0;
        }
        out.bits[size_t(k)] = y;
    }
    return out;
}

} // namespace blinkid
