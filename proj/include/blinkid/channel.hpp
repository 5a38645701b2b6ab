#pragma once

#include <cstdint>
#include <vector>

#include "blinkid/codebook.hpp"
#include "blinkid/rng.hpp"
#include "blinkid/seq.hpp"

namespace blinkid {

enum class Jitter { none, gaussian, laplace };

struct ClockModel {
    double period = 1.0;     // nominal T
    double period_sd = 0.0;  // sigma_T, one draw per realized clock
    Jitter jitter = Jitter::none;
    double jitter_scale = 0.0;  // sd (gaussian) or scale b (laplace)
    double start = 0.0;         // time of edge 0
};

// One realized clock: a fixed instance period plus optional per-edge jitter.
class Clock {
public:
    Clock(const ClockModel& model, Rng& rng);

    double period() const { return period_; }
    double start() const { return model_.start; }

    // Time of the k-th sampling edge, k >= 0.
    double edge(int64_t k);

    // Largest n with edge(n) <= t; negative when t precedes edge 0.
    int64_t index_at(double t);

private:
    ClockModel model_;
    double period_ = 0.0;
    uint64_t jitter_seed_ = 0;
    std::vector<double> jitter_;  // per-edge displacement, grown on demand
    void extend_jitter(int64_t k);
};

// Transmitter index observed by receiver edge k0 (Eq.-10 style definition:
// the latest transmitter edge not after the receiver edge).
int64_t sample_index_map(Clock& tx, Clock& rx, int64_t k0);

struct Slip {
    int64_t rx_index;  // receiver sample where the index map misbehaved
    int kind;          // +1 transmitter index skipped, -1 repeated
};

struct DriftTrace {
    double delta = 0.0;  // realized T_rx / T_tx - 1
    std::vector<Slip> slips;
};

// Relative period offset between two realized clocks.
double clock_delta(const Clock& rx, const Clock& tx);

struct PhysicalParams {
    double power = 1.0;      // P, emitter optical power
    double gain = 1.0;       // h, channel DC gain
    double exposure = 0.1;   // tau_e, camera exposure time
    double period = 1.0;     // T, sampling period
    double ambient = 0.0;    // d_n, background irradiance level
    double th1 = 0.0;        // sigma^2_th,1 (exposure-proportional thermal)
    double th2 = 0.0;        // sigma^2_th,2 (constant thermal)
    double shot = 0.0;       // alpha, shot-noise factor
    double threshold = 0.5;  // eta_b, pixel decision threshold
};

struct ChannelParams {
    enum class Mode { bsc, physical };
    Mode mode = Mode::bsc;
    double pb = 0.0;  // bsc flip probability
    PhysicalParams phys;
};

// Dictionary-wide stationary statistics: E[s] and E[s[k] s[k+1]] over
// uniformly chosen rows and circular positions.
struct SeqStats {
    double mean = 0.0;
    double pair_mean = 0.0;
};
SeqStats dictionary_stats(const std::vector<BitSeq>& rows);

// Lambertian LED channel DC gain at distance d and viewing angle phi,
// half-power semi-angle phi_half (radians), aperture-dependent constant k.
double lambertian_gain(double k, double d, double phi, double phi_half);

// Exposure mixing coefficient: 1 with probability (T - tau_e)/T, otherwise
// uniform on [0, 1).
double exposure_mixing_sample(double exposure, double period, Rng& rng);

// Electrical SNR of the sampled pixel value for the physical channel.
double snr(const PhysicalParams& p, const SeqStats& stats);

// Bit error probability of the thresholded pixel: four (s_k, s_k+1)
// transition cases weighted by their circular frequencies in `rows`,
// exposure mixing integrated by adaptive quadrature (abs tol 1e-9).
double bit_error_probability(const PhysicalParams& p,
                             const std::vector<BitSeq>& rows);

struct TransmitResult {
    std::vector<uint8_t> bits;  // receiver samples, one per rx edge
    DriftTrace drift;
    int64_t pre_birth = 0;  // leading samples taken before the tx stream began
};

// Streams `row` (rotated by `phase`) through the clock pair and channel for
// n receiver samples. Pre-birth samples are emitted as 0.
TransmitResult transmit(const BitSeq& row, int64_t n,
                        const ChannelParams& channel, const ClockModel& tx,
                        const ClockModel& rx, int phase, uint64_t seed);

} // namespace blinkid
