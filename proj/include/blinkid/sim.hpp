#pragma once

#include <cstdint>
#include <vector>

#include "blinkid/channel.hpp"
#include "blinkid/classifier.hpp"
#include "blinkid/codebook.hpp"

namespace blinkid {

// Distribution of the identification time T_d (in sampling periods) for an
// i.i.d. bit-error stream. Exact renewal recursion for Hm in {1, 2}; for
// Hm = 3 only Pr(T_d = L) has a closed form and the tail is unavailable.
struct IdTimeDistribution {
    int L = 0;
    int min_hamming = 1;
    double pb = 0.0;
    int n_max = 0;
    std::vector<double> p;  // p[i] = Pr(T_d = L + i)
    bool tail_analytic = true;
    double expected = 0.0;  // truncated at n_max (Hm <= 2 only)
    double residual = 0.0;  // probability mass beyond n_max
};

IdTimeDistribution id_time_analytic(int L, double pb, int min_hamming,
                                    int n_max = 0 /* defaults to 20 L */);

// Monte-Carlo of the same error-process model (first window with at most
// floor((Hm-1)/2) erroneous samples), driven through the bsc channel with a
// genie-aligned reference. Returns the histogram of T_d over `trials`.
std::vector<int64_t> id_time_mc(int L, double pb, int min_hamming,
                                int64_t trials, uint64_t seed, int n_max = 0,
                                int threads = 1);

struct SimReport {
    // configuration echo
    int L = 0;
    int min_hamming = 1;
    double pb = 0.0;
    double delta = 0.0;
    int64_t trials = 0;
    uint64_t seed = 0;
    double eta_d = 1.0;
    // outcomes
    double e_td = 0.0;   // mean samples until the best match is the true row
    double se_td = 0.0;
    double p_ce = 0.0;   // fraction of trials whose first-window best match
                         // is the wrong row
    double se_pce = 0.0;
    int64_t decided = 0;
    int64_t undecided = 0;  // censored at max_samples; expected 0
    std::vector<int64_t> td_hist;  // td_hist[i] = trials with T_d = L + i
};

// Full-pipeline experiment: per trial draw a row and phase uniformly and
// stream through the drift/noise channel into the classifier, which emits
// the best-correlation row every sample. T_d is the sample count until that
// output first equals the truth (earlier wrong outputs are transient); the
// classification error indicator is the output at the first full window.
// delta is the receiver-vs-transmitter period offset.
SimReport run_id_experiment(const Dictionary& dict,
                            const ChannelParams& channel, double delta,
                            int64_t trials, uint64_t seed,
                            double eta_d = -1.0 /* default threshold */,
                            int threads = 1,
                            int64_t max_samples = 0 /* 1000 + 400 L */);

// Largest usable sequence length for a group of j mutually identifying
// units with group-wide success probability p_g.
double capacity_l_max(int j, double p_g, double t_over_sigma);

struct CapacityParams {
    int j_min = 2;
    int j_max = 60;
    double p_g = 0.999;
    double t_over_sigma = 1e4;
    int seqs_per_uav = 1;
    double duty = 0.3;  // dictionary family used for the L_min curves
    int n1 = 6;
    int n0 = 6;
    int restarts = 10000;
    uint64_t seed = 1;
    int l_cap = 18;  // largest length searched for the L_min curves
    int threads = 1;
};

struct CapacityRow {
    int j = 0;
    double l_max = 0.0;
    int l_min_h1 = -1;  // -1: not reachable within l_cap
    int l_min_h3 = -1;
};

struct CapacityCurve {
    CapacityParams params;
    std::vector<CapacityRow> rows;
    int crossing_h1 = -1;  // smallest j with l_min_h1 > l_max
    int crossing_h3 = -1;
};

CapacityCurve capacity_curve(const CapacityParams& params);

} // namespace blinkid
