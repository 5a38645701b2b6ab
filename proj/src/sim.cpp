#include "blinkid/sim.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "blinkid/parallel.hpp"
#include "blinkid/rng.hpp"

namespace blinkid {

namespace {

double binom_d(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

void check_id_time_args(int L, double pb, int min_hamming) {
    if (L < 1 || L > BitSeq::kMaxLen)
        throw std::invalid_argument("id_time: L out of range");
    if (pb < 0.0 || pb >= 1.0)
        throw std::invalid_argument("id_time: pb must be in [0, 1)");
    if (min_hamming < 1)
        throw std::invalid_argument("id_time: Hm must be >= 1");
}

} // namespace

IdTimeDistribution id_time_analytic(int L, double pb, int min_hamming,
                                    int n_max) {
    check_id_time_args(L, pb, min_hamming);
    if (n_max == 0) n_max = 20 * L;
    if (n_max < L) throw std::invalid_argument("id_time: n_max must be >= L");

    IdTimeDistribution d;
    d.L = L;
    d.min_hamming = min_hamming;
    d.pb = pb;
    const int tol = (min_hamming - 1) / 2;  // absorbable window errors

    if (tol > 0) {
        // only the head of the distribution has a closed form
        d.n_max = L;
        d.tail_analytic = false;
        double head = 0.0;
        for (int e = 0; e <= tol && e <= L; ++e)
            head += binom_d(L, e) * std::pow(pb, e) * std::pow(1.0 - pb, L - e);
        d.p.assign(1, head);
        d.expected = 0.0;
        d.residual = 1.0 - head;
        return d;
    }

    // renewal recursion: T_d = n needs an error-free window ending at n, an
    // error at n - L (for n > L), and no success at any earlier time; the
    // earlier-success probability only involves times up to n - L - 1
    d.n_max = n_max;
    d.p.assign(size_t(n_max - L) + 1, 0.0);
    const double clean = std::pow(1.0 - pb, L);
    std::vector<double> cum(d.p.size(), 0.0);  // cum[i] = sum of p[0..i]
    double mean = 0.0;
    for (int n = L; n <= n_max; ++n) {
        const size_t i = size_t(n - L);
        double q;
        if (n == L) {
            q = clean;
        } else {
            const int m = n - 2 * L - 1;  // index of Q(n - L - 1)
            const double prior = m >= 0 ? cum[size_t(m)] : 0.0;
            q = pb * clean * (1.0 - prior);
        }
        d.p[i] = q;
        cum[i] = (i > 0 ? cum[i - 1] : 0.0) + q;
        mean += double(n) * q;
    }
    d.expected = mean;
    d.residual = 1.0 - cum.back();
    return d;
}

std::vector<int64_t> id_time_mc(int L, double pb, int min_hamming,
                                int64_t trials, uint64_t seed, int n_max,
                                int threads) {
    check_id_time_args(L, pb, min_hamming);
    if (trials < 1) throw std::invalid_argument("id_time_mc: trials >= 1");
    if (n_max == 0) n_max = 20 * L;
    if (n_max < L) throw std::invalid_argument("id_time_mc: n_max >= L");

    const int tol = (min_hamming - 1) / 2;
    const size_t buckets = size_t(n_max - L) + 2;  // last bucket: censored
    const uint64_t mask = L == 64 ? ~0ull : ((1ull << L) - 1ull);

    const int chunks = int(std::max<int64_t>(1, std::min<int64_t>(threads, trials)));
    std::vector<std::vector<int64_t>> partial(
        size_t(chunks), std::vector<int64_t>(buckets, 0));

    parallel_chunks(trials, chunks, [&](int chunk, int64_t lo, int64_t hi) {
        std::vector<int64_t>& hist = partial[size_t(chunk)];
        for (int64_t t = lo; t < hi; ++t) {
            Rng rng(derive_seed(seed, uint64_t(t)));
            uint64_t errs = 0;
            int td = -1;
            for (int n = 1; n <= n_max; ++n) {
                errs = ((errs << 1) | (rng.uniform() < pb ? 1ull : 0ull)) & mask;
                if (n >= L && std::popcount(errs) <= tol) {
                    td = n;
                    break;
                }
            }
            hist[td < 0 ? buckets - 1 : size_t(td - L)]++;
        }
    });

    std::vector<int64_t> hist(buckets, 0);
    for (const auto& part : partial)
        for (size_t i = 0; i < buckets; ++i) hist[i] += part[i];
    return hist;
}

SimReport run_id_experiment(const Dictionary& dict,
                            const ChannelParams& channel, double delta,
                            int64_t trials, uint64_t seed, double eta_d,
                            int threads, int64_t max_samples) {
    if (dict.rows.empty())
        throw std::invalid_argument("run_id_experiment: empty dictionary");
    if (trials < 1)
        throw std::invalid_argument("run_id_experiment: trials >= 1");
    if (delta <= -1.0)
        throw std::invalid_argument("run_id_experiment: delta > -1");
    const int L = dict.params.L;
    const size_t m = dict.rows.size();
    if (eta_d < 0.0) eta_d = default_threshold(L, dict.params.min_hamming);
    if (max_samples == 0) max_samples = 1000 + 400 * int64_t(L);
    if (max_samples < L)
        throw std::invalid_argument("run_id_experiment: max_samples >= L");

    const bool physical = channel.mode == ChannelParams::Mode::physical;
    if (!physical && (channel.pb < 0.0 || channel.pb >= 1.0))
        throw std::invalid_argument("run_id_experiment: pb must be in [0, 1)");

    const ClockModel txm{1.0, 0.0, Jitter::none, 0.0, 0.0};

    struct Partial {
        int64_t sum_td = 0, sum_td2 = 0;
        int64_t decided = 0, wrong = 0, undecided = 0;
        std::vector<int64_t> hist;
    };
    const size_t buckets = size_t(max_samples - L) + 1;
    const int chunks = int(std::max<int64_t>(1, std::min<int64_t>(threads, trials)));
    std::vector<Partial> partial(static_cast<size_t>(chunks));
    for (auto& part : partial) part.hist.assign(buckets, 0);

    parallel_chunks(trials, chunks, [&](int chunk, int64_t lo, int64_t hi) {
        Partial& part = partial[size_t(chunk)];
        Classifier clf(dict.rows, eta_d);
        const PhysicalParams& ph = channel.phys;
        for (int64_t t = lo; t < hi; ++t) {
            Rng rng(derive_seed(seed, uint64_t(t)));
            const size_t row_idx = size_t(rng.below(m));
            const BitSeq& row = dict.rows[row_idx];
            const int phase = int(rng.below(uint64_t(L)));
            const double offset = rng.uniform();

            ClockModel rxm{1.0 + delta, 0.0, Jitter::none, 0.0, offset};
            Clock tx(txm, rng);  // deterministic models, no draws consumed
            Clock rx(rxm, rng);

            double sd = 0.0, mu0 = 0.0, swing = 0.0;
            if (physical) {
                const double mean = double(row.weight()) / double(L);
                const double var =
                    ph.th2 + (ph.th1 +
                              (ph.ambient + ph.gain * ph.power * mean) *
                                  ph.shot) *
                                 ph.exposure;
                sd = std::sqrt(var);
                mu0 = ph.ambient * ph.exposure;
                swing = ph.gain * ph.power * ph.exposure;
            }

            clf.reset();
            int64_t td = -1;
            for (int64_t k = 0; k < max_samples; ++k) {
                const int64_t kt = sample_index_map(tx, rx, k);
                const int s0 = row.bit(int((kt + phase) % L));
                int y;
                if (!physical) {
                    y = s0 ^ (rng.uniform() < channel.pb ? 1 : 0);
                } else {
                    const int s1 = row.bit(int((kt + 1 + phase) % L));
                    const double a =
                        exposure_mixing_sample(ph.exposure, ph.period, rng);
                    const double level = swing * (a * s0 + (1.0 - a) * s1);
                    y = rng.normal(mu0 + level, sd) > ph.threshold;
                }
                const Decision dec = clf.push(y);
                // classification error: best correlation over the first
                // full window points at the wrong row
                if (k == L - 1 && dec.arg != int(row_idx)) part.wrong++;
                // identification completes when the best-correlation row
                // first equals the truth; earlier wrong outputs are
                // transient and do not end the stream
                if (dec.arg == int(row_idx)) {
                    td = k + 1;
                    break;
                }
            }
            if (td < 0) {
                part.undecided++;
            } else {
                part.decided++;
                part.sum_td += td;
                part.sum_td2 += td * td;
                part.hist[size_t(td - L)]++;
            }
        }
    });

    Partial total;
    total.hist.assign(buckets, 0);
    for (const auto& part : partial) {
        total.sum_td += part.sum_td;
        total.sum_td2 += part.sum_td2;
        total.decided += part.decided;
        total.wrong += part.wrong;
        total.undecided += part.undecided;
        for (size_t i = 0; i < buckets; ++i) total.hist[i] += part.hist[i];
    }

    SimReport rep;
    rep.L = L;
    rep.min_hamming = dict.params.min_hamming;
    rep.pb = physical ? bit_error_probability(channel.phys, dict.rows)
                      : channel.pb;
    rep.delta = delta;
    rep.trials = trials;
    rep.seed = seed;
    rep.eta_d = eta_d;
    rep.decided = total.decided;
    rep.undecided = total.undecided;
    rep.td_hist = std::move(total.hist);
    if (total.decided > 0) {
        const double n = double(total.decided);
        rep.e_td = double(total.sum_td) / n;
        const double var = double(total.sum_td2) / n - rep.e_td * rep.e_td;
        rep.se_td = std::sqrt(std::max(var, 0.0) / n);
    }
    rep.p_ce = double(total.wrong) / double(trials);
    rep.se_pce = std::sqrt(rep.p_ce * (1.0 - rep.p_ce) / double(trials));
    return rep;
}

double capacity_l_max(int j, double p_g, double t_over_sigma) {
    if (j < 2) throw std::invalid_argument("capacity_l_max: j >= 2");
    if (p_g <= 0.0 || p_g >= 1.0)
        throw std::invalid_argument("capacity_l_max: p_g in (0, 1)");
    if (t_over_sigma <= 0.0)
        throw std::invalid_argument("capacity_l_max: t_over_sigma > 0");
    const double pairs = double(j) * double(j - 1);
    const double per_pair = 1.0 - std::exp(std::log(p_g) / pairs);
    return t_over_sigma * std::sqrt(0.5 * per_pair);
}

CapacityCurve capacity_curve(const CapacityParams& params) {
    if (params.j_min < 2 || params.j_max < params.j_min)
        throw std::invalid_argument("capacity_curve: bad j range");
    if (params.l_cap < 2 || params.l_cap > kMaxGenerateL)
        throw std::invalid_argument("capacity_curve: l_cap out of range");
    if (params.seqs_per_uav < 1)
        throw std::invalid_argument("capacity_curve: seqs_per_uav >= 1");

    // per-length cardinalities of the dictionary family
    std::vector<int64_t> card1(size_t(params.l_cap) + 1, 0);
    std::vector<int64_t> card3(size_t(params.l_cap) + 1, 0);
    for (int L = 2; L <= params.l_cap; ++L) {
        GenerationParams gp;
        gp.coding = Coding::nrz;
        gp.L = L;
        gp.duty = params.duty;
        gp.max_run_ones = params.n1;
        gp.max_run_zeros = params.n0;
        gp.min_hamming = 1;
        Dictionary base = generate_nrz(gp);
        card1[size_t(L)] = int64_t(base.rows.size());
        if (base.rows.empty()) continue;
        card3[size_t(L)] = int64_t(
            hamming_filter_random(base.rows, 3, params.restarts,
                                  params.seed, params.threads)
                .size());
    }

    auto l_min = [&](const std::vector<int64_t>& card, int64_t need) {
        for (int L = 2; L <= params.l_cap; ++L)
            if (card[size_t(L)] >= need) return L;
        return -1;
    };

    CapacityCurve curve;
    curve.params = params;
    for (int j = params.j_min; j <= params.j_max; ++j) {
        CapacityRow row;
        row.j = j;
        row.l_max = capacity_l_max(j, params.p_g, params.t_over_sigma);
        const int64_t need = int64_t(j) * params.seqs_per_uav;
        row.l_min_h1 = l_min(card1, need);
        row.l_min_h3 = l_min(card3, need);
        if (curve.crossing_h1 < 0 &&
            (row.l_min_h1 < 0 || double(row.l_min_h1) > row.l_max))
            curve.crossing_h1 = j;
        if (curve.crossing_h3 < 0 &&
            (row.l_min_h3 < 0 || double(row.l_min_h3) > row.l_max))
            curve.crossing_h3 = j;
        curve.rows.push_back(row);
    }
    return curve;
}

} // namespace blinkid
