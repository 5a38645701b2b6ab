#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "blinkid/channel.hpp"
#include "blinkid/rng.hpp"
#include "blinkid/seq.hpp"

using namespace blinkid;

namespace {

double q_func(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

ClockModel ideal(double period, double start = 0.0) {
    return {period, 0.0, Jitter::none, 0.0, start};
}

} // namespace

TEST_CASE("clock edges and inversion without jitter") {
    Rng rng(1);
    Clock c(ideal(2.0, 0.5), rng);
    CHECK(c.period() == 2.0);
    CHECK(c.edge(0) == 0.5);
    CHECK(c.edge(3) == 6.5);
    for (int k = 0; k < 50; ++k) {
        CHECK(c.index_at(c.edge(k)) == k);
        CHECK(c.index_at(c.edge(k) + 1.999) == k);
    }
    CHECK(c.index_at(0.4) == -1);
    CHECK(c.index_at(-3.6) == -3);
    CHECK_THROWS_AS(c.edge(-1), std::invalid_argument);
    CHECK_THROWS_AS(Clock(ideal(0.0), rng), std::invalid_argument);
}

TEST_CASE("jittered clocks are deterministic and invertible") {
    for (Jitter law : {Jitter::gaussian, Jitter::laplace}) {
        ClockModel m{1.0, 0.0, law, 1e-3, 0.0};
        Rng ra(77), rb(77);
        Clock a(m, ra), b(m, rb);
        double prev = -1.0;
        for (int k = 0; k < 200; ++k) {
            CHECK(a.edge(k) == b.edge(k));
            CHECK(std::fabs(a.edge(k) - double(k)) < 0.05);
            CHECK(a.edge(k) > prev);  // jitter far smaller than the period
            prev = a.edge(k);
            CHECK(a.index_at(a.edge(k)) == k);
        }
        // out-of-order queries must agree with sequential ones
        Rng rc(77);
        Clock c(m, rc);
        CHECK(c.edge(150) == a.edge(150));
        CHECK(c.edge(3) == a.edge(3));
    }
}

TEST_CASE("realized period statistics and delta variance") {
    const double T = 1.0, sd = 5e-3;
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0, dsum = 0.0, dsum2 = 0.0;
    Rng rng(123);
    for (int i = 0; i < n; ++i) {
        Clock rx({T, sd, Jitter::none, 0.0, 0.0}, rng);
        Clock tx({T, sd, Jitter::none, 0.0, 0.0}, rng);
        sum += rx.period();
        sum2 += rx.period() * rx.period();
        const double d = clock_delta(rx, tx);
        dsum += d;
        dsum2 += d * d;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::fabs(mean - T) < 4.0 * sd / std::sqrt(double(n)));
    CHECK(std::fabs(var - sd * sd) / (sd * sd) < 0.05);

    const double dmean = dsum / n;
    const double dvar = dsum2 / n - dmean * dmean;
    CHECK(std::fabs(dmean) < 4.0 * std::sqrt(2.0) * sd / std::sqrt(double(n)));
    CHECK(std::fabs(dvar - 2.0 * sd * sd) / (2.0 * sd * sd) < 0.05);
}

TEST_CASE("slip probability within a window obeys the variance bound") {
    const int n = 100000;
    for (double sd : {1e-3, 5e-3, 1e-2}) {
        for (int L : {8, 13, 40}) {
            Rng rng(uint64_t(sd * 1e6) + uint64_t(L));
            int hits = 0;
            for (int i = 0; i < n; ++i) {
                Clock rx({1.0, sd, Jitter::none, 0.0, 0.0}, rng);
                Clock tx({1.0, sd, Jitter::none, 0.0, 0.0}, rng);
                if (std::fabs(clock_delta(rx, tx)) >= 1.0 / double(L)) ++hits;
            }
            const double p = double(hits) / double(n);
            const double bound = 2.0 * sd * sd * double(L) * double(L);
            const double se = std::sqrt(std::max(p, 1e-12) * (1 - p) / n);
            CHECK(p <= bound + 3.0 * se);
        }
    }
}

TEST_CASE("index map and slips match the floor-formula oracle") {
    Rng rng(5);
    Clock tx(ideal(1.0), rng);
    Clock rx(ideal(1.0), rng);
    for (int64_t k : {0, 1, 7, 1000})
        CHECK(sample_index_map(tx, rx, k) == k);

    const BitSeq row = BitSeq::from_string("00110101");
    ChannelParams clean;  // bsc, pb = 0
    for (double delta : {0.01, -0.01, 0.003, -0.003}) {
        const double off = 0.37;
        const int64_t n = 3000;
        TransmitResult res =
            transmit(row, n, clean, ideal(1.0), ideal(1.0 + delta, off), 0, 9);
        CHECK(res.drift.delta == doctest::Approx(delta).epsilon(1e-12));
        CHECK(res.pre_birth == 0);

        // oracle: k_t = floor(off + k (1 + delta))
        std::vector<Slip> expect;
        int64_t prev = int64_t(std::floor(off));
        for (int64_t k = 1; k < n; ++k) {
            const int64_t kt = int64_t(std::floor(off + double(k) * (1.0 + delta)));
            if (kt == prev + 2) expect.push_back({k, +1});
            if (kt == prev) expect.push_back({k, -1});
            prev = kt;
        }
        REQUIRE(res.drift.slips.size() == expect.size());
        for (size_t i = 0; i < expect.size(); ++i) {
            CHECK(res.drift.slips[i].rx_index == expect[i].rx_index);
            CHECK(res.drift.slips[i].kind == expect[i].kind);
        }

        // rate ~ |delta| per sample, spacing within one of 1/|delta|
        const double target = std::fabs(delta) * double(n);
        CHECK(double(expect.size()) >= target - 1.5);
        CHECK(double(expect.size()) <= target + 1.5);
        const int64_t nominal = int64_t(1.0 / std::fabs(delta));
        for (size_t i = 1; i < res.drift.slips.size(); ++i) {
            const int64_t gap =
                res.drift.slips[i].rx_index - res.drift.slips[i - 1].rx_index;
            CHECK(gap >= nominal - 1);
            CHECK(gap <= nominal + 1);
        }
        const int kind = delta > 0 ? +1 : -1;
        for (const Slip& s : res.drift.slips) CHECK(s.kind == kind);
    }
}

TEST_CASE("exposure mixing moments") {
    Rng rng(31);
    const double T = 1.0, tau = 0.5;
    const int n = 1000000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = exposure_mixing_sample(tau, T, rng);
        CHECK(a >= 0.0);
        CHECK(a <= 1.0);
        sum += a;
        sum2 += a * a;
    }
    CHECK(sum / n == doctest::Approx(1.0 - tau / (2 * T)).epsilon(0.002));
    CHECK(sum2 / n == doctest::Approx(1.0 - 2 * tau / (3 * T)).epsilon(0.003));
    CHECK(exposure_mixing_sample(0.0, T, rng) == 1.0);
    CHECK_THROWS_AS(exposure_mixing_sample(1.5, T, rng), std::invalid_argument);
}

TEST_CASE("lambertian gain closed-form checks") {
    const double pi = std::acos(-1.0);
    const double deg = pi / 180.0;
    // half-power semi-angle of 60 degrees gives order m = 1
    CHECK(lambertian_gain(1.0, 1.0, 0.0, 60.0 * deg) ==
          doctest::Approx(1.0 / pi).epsilon(1e-12));
    for (double half : {20.0, 40.0, 60.0}) {
        const double g0 = lambertian_gain(2.5, 3.0, 0.0, half * deg);
        const double gh = lambertian_gain(2.5, 3.0, half * deg, half * deg);
        CHECK(gh / g0 == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(lambertian_gain(2.5, 6.0, 0.0, half * deg) ==
              doctest::Approx(g0 / 4.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(lambertian_gain(1.0, 0.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("sequence statistics and snr transcription") {
    const std::vector<BitSeq> rows = {BitSeq::from_string("0101"),
                                      BitSeq::from_string("0111")};
    const SeqStats st = dictionary_stats(rows);
    CHECK(st.mean == doctest::Approx(5.0 / 8.0));
    CHECK(st.pair_mean == doctest::Approx(2.0 / 8.0));  // pairs only in 0111

    PhysicalParams p;
    p.power = 2.0;
    p.gain = 0.7;
    p.exposure = 0.2;
    p.period = 1.0;
    p.ambient = 0.3;
    p.th1 = 0.01;
    p.th2 = 0.02;
    p.shot = 0.05;

    // independent transcription of the closed form
    const double mix = p.exposure / (3.0 * p.period);
    const double num = p.gain * p.gain * p.power * p.power * p.exposure *
                       p.exposure *
                       ((1.0 - mix) * st.mean + mix * st.pair_mean);
    const double sigma2 =
        p.th2 + (p.th1 + (p.ambient + p.gain * p.power * st.mean) * p.shot) *
                    p.exposure;
    const double den = p.ambient * p.exposure * p.ambient * p.exposure + sigma2;
    CHECK(snr(p, st) == doctest::Approx(num / den).epsilon(1e-12));

    PhysicalParams off = p;
    off.power = 0.0;
    CHECK(snr(off, st) == 0.0);

    // quadratic in the channel gain when the constant thermal term dominates
    PhysicalParams weak = p;
    weak.th2 = 1e6;
    weak.ambient = 0.0;
    weak.th1 = 0.0;
    weak.shot = 0.0;
    PhysicalParams weak2 = weak;
    weak2.gain *= 2.0;
    CHECK(snr(weak2, st) / snr(weak, st) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("bit error probability closed-form cases") {
    // constant-on sequence, raw threshold at zero: single gaussian tail
    PhysicalParams p;
    p.power = 1.0;
    p.gain = 1.0;
    p.exposure = 0.1;
    p.period = 1.0;
    p.ambient = 0.0;
    p.th1 = 0.0;
    p.th2 = 0.05 * 0.05;
    p.shot = 0.0;
    p.threshold = 0.0;
    const std::vector<BitSeq> ones = {BitSeq::from_string("1111")};
    CHECK(bit_error_probability(p, ones) ==
          doctest::Approx(q_func(0.1 / 0.05)).epsilon(1e-9));

    // alternating sequence, midpoint threshold, negligible mixing:
    // both transition cases collapse to the same single gaussian tail
    PhysicalParams s = p;
    s.exposure = 0.25;
    s.period = 1e6;  // transition within the exposure: probability 2.5e-7
    s.th2 = 0.05 * 0.05;
    s.threshold = 0.5 * s.gain * s.power * s.exposure;
    const std::vector<BitSeq> alt = {BitSeq::from_string("01")};
    const double swing = s.gain * s.power * s.exposure;
    CHECK(bit_error_probability(s, alt) ==
          doctest::Approx(q_func(0.5 * swing / 0.05)).epsilon(1e-3));

    // near-noiseless channel with a midpoint threshold decodes perfectly
    PhysicalParams clean = p;
    clean.th2 = 1e-12;
    clean.threshold = 0.5 * clean.gain * clean.power * clean.exposure;
    CHECK(bit_error_probability(clean, ones) < 1e-9);
}

TEST_CASE("physical-mode transmit agrees with the computed error rate") {
    PhysicalParams p;
    p.power = 1.0;
    p.gain = 1.0;
    p.exposure = 0.3;  // mixing matters here
    p.period = 1.0;
    p.ambient = 0.1;
    p.th1 = 0.002;
    p.th2 = 0.0005;
    p.shot = 0.01;
    p.threshold = 0.15 + 0.03;  // ambient offset + half swing

    const BitSeq row = BitSeq::from_string("00110101");
    const std::vector<BitSeq> rows = {row};
    const double predicted = bit_error_probability(p, rows);

    ChannelParams ch;
    ch.mode = ChannelParams::Mode::physical;
    ch.phys = p;
    const int64_t n = 400000;
    TransmitResult res = transmit(row, n, ch, ideal(1.0), ideal(1.0), 0, 2024);
    int64_t flips = 0;
    for (int64_t k = 0; k < n; ++k)
        flips += res.bits[size_t(k)] != uint8_t(row.bit(int(k % 8)));
    const double rate = double(flips) / double(n);
    const double se = std::sqrt(predicted * (1 - predicted) / double(n));
    CHECK(std::fabs(rate - predicted) < 4.0 * se + 1e-4);
}

TEST_CASE("transmit basics: rotation, flips, pre-birth") {
    const BitSeq row = BitSeq::from_string("00110101");
    ChannelParams clean;
    TransmitResult plain =
        transmit(row, 64, clean, ideal(1.0), ideal(1.0), 0, 1);
    for (int k = 0; k < 64; ++k)
        CHECK(plain.bits[size_t(k)] == uint8_t(row.bit(k)));
    CHECK(plain.drift.slips.empty());
    CHECK(plain.pre_birth == 0);

    TransmitResult shifted =
        transmit(row, 64, clean, ideal(1.0), ideal(1.0), 3, 1);
    for (int k = 0; k < 64; ++k)
        CHECK(shifted.bits[size_t(k)] == uint8_t(row.bit(k + 3)));

    ChannelParams noisy;
    noisy.pb = 0.1;
    const int64_t n = 1000000;
    TransmitResult res = transmit(row, n, noisy, ideal(1.0), ideal(1.0), 0, 7);
    int64_t flips = 0;
    for (int64_t k = 0; k < n; ++k)
        flips += res.bits[size_t(k)] != uint8_t(row.bit(int(k % 8)));
    CHECK(double(flips) / double(n) == doctest::Approx(0.1).epsilon(0.011));

    // transmitter starts later than the receiver: leading zeros
    TransmitResult late =
        transmit(row, 20, clean, ideal(1.0, 5.0), ideal(1.0), 0, 1);
    CHECK(late.pre_birth == 5);
    for (int k = 0; k < 5; ++k) CHECK(late.bits[size_t(k)] == 0);
    for (int k = 5; k < 20; ++k)
        CHECK(late.bits[size_t(k)] == uint8_t(row.bit(k - 5)));
}
