#include "blinkid/codebook.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "blinkid/parallel.hpp"
#include "blinkid/rng.hpp"

namespace blinkid {

std::string coding_name(Coding c) {
    return c == Coding::nrz ? "nrz" : "manchester";
}

Coding coding_from_name(const std::string& name) {
    if (name == "nrz") return Coding::nrz;
    if (name == "manchester") return Coding::manchester;
    throw std::invalid_argument("unknown coding: " + name);
}

namespace {

int64_t binom(int n, int k) {
    if (n < 0 || k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    int64_t r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

int64_t ceil_div(int64_t a, int64_t b) { return (a + b - 1) / b; }

// Smallest weight kept by the power test; the epsilon guards against duty
// values like 0.4 whose binary representation lands a hair above l*duty.
int min_weight(int L, double duty) {
    int w = int(std::ceil(double(L) * duty - 1e-9));
    return w < 0 ? 0 : w;
}

void check_generate_params(int L, double duty, int n1, int n0) {
    if (L < 1 || L > kMaxGenerateL)
        throw std::invalid_argument("generate: L out of range [1, 24]");
    if (duty < 0.0 || duty > 1.0)
        throw std::invalid_argument("generate: duty must be in [0, 1]");
    if (n1 < 1 || n0 < 1)
        throw std::invalid_argument("generate: run limits must be >= 1");
}

uint32_t canonical_word(uint32_t w, int L) {
    const uint32_t mask = L == 32 ? 0xffffffffu : ((1u << L) - 1u);
    uint32_t best = w;
    uint32_t cur = w;
    for (int d = 1; d < L; ++d) {
        cur = ((cur >> 1) | (cur << (L - 1))) & mask;
        if (cur < best) best = cur;
    }
    return best;
}

int max_run_word(uint32_t w, int L, int symbol) {
    int best = 0, run = 0;
    for (int i = 0; i < 2 * L; ++i) {
        int b = int((w >> (L - 1 - (i % L))) & 1u);
        if (b == symbol) {
            if (++run > best) best = run;
        } else {
            run = 0;
        }
    }
    return best > L ? L : best;
}

} // namespace

int64_t PartitionProfile::estimated_total() const {
    int64_t s = 0;
    for (int64_t v : est_d) s += v;
    return s;
}

int64_t PartitionProfile::exact_total() const {
    if (!has_exact)
        throw std::logic_error("PartitionProfile: exact counts not filled");
    int64_t s = 0;
    for (int64_t v : exact_d) s += v;
    return s;
}

PartitionProfile estimate_cardinality(int L, double duty, int n1, int n0) {
    if (L < 1 || L > BitSeq::kMaxLen)
        throw std::invalid_argument("estimate_cardinality: L out of range");
    if (duty < 0.0 || duty > 1.0)
        throw std::invalid_argument("estimate_cardinality: duty in [0, 1]");
    if (n1 < 1 || n0 < 1)
        throw std::invalid_argument("estimate_cardinality: run limits >= 1");

    PartitionProfile pr;
    pr.L = L;
    pr.wmin = min_weight(L, duty);
    pr.est_a.assign(size_t(L) + 1, 0);
    pr.est_b.assign(size_t(L) + 1, 0);
    pr.est_c.assign(size_t(L) + 1, 0);
    pr.est_d.assign(size_t(L) + 1, 0);

    for (int l = 0; l <= L; ++l) {
        if (l < pr.wmin) continue;
        pr.est_a[size_t(l)] = binom(L, l);
        pr.est_b[size_t(l)] =
            (l == 0 || l == L) ? 1 : ceil_div(pr.est_a[size_t(l)], L);
    }

    // ones-run test: partitions with l > N1 lose the classes built around a
    // too-long block of ones; the all-ones partition survives iff N1 >= L.
    for (int l = 0; l <= L; ++l) {
        int64_t b = pr.est_b[size_t(l)];
        int64_t c;
        if (l == L)
            c = n1 >= L ? b : 0;
        else if (l > n1)
            c = std::max<int64_t>(b - binom(L - n1 - 2, l - n1 - 1), 0);
        else
            c = b;
        pr.est_c[size_t(l)] = c;
    }

    // zeros-run test; the correction depends on whether any partition is hit
    // by both run tests (N1 < L - N0) or not.
    auto delta_d = [&](int l) { return binom(L - n0 - 2, L - l - n0 - 1); };
    auto delta_c = [&](int l) { return binom(L - n1 - 2, l - n1 - 1); };
    for (int l = 0; l <= L; ++l) {
        int64_t c = pr.est_c[size_t(l)];
        int64_t d;
        if (l == 0) {
            d = n0 >= L ? c : 0;
        } else if (n1 >= L - n0) {
            d = l <= L - n0 ? std::max<int64_t>(c - delta_d(l), 0) : c;
        } else if (l < n1) {
            d = std::max<int64_t>(c - delta_d(l), 0);
        } else if (l <= L - n0) {
            int64_t corr = std::max<int64_t>(delta_d(l) - delta_c(l), 0);
            d = std::max<int64_t>(c - corr, 0);
        } else {
            d = c;
        }
        pr.est_d[size_t(l)] = d;
    }
    return pr;
}

void fill_exact_profile(PartitionProfile& pr, int n1, int n0) {
    const int L = pr.L;
    check_generate_params(L, 0.0, n1, n0);
    pr.exact_a.assign(size_t(L) + 1, 0);
    pr.exact_b.assign(size_t(L) + 1, 0);
    pr.exact_c.assign(size_t(L) + 1, 0);
    pr.exact_d.assign(size_t(L) + 1, 0);
    const uint64_t top = 1ull << L;
    for (uint64_t v = 0; v < top; ++v) {
        const uint32_t w = uint32_t(v);
        const int ones = std::popcount(w);
        if (ones < pr.wmin) continue;
        pr.exact_a[size_t(ones)]++;
        if (canonical_word(w, L) != w) continue;
        pr.exact_b[size_t(ones)]++;
        if (max_run_word(w, L, 1) > n1) continue;
        pr.exact_c[size_t(ones)]++;
        if (max_run_word(w, L, 0) > n0) continue;
        pr.exact_d[size_t(ones)]++;
    }
    pr.has_exact = true;
}

int64_t estimate_cardinality_hm3(int64_t exact_d, int L) {
    if (exact_d < 0 || L < 1)
        throw std::invalid_argument("estimate_cardinality_hm3: bad arguments");
    return ceil_div(exact_d, int64_t(L) + 1);
}

std::vector<BitSeq> hamming_filter_analytic_hm2(const std::vector<BitSeq>& rows) {
    std::vector<BitSeq> even, odd;
    for (const BitSeq& r : rows)
        (r.weight() % 2 == 0 ? even : odd).push_back(r);
    return even.size() > odd.size() ? even : odd;
}

std::vector<BitSeq> hamming_filter_random(const std::vector<BitSeq>& rows,
                                          int min_hamming, int restarts,
                                          uint64_t seed, int threads) {
    if (min_hamming < 1)
        throw std::invalid_argument("hamming_filter_random: Hm >= 1");
    if (restarts < 1)
        throw std::invalid_argument("hamming_filter_random: restarts >= 1");
    const size_t n = rows.size();
    if (n == 0) return {};

    // conflict[i] marks every row closer than Hm to row i
    const size_t words = (n + 63) / 64;
    std::vector<uint64_t> conflict(n * words, 0);
    bool any_conflict = false;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            if (circular_hamming(rows[i], rows[j]) < min_hamming) {
                conflict[i * words + j / 64] |= 1ull << (j % 64);
                conflict[j * words + i / 64] |= 1ull << (i % 64);
                any_conflict = true;
            }
        }
    }
    if (!any_conflict) return rows;

    struct Best {
        size_t count = 0;
        int64_t restart = -1;
        std::vector<uint64_t> kept;
    };
    const int chunks = std::max(1, std::min<int>(threads, restarts));
    std::vector<Best> best(static_cast<size_t>(chunks));

    parallel_chunks(restarts, chunks, [&](int chunk, int64_t lo, int64_t hi) {
        std::vector<uint32_t> order(n);
        std::vector<uint64_t> kept(words);
        Best& b = best[size_t(chunk)];
        for (int64_t it = lo; it < hi; ++it) {
            Rng rng(derive_seed(seed, uint64_t(it)));
            for (size_t i = 0; i < n; ++i) order[i] = uint32_t(i);
            for (size_t i = n - 1; i > 0; --i)
                std::swap(order[i], order[rng.below(i + 1)]);
            std::fill(kept.begin(), kept.end(), 0);
            size_t count = 0;
            for (size_t pos = 0; pos < n; ++pos) {
                const uint32_t idx = order[pos];
                const uint64_t* row = &conflict[size_t(idx) * words];
                uint64_t clash = 0;
                for (size_t wv = 0; wv < words; ++wv) clash |= row[wv] & kept[wv];
                if (clash == 0) {
                    kept[idx / 64] |= 1ull << (idx % 64);
                    ++count;
                }
            }
            if (count > b.count || (count == b.count && b.restart == -1)) {
                b.count = count;
                b.restart = it;
                b.kept = kept;
            }
        }
    });

    const Best* win = &best[0];
    for (const Best& b : best) {
        if (b.restart < 0) continue;
        if (win->restart < 0 || b.count > win->count ||
            (b.count == win->count && b.restart < win->restart))
            win = &b;
    }
    std::vector<BitSeq> out;
    out.reserve(win->count);
    for (size_t i = 0; i < n; ++i)
        if (win->kept[i / 64] >> (i % 64) & 1ull) out.push_back(rows[i]);
    return out;
}

namespace {

std::vector<BitSeq> apply_hamming_stage(std::vector<BitSeq> rows, int hm,
                                        int restarts, uint64_t seed,
                                        int threads) {
    if (hm <= 1) return rows;
    std::vector<BitSeq> out = hm == 2
        ? hamming_filter_analytic_hm2(rows)
        : hamming_filter_random(rows, hm, restarts, seed, threads);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

Dictionary generate_nrz(const GenerationParams& params) {
    check_generate_params(params.L, params.duty, params.max_run_ones,
                          params.max_run_zeros);
    if (params.min_hamming < 1 || params.min_hamming > params.L)
        throw std::invalid_argument("generate: Hm must be in [1, L]");

    const int L = params.L;
    const int wmin = min_weight(L, params.duty);
    Dictionary dict;
    dict.params = params;
    dict.params.coding = Coding::nrz;
    dict.stages.candidates = 1ull << L;

    std::vector<BitSeq> survivors;
    const uint64_t top = 1ull << L;
    for (uint64_t v = 0; v < top; ++v) {
        const uint32_t w = uint32_t(v);
        if (std::popcount(w) < wmin) continue;
        dict.stages.power++;
        if (canonical_word(w, L) != w) continue;
        dict.stages.circular++;
        if (max_run_word(w, L, 1) > params.max_run_ones) continue;
        dict.stages.ones++;
        if (max_run_word(w, L, 0) > params.max_run_zeros) continue;
        dict.stages.zeros++;
        survivors.emplace_back(w, L);
    }

    dict.rows = apply_hamming_stage(std::move(survivors), params.min_hamming,
                                    params.restarts, params.seed,
                                    params.threads);
    dict.stages.hamming = dict.rows.size();
    dict.validate();
    return dict;
}

Dictionary generate_manchester(int L, int min_hamming, int restarts,
                               uint64_t seed, int threads) {
    check_generate_params(L, 0.0, 1, 1);
    if (min_hamming < 1 || min_hamming > L)
        throw std::invalid_argument("generate: Hm must be in [1, L]");

    Dictionary dict;
    dict.params.coding = Coding::manchester;
    dict.params.L = L;
    dict.params.duty = 0.0;
    // the channel stream of a constant row collides with its complement's,
    // so both constants are unusable; run caps L-1 encode exactly that
    dict.params.max_run_ones = L >= 2 ? L - 1 : 1;
    dict.params.max_run_zeros = L >= 2 ? L - 1 : 1;
    dict.params.min_hamming = min_hamming;
    dict.params.restarts = restarts;
    dict.params.seed = seed;
    dict.params.threads = threads;
    dict.stages.candidates = 1ull << L;
    dict.stages.power = dict.stages.candidates;

    std::vector<BitSeq> survivors;
    const uint64_t top = 1ull << L;
    for (uint64_t v = 0; v < top; ++v) {
        const uint32_t w = uint32_t(v);
        if (canonical_word(w, L) != w) continue;
        dict.stages.circular++;
        const int ones = std::popcount(w);
        if (L >= 2 && (ones == 0 || ones == L)) continue;
        survivors.emplace_back(w, L);
    }
    dict.stages.ones = survivors.size();
    dict.stages.zeros = survivors.size();

    dict.rows = apply_hamming_stage(std::move(survivors), min_hamming,
                                    restarts, seed, threads);
    dict.stages.hamming = dict.rows.size();
    dict.validate();
    return dict;
}

void Dictionary::validate() const {
    const int L = params.L;
    const int wmin = params.coding == Coding::nrz ? min_weight(L, params.duty) : 0;
    const int hm = std::max(1, params.min_hamming);
    for (size_t i = 0; i < rows.size(); ++i) {
        const BitSeq& r = rows[i];
        if (r.length() != L)
            throw std::runtime_error("dictionary: row length mismatch");
        if (r.canonical() != r)
            throw std::runtime_error("dictionary: row not canonical");
        if (r.weight() < wmin)
            throw std::runtime_error("dictionary: power test violated");
        if (max_circular_run(r, 1) > params.max_run_ones)
            throw std::runtime_error("dictionary: ones-run test violated");
        if (max_circular_run(r, 0) > params.max_run_zeros)
            throw std::runtime_error("dictionary: zeros-run test violated");
        if (i > 0 && !(rows[i - 1] < r))
            throw std::runtime_error("dictionary: rows not sorted");
        for (size_t j = i + 1; j < rows.size(); ++j)
            if (circular_hamming(r, rows[j]) < hm)
                throw std::runtime_error("dictionary: Hamming floor violated");
    }
}

} // namespace blinkid
