#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "blinkid/codebook.hpp"
#include "blinkid/seq.hpp"

using namespace blinkid;

namespace {

// exhaustive string-level pipeline, independent of the packed implementation
std::string rot_str(const std::string& s, int d) {
    const int L = int(s.size());
    std::string r(size_t(L), '0');
    for (int i = 0; i < L; ++i) r[size_t(i)] = s[size_t(((i - d) % L + L) % L)];
    return r;
}

int run_str(const std::string& s, char c) {
    const std::string ss = s + s;
    int best = 0, run = 0;
    for (char x : ss) {
        run = x == c ? run + 1 : 0;
        best = std::max(best, run);
    }
    return std::min<int>(best, int(s.size()));
}

std::vector<std::string> oracle_pipeline(int L, int wmin, int n1, int n0) {
    std::set<std::string> keep;
    for (uint32_t v = 0; v < (1u << L); ++v) {
        std::string s(size_t(L), '0');
        for (int i = 0; i < L; ++i)
            if (v >> i & 1u) s[size_t(L - 1 - i)] = '1';
        if (std::count(s.begin(), s.end(), '1') < wmin) continue;
        std::string canon = s;
        for (int d = 1; d < L; ++d) canon = std::min(canon, rot_str(s, d));
        if (canon != s) continue;
        if (run_str(s, '1') > n1) continue;
        if (run_str(s, '0') > n0) continue;
        keep.insert(s);
    }
    return {keep.begin(), keep.end()};
}

// exact maximum independent set on the pairwise-conflict graph
struct MisOracle {
    std::vector<uint64_t> adj;
    int best = 0;
    void search(uint64_t cand, int count) {
        if (count + std::popcount(cand) <= best) return;
        if (cand == 0) {
            best = count;
            return;
        }
        const int v = std::countr_zero(cand);
        const uint64_t rest = cand & ~(1ull << v);
        search(rest & ~adj[size_t(v)], count + 1);
        search(rest, count);
    }
};

int mis_optimum(const std::vector<BitSeq>& rows, int hm) {
    MisOracle mis;
    mis.adj.assign(rows.size(), 0);
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows.size(); ++j)
            if (i != j && circular_hamming(rows[i], rows[j]) < hm)
                mis.adj[i] |= 1ull << j;
    mis.search((1ull << rows.size()) - 1ull, 0);
    return mis.best;
}

} // namespace

TEST_CASE("power-test weight floor avoids float edge cases") {
    CHECK(estimate_cardinality(10, 0.4, 7, 7).wmin == 4);  // 10*0.4 == 4
    CHECK(estimate_cardinality(8, 0.4, 7, 7).wmin == 4);   // ceil(3.2)
    CHECK(estimate_cardinality(13, 0.4, 7, 7).wmin == 6);  // ceil(5.2)
    CHECK(estimate_cardinality(8, 0.5, 2, 2).wmin == 4);
    CHECK(estimate_cardinality(5, 0.0, 2, 2).wmin == 0);
    CHECK(estimate_cardinality(5, 1.0, 5, 5).wmin == 5);
}

TEST_CASE("nrz generation matches the exhaustive oracle") {
    struct Case {
        int L;
        double duty;
        int n1, n0;
    };
    const Case cases[] = {{4, 0.5, 1, 1},  {5, 0.0, 2, 2},  {6, 0.5, 2, 2},
                          {8, 0.5, 2, 2},  {8, 0.4, 7, 7},  {9, 0.3, 6, 6},
                          {10, 0.4, 3, 3}, {10, 0.7, 4, 2}, {7, 0.2, 6, 1}};
    for (const Case& c : cases) {
        GenerationParams gp;
        gp.L = c.L;
        gp.duty = c.duty;
        gp.max_run_ones = c.n1;
        gp.max_run_zeros = c.n0;
        gp.min_hamming = 1;
        const Dictionary dict = generate_nrz(gp);
        const int wmin = estimate_cardinality(c.L, c.duty, c.n1, c.n0).wmin;
        const auto expect = oracle_pipeline(c.L, wmin, c.n1, c.n0);
        REQUIRE(dict.rows.size() == expect.size());
        for (size_t i = 0; i < expect.size(); ++i)
            CHECK(dict.rows[i].str() == expect[i]);
        CHECK(dict.stages.candidates == uint64_t(1) << c.L);
        CHECK(dict.stages.zeros == dict.rows.size());
        CHECK(dict.stages.ones >= dict.stages.zeros);
        CHECK(dict.stages.circular >= dict.stages.ones);
        CHECK(dict.stages.power >= dict.stages.circular);
        CHECK_NOTHROW(dict.validate());
    }
}

TEST_CASE("pinned pipeline cardinalities") {
    GenerationParams gp;  // defaults: L=8, duty=0.5, runs<=2
    CHECK(generate_nrz(gp).rows.size() == 6);
    gp.L = 8;
    gp.duty = 0.4;
    gp.max_run_ones = 7;
    gp.max_run_zeros = 7;
    CHECK(generate_nrz(gp).rows.size() == 22);
}

TEST_CASE("exact profile agrees with generation and estimator on a tiny case") {
    PartitionProfile pr = estimate_cardinality(4, 0.5, 1, 1);
    fill_exact_profile(pr, 1, 1);
    CHECK(pr.exact_total() == 1);      // only 0101 survives
    CHECK(pr.estimated_total() == 1);  // estimator lands exactly here
    CHECK(pr.est_d[2] == 1);
    CHECK(pr.exact_d[2] == 1);

    // stage counts from enumeration match the estimator's exact columns
    GenerationParams gp;
    gp.L = 9;
    gp.duty = 0.3;
    gp.max_run_ones = 6;
    gp.max_run_zeros = 6;
    const Dictionary dict = generate_nrz(gp);
    PartitionProfile p9 = estimate_cardinality(9, 0.3, 6, 6);
    fill_exact_profile(p9, 6, 6);
    CHECK(uint64_t(p9.exact_total()) == dict.stages.zeros);
}

TEST_CASE("estimator columns are nonnegative and monotone across stages") {
    for (int L : {5, 8, 10, 13, 16}) {
        for (double duty : {0.0, 0.3, 0.4, 0.5, 0.8}) {
            for (int n1 : {1, 2, 4, 7}) {
                const PartitionProfile pr = estimate_cardinality(L, duty, n1, n1);
                for (int l = 0; l <= L; ++l) {
                    CHECK(pr.est_d[size_t(l)] >= 0);
                    CHECK(pr.est_d[size_t(l)] <= pr.est_c[size_t(l)]);
                    CHECK(pr.est_c[size_t(l)] <= pr.est_b[size_t(l)]);
                    CHECK(pr.est_b[size_t(l)] <= pr.est_a[size_t(l)]);
                }
            }
        }
    }
}

TEST_CASE("hm3 coarse estimate is the ceiling of |D| over L+1") {
    CHECK(estimate_cardinality_hm3(22, 8) == 3);
    CHECK(estimate_cardinality_hm3(428, 13) == 31);
    CHECK(estimate_cardinality_hm3(0, 8) == 0);
    CHECK(estimate_cardinality_hm3(9, 8) == 1);
    CHECK(estimate_cardinality_hm3(10, 8) == 2);
}

TEST_CASE("analytic parity filter guarantees distance two") {
    GenerationParams gp;
    gp.L = 8;
    gp.duty = 0.4;
    gp.max_run_ones = 7;
    gp.max_run_zeros = 7;
    const Dictionary base = generate_nrz(gp);
    const auto kept = hamming_filter_analytic_hm2(base.rows);
    CHECK(!kept.empty());
    size_t even = 0, odd = 0;
    for (const BitSeq& r : base.rows) (r.weight() % 2 == 0 ? even : odd)++;
    CHECK(kept.size() == std::max(even, odd));
    for (size_t i = 0; i < kept.size(); ++i)
        for (size_t j = i + 1; j < kept.size(); ++j)
            CHECK(circular_hamming(kept[i], kept[j]) >= 2);

    // generation path applies the same filter for Hm = 2
    gp.min_hamming = 2;
    CHECK(generate_nrz(gp).rows.size() == kept.size());
}

TEST_CASE("random elimination: validity, determinism, thread independence") {
    GenerationParams gp;
    gp.L = 8;
    gp.duty = 0.4;
    gp.max_run_ones = 7;
    gp.max_run_zeros = 7;
    const Dictionary base = generate_nrz(gp);
    REQUIRE(base.rows.size() == 22);

    const auto a = hamming_filter_random(base.rows, 3, 400, 42, 1);
    const auto b = hamming_filter_random(base.rows, 3, 400, 42, 4);
    const auto c = hamming_filter_random(base.rows, 3, 400, 42, 3);
    CHECK(a == b);
    CHECK(a == c);
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(std::find(base.rows.begin(), base.rows.end(), a[i]) !=
              base.rows.end());
        for (size_t j = i + 1; j < a.size(); ++j)
            CHECK(circular_hamming(a[i], a[j]) >= 3);
    }

    // distance floor 1 has no conflicts: everything is kept
    CHECK(hamming_filter_random(base.rows, 1, 10, 1, 1) == base.rows);

    // enough restarts reach the exact optimum on this small instance
    const int optimum = mis_optimum(base.rows, 3);
    CHECK(int(hamming_filter_random(base.rows, 3, 2000, 1, 4).size()) ==
          optimum);
}

TEST_CASE("manchester pipeline: counts, constants, nrz equivalence") {
    const int expected[][2] = {{5, 6}, {6, 12}, {8, 34}, {9, 58}, {10, 106}};
    for (const auto& e : expected)
        CHECK(generate_manchester(e[0], 1, 10, 1).rows.size() == size_t(e[1]));

    for (int L = 2; L <= 10; ++L) {
        for (int hm : {1, 2, 3}) {
            if (hm > L) continue;
            const Dictionary m = generate_manchester(L, hm, 300, 9, 2);
            GenerationParams gp;
            gp.L = L;
            gp.duty = 0.0;
            gp.max_run_ones = L - 1;
            gp.max_run_zeros = L - 1;
            gp.min_hamming = hm;
            gp.restarts = 300;
            gp.seed = 9;
            gp.threads = 2;
            const Dictionary n = generate_nrz(gp);
            CHECK(m.rows == n.rows);
            for (const BitSeq& r : m.rows) {
                CHECK(r.weight() > 0);
                CHECK(r.weight() < L);
            }
            CHECK(m.normalized_duration() == 2 * L);
            CHECK(n.normalized_duration() == L);
        }
    }

    // the two single-bit classes survive at L = 1
    CHECK(generate_manchester(1, 1, 10, 1).rows.size() == 2);
}

TEST_CASE("dictionary validation rejects broken inputs") {
    GenerationParams gp;
    gp.L = 6;
    gp.duty = 0.5;
    gp.max_run_ones = 2;
    gp.max_run_zeros = 2;
    Dictionary good = generate_nrz(gp);
    REQUIRE(good.rows.size() >= 2);

    Dictionary bad = good;
    std::swap(bad.rows[0], bad.rows[1]);
    CHECK_THROWS_AS(bad.validate(), std::runtime_error);

    bad = good;
    bad.rows[0] = BitSeq::from_string("110110");  // not canonical
    CHECK_THROWS_AS(bad.validate(), std::runtime_error);

    bad = good;
    bad.rows[0] = BitSeq::from_string("000111");  // run of three
    CHECK_THROWS_AS(bad.validate(), std::runtime_error);

    bad = good;
    bad.params.min_hamming = 6;  // existing rows are closer than that
    CHECK_THROWS_AS(bad.validate(), std::runtime_error);
}

TEST_CASE("generation rejects out-of-range parameters") {
    GenerationParams gp;
    gp.L = 25;
    CHECK_THROWS_AS(generate_nrz(gp), std::invalid_argument);
    gp.L = 8;
    gp.duty = 1.5;
    CHECK_THROWS_AS(generate_nrz(gp), std::invalid_argument);
    gp.duty = 0.5;
    gp.max_run_ones = 0;
    CHECK_THROWS_AS(generate_nrz(gp), std::invalid_argument);
    gp.max_run_ones = 2;
    gp.min_hamming = 9;
    CHECK_THROWS_AS(generate_nrz(gp), std::invalid_argument);
}
