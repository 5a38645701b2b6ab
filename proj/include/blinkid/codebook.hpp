#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blinkid/seq.hpp"

namespace blinkid {

enum class Coding { nrz, manchester };

std::string coding_name(Coding c);
Coding coding_from_name(const std::string& name);

struct GenerationParams {
    Coding coding = Coding::nrz;
    int L = 8;
    double duty = 0.5;      // minimum average power, fraction of ones
    int max_run_ones = 2;   // N1
    int max_run_zeros = 2;  // N0
    int min_hamming = 1;    // Hm, pairwise circular distance floor
    int restarts = 10000;   // random-search restarts for Hm >= 3
    uint64_t seed = 1;
    int threads = 1;
};

// Sequences surviving each stage of the generation pipeline. `candidates`
// and `power` count raw sequences; the rest count circular classes.
struct StageCounts {
    uint64_t candidates = 0;
    uint64_t power = 0;
    uint64_t circular = 0;
    uint64_t ones = 0;
    uint64_t zeros = 0;
    uint64_t hamming = 0;
};

struct Dictionary {
    GenerationParams params;
    std::vector<BitSeq> rows;  // canonical representatives, sorted
    StageCounts stages;

    int length() const { return params.L; }
    size_t size() const { return rows.size(); }

    // Bit periods per sequence repetition, in clock periods (Manchester
    // spends two clock periods per bit).
    int normalized_duration() const {
        return params.L * (params.coding == Coding::manchester ? 2 : 1);
    }

    // Re-checks every published invariant with seqcore primitives only;
    // throws std::runtime_error on the first violation.
    void validate() const;
};

// Largest length accepted by the exhaustive enumeration stages.
constexpr int kMaxGenerateL = 24;

// Per-weight-class cardinalities for the pipeline stages A (power),
// B (circular), C (ones), D (zeros). `est_*` follow the closed-form
// estimator; `exact_*` are filled by exact_partition_profile.
struct PartitionProfile {
    int L = 0;
    int wmin = 0;  // smallest weight kept by the power test
    std::vector<int64_t> est_a, est_b, est_c, est_d;
    std::vector<int64_t> exact_a, exact_b, exact_c, exact_d;
    bool has_exact = false;

    int64_t estimated_total() const;  // estimated |D|
    int64_t exact_total() const;      // exact |D| (requires has_exact)
};

// Closed-form cardinality estimate of the NRZ pipeline before the Hamming
// stage. Requires N1, N0 >= 1.
PartitionProfile estimate_cardinality(int L, double duty, int n1, int n0);

// Adds exact per-stage counts from exhaustive enumeration (L <= kMaxGenerateL).
void fill_exact_profile(PartitionProfile& profile, int n1, int n0);

// Coarse estimate of the Hm=3 stage from the exact pre-Hamming cardinality.
int64_t estimate_cardinality_hm3(int64_t exact_d, int L);

// Keeps the even-weight or odd-weight classes, whichever set is larger
// (ties go to odd). Guarantees pairwise circular distance >= 2.
std::vector<BitSeq> hamming_filter_analytic_hm2(const std::vector<BitSeq>& rows);

// Randomized greedy elimination: `restarts` independent permutations, keep a
// row when it conflicts with no earlier kept row, return the best restart
// (largest kept set; ties resolve to the lowest restart index). Deterministic
// given seed, independent of thread count.
std::vector<BitSeq> hamming_filter_random(const std::vector<BitSeq>& rows,
                                          int min_hamming, int restarts,
                                          uint64_t seed, int threads = 1);

// Full NRZ pipeline: power, circularity, ones-run, zeros-run, Hamming.
Dictionary generate_nrz(const GenerationParams& params);

// Manchester pipeline: circularity over all of S^L, constant sequences
// dropped for L >= 2, then the same Hamming stage at the bit level.
Dictionary generate_manchester(int L, int min_hamming, int restarts,
                               uint64_t seed, int threads = 1);

} // namespace blinkid
