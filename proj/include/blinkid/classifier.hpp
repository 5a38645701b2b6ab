#pragma once

#include <cstdint>
#include <vector>

#include "blinkid/seq.hpp"

namespace blinkid {

constexpr int kReject = -1;
constexpr int kUndecided = -2;

struct Correlation {
    double score = 0.0;  // best normalized bipolar correlation, in [-1, 1]
    int shift = 0;       // smallest rotation achieving it
};

// max over rotations d of <bipolar(window), bipolar(rotated(row, d))> / L.
Correlation correlate(const BitSeq& window, const BitSeq& row);

// (L - 2 * floor((Hm - 1) / 2)) / L: accepts windows within the number of
// bit errors the set's Hamming floor can absorb.
double default_threshold(int L, int min_hamming);

struct Decision {
    int id = kUndecided;   // row index if score >= eta_d, else kReject;
                           // kUndecided before a full window
    int arg = kUndecided;  // best-scoring row regardless of the threshold
    double score = 0.0;
    int shift = 0;
};

// Sliding-window correlator bank over the dictionary rows. Feed one sample
// per clock period; undecided until L samples have arrived.
class Classifier {
public:
    Classifier(std::vector<BitSeq> rows, double eta_d);

    Decision push(int bit);
    void reset();

    int length() const { return L_; }
    int64_t samples_seen() const { return seen_; }
    double threshold() const { return eta_; }
    const std::vector<BitSeq>& rows() const { return rows_; }

private:
    std::vector<BitSeq> rows_;
    // rotations_[m][d] = packed word of rows_[m] rotated by d
    std::vector<std::vector<uint32_t>> rotations_;
    int L_ = 0;
    double eta_ = 1.0;
    uint32_t window_ = 0;
    uint32_t mask_ = 0;
    int64_t seen_ = 0;
};

} // namespace blinkid
