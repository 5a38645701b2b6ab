#include "blinkid/classifier.hpp"

#include <bit>
#include <stdexcept>

namespace blinkid {

Correlation correlate(const BitSeq& window, const BitSeq& row) {
    const int L = window.length();
    if (row.length() != L)
        throw std::invalid_argument("correlate: length mismatch");
    Correlation best{-1.0, 0};
    for (int d = 0; d < L; ++d) {
        const int ham = std::popcount(window.word() ^ row.rotated(d).word());
        const double score = double(L - 2 * ham) / double(L);
        if (score > best.score) best = {score, d};
    }
    return best;
}

double default_threshold(int L, int min_hamming) {
    if (L < 1 || min_hamming < 1)
        throw std::invalid_argument("default_threshold: L, Hm must be >= 1");
    return double(L - 2 * ((min_hamming - 1) / 2)) / double(L);
}

Classifier::Classifier(std::vector<BitSeq> rows, double eta_d)
    : rows_(std::move(rows)), eta_(eta_d) {
    if (rows_.empty())
        throw std::invalid_argument("Classifier: empty dictionary");
    if (eta_ <= 0.0 || eta_ > 1.0)
        throw std::invalid_argument("Classifier: eta_d must be in (0, 1]");
    L_ = rows_[0].length();
    for (const BitSeq& r : rows_)
        if (r.length() != L_)
            throw std::invalid_argument("Classifier: mixed row lengths");
    mask_ = L_ == 32 ? 0xffffffffu : ((1u << L_) - 1u);
    rotations_.resize(rows_.size());
    for (size_t m = 0; m < rows_.size(); ++m) {
        rotations_[m].resize(size_t(L_));
        for (int d = 0; d < L_; ++d)
            rotations_[m][size_t(d)] = rows_[m].rotated(d).word();
    }
}

void Classifier::reset() {
    window_ = 0;
    seen_ = 0;
}

Decision Classifier::push(int bit) {
    if (bit != 0 && bit != 1)
        throw std::invalid_argument("Classifier::push: bit must be 0 or 1");
    window_ = ((window_ << 1) | uint32_t(bit)) & mask_;
    ++seen_;
    if (seen_ < L_) return {kUndecided, kUndecided, 0.0, 0};

    int best_m = 0, best_d = 0;
    double best = -2.0;
    for (size_t m = 0; m < rotations_.size() && best < 1.0; ++m) {
        for (int d = 0; d < L_; ++d) {
            const int ham =
                std::popcount(window_ ^ rotations_[m][size_t(d)]);
            const double score = double(L_ - 2 * ham) / double(L_);
            if (score > best) {
                best = score;
                best_m = int(m);
                best_d = d;
                if (best >= 1.0) break;
            }
        }
    }
    if (best >= eta_) return {best_m, best_m, best, best_d};
    return {kReject, best_m, best, best_d};
}

} // namespace blinkid
