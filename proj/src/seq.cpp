#include "blinkid/seq.hpp"

#include <bit>
#include <stdexcept>

namespace blinkid {

namespace {
uint32_t length_mask(int len) {
    return len == 32 ? 0xffffffffu : ((1u << len) - 1u);
}
} // namespace

BitSeq::BitSeq(uint32_t word, int len) : word_(word), len_(len) {
    if (len < 1 || len > kMaxLen)
        throw std::invalid_argument("BitSeq length out of range");
    word_ &= length_mask(len);
}

BitSeq BitSeq::from_string(const std::string& s) {
    if (s.empty() || s.size() > kMaxLen)
        throw std::invalid_argument("BitSeq string length out of range");
    uint32_t w = 0;
    for (char ch : s) {
        if (ch != '0' && ch != '1')
            throw std::invalid_argument("BitSeq string must be over {0,1}");
        w = (w << 1) | uint32_t(ch - '0');
    }
    return BitSeq(w, int(s.size()));
}

std::string BitSeq::str() const {
    std::string s(size_t(len_), '0');
    for (int i = 0; i < len_; ++i)
        s[size_t(i)] = char('0' + bit(i));
    return s;
}

int BitSeq::bit(int i) const {
    int m = i % len_;
    if (m < 0) m += len_;
    return int((word_ >> (len_ - 1 - m)) & 1u);
}

int BitSeq::weight() const { return std::popcount(word_); }

BitSeq BitSeq::rotated(int d) const {
    int m = d % len_;
    if (m < 0) m += len_;
    if (m == 0) return *this;
    uint32_t w = (word_ >> m) | (word_ << (len_ - m));
    return BitSeq(w & length_mask(len_), len_);
}

BitSeq BitSeq::canonical() const {
    uint32_t best = word_;
    uint32_t cur = word_;
    const uint32_t mask = length_mask(len_);
    for (int d = 1; d < len_; ++d) {
        cur = ((cur >> 1) | (cur << (len_ - 1))) & mask;
        if (cur < best) best = cur;
    }
    return BitSeq(best, len_);
}

int hamming(const BitSeq& a, const BitSeq& b) {
    if (a.length() != b.length())
        throw std::invalid_argument("hamming: length mismatch");
    return std::popcount(a.word() ^ b.word());
}

int circular_hamming(const BitSeq& a, const BitSeq& b) {
    if (a.length() != b.length())
        throw std::invalid_argument("circular_hamming: length mismatch");
    const int L = a.length();
    const uint32_t mask = L == 32 ? 0xffffffffu : ((1u << L) - 1u);
    uint32_t rb = b.word();
    int best = std::popcount(a.word() ^ rb);
    for (int d = 1; d < L && best > 0; ++d) {
        rb = ((rb >> 1) | (rb << (L - 1))) & mask;
        int h = std::popcount(a.word() ^ rb);
        if (h < best) best = h;
    }
    return best;
}

int max_circular_run(const BitSeq& s, int symbol) {
    const int L = s.length();
    int best = 0;
    int run = 0;
    // doubled pass captures the wrap-around run; cap at L for constant rows
    for (int i = 0; i < 2 * L; ++i) {
        if (s.bit(i % L) == symbol) {
            if (++run > best) best = run;
        } else {
            run = 0;
        }
    }
    return best > L ? L : best;
}

} // namespace blinkid
