#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace blinkid {

// Circular binary sequence, 1..32 bits packed in a word. Position 0 is the
// first transmitted bit and maps to the most significant used bit, so the
// packed value reads like the bit string and integer order on canonical
// words equals lexicographic order on strings.
class BitSeq {
public:
    static constexpr int kMaxLen = 32;

    BitSeq() = default;
    BitSeq(uint32_t word, int len);

    static BitSeq from_string(const std::string& s);
    std::string str() const;

    int length() const { return len_; }
    uint32_t word() const { return word_; }

    // Bit at position i; i is taken modulo the length (negative allowed).
    int bit(int i) const;
    int weight() const;

    // Circular shift to the right by d positions (any d, normalized mod L).
    BitSeq rotated(int d) const;

    // Lexicographically smallest rotation (class representative).
    BitSeq canonical() const;

    bool operator==(const BitSeq& o) const {
        return len_ == o.len_ && word_ == o.word_;
    }
    bool operator!=(const BitSeq& o) const { return !(*this == o); }
    bool operator<(const BitSeq& o) const {
        return len_ != o.len_ ? len_ < o.len_ : word_ < o.word_;
    }

private:
    uint32_t word_ = 0;
    int len_ = 0;
};

// Plain Hamming distance; throws std::invalid_argument on length mismatch.
int hamming(const BitSeq& a, const BitSeq& b);

// min over all rotations d of |a xor rotated(b, d)|  (circular distance).
int circular_hamming(const BitSeq& a, const BitSeq& b);

// Longest circular run of `symbol` (0 or 1); capped at L for constant rows.
int max_circular_run(const BitSeq& s, int symbol);

} // namespace blinkid

template <>
struct std::hash<blinkid::BitSeq> {
    size_t operator()(const blinkid::BitSeq& s) const noexcept {
        return std::hash<uint64_t>()((uint64_t(s.length()) << 32) | s.word());
    }
};
