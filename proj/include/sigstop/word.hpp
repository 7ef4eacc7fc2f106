#pragma once

#include <cstdint>
#include <compare>
#include <stdexcept>
#include <string>

namespace sigstop {

// A word over the alphabet {1,...,m}, m <= 15, packed 4 bits per letter.
// Letter 1 is reserved for the running-time component of augmented paths.
// Maximum length 15, which bounds the usable truncation level.
class Word {
 public:
  static constexpr int kMaxLen = 15;

  constexpr Word() = default;

  Word(std::initializer_list<int> letters) {
    for (int l : letters) *this = appended(l);
  }

  int size() const { return static_cast<int>(len_); }
  bool empty() const { return len_ == 0; }

  // 1-based letter values, position 0 = leftmost.
  int letter(int pos) const {
    return static_cast<int>((bits_ >> (4 * (len_ - 1 - pos))) & 0xF);
  }

  Word appended(int letter) const {
    if (letter < 1 || letter > 15) throw std::domain_error("Word: letter out of range");
    if (len_ >= kMaxLen) throw std::domain_error("Word: length cap exceeded");
    Word w;
    w.len_ = len_ + 1;
    w.bits_ = (bits_ << 4) | static_cast<std::uint64_t>(letter);
    return w;
  }

  // Splits off the last letter; word must be nonempty.
  Word head() const {
    Word w;
    w.len_ = len_ - 1;
    w.bits_ = bits_ >> 4;
    return w;
  }
  int last() const { return static_cast<int>(bits_ & 0xF); }

  Word prefix(int n) const {
    Word w;
    w.len_ = static_cast<std::uint8_t>(n);
    w.bits_ = bits_ >> (4 * (len_ - n));
    return w;
  }
  Word suffix(int n) const {
    Word w;
    w.len_ = static_cast<std::uint8_t>(n);
    w.bits_ = bits_ & ((n == 16 ? ~0ull : (1ull << (4 * n)) - 1));
    return w;
  }

  Word concat(const Word& o) const {
    if (len_ + o.len_ > kMaxLen) throw std::domain_error("Word: length cap exceeded");
    Word w;
    w.len_ = static_cast<std::uint8_t>(len_ + o.len_);
    w.bits_ = (bits_ << (4 * o.len_)) | o.bits_;
    return w;
  }

  // Graded order: by length, then lexicographic.  The 4-bit packing makes the
  // raw bit compare coincide with lexicographic order within a fixed length.
  friend auto operator<=>(const Word& a, const Word& b) {
    if (a.len_ != b.len_) return a.len_ <=> b.len_;
    return a.bits_ <=> b.bits_;
  }
  friend bool operator==(const Word&, const Word&) = default;

  // Dense graded-lex index of the word within width-m enumeration.
  std::size_t dense_index(int m) const {
    std::size_t off = level_offset(m, len_);
    std::size_t digits = 0;
    for (int i = 0; i < len_; ++i) digits = digits * m + (letter(i) - 1);
    return off + digits;
  }

  // Offset of the level-n block: 0, 1, 1+m, 1+m+m^2, ...
  static std::size_t level_offset(int m, int n) {
    std::size_t off = 0, p = 1;
    for (int k = 0; k < n; ++k) { off += p; p *= m; }
    return off;
  }

  static Word from_dense_index(int m, std::size_t idx) {
    int n = 0;
    while (level_offset(m, n + 1) <= idx) ++n;
    std::size_t digits = idx - level_offset(m, n);
    Word w;
    w.len_ = static_cast<std::uint8_t>(n);
    std::uint64_t bits = 0;
    for (int i = 0; i < n; ++i) {
      bits |= ((digits % m) + 1) << (4 * i);
      digits /= m;
    }
    w.bits_ = bits;
    return w;
  }

  std::string str() const {
    if (len_ == 0) return "e";  // empty word
    std::string s;
    for (int i = 0; i < size(); ++i) s += std::to_string(letter(i));
    return s;
  }

  std::uint64_t packed() const { return (static_cast<std::uint64_t>(len_) << 60) | bits_; }

 private:
  std::uint64_t bits_ = 0;
  std::uint8_t len_ = 0;
};

}  // namespace sigstop
