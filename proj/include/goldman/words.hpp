#pragma once

// Free-group words over the standard surface-group generators
// a1, b1, ..., ag, bg. Only free reduction is performed here; equality as
// group elements is decided downstream by matrix fingerprints.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace goldman {

struct Letter {
  std::uint8_t generator = 0;  // 0 = a1, 1 = b1, 2 = a2, ...
  std::int8_t sign = 1;        // +1 or -1

  /// Position in the alphabet: a1, a1^-1, b1, b1^-1, ...
  constexpr int ordinal() const { return 2 * generator + (sign < 0 ? 1 : 0); }
  static constexpr Letter from_ordinal(int ord) {
    return {static_cast<std::uint8_t>(ord / 2), static_cast<std::int8_t>(ord % 2 ? -1 : 1)};
  }
  constexpr Letter inverse() const { return {generator, static_cast<std::int8_t>(-sign)}; }
  constexpr bool cancels(Letter other) const {
    return generator == other.generator && sign == -other.sign;
  }
  friend constexpr bool operator==(Letter, Letter) = default;
};

/// Packed form of a word, ordered exactly like (length, lexicographic).
/// Bits 60..63 hold the length, letters follow MSB-first in 4-bit slots.
using WordCode = std::uint64_t;

inline constexpr int kMaxCodedLength = 14;

class Word {
 public:
  Word() = default;

  /// Reduces on construction.
  explicit Word(std::span<const Letter> raw);
  Word(std::initializer_list<Letter> raw) : Word(std::span<const Letter>(raw.begin(), raw.size())) {}

  static Word from_code(WordCode code);
  /// Parses "a1B1a2" style text (capital = inverse); "e" or "" is the empty word.
  static Word parse(std::string_view text);

  std::span<const Letter> letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const Letter& operator[](std::size_t i) const { return letters_[i]; }

  WordCode code() const;
  std::string str() const;

  friend Word operator*(const Word& lhs, const Word& rhs);
  friend bool operator==(const Word&, const Word&) = default;
  /// (length, lexicographic) order.
  friend bool operator<(const Word& lhs, const Word& rhs) { return lhs.code() < rhs.code(); }

 private:
  std::vector<Letter> letters_;
};

Word reduce(std::span<const Letter> raw);
Word inverse(const Word& w);
Word commutator(const Word& u, const Word& v);
Word generator_word(int index, int sign = 1);

inline Letter letter_a(int i, int sign = 1) {
  return {static_cast<std::uint8_t>(2 * (i - 1)), static_cast<std::int8_t>(sign)};
}
inline Letter letter_b(int i, int sign = 1) {
  return {static_cast<std::uint8_t>(2 * (i - 1) + 1), static_cast<std::int8_t>(sign)};
}

/// Product of commutators [a1,b1]...[ag,bg].
Word surface_relator(int genus);

inline int word_length(WordCode code) { return static_cast<int>(code >> 60); }

/// Number of freely reduced words of length <= max_len over 2g generators.
/// Throws std::overflow_error when the count does not fit in 64 bits.
std::uint64_t word_count(int genus, int max_len);

/// Deterministic stream of reduced words in (length, lexicographic) order.
class WordEnumerator {
 public:
  WordEnumerator(int genus, int max_len);

  std::optional<Word> next();

 private:
  bool advance();
  void reset_tail(std::size_t from);

  int alphabet_;
  int max_len_;
  int length_ = 0;
  bool started_ = false;
  bool done_ = false;
  std::vector<int> ordinals_;
};

std::vector<Word> enumerate_words(int genus, int max_len);

/// Depth-first walk over reduced words whose first letter is `first_ordinal`,
/// up to `max_len`. The visitor sees each word once (prefix order) together
/// with its last letter ordinal; returning false prunes the subtree.
void walk_words_with_prefix(int genus, int max_len, int first_ordinal,
                            const std::function<bool(WordCode, int)>& visit);

}  // namespace goldman
