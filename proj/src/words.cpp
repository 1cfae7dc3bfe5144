#include "goldman/words.hpp"

#include <cctype>
#include <limits>

namespace goldman {

namespace {

constexpr WordCode append_code(WordCode code, int ordinal) {
  const int len = static_cast<int>(code >> 60);
  const int shift = 56 - 4 * len;
  return ((static_cast<WordCode>(len + 1)) << 60) |
         (code & ((WordCode{1} << 60) - 1)) |
         (static_cast<WordCode>(ordinal) << shift);
}

void walk(int alphabet, int max_len, WordCode code, int last,
          const std::function<bool(WordCode, int)>& visit) {
  if (!visit(code, last)) return;
  if (word_length(code) >= max_len) return;
  for (int ord = 0; ord < alphabet; ++ord) {
    if ((ord ^ 1) == last) continue;
    walk(alphabet, max_len, append_code(code, ord), ord, visit);
  }
}

}  // namespace

Word::Word(std::span<const Letter> raw) {
  letters_.reserve(raw.size());
  for (const Letter& l : raw) {
    if (l.sign != 1 && l.sign != -1) throw std::invalid_argument("letter sign must be +1 or -1");
    if (!letters_.empty() && letters_.back().cancels(l)) {
      letters_.pop_back();
    } else {
      letters_.push_back(l);
    }
  }
}

Word Word::from_code(WordCode code) {
  const int len = word_length(code);
  Word w;
  w.letters_.reserve(len);
  for (int i = 0; i < len; ++i) {
    const int ord = static_cast<int>((code >> (56 - 4 * i)) & 0xF);
    w.letters_.push_back(Letter::from_ordinal(ord));
  }
  return w;
}

WordCode Word::code() const {
  if (letters_.size() > static_cast<std::size_t>(kMaxCodedLength)) {
    throw std::length_error("word too long to encode");
  }
  WordCode c = 0;
  for (const Letter& l : letters_) {
    if (l.ordinal() > 15) throw std::length_error("alphabet too large to encode");
    c = append_code(c, l.ordinal());
  }
  return c;
}

std::string Word::str() const {
  if (letters_.empty()) return "e";
  std::string out;
  for (const Letter& l : letters_) {
    const bool is_a = l.generator % 2 == 0;
    char c = is_a ? 'a' : 'b';
    if (l.sign < 0) c = static_cast<char>(std::toupper(c));
    out += c;
    out += std::to_string(l.generator / 2 + 1);
  }
  return out;
}

Word Word::parse(std::string_view text) {
  std::vector<Letter> raw;
  if (text == "e") return Word{};
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i++];
    const char lower = static_cast<char>(std::tolower(c));
    if (lower != 'a' && lower != 'b') throw std::invalid_argument("bad letter in word: " + std::string(text));
    std::size_t j = i;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j == i) throw std::invalid_argument("missing generator index in word: " + std::string(text));
    const int idx = std::stoi(std::string(text.substr(i, j - i)));
    if (idx < 1) throw std::invalid_argument("generator index must be >= 1");
    i = j;
    const int sign = std::isupper(static_cast<unsigned char>(c)) ? -1 : 1;
    raw.push_back(lower == 'a' ? letter_a(idx, sign) : letter_b(idx, sign));
  }
  return Word(raw);
}

Word operator*(const Word& lhs, const Word& rhs) {
  std::vector<Letter> raw(lhs.letters_);
  raw.insert(raw.end(), rhs.letters_.begin(), rhs.letters_.end());
  return Word(raw);
}

Word reduce(std::span<const Letter> raw) { return Word(raw); }

Word inverse(const Word& w) {
  std::vector<Letter> raw;
  raw.reserve(w.size());
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) raw.push_back(it->inverse());
  return Word(raw);
}

Word commutator(const Word& u, const Word& v) { return u * v * inverse(u) * inverse(v); }

Word generator_word(int index, int sign) {
  return Word{Letter{static_cast<std::uint8_t>(index), static_cast<std::int8_t>(sign)}};
}

Word surface_relator(int genus) {
  Word r;
  for (int i = 1; i <= genus; ++i) {
    r = r * commutator(Word{letter_a(i)}, Word{letter_b(i)});
  }
  return r;
}

std::uint64_t word_count(int genus, int max_len) {
  if (genus < 1) throw std::invalid_argument("genus must be positive");
  if (max_len < 0) throw std::invalid_argument("max_len must be non-negative");
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t first = 4u * static_cast<std::uint64_t>(genus);
  const std::uint64_t branch = first - 1;
  std::uint64_t total = 1;
  std::uint64_t layer = first;
  for (int k = 1; k <= max_len; ++k) {
    if (total > kMax - layer) throw std::overflow_error("word count overflows 64 bits");
    total += layer;
    if (k < max_len) {
      if (layer > kMax / branch) throw std::overflow_error("word count overflows 64 bits");
      layer *= branch;
    }
  }
  return total;
}

WordEnumerator::WordEnumerator(int genus, int max_len) : alphabet_(4 * genus), max_len_(max_len) {
  if (genus < 1) throw std::invalid_argument("genus must be positive");
  if (max_len < 0) throw std::invalid_argument("max_len must be non-negative");
  word_count(genus, max_len);  // explicit failure on overflow
}

void WordEnumerator::reset_tail(std::size_t from) {
  for (std::size_t i = from; i < ordinals_.size(); ++i) {
    int ord = 0;
    if (i > 0 && (ordinals_[i - 1] ^ 1) == ord) ++ord;
    ordinals_[i] = ord;
  }
}

bool WordEnumerator::advance() {
  for (std::size_t pos = ordinals_.size(); pos-- > 0;) {
    int ord = ordinals_[pos] + 1;
    if (pos > 0 && (ordinals_[pos - 1] ^ 1) == ord) ++ord;
    if (ord < alphabet_) {
      ordinals_[pos] = ord;
      reset_tail(pos + 1);
      return true;
    }
  }
  return false;
}

std::optional<Word> WordEnumerator::next() {
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
  } else if (!advance()) {
    if (length_ >= max_len_) {
      done_ = true;
      return std::nullopt;
    }
    ++length_;
    ordinals_.assign(length_, 0);
    reset_tail(0);
  }
  std::vector<Letter> letters;
  letters.reserve(ordinals_.size());
  for (int ord : ordinals_) letters.push_back(Letter::from_ordinal(ord));
  return Word(letters);
}

std::vector<Word> enumerate_words(int genus, int max_len) {
  std::vector<Word> out;
  out.reserve(word_count(genus, max_len));
  WordEnumerator en(genus, max_len);
  while (auto w = en.next()) out.push_back(std::move(*w));
  return out;
}

void walk_words_with_prefix(int genus, int max_len, int first_ordinal,
                            const std::function<bool(WordCode, int)>& visit) {
  const int alphabet = 4 * genus;
  if (alphabet > 16) throw std::length_error("alphabet too large to encode");
  if (max_len > kMaxCodedLength) throw std::length_error("max_len exceeds word code capacity");
  if (max_len < 1 || first_ordinal < 0 || first_ordinal >= alphabet) return;
  walk(alphabet, max_len, append_code(0, first_ordinal), first_ordinal, visit);
}

}  // namespace goldman
