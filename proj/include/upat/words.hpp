#pragma once

// Alphabets, words, morphic permutations, morphisms and the classical
// repetition scanners (squares, cubes, overlaps, 4-powers).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace upat {

using Letter = std::uint8_t;

// Largest alphabet a Letter can index.
inline constexpr std::size_t kMaxAlphabet = 256;

// Alphabets up to this size render as one digit per letter.
inline constexpr std::size_t kMaxDigitAlphabet = 10;

class Word {
 public:
  Word() = default;

  explicit Word(std::size_t alphabet_size) : alphabet_size_(alphabet_size) {
    check_alphabet(alphabet_size);
  }

  Word(std::vector<Letter> letters, std::size_t alphabet_size)
      : letters_(std::move(letters)), alphabet_size_(alphabet_size) {
    check_alphabet(alphabet_size);
    for (Letter a : letters_) {
      if (a >= alphabet_size_) {
        throw std::invalid_argument("letter " + std::to_string(a) +
                                    " outside alphabet of size " +
                                    std::to_string(alphabet_size_));
      }
    }
  }

  /// Parses either a digit string ("0110") or, for larger alphabets, a
  /// comma-delimited list ("10,3,0"). Digit strings are rejected when the
  /// alphabet has more than ten letters.
  static Word parse(std::string_view text, std::size_t alphabet_size) {
    std::vector<Letter> letters;
    if (text.find(',') != std::string_view::npos) {
      std::size_t pos = 0;
      while (pos <= text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string_view::npos) next = text.size();
        std::string_view item = text.substr(pos, next - pos);
        if (item.empty()) throw std::invalid_argument("empty item in delimited word");
        unsigned value = 0;
        for (char c : item) {
          if (c < '0' || c > '9') {
            throw std::invalid_argument("non-numeric letter in delimited word");
          }
          value = value * 10 + static_cast<unsigned>(c - '0');
          if (value >= kMaxAlphabet) throw std::invalid_argument("letter too large");
        }
        letters.push_back(static_cast<Letter>(value));
        pos = next + 1;
      }
    } else {
      if (alphabet_size > kMaxDigitAlphabet) {
        throw std::invalid_argument(
            "digit words need an alphabet of at most 10 letters; use the "
            "comma-delimited form");
      }
      letters.reserve(text.size());
      for (char c : text) {
        if (c < '0' || c > '9') {
          throw std::invalid_argument(std::string("invalid letter '") + c + "'");
        }
        letters.push_back(static_cast<Letter>(c - '0'));
      }
    }
    return Word(std::move(letters), alphabet_size);
  }

  std::string str() const {
    std::string out;
    if (alphabet_size_ <= kMaxDigitAlphabet) {
      out.reserve(letters_.size());
      for (Letter a : letters_) out.push_back(static_cast<char>('0' + a));
      return out;
    }
    for (std::size_t p = 0; p < letters_.size(); ++p) {
      if (p) out.push_back(',');
      out += std::to_string(letters_[p]);
    }
    return out;
  }

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  std::size_t alphabet_size() const noexcept { return alphabet_size_; }

  Letter operator[](std::size_t p) const { return letters_[p]; }
  std::span<const Letter> letters() const noexcept { return letters_; }
  auto begin() const noexcept { return letters_.begin(); }
  auto end() const noexcept { return letters_.end(); }

  Word factor(std::size_t pos, std::size_t len) const {
    if (pos > size() || len > size() - pos) throw std::out_of_range("factor outside word");
    return Word({letters_.begin() + static_cast<std::ptrdiff_t>(pos),
                 letters_.begin() + static_cast<std::ptrdiff_t>(pos + len)},
                alphabet_size_);
  }

  Word prefix(std::size_t len) const { return factor(0, std::min(len, size())); }

  bool is_prefix_of(const Word& other) const {
    return size() <= other.size() && std::equal(begin(), end(), other.begin());
  }

  void push_back(Letter a) {
    if (a >= alphabet_size_) throw std::invalid_argument("letter outside alphabet");
    letters_.push_back(a);
  }

  Word& operator+=(const Word& rhs) {
    if (rhs.alphabet_size_ != alphabet_size_) {
      throw std::invalid_argument("concatenating words over different alphabets");
    }
    letters_.insert(letters_.end(), rhs.letters_.begin(), rhs.letters_.end());
    return *this;
  }

  friend Word operator+(Word lhs, const Word& rhs) { return lhs += rhs; }

  friend bool operator==(const Word&, const Word&) = default;

 private:
  static void check_alphabet(std::size_t m) {
    if (m == 0 || m > kMaxAlphabet) throw std::invalid_argument("alphabet size out of range");
  }

  std::vector<Letter> letters_;
  std::size_t alphabet_size_ = 1;
};

/// A bijection on {0, ..., m-1}, extended letterwise to words.
class MorphicPermutation {
 public:
  explicit MorphicPermutation(std::vector<Letter> images) : images_(std::move(images)) {
    if (images_.empty() || images_.size() > kMaxAlphabet) {
      throw std::invalid_argument("permutation size out of range");
    }
    std::vector<bool> seen(images_.size(), false);
    for (Letter b : images_) {
      if (b >= images_.size() || seen[b]) {
        throw std::invalid_argument("images do not form a bijection");
      }
      seen[b] = true;
    }
  }

  static MorphicPermutation identity(std::size_t m) {
    std::vector<Letter> images(m);
    std::iota(images.begin(), images.end(), Letter{0});
    return MorphicPermutation(std::move(images));
  }

  // 0 -> 1 -> ... -> m-1 -> 0
  static MorphicPermutation rotation(std::size_t m) {
    std::vector<Letter> images(m);
    for (std::size_t a = 0; a < m; ++a) images[a] = static_cast<Letter>((a + 1) % m);
    return MorphicPermutation(std::move(images));
  }

  std::size_t size() const noexcept { return images_.size(); }
  Letter operator()(Letter a) const { return images_.at(a); }
  std::span<const Letter> images() const noexcept { return images_; }

  // (f * g)(a) = f(g(a))
  friend MorphicPermutation operator*(const MorphicPermutation& f,
                                      const MorphicPermutation& g) {
    if (f.size() != g.size()) throw std::invalid_argument("composing permutations of different size");
    std::vector<Letter> images(f.size());
    for (std::size_t a = 0; a < f.size(); ++a) images[a] = f.images_[g.images_[a]];
    return MorphicPermutation(std::move(images));
  }

  bool is_identity() const noexcept {
    for (std::size_t a = 0; a < images_.size(); ++a) {
      if (images_[a] != a) return false;
    }
    return true;
  }

  std::string str() const {
    std::string out;
    for (std::size_t a = 0; a < images_.size(); ++a) {
      if (a) out += ' ';
      out += std::to_string(a) + "->" + std::to_string(images_[a]);
    }
    return out;
  }

  friend bool operator==(const MorphicPermutation&, const MorphicPermutation&) = default;

 private:
  std::vector<Letter> images_;
};

/// Orbit length of `a` under `f`.
inline std::uint64_t orbit_length(const MorphicPermutation& f, Letter a) {
  if (a >= f.size()) throw std::invalid_argument("letter outside permutation domain");
  std::uint64_t len = 1;
  for (Letter b = f(a); b != a; b = f(b)) ++len;
  return len;
}

/// Least n > 0 with f^n = id; the lcm of the cycle lengths.
inline std::uint64_t order(const MorphicPermutation& f) {
  std::uint64_t result = 1;
  std::vector<bool> visited(f.size(), false);
  for (std::size_t a = 0; a < f.size(); ++a) {
    if (visited[a]) continue;
    std::uint64_t len = 0;
    for (Letter b = static_cast<Letter>(a); !visited[b]; b = f(b)) {
      visited[b] = true;
      ++len;
    }
    result = std::lcm(result, len);
  }
  return result;
}

/// f composed with itself n times. The exponent is reduced modulo each
/// letter's orbit length, so huge n costs nothing extra.
inline MorphicPermutation power(const MorphicPermutation& f, std::uint64_t n) {
  std::vector<Letter> images(f.size());
  std::vector<Letter> cycle;
  std::vector<bool> visited(f.size(), false);
  for (std::size_t a = 0; a < f.size(); ++a) {
    if (visited[a]) continue;
    cycle.clear();
    for (Letter b = static_cast<Letter>(a); !visited[b]; b = f(b)) {
      visited[b] = true;
      cycle.push_back(b);
    }
    const std::size_t shift = static_cast<std::size_t>(n % cycle.size());
    for (std::size_t p = 0; p < cycle.size(); ++p) {
      images[cycle[p]] = cycle[(p + shift) % cycle.size()];
    }
  }
  return MorphicPermutation(std::move(images));
}

inline Word apply(const MorphicPermutation& f, const Word& w) {
  if (w.alphabet_size() != f.size()) {
    throw std::invalid_argument("permutation and word use different alphabets");
  }
  std::vector<Letter> out(w.size());
  std::transform(w.begin(), w.end(), out.begin(), [&](Letter a) { return f(a); });
  return Word(std::move(out), w.alphabet_size());
}

class Morphism {
 public:
  /// images[a] is the image of letter a; all images share one target alphabet.
  explicit Morphism(std::vector<Word> images) : images_(std::move(images)) {
    if (images_.empty()) throw std::invalid_argument("morphism needs at least one letter");
    for (const Word& img : images_) {
      if (img.empty()) throw std::invalid_argument("morphism images must be nonempty");
      if (img.alphabet_size() != images_.front().alphabet_size()) {
        throw std::invalid_argument("morphism images use different alphabets");
      }
    }
  }

  std::size_t source_size() const noexcept { return images_.size(); }
  std::size_t target_size() const noexcept { return images_.front().alphabet_size(); }

  const Word& image(Letter a) const {
    if (a >= images_.size()) {
      throw std::invalid_argument("morphism undefined on letter " + std::to_string(a));
    }
    return images_[a];
  }

  std::span<const Word> images() const noexcept { return images_; }

  Word apply(const Word& w) const {
    Word out(target_size());
    for (Letter a : w) out += image(a);
    return out;
  }

  bool is_prolongable(Letter seed) const {
    if (seed >= images_.size() || source_size() != target_size()) return false;
    const Word& img = images_[seed];
    return img.size() >= 2 && img[0] == seed;
  }

  friend bool operator==(const Morphism&, const Morphism&) = default;

 private:
  std::vector<Word> images_;
};

/// Length-`length` prefix of the fixed point of `mu` that starts with `seed`.
inline Word fixed_point_prefix(const Morphism& mu, Letter seed, std::size_t length) {
  if (length == 0) throw std::invalid_argument("prefix length must be positive");
  if (!mu.is_prolongable(seed)) {
    throw std::invalid_argument("morphism is not prolongable on letter " + std::to_string(seed));
  }
  Word w(std::vector<Letter>{seed}, mu.target_size());
  while (w.size() < length) w = mu.apply(w);
  return w.prefix(length);
}

inline Morphism thue_morse_morphism() {
  return Morphism({Word::parse("01", 2), Word::parse("10", 2)});
}

inline Morphism ternary_thue_morphism() {
  return Morphism({Word::parse("012", 3), Word::parse("02", 3), Word::parse("1", 3)});
}

inline Word thue_morse_prefix(std::size_t length) {
  return fixed_point_prefix(thue_morse_morphism(), 0, length);
}

inline Word ternary_thue_prefix(std::size_t length) {
  return fixed_point_prefix(ternary_thue_morphism(), 0, length);
}

namespace detail {

// True iff w has a factor of period p and length at least p + min_run for
// some p >= 1, i.e. a run of min_run(p) consecutive positions q with
// w[q] == w[q + p]. O(n^2).
template <typename MinRun>
bool has_periodic_factor(std::span<const Letter> w, MinRun min_run) {
  const std::size_t n = w.size();
  for (std::size_t p = 1; p < n; ++p) {
    const std::size_t need = min_run(p);
    if (p + need > n) break;
    std::size_t run = 0;
    for (std::size_t q = 0; q + p < n; ++q) {
      run = (w[q] == w[q + p]) ? run + 1 : 0;
      if (run >= need) return true;
    }
  }
  return false;
}

}  // namespace detail

inline bool is_square_free(const Word& w) {
  return !detail::has_periodic_factor(w.letters(), [](std::size_t p) { return p; });
}

inline bool is_cube_free(const Word& w) {
  return !detail::has_periodic_factor(w.letters(), [](std::size_t p) { return 2 * p; });
}

// An overlap is a factor auaua with a nonempty, i.e. length 2p + 1 with period p.
inline bool is_overlap_free(const Word& w) {
  return !detail::has_periodic_factor(w.letters(), [](std::size_t p) { return p + 1; });
}

inline bool is_four_power_free(const Word& w) {
  return !detail::has_periodic_factor(w.letters(), [](std::size_t p) { return 3 * p; });
}

}  // namespace upat
