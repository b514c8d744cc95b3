#pragma once

// Divisibility parameters alpha_1..alpha_14 of the pattern
// x pi^i(x) pi^j(x) pi^k(x), their 4-digit equality representations, and the
// structural classifiers used by the unavoidable-set families.

#include <array>
#include <bit>
#include <initializer_list>
#include <vector>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "upat/words.hpp"

namespace upat {

struct PatternExponents {
  std::uint64_t i = 0;
  std::uint64_t j = 0;
  std::uint64_t k = 0;

  // Positive and pairwise distinct: the setting in which sigma is defined.
  bool is_generic() const noexcept {
    return i >= 1 && j >= 1 && k >= 1 && i != j && j != k && i != k;
  }

  // Exponent of the x-item at position 0..3 (position 0 is x itself).
  std::uint64_t at(std::size_t position) const noexcept {
    switch (position) {
      case 1: return i;
      case 2: return j;
      case 3: return k;
      default: return 0;
    }
  }

  friend bool operator==(const PatternExponents&, const PatternExponents&) = default;
};

/// A positive integer or infinity; infinity compares above every integer.
class AlphaValue {
 public:
  constexpr AlphaValue() = default;
  constexpr explicit AlphaValue(std::uint64_t v) : value_(v) {
    if (v == 0) throw std::invalid_argument("alpha values are positive");
  }

  static constexpr AlphaValue infinity() { return AlphaValue(); }

  constexpr bool is_finite() const noexcept { return value_ != kInf; }
  constexpr std::uint64_t value() const {
    if (!is_finite()) throw std::logic_error("value() on infinite alpha");
    return value_;
  }

  std::string str() const { return is_finite() ? std::to_string(value_) : "inf"; }

  friend constexpr auto operator<=>(const AlphaValue&, const AlphaValue&) = default;

  friend constexpr bool operator<=(const AlphaValue& a, std::uint64_t m) {
    return a.is_finite() && a.value_ <= m;
  }

 private:
  static constexpr std::uint64_t kInf = ~std::uint64_t{0};
  std::uint64_t value_ = kInf;
};

/// Canonical 4-digit equality structure: digit 0 first, each new digit is
/// one more than the largest seen so far. There are exactly 15 of them.
class EqualityPattern {
 public:
  constexpr EqualityPattern() = default;

  /// Canonicalizes any four labels by order of first occurrence.
  template <typename T>
  static constexpr EqualityPattern from_labels(const std::array<T, 4>& labels) {
    EqualityPattern p;
    std::uint8_t next = 0;
    for (std::size_t q = 0; q < 4; ++q) {
      std::size_t r = 0;
      while (r < q && !(labels[r] == labels[q])) ++r;
      p.digits_[q] = (r < q) ? p.digits_[r] : next++;
    }
    return p;
  }

  /// Equality structure of four equal-length blocks.
  static EqualityPattern of_blocks(std::span<const Letter> u, std::span<const Letter> v1,
                                   std::span<const Letter> v2, std::span<const Letter> v3) {
    const std::array<std::span<const Letter>, 4> blocks{u, v1, v2, v3};
    EqualityPattern p;
    std::uint8_t next = 0;
    for (std::size_t q = 0; q < 4; ++q) {
      std::size_t r = 0;
      while (r < q && !std::equal(blocks[r].begin(), blocks[r].end(), blocks[q].begin(),
                                  blocks[q].end())) {
        ++r;
      }
      p.digits_[q] = (r < q) ? p.digits_[r] : next++;
    }
    return p;
  }

  /// Parses "0012"; rejects strings that are not canonical.
  static EqualityPattern parse(std::string_view text) {
    if (text.size() != 4) throw std::invalid_argument("equality pattern needs 4 digits");
    std::array<std::uint8_t, 4> raw{};
    for (std::size_t q = 0; q < 4; ++q) {
      if (text[q] < '0' || text[q] > '3') throw std::invalid_argument("pattern digits are 0..3");
      raw[q] = static_cast<std::uint8_t>(text[q] - '0');
    }
    EqualityPattern p = from_labels(raw);
    if (p.digits_ != raw) {
      throw std::invalid_argument("pattern " + std::string(text) + " is not canonical");
    }
    return p;
  }

  constexpr std::uint8_t operator[](std::size_t q) const { return digits_[q]; }
  constexpr const std::array<std::uint8_t, 4>& digits() const noexcept { return digits_; }

  // Dense id in [0, 64) usable as a bit index; digits read in base 4.
  constexpr unsigned code() const noexcept {
    return digits_[1] * 16u + digits_[2] * 4u + digits_[3];
  }

  std::string str() const {
    std::string s(4, '0');
    for (std::size_t q = 0; q < 4; ++q) s[q] = static_cast<char>('0' + digits_[q]);
    return s;
  }

  friend constexpr bool operator==(const EqualityPattern&, const EqualityPattern&) = default;
  friend constexpr auto operator<=>(const EqualityPattern&, const EqualityPattern&) = default;

 private:
  std::array<std::uint8_t, 4> digits_{0, 1, 2, 3};
};

inline constexpr std::size_t kNumAlphas = 14;

namespace detail {

constexpr EqualityPattern pattern_of(std::uint8_t a, std::uint8_t b, std::uint8_t c,
                                     std::uint8_t d) {
  return EqualityPattern::from_labels(std::array<std::uint8_t, 4>{a, b, c, d});
}

}  // namespace detail

/// Table of representations, indexed by alpha index 1..14 (slot 0 unused).
inline constexpr std::array<EqualityPattern, kNumAlphas + 1> kRepresentations{
    detail::pattern_of(0, 0, 0, 0),  // unused
    detail::pattern_of(0, 1, 2, 3), detail::pattern_of(0, 0, 1, 2),
    detail::pattern_of(0, 1, 0, 2), detail::pattern_of(0, 1, 2, 1),
    detail::pattern_of(0, 1, 2, 2), detail::pattern_of(0, 0, 0, 1),
    detail::pattern_of(0, 0, 1, 0), detail::pattern_of(0, 1, 0, 0),
    detail::pattern_of(0, 1, 1, 1), detail::pattern_of(0, 0, 1, 1),
    detail::pattern_of(0, 1, 0, 1), detail::pattern_of(0, 1, 1, 0),
    detail::pattern_of(0, 1, 1, 2), detail::pattern_of(0, 1, 2, 0),
};

inline constexpr EqualityPattern kAllEqual = detail::pattern_of(0, 0, 0, 0);

inline void check_alpha_index(std::size_t a) {
  if (a < 1 || a > kNumAlphas) {
    throw std::out_of_range("alpha index " + std::to_string(a) + " outside 1..14");
  }
}

inline const EqualityPattern& representation_of(std::size_t a) {
  check_alpha_index(a);
  return kRepresentations[a];
}

/// Alpha index whose representation is p, or nullopt for 0000.
inline std::optional<std::size_t> alpha_index_of(const EqualityPattern& p) {
  for (std::size_t a = 1; a <= kNumAlphas; ++a) {
    if (kRepresentations[a] == p) return a;
  }
  return std::nullopt;
}

// The six quantities a divisibility condition can refer to.
enum class Quantity : std::uint8_t { I, J, K, IJ, IK, JK };

struct DivisibilityCondition {
  Quantity quantity;
  bool divides;  // t | q when true, t does not divide q otherwise
};

inline std::uint64_t quantity_value(Quantity q, const PatternExponents& e) {
  auto diff = [](std::uint64_t x, std::uint64_t y) { return x > y ? x - y : y - x; };
  switch (q) {
    case Quantity::I: return e.i;
    case Quantity::J: return e.j;
    case Quantity::K: return e.k;
    case Quantity::IJ: return diff(e.i, e.j);
    case Quantity::IK: return diff(e.i, e.k);
    case Quantity::JK: return diff(e.j, e.k);
  }
  return 0;
}

struct AlphaRow {
  std::array<DivisibilityCondition, 6> conditions;
  std::size_t count;
};

namespace detail {

constexpr DivisibilityCondition div(Quantity q) { return {q, true}; }
constexpr DivisibilityCondition ndiv(Quantity q) { return {q, false}; }

template <typename... C>
constexpr AlphaRow row(C... c) {
  return AlphaRow{{c...}, sizeof...(C)};
}

}  // namespace detail

/// Divisibility conditions defining each alpha_a: the least t satisfying
/// them is alpha_a. Every row is exactly "residues of 0, i, j, k modulo t
/// have the equality structure of the row's representation"; that is
/// checked against representation() by verify_alpha_table().
inline constexpr std::array<AlphaRow, kNumAlphas + 1> kAlphaRows = [] {
  using detail::div;
  using detail::ndiv;
  using detail::row;
  using Q = Quantity;
  return std::array<AlphaRow, kNumAlphas + 1>{
      row(),
      row(ndiv(Q::I), ndiv(Q::J), ndiv(Q::K), ndiv(Q::IJ), ndiv(Q::IK), ndiv(Q::JK)),  // 0123
      row(div(Q::I), ndiv(Q::J), ndiv(Q::K), ndiv(Q::JK)),                             // 0012
      row(ndiv(Q::I), div(Q::J), ndiv(Q::K), ndiv(Q::IK)),                             // 0102
      row(ndiv(Q::I), ndiv(Q::J), div(Q::IK), ndiv(Q::IJ)),                            // 0121
      row(ndiv(Q::I), ndiv(Q::J), ndiv(Q::IJ), ndiv(Q::IK), div(Q::JK)),               // 0122
      row(div(Q::I), div(Q::J), ndiv(Q::K)),                                           // 0001
      row(div(Q::I), ndiv(Q::J), div(Q::K)),                                           // 0010
      row(ndiv(Q::I), div(Q::J), div(Q::K)),                                           // 0100
      row(ndiv(Q::I), div(Q::IJ), div(Q::IK)),                                         // 0111
      row(div(Q::I), ndiv(Q::J), div(Q::JK)),                                          // 0011
      row(ndiv(Q::I), div(Q::J), div(Q::IK)),                                          // 0101
      row(ndiv(Q::I), div(Q::K), div(Q::IJ)),                                          // 0110
      row(ndiv(Q::I), ndiv(Q::K), div(Q::IJ), ndiv(Q::IK)),                            // 0112
      row(ndiv(Q::I), ndiv(Q::J), div(Q::K), ndiv(Q::IJ)),                             // 0120
  };
}();

inline bool row_holds(std::size_t a, std::uint64_t t, const PatternExponents& e) {
  const AlphaRow& r = kAlphaRows[a];
  for (std::size_t c = 0; c < r.count; ++c) {
    const bool divides = quantity_value(r.conditions[c].quantity, e) % t == 0;
    if (divides != r.conditions[c].divides) return false;
  }
  return true;
}

// Past this bound every residue pattern is constant in t, so a scan up to
// it decides whether a row is ever satisfied.
inline std::uint64_t alpha_scan_bound(const PatternExponents& e) {
  std::uint64_t bound = 0;
  for (Quantity q : {Quantity::I, Quantity::J, Quantity::K, Quantity::IJ, Quantity::IK,
                     Quantity::JK}) {
    bound = std::max(bound, quantity_value(q, e));
  }
  return bound + 1;
}

inline AlphaValue alpha(std::size_t a, const PatternExponents& e) {
  check_alpha_index(a);
  const std::uint64_t bound = alpha_scan_bound(e);
  for (std::uint64_t t = 1; t <= bound; ++t) {
    if (row_holds(a, t, e)) return AlphaValue(t);
  }
  return AlphaValue::infinity();
}

/// Equality structure of the residues of 0, i, j, k modulo t.
inline EqualityPattern representation(std::uint64_t t, const PatternExponents& e) {
  if (t == 0) throw std::invalid_argument("modulus must be positive");
  return EqualityPattern::from_labels(
      std::array<std::uint64_t, 4>{0, e.i % t, e.j % t, e.k % t});
}

struct AlphaProfile {
  PatternExponents exponents;
  std::array<AlphaValue, kNumAlphas + 1> values{};  // slot 0 unused

  const AlphaValue& operator[](std::size_t a) const {
    check_alpha_index(a);
    return values[a];
  }
  static const EqualityPattern& rep(std::size_t a) { return representation_of(a); }
};

inline AlphaProfile profile(const PatternExponents& e) {
  AlphaProfile p{e, {}};
  for (std::size_t a = 1; a <= kNumAlphas; ++a) p.values[a] = alpha(a, e);
  return p;
}

/// True iff some morphic permutation of an m-letter alphabet realizes the
/// equality structure of alpha_a for this pattern.
inline bool realizable(std::size_t a, const PatternExponents& e, std::size_t m) {
  if (m < 2) throw std::invalid_argument("alphabet size must be at least 2");
  return alpha(a, e) <= m;
}

/// Checks that each row's least solution has the row's representation, on
/// every pattern with exponents up to `max_exponent`. Returns the first
/// offending alpha index, or 0 when the table is consistent.
inline std::size_t verify_alpha_table(std::uint64_t max_exponent = 8) {
  for (std::uint64_t i = 0; i <= max_exponent; ++i) {
    for (std::uint64_t j = 0; j <= max_exponent; ++j) {
      for (std::uint64_t k = 0; k <= max_exponent; ++k) {
        const PatternExponents e{i, j, k};
        const std::uint64_t bound = alpha_scan_bound(e);
        for (std::size_t a = 1; a <= kNumAlphas; ++a) {
          for (std::uint64_t t = 1; t <= bound; ++t) {
            if (row_holds(a, t, e) != (representation(t, e) == kRepresentations[a])) return a;
          }
        }
      }
    }
  }
  return 0;
}

/// Subset of {alpha_1, ..., alpha_14}, by index.
class ParamSet {
 public:
  constexpr ParamSet() = default;
  ParamSet(std::initializer_list<std::size_t> indices) {
    for (std::size_t a : indices) insert(a);
  }

  /// Parses "1,2,4,6,7".
  static ParamSet parse(std::string_view text) {
    ParamSet s;
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t next = text.find(',', pos);
      if (next == std::string_view::npos) next = text.size();
      std::string_view item = text.substr(pos, next - pos);
      if (item.empty() || item.size() > 2) throw std::invalid_argument("bad alpha index list");
      std::size_t a = 0;
      for (char c : item) {
        if (c < '0' || c > '9') throw std::invalid_argument("bad alpha index list");
        a = a * 10 + static_cast<std::size_t>(c - '0');
      }
      s.insert(a);
      pos = next + 1;
    }
    if (s.empty()) throw std::invalid_argument("empty alpha index list");
    return s;
  }

  void insert(std::size_t a) {
    check_alpha_index(a);
    mask_ |= static_cast<std::uint16_t>(1u << a);
  }
  constexpr bool contains(std::size_t a) const noexcept {
    return a >= 1 && a <= kNumAlphas && (mask_ >> a) & 1u;
  }
  constexpr bool contains_all(const ParamSet& other) const noexcept {
    return (mask_ & other.mask_) == other.mask_;
  }
  constexpr bool intersects(const ParamSet& other) const noexcept {
    return (mask_ & other.mask_) != 0;
  }
  constexpr bool empty() const noexcept { return mask_ == 0; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(std::popcount(mask_)); }
  constexpr std::uint16_t mask() const noexcept { return mask_; }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t a = 1; a <= kNumAlphas; ++a) {
      if (contains(a)) out.push_back(a);
    }
    return out;
  }

  ParamSet operator|(const ParamSet& other) const {
    ParamSet s;
    s.mask_ = mask_ | other.mask_;
    return s;
  }

  std::string str() const {
    std::string out;
    for (std::size_t a : indices()) {
      if (!out.empty()) out += ',';
      out += std::to_string(a);
    }
    return out;
  }

  friend constexpr bool operator==(const ParamSet&, const ParamSet&) = default;
  // Orders by size, then by the sorted index sequence.
  friend bool operator<(const ParamSet& a, const ParamSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.indices() < b.indices();
  }

 private:
  std::uint16_t mask_ = 0;
};

/// Set of equality patterns, the unit the instance detector tests against.
class PatternSet {
 public:
  PatternSet() = default;
  PatternSet(std::initializer_list<EqualityPattern> patterns) {
    for (const auto& p : patterns) insert(p);
  }

  static PatternSet of(const ParamSet& params) {
    PatternSet s;
    for (std::size_t a : params.indices()) s.insert(kRepresentations[a]);
    return s;
  }

  void insert(const EqualityPattern& p) { bits_ |= std::uint64_t{1} << p.code(); }
  bool contains(const EqualityPattern& p) const noexcept { return (bits_ >> p.code()) & 1u; }
  bool empty() const noexcept { return bits_ == 0; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }
  bool contains_all(const PatternSet& other) const noexcept {
    return (bits_ & other.bits_) == other.bits_;
  }

  std::vector<EqualityPattern> patterns() const {
    std::vector<EqualityPattern> out;
    if (contains(kAllEqual)) out.push_back(kAllEqual);
    for (std::size_t a = 1; a <= kNumAlphas; ++a) {
      if (contains(kRepresentations[a])) out.push_back(kRepresentations[a]);
    }
    return out;
  }

  friend bool operator==(const PatternSet&, const PatternSet&) = default;

 private:
  std::uint64_t bits_ = 0;
};

// Structural classes of representations.

inline bool has_prefix_square(const EqualityPattern& p) {
  return p[0] == 0 && p[1] == 0 && p[2] == 1 && p[3] == 2;
}

inline bool has_suffix_square(const EqualityPattern& p) {
  return p[2] == 2 && p[3] == 2 && p[0] == 0 && p[1] == 1;
}

inline bool has_gapped_square(const EqualityPattern& p) {
  return p == detail::pattern_of(0, 1, 0, 2) || p == detail::pattern_of(0, 1, 2, 1);
}

inline bool has_two_gapped_squares(const EqualityPattern& p) {
  return p == detail::pattern_of(0, 1, 0, 1);
}

inline bool contains_cube(const EqualityPattern& p) {
  return p == detail::pattern_of(0, 0, 0, 1) || p == detail::pattern_of(0, 1, 1, 1);
}

inline bool has_two_squares(const EqualityPattern& p) {
  return p == detail::pattern_of(0, 0, 1, 1);
}

inline bool contains_gapped_cube(const EqualityPattern& p) {
  return p == detail::pattern_of(0, 0, 1, 0) || p == detail::pattern_of(0, 1, 0, 0);
}

/// p2 is p1 with one adjacent pair of positions exchanged.
inline bool is_swapped_form(const EqualityPattern& p1, const EqualityPattern& p2) {
  for (std::size_t q = 0; q + 1 < 4; ++q) {
    bool others_equal = true;
    for (std::size_t r = 0; r < 4; ++r) {
      if (r != q && r != q + 1 && p1[r] != p2[r]) others_equal = false;
    }
    if (others_equal && p1[q] == p2[q + 1] && p1[q + 1] == p2[q]) return true;
  }
  return false;
}

/// Block equalities coincide exactly with digit equalities of p.
inline bool models(const Word& u, const Word& v1, const Word& v2, const Word& v3,
                   const EqualityPattern& p) {
  if (v1.size() != u.size() || v2.size() != u.size() || v3.size() != u.size()) {
    throw std::invalid_argument("blocks must have equal length");
  }
  return EqualityPattern::of_blocks(u.letters(), v1.letters(), v2.letters(), v3.letters()) == p;
}

}  // namespace upat
