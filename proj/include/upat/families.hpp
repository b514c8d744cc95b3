#pragma once

// The ten rule-defined collections of minimal unavoidable parameter sets,
// the bound sigma derived from them, and the final classification of a
// pattern x pi^i(x) pi^j(x) pi^k(x). See RULES.md for how each family's
// rules are encoded.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "upat/params.hpp"

namespace upat {

inline constexpr std::size_t kNumFamilies = 10;

// Pick between min_pick and max_pick distinct options.
struct ChoiceGroup {
  std::vector<std::size_t> options;
  std::size_t min_pick = 1;
  std::size_t max_pick = 1;
};

// A set is mandatory plus one selection from each group.
struct Template {
  ParamSet mandatory;
  std::vector<ChoiceGroup> groups;
};

// If the set contains all of `when`, it must contain all of `then`.
struct Implies {
  ParamSet when;
  ParamSet then;
};

// If the set contains all of `when`, it must contain one of `then`.
struct ImpliesAny {
  ParamSet when;
  ParamSet then;
};

// The set must not contain all of `combo`.
struct Forbids {
  ParamSet combo;
};

// For every square member s (prefix or suffix square) and gapped-square
// member g that are not swapped forms of each other, each gapped-cube
// member has one digit on all positions that repeat in s or in g.
struct DigitAgreement {};

// This exact set is dropped.
struct Excludes {
  ParamSet set;
};

using Constraint = std::variant<Implies, ImpliesAny, Forbids, DigitAgreement, Excludes>;

struct FamilyRule {
  std::size_t id;
  std::vector<Template> templates;
  std::vector<Constraint> constraints;
  std::optional<std::size_t> cardinality;
};

/// Swapped form after renaming digits canonically: exchanging two adjacent
/// positions of p1 and relabelling yields p2.
inline bool is_swapped_form_up_to_renaming(const EqualityPattern& p1, const EqualityPattern& p2) {
  for (std::size_t q = 0; q + 1 < 4; ++q) {
    std::array<std::uint8_t, 4> d = p1.digits();
    std::swap(d[q], d[q + 1]);
    if (EqualityPattern::from_labels(d) == p2) return true;
  }
  return false;
}

namespace detail {

// Positions carrying a repeated digit.
inline std::uint8_t repeated_positions(const EqualityPattern& p) {
  std::uint8_t mask = 0;
  for (std::size_t q = 0; q < 4; ++q) {
    for (std::size_t r = 0; r < 4; ++r) {
      if (q != r && p[q] == p[r]) mask |= static_cast<std::uint8_t>(1u << q);
    }
  }
  return mask;
}

inline bool digits_agree_on(const EqualityPattern& p, std::uint8_t positions) {
  std::optional<std::uint8_t> digit;
  for (std::size_t q = 0; q < 4; ++q) {
    if (!((positions >> q) & 1u)) continue;
    if (digit && *digit != p[q]) return false;
    digit = p[q];
  }
  return true;
}

inline bool digit_agreement_holds(const ParamSet& set) {
  std::vector<EqualityPattern> squares, gapped, gapped_cubes;
  for (std::size_t a : set.indices()) {
    const EqualityPattern& p = kRepresentations[a];
    if (has_prefix_square(p) || has_suffix_square(p)) squares.push_back(p);
    if (has_gapped_square(p)) gapped.push_back(p);
    if (contains_gapped_cube(p)) gapped_cubes.push_back(p);
  }
  for (const auto& s : squares) {
    for (const auto& g : gapped) {
      if (is_swapped_form_up_to_renaming(s, g)) continue;
      const std::uint8_t positions = repeated_positions(s) | repeated_positions(g);
      for (const auto& c : gapped_cubes) {
        if (!digits_agree_on(c, positions)) return false;
      }
    }
  }
  return true;
}

inline bool satisfies(const ParamSet& set, const Constraint& c) {
  return std::visit(
      [&](const auto& rule) -> bool {
        using T = std::decay_t<decltype(rule)>;
        if constexpr (std::is_same_v<T, Implies>) {
          return !set.contains_all(rule.when) || set.contains_all(rule.then);
        } else if constexpr (std::is_same_v<T, ImpliesAny>) {
          return !set.contains_all(rule.when) || set.intersects(rule.then);
        } else if constexpr (std::is_same_v<T, Forbids>) {
          return !set.contains_all(rule.combo);
        } else if constexpr (std::is_same_v<T, DigitAgreement>) {
          return digit_agreement_holds(set);
        } else {
          return !(set == rule.set);
        }
      },
      c);
}

// All selections of between min and max options from a group.
inline std::vector<ParamSet> selections(const ChoiceGroup& g) {
  std::vector<ParamSet> out;
  const std::size_t n = g.options.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const auto count = static_cast<std::size_t>(std::popcount(mask));
    if (count < g.min_pick || count > g.max_pick) continue;
    ParamSet s;
    for (std::size_t q = 0; q < n; ++q) {
      if ((mask >> q) & 1u) s.insert(g.options[q]);
    }
    out.push_back(s);
  }
  return out;
}

inline std::vector<FamilyRule> build_family_rules() {
  std::vector<FamilyRule> rules;
  const ChoiceGroup square{{2, 5}};
  const ChoiceGroup gapped_square{{3, 4}};
  const ChoiceGroup gapped_cube{{7, 8}};
  const ChoiceGroup cube{{6, 9}};

  rules.push_back({1,
                   {{{1}, {square, gapped_square, {{6, 9, 10}}, gapped_cube}}},
                   {DigitAgreement{}},
                   5});
  rules.push_back({2,
                   {{{1, 12, 13}, {{{2, 3, 4}}, {{6, 7, 9}}}}},
                   {Implies{{2}, {7}}},
                   5});
  rules.push_back({3,
                   {{{1, 10}, {square, gapped_square, gapped_cube}}},
                   {DigitAgreement{}},
                   5});
  rules.push_back({4, {{{1, 2, 7, 14}, {{{6, 9, 10}}}}}, {}, 5});
  rules.push_back({5, {{{1, 12, 13, 14}, {cube}}}, {}, 5});
  rules.push_back({6,
                   {{{1, 10, 13, 14}, {{{6, 9}, 1, 2}, gapped_cube, gapped_square}}},
                   {Implies{{7}, {4}}, Forbids{{4, 8}}},
                   std::nullopt});
  rules.push_back({7,
                   {{{1, 12, 13}, {square, gapped_square, gapped_cube}}},
                   {Forbids{{2, 4}}, Forbids{{2, 7}}, DigitAgreement{}},
                   6});
  rules.push_back({8, {{{1, 3, 5, 7, 14}, {cube}}}, {}, 6});
  rules.push_back({9,
                   {
                       // the square is 2: gapped square 3, plus 12 or 13
                       {{1, 2, 3, 10, 11}, {{{12, 13}}, cube}},
                       // the square is 5: gapped square 4, plus 12 or 13
                       {{1, 4, 5, 10, 11}, {{{12, 13}}, cube}},
                       // only 10 as square: gapped square 14, plus 3 or 4 and one of 7, 8, 12, 13
                       {{1, 10, 11, 14}, {gapped_square, {{7, 8, 12, 13}}, cube}},
                   },
                   {
                       Implies{{7, 14}, {3}},
                       ImpliesAny{{4, 14}, {8, 12}},
                       Forbids{{6, 10, 12, 13, 14}},
                       Excludes{{1, 3, 6, 8, 10, 11, 14}},
                       Excludes{{1, 4, 5, 6, 10, 12, 14}},
                       Excludes{{1, 4, 6, 7, 10, 11, 14}},
                   },
                   7});
  rules.push_back({10,
                   {
                       {{1, 3, 5, 10, 11, 13, 14}, {cube}},
                       {{1, 2, 4, 10, 11, 13, 14}, {cube}},
                   },
                   {},
                   8});
  return rules;
}

}  // namespace detail

inline const std::vector<FamilyRule>& family_rules() {
  static const std::vector<FamilyRule> rules = detail::build_family_rules();
  return rules;
}

/// Expands one rule into its sets, sorted by size then indices.
inline std::vector<ParamSet> expand_rule(const FamilyRule& rule) {
  std::vector<ParamSet> out;
  for (const Template& t : rule.templates) {
    std::vector<ParamSet> partial{t.mandatory};
    for (const ChoiceGroup& g : t.groups) {
      std::vector<ParamSet> next;
      for (const ParamSet& base : partial) {
        for (const ParamSet& pick : detail::selections(g)) next.push_back(base | pick);
      }
      partial = std::move(next);
    }
    for (const ParamSet& s : partial) {
      if (rule.cardinality && s.size() != *rule.cardinality) continue;
      const bool ok = std::all_of(rule.constraints.begin(), rule.constraints.end(),
                                  [&](const Constraint& c) { return detail::satisfies(s, c); });
      if (ok) out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<ParamSet> enumerate_family(std::size_t family) {
  if (family < 1 || family > kNumFamilies) {
    throw std::out_of_range("family " + std::to_string(family) + " outside 1..10");
  }
  return expand_rule(family_rules()[family - 1]);
}

struct FamilyMember {
  std::size_t family;
  ParamSet set;
};

/// Union over all families, deduplicated; the first family listing a set
/// keeps it.
inline std::vector<FamilyMember> all_unavoidable_sets() {
  std::vector<FamilyMember> out;
  for (std::size_t f = 1; f <= kNumFamilies; ++f) {
    for (const ParamSet& s : enumerate_family(f)) {
      const bool seen = std::any_of(out.begin(), out.end(),
                                    [&](const FamilyMember& m) { return m.set == s; });
      if (!seen) out.push_back({f, s});
    }
  }
  return out;
}

inline AlphaValue max_alpha(const ParamSet& set, const AlphaProfile& prof) {
  AlphaValue best(1);
  for (std::size_t a : set.indices()) best = std::max(best, prof[a]);
  return best;
}

struct SigmaResult {
  AlphaValue sigma;
  FamilyMember witness;
};

/// Least, over all family sets, of the largest alpha in the set. Requires
/// positive, pairwise distinct exponents.
inline SigmaResult sigma(const PatternExponents& e) {
  if (!e.is_generic()) {
    throw std::domain_error("sigma needs positive, pairwise distinct exponents");
  }
  const AlphaProfile prof = profile(e);
  std::optional<SigmaResult> best;
  for (const FamilyMember& m : all_unavoidable_sets()) {
    const AlphaValue v = max_alpha(m.set, prof);
    if (!best || v < best->sigma) best = SigmaResult{v, m};
  }
  return *best;
}

enum class Degeneracy {
  None,
  AdjacentEqual,  // i = j or j = k: every instance contains a square
  OuterEqual,     // i = k
};

inline std::string_view to_string(Degeneracy d) {
  switch (d) {
    case Degeneracy::None: return "none";
    case Degeneracy::AdjacentEqual: return "i=j or j=k";
    case Degeneracy::OuterEqual: return "i=k";
  }
  return "?";
}

struct ClassificationReport {
  PatternExponents exponents;
  Degeneracy degenerate = Degeneracy::None;
  std::optional<SigmaResult> sigma;
  // Avoidable for alphabet sizes in [2, avoidable_up_to]; nullopt = unbounded.
  std::optional<std::uint64_t> avoidable_up_to;
  // Unavoidable for every alphabet size from here on, when known.
  std::optional<std::uint64_t> unavoidable_from;
  // Alphabet size whose status has to be analysed individually.
  std::optional<std::uint64_t> undetermined;
  bool needs_review = false;
  std::string note;
};

/// Alphabet-size classification. Exponents must be positive.
inline ClassificationReport classify(const PatternExponents& e) {
  if (e.i == 0 || e.j == 0 || e.k == 0) {
    throw std::domain_error("exponents must be positive");
  }
  ClassificationReport r;
  r.exponents = e;
  if (e.i == e.j || e.j == e.k) {
    r.degenerate = Degeneracy::AdjacentEqual;
    r.note = "every instance contains a square; avoidable over every alphabet";
    return r;
  }
  if (e.i == e.k) {
    r.degenerate = Degeneracy::OuterEqual;
    r.note = "contains pi^i(x) pi^j(x) pi^i(x); avoidable over every alphabet";
    return r;
  }
  r.sigma = sigma(e);
  if (!r.sigma->sigma.is_finite()) {
    r.needs_review = true;
    r.note = "sigma is infinite: no family set is realizable; avoidable at every alphabet "
             "size the evidence reaches, flagged for manual review";
    return r;
  }
  const std::uint64_t s = r.sigma->sigma.value();
  r.avoidable_up_to = s - 1;
  r.unavoidable_from = s + 1;
  r.undetermined = s;
  r.note = "alphabet size sigma has to be analysed individually";
  return r;
}

}  // namespace upat
