#pragma once

// Instance detection and backtracking search for long words avoiding every
// instance u f^e1(u) f^e2(u) f^e3(u) whose equality structure lies in a
// forbidden set, with f ranging over a family of morphic permutations.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "upat/params.hpp"
#include "upat/words.hpp"

namespace upat {

enum class PermModel {
  FullCycle,         // a single m-cycle
  FixOnePointCycle,  // one fixed letter, an (m-1)-cycle on the rest
  SingleCycle,       // one cycle of any length >= 2, every other letter fixed
  AllPermutations,
};

enum class ExponentMode {
  Abstract,  // any exponents e1, e2, e3 >= 1
  Fixed,     // exactly the configured (i, j, k)
};

inline std::string_view to_string(PermModel model) {
  switch (model) {
    case PermModel::FullCycle: return "cycle";
    case PermModel::FixOnePointCycle: return "fixcycle";
    case PermModel::SingleCycle: return "anycycle";
    case PermModel::AllPermutations: return "all";
  }
  return "?";
}

inline PermModel parse_perm_model(std::string_view text) {
  if (text == "cycle") return PermModel::FullCycle;
  if (text == "fixcycle") return PermModel::FixOnePointCycle;
  if (text == "anycycle") return PermModel::SingleCycle;
  if (text == "all") return PermModel::AllPermutations;
  throw std::invalid_argument("unknown permutation model '" + std::string(text) + "'");
}

inline std::string_view to_string(ExponentMode mode) {
  return mode == ExponentMode::Abstract ? "abstract" : "fixed";
}

inline ExponentMode parse_exponent_mode(std::string_view text) {
  if (text == "abstract") return ExponentMode::Abstract;
  if (text == "fixed") return ExponentMode::Fixed;
  throw std::invalid_argument("unknown exponent mode '" + std::string(text) + "'");
}

// Enumerating permutations beyond this many is not attempted.
inline constexpr std::size_t kMaxModelPermutations = 40320;

inline std::size_t model_size(PermModel model, std::size_t m) {
  auto factorial = [](std::size_t n) {
    std::size_t r = 1;
    for (std::size_t q = 2; q <= n; ++q) {
      r = (r > std::numeric_limits<std::size_t>::max() / q) ? std::numeric_limits<std::size_t>::max()
                                                             : r * q;
    }
    return r;
  };
  switch (model) {
    case PermModel::FullCycle: return factorial(m - 1);
    case PermModel::FixOnePointCycle: return m < 2 ? 0 : m * factorial(m - 2);
    case PermModel::SingleCycle: {
      // sum over cycle lengths L >= 2 of C(m, L) * (L - 1)!
      std::size_t total = 0;
      for (std::size_t len = 2; len <= m; ++len) {
        std::size_t count = 1;
        for (std::size_t q = 0; q < len; ++q) count *= (m - q);
        total += count / len;
      }
      return total;
    }
    case PermModel::AllPermutations: return factorial(m);
  }
  return 0;
}

/// Every permutation of {0..m-1} in the model, in lexicographic order of
/// image arrays.
inline std::vector<MorphicPermutation> model_permutations(PermModel model, std::size_t m) {
  if (m < 1) throw std::invalid_argument("alphabet size must be positive");
  if (model_size(model, m) > kMaxModelPermutations) {
    throw std::invalid_argument("permutation model too large to enumerate for m = " +
                                std::to_string(m));
  }
  std::vector<MorphicPermutation> out;
  std::vector<Letter> images(m);
  for (std::size_t a = 0; a < m; ++a) images[a] = static_cast<Letter>(a);
  do {
    MorphicPermutation f(images);
    bool keep = true;
    if (model == PermModel::SingleCycle) {
      std::size_t moved = 0;
      std::size_t cycle_len = 0;
      for (std::size_t a = 0; a < m; ++a) {
        if (images[a] != a) {
          ++moved;
          cycle_len = orbit_length(f, static_cast<Letter>(a));
        }
      }
      keep = moved >= 2 && cycle_len == moved;
    } else if (model != PermModel::AllPermutations) {
      std::size_t fixed = 0;
      for (std::size_t a = 0; a < m; ++a) fixed += (images[a] == a);
      const std::size_t cycle_len = model == PermModel::FullCycle ? m : m - 1;
      const std::size_t want_fixed = m - cycle_len;
      keep = fixed == want_fixed;
      if (keep) {
        for (std::size_t a = 0; a < m && keep; ++a) {
          if (images[a] != a) keep = orbit_length(f, static_cast<Letter>(a)) == cycle_len;
        }
      }
      // m = 2 with one fixed point leaves the identity.
      if (model == PermModel::FixOnePointCycle && m == 2) keep = f.is_identity();
    }
    if (keep) out.push_back(std::move(f));
  } while (std::next_permutation(images.begin(), images.end()));
  return out;
}

struct SearchConfig {
  std::size_t alphabet_size = 4;
  PatternSet forbidden;
  PermModel model = PermModel::FullCycle;
  ExponentMode mode = ExponentMode::Abstract;
  PatternExponents exponents{};  // used in Fixed mode
  std::size_t length_cap = 100;
  std::uint64_t node_budget = 100'000'000;
  // Longest block length the detector examines; 0 means no limit.
  std::size_t max_block = 0;
  // Fix the first letter to 0 and introduce new letters in increasing order.
  bool symmetry_pruning = true;
  std::size_t threads = 1;
  // Depth at which the search tree is cut into independent subtree tasks.
  std::size_t split_depth = 8;

  void validate() const {
    if (alphabet_size < 2 || alphabet_size > kMaxAlphabet) {
      throw std::invalid_argument("alphabet size must lie in 2..256");
    }
    if (forbidden.empty()) throw std::invalid_argument("forbidden pattern set is empty");
    if (length_cap == 0 || node_budget == 0) throw std::invalid_argument("caps must be positive");
    if (threads == 0) throw std::invalid_argument("thread count must be positive");
  }
};

/// Structures forbidden when searching for words that avoid the parameters
/// in `s`. A 4-power uuuu is an instance under every permutation (take the
/// exponents equal to the order), so it is included unless asked otherwise.
inline PatternSet avoidance_patterns(const ParamSet& s, bool include_four_powers = true) {
  PatternSet out = PatternSet::of(s);
  if (include_four_powers) out.insert(kAllEqual);
  return out;
}

struct InstanceWitness {
  std::size_t start = 0;
  std::size_t block_length = 0;
  std::array<Word, 4> blocks;
  MorphicPermutation permutation = MorphicPermutation::identity(1);
  std::array<std::uint64_t, 3> exponents{};
  EqualityPattern pattern;
};

/// Re-checks a witness against the word it was found in: blocks
/// reconstruct the factor, each block is the stated power of the
/// permutation applied to the first, and the equality structure matches.
inline bool witness_is_valid(const InstanceWitness& wit, const Word& w) {
  const std::size_t b = wit.block_length;
  if (b == 0 || wit.start + 4 * b > w.size()) return false;
  for (std::size_t l = 0; l < 4; ++l) {
    if (!(wit.blocks[l] == w.factor(wit.start + l * b, b))) return false;
  }
  for (std::size_t l = 0; l < 3; ++l) {
    if (!(apply(power(wit.permutation, wit.exponents[l]), wit.blocks[0]) == wit.blocks[l + 1])) {
      return false;
    }
  }
  return models(wit.blocks[0], wit.blocks[1], wit.blocks[2], wit.blocks[3], wit.pattern);
}

/// Precomputed permutation powers for one configuration; checks whether a
/// given block split is a forbidden instance.
class Detector {
 public:
  explicit Detector(const SearchConfig& config)
      : m_(config.alphabet_size),
        forbidden_(config.forbidden),
        mode_(config.mode),
        exponents_(config.exponents),
        max_block_(config.max_block) {
    if (m_ < 2) throw std::invalid_argument("alphabet size must lie in 2..256");
    for (MorphicPermutation& f : model_permutations(config.model, m_)) {
      Entry e{std::move(f), 0, {}};
      e.order = order(e.perm);
      e.powers.resize((e.order + 1) * m_);
      for (std::size_t a = 0; a < m_; ++a) e.powers[a] = static_cast<Letter>(a);
      for (std::size_t p = 1; p <= e.order; ++p) {
        for (std::size_t a = 0; a < m_; ++a) {
          e.powers[p * m_ + a] = e.perm(e.powers[(p - 1) * m_ + a]);
        }
      }
      entries_.push_back(std::move(e));
    }
  }

  std::size_t alphabet_size() const noexcept { return m_; }

  struct Hit {
    std::size_t perm_index;
    std::array<std::uint64_t, 3> exponents;
    EqualityPattern pattern;
  };

  /// Tests the four blocks of length b ending at `end`.
  std::optional<Hit> check(std::span<const Letter> w, std::size_t end, std::size_t b) const {
    const std::size_t start = end - 4 * b;
    const auto u = w.subspan(start, b);
    const std::array<std::span<const Letter>, 3> v{w.subspan(start + b, b),
                                                   w.subspan(start + 2 * b, b),
                                                   w.subspan(start + 3 * b, b)};
    const EqualityPattern pattern = EqualityPattern::of_blocks(u, v[0], v[1], v[2]);
    if (!forbidden_.contains(pattern)) return std::nullopt;
    // Each u -> v_l must be an injective letter map before any power can fit.
    for (const auto& vl : v) {
      std::array<std::int16_t, kMaxAlphabet> fwd;
      std::array<std::int16_t, kMaxAlphabet> back;
      std::fill_n(fwd.begin(), m_, std::int16_t{-1});
      std::fill_n(back.begin(), m_, std::int16_t{-1});
      for (std::size_t p = 0; p < b; ++p) {
        if (fwd[u[p]] == -1 && back[vl[p]] == -1) {
          fwd[u[p]] = vl[p];
          back[vl[p]] = u[p];
        } else if (fwd[u[p]] != vl[p] || back[vl[p]] != u[p]) {
          return std::nullopt;
        }
      }
    }
    for (std::size_t idx = 0; idx < entries_.size(); ++idx) {
      const Entry& e = entries_[idx];
      Hit hit{idx, {}, pattern};
      bool ok = true;
      for (std::size_t l = 0; l < 3 && ok; ++l) {
        if (mode_ == ExponentMode::Fixed) {
          const std::uint64_t ex = exponents_.at(l + 1);
          ok = maps_to(e, ex % e.order, u, v[l]);
          hit.exponents[l] = ex;
        } else {
          ok = false;
          for (std::uint64_t ex = 1; ex <= e.order && !ok; ++ex) {
            if (maps_to(e, ex, u, v[l])) {
              ok = true;
              hit.exponents[l] = ex;
            }
          }
        }
      }
      if (ok) return hit;
    }
    return std::nullopt;
  }

  /// True iff some split of a suffix of w into four blocks is an instance.
  bool suffix_fires(std::span<const Letter> w) const {
    const std::size_t limit = block_limit(w.size());
    for (std::size_t b = 1; b <= limit; ++b) {
      if (check(w, w.size(), b)) return true;
    }
    return false;
  }

  std::optional<InstanceWitness> suffix_instance(const Word& w) const {
    return instance_ending_at(w, w.size());
  }

  std::optional<InstanceWitness> instance_ending_at(const Word& w, std::size_t end) const {
    if (w.alphabet_size() != m_) throw std::invalid_argument("word alphabet differs from config");
    const auto letters = w.letters().first(end);
    const std::size_t limit = block_limit(end);
    for (std::size_t b = 1; b <= limit; ++b) {
      if (auto hit = check(letters, end, b)) return make_witness(w, end, b, *hit);
    }
    return std::nullopt;
  }

  /// First instance by end position, then block length; ends in [from, to).
  std::optional<InstanceWitness> first_instance(const Word& w, std::size_t from,
                                                std::size_t to) const {
    for (std::size_t end = std::max<std::size_t>(from, 4); end < to && end <= w.size(); ++end) {
      if (auto wit = instance_ending_at(w, end)) return wit;
    }
    return std::nullopt;
  }

 private:
  struct Entry {
    MorphicPermutation perm;
    std::uint64_t order;
    std::vector<Letter> powers;  // powers[p * m + a] = f^p(a), p in [0, order]
  };

  std::size_t block_limit(std::size_t len) const noexcept {
    const std::size_t limit = len / 4;
    return max_block_ ? std::min(limit, max_block_) : limit;
  }

  bool maps_to(const Entry& e, std::uint64_t ex, std::span<const Letter> u,
               std::span<const Letter> v) const {
    const Letter* row = e.powers.data() + ex * m_;
    for (std::size_t p = 0; p < u.size(); ++p) {
      if (row[u[p]] != v[p]) return false;
    }
    return true;
  }

  InstanceWitness make_witness(const Word& w, std::size_t end, std::size_t b,
                               const Hit& hit) const {
    InstanceWitness wit;
    wit.start = end - 4 * b;
    wit.block_length = b;
    for (std::size_t l = 0; l < 4; ++l) wit.blocks[l] = w.factor(wit.start + l * b, b);
    wit.permutation = entries_[hit.perm_index].perm;
    wit.exponents = hit.exponents;
    wit.pattern = hit.pattern;
    return wit;
  }

  std::size_t m_;
  PatternSet forbidden_;
  ExponentMode mode_;
  PatternExponents exponents_;
  std::size_t max_block_;
  std::vector<Entry> entries_;
};

inline std::optional<InstanceWitness> suffix_instance(const Word& w, const SearchConfig& config) {
  return Detector(config).suffix_instance(w);
}

/// First instance anywhere in w (smallest end position, then block length).
inline std::optional<InstanceWitness> verify_word_avoids(const Word& w, const SearchConfig& config) {
  return Detector(config).first_instance(w, 4, w.size() + 1);
}

struct SearchResult {
  std::size_t max_length = 0;
  Word witness;
  bool exhausted = false;    // tree fully explored within the node budget
  bool reached_cap = false;  // an avoiding word of length_cap exists
  std::uint64_t nodes_visited = 0;
};

using ProgressCallback = std::function<void(std::uint64_t nodes, std::size_t best)>;

namespace detail {

struct SubtreeOutcome {
  std::size_t best_len = 0;
  std::vector<Letter> best;
  std::uint64_t nodes = 0;
  bool budget_hit = false;
  bool reached_cap = false;
  bool cancelled = false;
};

class Backtracker {
 public:
  Backtracker(const SearchConfig& config, const Detector& detector,
              std::atomic<std::uint64_t>& nodes, const ProgressCallback& progress)
      : config_(config), detector_(detector), nodes_(nodes), progress_(progress) {}

  // Explores all avoiding extensions of `prefix` up to depth `depth_limit`.
  // Words of exactly depth_limit are reported to `on_leaf` and not expanded
  // further when the limit is below the length cap.
  template <typename Leaf, typename Stop>
  SubtreeOutcome explore(std::vector<Letter> prefix, std::size_t depth_limit, Leaf&& on_leaf,
                         Stop&& should_stop) {
    SubtreeOutcome out;
    word_ = std::move(prefix);
    out.best_len = word_.size();
    out.best = word_;
    if (word_.size() >= depth_limit) {
      on_leaf(word_);
      return out;
    }
    const std::size_t base = word_.size();
    std::vector<std::uint8_t> next_choice;  // per depth above base
    std::vector<std::uint8_t> used_before;  // letters in use at that depth
    next_choice.push_back(0);
    used_before.push_back(letters_in_use(word_));
    while (!next_choice.empty()) {
      const std::size_t depth = base + next_choice.size() - 1;  // length before extending
      const std::size_t in_use = used_before.back();
      const std::size_t limit = config_.symmetry_pruning
                                    ? std::min(config_.alphabet_size, in_use + 1)
                                    : config_.alphabet_size;
      if (next_choice.back() >= limit) {
        next_choice.pop_back();
        used_before.pop_back();
        if (!next_choice.empty()) word_.pop_back();
        continue;
      }
      const Letter a = next_choice.back()++;
      word_.push_back(a);
      const std::uint64_t visited = nodes_.fetch_add(1, std::memory_order_relaxed) + 1;
      ++out.nodes;
      if (progress_ && (visited & 0xFFFFF) == 0) progress_(visited, out.best_len);
      if (visited > config_.node_budget) {
        out.budget_hit = true;
        return out;
      }
      if ((out.nodes & 0x3FF) == 0 && should_stop()) {
        out.cancelled = true;
        return out;
      }
      if (detector_.suffix_fires(word_)) {
        word_.pop_back();
        continue;
      }
      const std::size_t len = depth + 1;
      if (len > out.best_len) {
        out.best_len = len;
        out.best = word_;
      }
      if (len >= config_.length_cap) {
        out.reached_cap = true;
        return out;
      }
      if (len >= depth_limit) {
        on_leaf(word_);
        word_.pop_back();
        continue;
      }
      next_choice.push_back(0);
      used_before.push_back(static_cast<std::uint8_t>(std::max<std::size_t>(in_use, a + 1u)));
    }
    return out;
  }

 private:
  static std::uint8_t letters_in_use(const std::vector<Letter>& w) {
    std::size_t n = 0;
    for (Letter a : w) n = std::max<std::size_t>(n, a + 1u);
    return static_cast<std::uint8_t>(n);
  }

  const SearchConfig& config_;
  const Detector& detector_;
  std::atomic<std::uint64_t>& nodes_;
  const ProgressCallback& progress_;
  std::vector<Letter> word_;
};

}  // namespace detail

/// Depth-first search for the longest word avoiding every forbidden
/// instance. With symmetry pruning the first letter is 0 and each new
/// letter is the smallest unused one; candidates are tried in increasing
/// order, so the reported witness is the lexicographically first word of
/// maximal length. Results do not depend on the thread count.
inline SearchResult longest_avoiding_word(const SearchConfig& config,
                                          const ProgressCallback& progress = {}) {
  config.validate();
  const Detector detector(config);
  std::atomic<std::uint64_t> nodes{0};
  const std::size_t m = config.alphabet_size;

  auto finish = [&](const detail::SubtreeOutcome& o) {
    SearchResult r;
    r.max_length = o.best_len;
    r.witness = Word(o.best, m);
    r.exhausted = !o.budget_hit;
    r.reached_cap = o.reached_cap;
    r.nodes_visited = std::min(nodes.load(), config.node_budget);
    return r;
  };

  if (config.threads <= 1) {
    detail::Backtracker bt(config, detector, nodes, progress);
    return finish(bt.explore({}, config.length_cap, [](const auto&) {}, [] { return false; }));
  }

  // Collect the frontier at split_depth, then search each subtree.
  std::vector<std::vector<Letter>> frontier;
  detail::Backtracker splitter(config, detector, nodes, progress);
  const std::size_t split = std::max<std::size_t>(1, std::min(config.split_depth, config.length_cap));
  detail::SubtreeOutcome shallow = splitter.explore(
      {}, split, [&](const std::vector<Letter>& w) { frontier.push_back(w); },
      [] { return false; });
  if (shallow.budget_hit || shallow.reached_cap || frontier.empty()) return finish(shallow);

  std::vector<detail::SubtreeOutcome> outcomes(frontier.size());
  std::atomic<std::size_t> next_task{0};
  std::atomic<std::size_t> first_capped{std::numeric_limits<std::size_t>::max()};
  std::atomic<bool> budget_hit{false};
  auto worker = [&] {
    detail::Backtracker bt(config, detector, nodes, progress);
    for (std::size_t t = next_task++; t < frontier.size(); t = next_task++) {
      if (budget_hit.load() || t > first_capped.load()) {
        outcomes[t].cancelled = true;
        continue;
      }
      outcomes[t] = bt.explore(
          frontier[t], config.length_cap, [](const auto&) {},
          [&] { return budget_hit.load() || t > first_capped.load(); });
      if (outcomes[t].budget_hit) budget_hit = true;
      if (outcomes[t].reached_cap) {
        std::size_t cur = first_capped.load();
        while (t < cur && !first_capped.compare_exchange_weak(cur, t)) {
        }
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t n = 0; n < config.threads; ++n) pool.emplace_back(worker);
  pool.clear();

  detail::SubtreeOutcome merged;
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    const auto& o = outcomes[t];
    if (o.budget_hit) merged.budget_hit = true;
    if (o.cancelled) continue;
    if (o.best_len > merged.best_len) {
      merged.best_len = o.best_len;
      merged.best = o.best;
    }
    if (o.reached_cap) {
      merged.reached_cap = true;
      break;
    }
  }
  return finish(merged);
}

}  // namespace upat
