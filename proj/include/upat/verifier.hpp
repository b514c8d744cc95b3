#pragma once

// Bounded certification that prefixes of morphic words contain no forbidden
// instance, for the classical Thue words and the 5-letter coding h_alpha of
// the ternary Thue word.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "upat/params.hpp"
#include "upat/search.hpp"
#include "upat/words.hpp"

namespace upat {

/// Fixed point of `base` from `seed`, optionally passed letterwise through
/// `coding`.
struct MorphicWordSpec {
  std::string name;
  Morphism base;
  Letter seed = 0;
  std::optional<Morphism> coding;

  std::size_t alphabet_size() const {
    return coding ? coding->target_size() : base.target_size();
  }

  void validate() const {
    if (!base.is_prolongable(seed)) {
      throw std::invalid_argument("base morphism is not prolongable on its seed");
    }
    if (coding && coding->source_size() != base.target_size()) {
      throw std::invalid_argument("coding must be defined on every base letter");
    }
  }

  // Base prefix long enough that its coding covers `length` letters.
  Word base_prefix_for(std::size_t length) const {
    std::size_t min_image = 1;
    if (coding) {
      min_image = coding->images().front().size();
      for (const Word& img : coding->images()) min_image = std::min(min_image, img.size());
    }
    return fixed_point_prefix(base, seed, length / min_image + 1);
  }

  Word prefix(std::size_t length) const {
    validate();
    if (length == 0) throw std::invalid_argument("prefix length must be positive");
    const Word b = base_prefix_for(length);
    return coding ? coding->apply(b).prefix(length) : b.prefix(length);
  }
};

inline Morphism h_alpha_coding() {
  return Morphism({Word::parse("0123041203410234", 5), Word::parse("0132403124302134", 5),
                   Word::parse("0123402134201324", 5)});
}

inline MorphicWordSpec thue_morse_spec() { return {"thue-morse", thue_morse_morphism(), 0, {}}; }

inline MorphicWordSpec ternary_thue_spec() {
  return {"ternary-thue", ternary_thue_morphism(), 0, {}};
}

inline MorphicWordSpec h_alpha_spec() {
  return {"h-alpha", ternary_thue_morphism(), 0, h_alpha_coding()};
}

inline std::optional<MorphicWordSpec> builtin_spec(std::string_view name) {
  if (name == "thue-morse") return thue_morse_spec();
  if (name == "ternary-thue") return ternary_thue_spec();
  if (name == "h-alpha") return h_alpha_spec();
  return std::nullopt;
}

inline Word h_alpha_prefix(std::size_t length) { return h_alpha_spec().prefix(length); }

/// Longest factor of the length-L prefix that contains no complete coding
/// image of a base letter.
inline std::size_t max_gap_without_full_image(const MorphicWordSpec& spec, std::size_t length) {
  if (!spec.coding) throw std::invalid_argument("gap statistic needs a coding morphism");
  spec.validate();
  const Word b = spec.base_prefix_for(length);
  // ends[n] is one past the last position of the n-th image.
  std::vector<std::size_t> starts, ends;
  std::size_t pos = 0;
  for (Letter a : b) {
    if (pos >= length) break;
    starts.push_back(pos);
    pos += spec.coding->image(a).size();
    ends.push_back(pos);
  }
  std::size_t best = 0;
  std::size_t n = 0;  // first image starting at or after x
  for (std::size_t x = 0; x < length; ++x) {
    while (n < starts.size() && starts[n] < x) ++n;
    const std::size_t y = (n < ends.size() && ends[n] <= length) ? ends[n] - 1 : length;
    best = std::max(best, y - x);
  }
  return best;
}

enum class CertificateStatus { Clean, Witness, Partial };

inline std::string_view to_string(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::Clean: return "clean";
    case CertificateStatus::Witness: return "witness";
    case CertificateStatus::Partial: return "partial";
  }
  return "?";
}

struct AvoidanceCertificate {
  std::string spec_name;
  std::size_t alphabet_size = 0;
  std::size_t prefix_length = 0;
  std::size_t max_block = 0;
  ParamSet forbidden;
  PermModel model = PermModel::AllPermutations;
  CertificateStatus status = CertificateStatus::Clean;
  std::optional<InstanceWitness> witness;
  // Positions fully checked as factor ends; equals prefix_length when clean.
  std::size_t checked_through = 0;
  std::optional<std::size_t> gap;
};

struct VerifyOptions {
  std::size_t threads = 1;
  // Upper bound on block splits examined; 0 means unbounded.
  std::uint64_t work_budget = 0;
};

/// Checks every factor of the length-L prefix, with block lengths up to
/// max_block, for an instance whose equality structure is the
/// representation of some parameter in `forbidden`.
inline AvoidanceCertificate verify_prefix_avoids(const MorphicWordSpec& spec,
                                                 const ParamSet& forbidden, PermModel model,
                                                 std::size_t max_block, std::size_t length,
                                                 const VerifyOptions& opts = {}) {
  if (max_block == 0 || length == 0) throw std::invalid_argument("bounds must be positive");
  if (forbidden.empty()) throw std::invalid_argument("forbidden set is empty");
  const Word w = spec.prefix(length);

  SearchConfig config;
  config.alphabet_size = spec.alphabet_size();
  config.forbidden = PatternSet::of(forbidden);
  config.model = model;
  config.mode = ExponentMode::Abstract;
  config.max_block = max_block;
  const Detector detector(config);

  AvoidanceCertificate cert;
  cert.spec_name = spec.name;
  cert.alphabet_size = config.alphabet_size;
  cert.prefix_length = length;
  cert.max_block = max_block;
  cert.forbidden = forbidden;
  cert.model = model;
  if (spec.coding) cert.gap = max_gap_without_full_image(spec, length);

  // Stop before the first end position whose splits would exceed the budget.
  std::size_t last_end = length + 1;
  if (opts.work_budget) {
    std::uint64_t spent = 0;
    for (std::size_t e = 4; e <= length; ++e) {
      spent += std::min(e / 4, max_block);
      if (spent > opts.work_budget) {
        last_end = e;
        break;
      }
    }
  }

  const std::size_t threads = std::max<std::size_t>(1, opts.threads);
  const std::size_t span = last_end > 4 ? last_end - 4 : 0;
  const std::size_t chunk = (span + threads - 1) / std::max<std::size_t>(threads, 1);
  std::vector<std::optional<InstanceWitness>> found(threads);
  if (threads == 1 || chunk == 0) {
    found[0] = detector.first_instance(w, 4, last_end);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t from = 4 + t * chunk;
      const std::size_t to = std::min(last_end, from + chunk);
      if (from >= to) break;
      pool.emplace_back([&, t, from, to] { found[t] = detector.first_instance(w, from, to); });
    }
  }
  for (auto& f : found) {
    if (f) {
      cert.status = CertificateStatus::Witness;
      cert.witness = std::move(f);
      cert.checked_through = cert.witness->start + 4 * cert.witness->block_length;
      return cert;
    }
  }
  cert.checked_through = last_end - 1;
  cert.status = last_end == length + 1 ? CertificateStatus::Clean : CertificateStatus::Partial;
  return cert;
}

inline bool four_power_free_certificate(const MorphicWordSpec& spec, std::size_t length) {
  return is_four_power_free(spec.prefix(length));
}

}  // namespace upat
