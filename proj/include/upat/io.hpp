#pragma once

// JSON rendering of results and loading of morphism / morphic-word spec
// files. Requires nlohmann/json (vendor/json.hpp) on the include path.

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "upat/families.hpp"
#include "upat/params.hpp"
#include "upat/search.hpp"
#include "upat/verifier.hpp"
#include "upat/words.hpp"

namespace upat {

using json = nlohmann::ordered_json;

inline json to_json(const AlphaValue& v) {
  if (!v.is_finite()) return "inf";
  return v.value();
}

inline json to_json(const PatternExponents& e) { return {{"i", e.i}, {"j", e.j}, {"k", e.k}}; }

inline json to_json(const ParamSet& s) { return s.indices(); }

inline json to_json(const AlphaProfile& p) {
  json out = json::object();
  out["exponents"] = to_json(p.exponents);
  for (std::size_t a = 1; a <= kNumAlphas; ++a) {
    out["alpha" + std::to_string(a)] = to_json(p[a]);
  }
  json reps = json::object();
  for (std::size_t a = 1; a <= kNumAlphas; ++a) {
    reps["alpha" + std::to_string(a)] = representation_of(a).str();
  }
  out["representations"] = reps;
  return out;
}

inline json to_json(const MorphicPermutation& f) { return f.str(); }

// Words over more than ten letters are written comma-delimited.
inline std::string word_text(const Word& w) { return w.str(); }

inline json to_json(const InstanceWitness& w) {
  json blocks = json::array();
  for (const Word& b : w.blocks) blocks.push_back(word_text(b));
  return {{"start", w.start},
          {"block_length", w.block_length},
          {"blocks", blocks},
          {"permutation", to_json(w.permutation)},
          {"exponents", w.exponents},
          {"pattern", w.pattern.str()}};
}

inline json to_json(const SearchResult& r) {
  return {{"max_length_found", r.max_length},
          {"witness_word", word_text(r.witness)},
          {"exhausted", r.exhausted},
          {"reached_cap", r.reached_cap},
          {"nodes_visited", r.nodes_visited}};
}

inline json to_json(const FamilyMember& m) {
  return {{"family", m.family}, {"set", to_json(m.set)}};
}

inline json to_json(const SigmaResult& s) {
  return {{"sigma", to_json(s.sigma)}, {"witness", to_json(s.witness)}};
}

inline json optional_json(const std::optional<std::uint64_t>& v) {
  return v ? json(*v) : json(nullptr);
}

inline json to_json(const ClassificationReport& r) {
  json out = {{"exponents", to_json(r.exponents)},
              {"degenerate", std::string(to_string(r.degenerate))}};
  out["sigma"] = r.sigma ? to_json(r.sigma->sigma) : json(nullptr);
  out["sigma_witness"] = r.sigma ? to_json(r.sigma->witness) : json(nullptr);
  if (r.degenerate != Degeneracy::None) {
    out["avoidable_interval"] = json::array({2, "inf"});
  } else if (r.avoidable_up_to) {
    out["avoidable_interval"] = json::array({2, *r.avoidable_up_to});
  } else {
    out["avoidable_interval"] = json::array({2, "inf"});
  }
  out["unavoidable_from"] = optional_json(r.unavoidable_from);
  out["undetermined"] = optional_json(r.undetermined);
  out["needs_review"] = r.needs_review;
  out["note"] = r.note;
  return out;
}

inline json to_json(const AvoidanceCertificate& c) {
  json out = {{"spec", c.spec_name},
              {"alphabet_size", c.alphabet_size},
              {"prefix_length", c.prefix_length},
              {"max_block", c.max_block},
              {"forbidden", to_json(c.forbidden)},
              {"model", std::string(to_string(c.model))},
              {"status", std::string(to_string(c.status))},
              {"checked_through", c.checked_through}};
  out["witness"] = c.witness ? to_json(*c.witness) : json(nullptr);
  out["gap"] = c.gap ? json(*c.gap) : json(nullptr);
  return out;
}

/// Morphism from {"0": "01", "1": "10"}. Source letters must be exactly
/// 0..n-1; the target alphabet is `target_size`, or inferred from images.
inline Morphism morphism_from_json(const json& j, std::size_t target_size = 0) {
  if (!j.is_object() || j.empty()) throw std::invalid_argument("morphism must be a JSON object");
  std::map<std::size_t, std::string> raw;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_string()) throw std::invalid_argument("morphism image must be a string");
    std::size_t letter = 0;
    try {
      std::size_t used = 0;
      letter = std::stoul(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw std::invalid_argument("morphism key is not a letter: " + key);
    }
    raw[letter] = value.get<std::string>();
  }
  if (raw.rbegin()->first + 1 != raw.size()) {
    throw std::invalid_argument("morphism keys must be 0..n-1");
  }
  if (target_size == 0) {
    std::size_t max_letter = 0;
    for (const auto& [letter, text] : raw) {
      const bool delimited = text.find(',') != std::string::npos;
      const Word w = Word::parse(text, delimited ? kMaxAlphabet : kMaxDigitAlphabet);
      for (Letter a : w) max_letter = std::max<std::size_t>(max_letter, a);
    }
    target_size = max_letter + 1;
  }
  std::vector<Word> images;
  for (const auto& [letter, text] : raw) images.push_back(Word::parse(text, target_size));
  return Morphism(std::move(images));
}

inline json to_json(const Morphism& mu) {
  json out = json::object();
  for (std::size_t a = 0; a < mu.source_size(); ++a) {
    out[std::to_string(a)] = word_text(mu.image(static_cast<Letter>(a)));
  }
  return out;
}

/// Spec document:
///   {"name": "...", "base": {...}, "seed": 0, "base_alphabet": 3,
///    "coding": {...}, "alphabet": 5}
/// "name", "base_alphabet", "coding" and "alphabet" are optional.
inline MorphicWordSpec spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("base")) throw std::invalid_argument("spec needs a base");
  const std::size_t base_size = j.contains("base_alphabet") ? j.at("base_alphabet").get<std::size_t>()
                                                            : j.at("base").size();
  const auto seed = j.value("seed", std::size_t{0});
  if (seed >= base_size) throw std::invalid_argument("seed outside the base alphabet");
  MorphicWordSpec spec{j.value("name", std::string("custom")),
                       morphism_from_json(j.at("base"), base_size), static_cast<Letter>(seed), {}};
  if (j.contains("coding")) {
    spec.coding = morphism_from_json(j.at("coding"), j.value("alphabet", std::size_t{0}));
  } else if (j.contains("alphabet") && j.at("alphabet").get<std::size_t>() != base_size) {
    throw std::invalid_argument("alphabet differs from base alphabet without a coding");
  }
  spec.validate();
  return spec;
}

inline json to_json(const MorphicWordSpec& spec) {
  json out = {{"name", spec.name},
              {"base", to_json(spec.base)},
              {"seed", static_cast<unsigned>(spec.seed)},
              {"base_alphabet", spec.base.target_size()}};
  if (spec.coding) out["coding"] = to_json(*spec.coding);
  out["alphabet"] = spec.alphabet_size();
  return out;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

}  // namespace upat
