#pragma once

// Command-line driver: parses a subcommand, runs it, and writes a JSON (or
// plain text) report. Kept in a header so tests can call run() directly.

#include <chrono>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "upat/families.hpp"
#include "upat/io.hpp"
#include "upat/params.hpp"
#include "upat/search.hpp"
#include "upat/verifier.hpp"

#ifndef UPAT_VERSION
#define UPAT_VERSION "0.0.0"
#endif

namespace upat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 64;

struct Options {
  std::string format = "json";
  std::size_t threads = 1;
  int verbose = 0;

  std::optional<std::uint64_t> i, j, k;
  std::optional<std::size_t> family;

  std::size_t m = 4;
  std::string forbidden;
  std::string model = "cycle";
  std::string mode = "abstract";
  std::size_t cap = 100;
  std::uint64_t budget = 100'000'000;
  std::size_t max_block = 0;
  std::size_t split_depth = 8;
  bool no_pruning = false;
  bool allow_four_powers = false;

  std::string word;

  std::string spec_file;
  std::string builtin;
  std::size_t umax = 30;
  std::size_t len = 3000;
  std::uint64_t work_budget = 0;
};

namespace detail {

inline void add_exponents(CLI::App* sub, Options& o, bool required) {
  auto* i = sub->add_option("--i", o.i, "first exponent");
  auto* j = sub->add_option("--j", o.j, "second exponent");
  auto* k = sub->add_option("--k", o.k, "third exponent");
  if (required) {
    i->required();
    j->required();
    k->required();
  }
}

inline void add_search_options(CLI::App* sub, Options& o) {
  sub->add_option("--m", o.m, "alphabet size")->required()->check(CLI::Range(2, 256));
  sub->add_option("--forbidden", o.forbidden, "alpha indices, e.g. 1,2,4,6,7")->required();
  sub->add_option("--model", o.model, "permutation model")
      ->check(CLI::IsMember({"cycle", "fixcycle", "anycycle", "all"}));
  sub->add_option("--mode", o.mode, "exponent mode")->check(CLI::IsMember({"abstract", "fixed"}));
  sub->add_option("--max-block", o.max_block, "longest block length examined (0 = all)");
  sub->add_flag("--allow-four-powers", o.allow_four_powers,
                "do not forbid uuuu unless a listed parameter does");
  add_exponents(sub, o, false);
}

inline PatternExponents exponents(const Options& o) {
  if (!o.i || !o.j || !o.k) throw std::invalid_argument("--i, --j and --k are required");
  return {*o.i, *o.j, *o.k};
}

inline json exponents_config(const Options& o) {
  json out = json::object();
  if (o.i) out["i"] = *o.i;
  if (o.j) out["j"] = *o.j;
  if (o.k) out["k"] = *o.k;
  return out;
}

inline SearchConfig search_config(const Options& o) {
  SearchConfig c;
  c.alphabet_size = o.m;
  c.forbidden = avoidance_patterns(ParamSet::parse(o.forbidden), !o.allow_four_powers);
  c.model = parse_perm_model(o.model);
  c.mode = parse_exponent_mode(o.mode);
  if (c.mode == ExponentMode::Fixed) {
    c.exponents = exponents(o);
    if (c.exponents.i == 0 || c.exponents.j == 0 || c.exponents.k == 0) {
      throw std::domain_error("exponents must be positive");
    }
  }
  c.length_cap = o.cap;
  c.node_budget = o.budget;
  c.max_block = o.max_block;
  c.symmetry_pruning = !o.no_pruning;
  c.threads = o.threads;
  c.split_depth = o.split_depth;
  c.validate();
  return c;
}

inline json search_config_json(const Options& o) {
  json c = {{"m", o.m},
            {"forbidden", to_json(ParamSet::parse(o.forbidden))},
            {"model", o.model},
            {"mode", o.mode},
            {"max_block", o.max_block},
            {"allow_four_powers", o.allow_four_powers}};
  if (o.mode == "fixed") c["exponents"] = exponents_config(o);
  return c;
}

// Canonical argument list that reproduces the run.
inline std::vector<std::string> invocation(const std::string& command, const json& config) {
  std::vector<std::string> args{command};
  for (const auto& [key, value] : config.items()) {
    std::string flag = "--" + key;
    for (char& c : flag) {
      if (c == '_') c = '-';
    }
    if (key == "exponents") {
      for (const auto& [name, v] : value.items()) {
        args.push_back("--" + name);
        args.push_back(v.dump());
      }
    } else if (value.is_object()) {
      continue;
    } else if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) joined += (joined.empty() ? "" : ",") + v.dump();
      args.push_back(flag);
      args.push_back(joined);
    } else if (value.is_string()) {
      args.push_back(flag);
      args.push_back(value.get<std::string>());
    } else if (!value.is_null()) {
      args.push_back(flag);
      args.push_back(value.dump());
    }
  }
  return args;
}

inline void render_text(const json& value, std::ostream& out, const std::string& indent = "") {
  for (const auto& [key, v] : value.items()) {
    if (v.is_object()) {
      out << indent << key << ":\n";
      render_text(v, out, indent + "  ");
    } else if (v.is_string()) {
      out << indent << key << ": " << v.get<std::string>() << '\n';
    } else {
      out << indent << key << ": " << v.dump() << '\n';
    }
  }
}

}  // namespace detail

struct Outcome {
  json config;
  json result;
  int status = kExitOk;
  // Replaces the generic text rendering when set.
  std::optional<std::string> text;
};

inline Outcome run_alphas(const Options& o) {
  const PatternExponents e = detail::exponents(o);
  return {detail::exponents_config(o), to_json(profile(e)), kExitOk, {}};
}

inline Outcome run_sigma(const Options& o) {
  const PatternExponents e = detail::exponents(o);
  const ClassificationReport r = classify(e);
  if (r.degenerate != Degeneracy::None) {
    throw std::domain_error("sigma is defined for pairwise distinct exponents");
  }
  return {detail::exponents_config(o), to_json(r), kExitOk, {}};
}

inline Outcome run_classify(const Options& o) {
  return {detail::exponents_config(o), to_json(classify(detail::exponents(o))), kExitOk, {}};
}

inline Outcome run_families(const Options& o) {
  json config = detail::exponents_config(o);
  if (o.family) config["family"] = *o.family;
  std::optional<AlphaProfile> prof;
  if (o.i || o.j || o.k) {
    const PatternExponents e = detail::exponents(o);
    if (e.i == 0 || e.j == 0 || e.k == 0) throw std::domain_error("exponents must be positive");
    prof = profile(e);
  }
  json families = json::array();
  for (std::size_t f = 1; f <= kNumFamilies; ++f) {
    if (o.family && *o.family != f) continue;
    json sets = json::array();
    for (const ParamSet& s : enumerate_family(f)) {
      json entry = {{"set", to_json(s)}};
      if (prof) entry["max_alpha"] = to_json(max_alpha(s, *prof));
      sets.push_back(entry);
    }
    families.push_back({{"family", f}, {"count", sets.size()}, {"sets", sets}});
  }
  std::ostringstream text;
  for (const auto& fam : families) {
    text << "S" << fam["family"].get<std::size_t>() << " (" << fam["count"].get<std::size_t>()
         << " sets)\n";
    for (const auto& entry : fam["sets"]) {
      text << "  {";
      bool first = true;
      for (const auto& a : entry["set"]) {
        text << (first ? "" : ",") << a.get<std::size_t>();
        first = false;
      }
      text << "}";
      if (entry.contains("max_alpha")) {
        const auto& v = entry["max_alpha"];
        text << "  max " << (v.is_string() ? v.get<std::string>() : v.dump());
      }
      text << '\n';
    }
  }
  return {config, {{"families", families}}, kExitOk, text.str()};
}

inline Outcome run_search(const Options& o, std::ostream& err) {
  const SearchConfig c = detail::search_config(o);
  json config = detail::search_config_json(o);
  config["cap"] = o.cap;
  config["budget"] = o.budget;
  config["no_pruning"] = o.no_pruning;
  config["split_depth"] = o.split_depth;
  ProgressCallback progress;
  if (o.verbose > 0) {
    progress = [&err](std::uint64_t nodes, std::size_t best) {
      err << "[search] nodes=" << nodes << " best_in_task=" << best << '\n';
    };
  }
  const SearchResult r = longest_avoiding_word(c, progress);
  return {config, to_json(r), r.exhausted ? kExitOk : kExitInconclusive, {}};
}

inline Outcome run_verify_word(const Options& o) {
  const SearchConfig c = detail::search_config(o);
  json config = detail::search_config_json(o);
  config["word"] = o.word;
  const Word w = Word::parse(o.word, o.m);
  const auto wit = verify_word_avoids(w, c);
  json result = {{"avoids", !wit.has_value()}};
  result["witness"] = wit ? to_json(*wit) : json(nullptr);
  std::string text = "avoids\n";
  if (wit) {
    std::ostringstream s;
    s << "instance at " << wit->start << ": " << wit->blocks[0].str() << '|'
      << wit->blocks[1].str() << '|' << wit->blocks[2].str() << '|' << wit->blocks[3].str()
      << " pattern " << wit->pattern.str() << " permutation " << wit->permutation.str()
      << " exponents " << wit->exponents[0] << ',' << wit->exponents[1] << ','
      << wit->exponents[2] << '\n';
    text = s.str();
  }
  return {config, result, kExitOk, text};
}

inline Outcome run_verify_morphic(const Options& o) {
  if (o.spec_file.empty() == o.builtin.empty()) {
    throw std::invalid_argument("give exactly one of --spec and --builtin");
  }
  MorphicWordSpec spec = o.builtin.empty() ? spec_from_json(read_json_file(o.spec_file))
                                           : *builtin_spec(o.builtin);
  const ParamSet forbidden = ParamSet::parse(o.forbidden);
  const PermModel model = parse_perm_model(o.model);
  if (o.umax == 0 || o.len == 0) throw std::invalid_argument("--umax and --len must be positive");
  json config = o.builtin.empty() ? json{{"spec", o.spec_file}} : json{{"builtin", o.builtin}};
  config.update(json{{"forbidden", to_json(forbidden)},
                 {"model", o.model},
                 {"umax", o.umax},
                 {"len", o.len},
                 {"work_budget", o.work_budget}});
  config["definition"] = to_json(spec);
  VerifyOptions opts;
  opts.threads = o.threads;
  opts.work_budget = o.work_budget;
  const AvoidanceCertificate cert = verify_prefix_avoids(spec, forbidden, model, o.umax, o.len, opts);
  json result = to_json(cert);
  result["four_power_free"] = four_power_free_certificate(spec, o.len);
  const int status = cert.status == CertificateStatus::Partial ? kExitInconclusive : kExitOk;
  return {config, result, status, {}};
}

/// Runs one invocation. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Avoidability of unary patterns x pi^i(x) pi^j(x) pi^k(x)", "upat"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "read options from a TOML/INI file");
  app.add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", o.verbose, "progress logging on stderr");

  auto* alphas = app.add_subcommand("alphas", "alpha values and representations");
  detail::add_exponents(alphas, o, true);
  auto* sigma_cmd = app.add_subcommand("sigma", "sigma and its witnessing family set");
  detail::add_exponents(sigma_cmd, o, true);
  auto* classify_cmd = app.add_subcommand("classify", "alphabet-size classification");
  detail::add_exponents(classify_cmd, o, true);
  auto* families = app.add_subcommand("families", "enumerate the unavoidable-set families");
  families->add_option("--family", o.family, "family number")->check(CLI::Range(1, 10));
  detail::add_exponents(families, o, false);

  auto* search = app.add_subcommand("search", "longest avoiding word by backtracking");
  detail::add_search_options(search, o);
  search->add_option("--cap", o.cap, "length cap")->check(CLI::PositiveNumber);
  search->add_option("--budget", o.budget, "node budget")->check(CLI::PositiveNumber);
  search->add_option("--split-depth", o.split_depth, "depth at which work is split");
  search->add_flag("--no-pruning", o.no_pruning, "disable first-occurrence symmetry pruning");

  auto* verify_word = app.add_subcommand("verify-word", "look for a forbidden instance in a word");
  detail::add_search_options(verify_word, o);
  verify_word->add_option("--word", o.word, "word as digits")->required();

  auto* verify_morphic =
      app.add_subcommand("verify-morphic", "bounded avoidance certificate for a morphic word");
  verify_morphic->add_option("--spec", o.spec_file, "spec JSON file");
  verify_morphic->add_option("--builtin", o.builtin, "built-in word")
      ->check(CLI::IsMember({"thue-morse", "ternary-thue", "h-alpha"}));
  verify_morphic->add_option("--forbidden", o.forbidden, "alpha indices")->required();
  verify_morphic->add_option("--model", o.model, "permutation model")
      ->check(CLI::IsMember({"cycle", "fixcycle", "anycycle", "all"}));
  verify_morphic->add_option("--umax", o.umax, "longest block length checked");
  verify_morphic->add_option("--len", o.len, "prefix length");
  verify_morphic->add_option("--work-budget", o.work_budget, "block splits examined (0 = all)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  const auto started = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    if (command == "alphas") outcome = run_alphas(o);
    else if (command == "sigma") outcome = run_sigma(o);
    else if (command == "classify") outcome = run_classify(o);
    else if (command == "families") outcome = run_families(o);
    else if (command == "search") outcome = run_search(o, err);
    else if (command == "verify-word") outcome = run_verify_word(o);
    else outcome = run_verify_morphic(o);
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n\n" << sub->help();
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n\n" << sub->help();
    return kExitUsage;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  if (o.format == "text") {
    if (outcome.text) {
      out << *outcome.text;
    } else {
      detail::render_text(outcome.result, out);
    }
    if (o.verbose > 0) err << "[" << command << "] " << seconds << " s\n";
    return outcome.status;
  }
  json report = {{"tool", "upat"}, {"version", UPAT_VERSION}, {"command", command}};
  json config = outcome.config;
  if (command == "search" || command == "verify-morphic") config["threads"] = o.threads;
  report["config"] = config;
  report["invocation"] = detail::invocation(command, config);
  report["result"] = outcome.result;
  report["wall_time_seconds"] = seconds;
  out << report.dump(2) << '\n';
  return outcome.status;
}

}  // namespace upat::cli
