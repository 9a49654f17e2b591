/* Copyright 2026 The Rewriter Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rewriter/corpus.hpp"
#include "rewriter/decoder.hpp"
#include "rewriter/error.hpp"
#include "rewriter/eval.hpp"
#include "rewriter/parallel.hpp"
#include "rewriter/resources.hpp"
#include "rewriter/scoring.hpp"
#include "rewriter/theme.hpp"

namespace rewriter::cli {

namespace fs = std::filesystem;

namespace {

// Failure carrying the exit code it should produce.
struct ExitError : Error {
  ExitError(int code, const std::string& message) : Error(message), code(code) {}
  int code;
};

void require_exists(const std::string& path, const std::string& flag) {
  if (!fs::exists(path)) throw ExitError(kUsage, flag + ": no such file or directory: " + path);
}

// A file, or every *.conllu file in a directory, sorted by name.
std::vector<fs::path> conllu_files(const std::string& path, const std::string& flag) {
  require_exists(path, flag);
  if (!fs::is_directory(path)) return {path};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_regular_file() && entry.path().extension() == ".conllu") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<Story> read_stories(const std::string& path, const std::string& flag) {
  std::vector<Story> stories;
  for (const fs::path& file : conllu_files(path, flag)) {
    auto part = read_conllu(file);
    stories.insert(stories.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
  }
  return stories;
}

std::set<std::string> optional_list(const std::string& path, const std::string& flag) {
  if (path.empty()) return {};
  require_exists(path, flag);
  return load_term_list(path);
}

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ExitError(kUsage, "cannot write " + path);
      out_ = &file_;
    }
  }
  std::ostream& get() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

// ---------------------------------------------------------------------------

struct BuildThemeFlags {
  std::string corpus, background, out, name;
  std::string stoplist, mathlist, offensive;
  std::size_t top_k = 50;
  std::size_t compound_k = 3;
};

int cmd_build_theme(const BuildThemeFlags& f, std::ostream& out) {
  const auto theme = read_stories(f.corpus, "--corpus");
  const auto background = read_stories(f.background, "--background");
  if (theme.empty()) throw ExitError(kUsage, "--corpus: no documents in " + f.corpus);
  if (background.empty()) {
    throw ExitError(kUsage, "--background: no documents in " + f.background);
  }
  FilterLists filters;
  filters.stop_words = optional_list(f.stoplist, "--stoplist");
  filters.math_words = optional_list(f.mathlist, "--mathlist");
  filters.offensive_words = optional_list(f.offensive, "--offensive");
  const std::string name = f.name.empty() ? fs::path(f.corpus).stem().string() : f.name;
  const ThemeProfile profile = build_profile(
      name, theme, background, filters, ThemeParams{f.top_k, f.compound_k});
  Sink sink(f.out, out);
  write_profile(sink.get(), profile);
  return kOk;
}

// ---------------------------------------------------------------------------

struct ResourceFlags {
  std::string embeddings, deplm, taxonomy, taxonomy_lemmas, taxonomy_freq;
};

ResourceSet load_resources(const ResourceFlags& f) {
  require_exists(f.embeddings, "--embeddings");
  require_exists(f.deplm, "--deplm");
  require_exists(f.taxonomy, "--taxonomy");
  require_exists(f.taxonomy_lemmas, "--taxonomy-lemmas");
  if (!f.taxonomy_freq.empty()) require_exists(f.taxonomy_freq, "--taxonomy-freq");
  ResourceSet r;
  r.embeddings = load_embeddings(f.embeddings);
  r.deplm = train_deplm(fs::path(f.deplm));
  r.taxonomy = load_taxonomy(f.taxonomy, f.taxonomy_lemmas,
                             f.taxonomy_freq.empty()
                                 ? std::nullopt
                                 : std::optional<fs::path>(f.taxonomy_freq));
  return r;
}

struct SearchFlags {
  double alpha = 0.1, beta = 0.1, gamma = 1.0;
  std::size_t beam = 64;
  std::size_t n_best = 5;
  std::string sem_mode = "full";
  std::string order = "multi";
  std::string delete_penalty = "-inf";
  bool no_keep = false;
};

ScoringConfig scoring_from(const SearchFlags& f) {
  ScoringConfig s;
  s.weights = {f.alpha, f.beta, f.gamma};
  s.sem_mode = f.sem_mode == "lex-cos" ? SemMode::kLexCosine : SemMode::kFull;
  try {
    s.delete_penalty = f.delete_penalty == "-inf"
                           ? -std::numeric_limits<double>::infinity()
                           : std::stod(f.delete_penalty);
  } catch (const std::exception&) {
    throw ExitError(kUsage, "--delete-penalty: not a number: " + f.delete_penalty);
  }
  return s;
}

DecoderConfig decoder_from(const SearchFlags& f) {
  if (f.n_best > f.beam) throw ExitError(kUsage, "--n-best must not exceed --beam");
  DecoderConfig d;
  d.beam_width = f.beam;
  d.n_best = f.n_best;
  d.allow_keep = !f.no_keep;
  d.order = f.order == "ltr"    ? SearchOrder::kLeftToRight
            : f.order == "head" ? SearchOrder::kHeadFirst
                                : SearchOrder::kMultiPath;
  return d;
}

// Stories re-marked with the profile's filters (plus any extra lists).
std::vector<Story> prepare_stories(std::vector<Story> stories, const FilterLists& filters) {
  for (Story& s : stories) s = mark_content(std::move(s), filters);
  return stories;
}

struct RewriteFlags {
  std::string story, theme, out, format = "text";
  std::string stoplist, mathlist;
  ResourceFlags resources;
  SearchFlags search;
};

std::string json_number(double v) {
  return std::isfinite(v) ? nlohmann::json(v).dump() : "null";
}

int cmd_rewrite(const RewriteFlags& f, std::ostream& out) {
  require_exists(f.story, "--story");
  require_exists(f.theme, "--theme");
  const ResourceSet resources = load_resources(f.resources);
  const ThemeProfile profile = read_profile(fs::path(f.theme));
  FilterLists filters = profile.filters;
  for (const auto& w : optional_list(f.stoplist, "--stoplist")) filters.stop_words.insert(w);
  for (const auto& w : optional_list(f.mathlist, "--mathlist")) filters.math_words.insert(w);
  const auto stories = prepare_stories(read_stories(f.story, "--story"), filters);
  const ScoringConfig scoring = scoring_from(f.search);
  const DecoderConfig decoder = decoder_from(f.search);

  std::vector<std::vector<RewriteResult>> results(stories.size());
  parallel_for(stories.size(), default_thread_count(), [&](std::size_t i) {
    results[i] = decode(UnitizedStory(stories[i]), profile, resources, scoring, decoder);
  });

  Sink sink(f.out, out);
  std::ostream& o = sink.get();
  if (f.format == "json") {
    // Hand-assembled to keep field order stable: text first, total last.
    o << "[\n";
    for (std::size_t i = 0; i < stories.size(); ++i) {
      o << "  {\"story\": " << nlohmann::json(stories[i].id).dump() << ", \"rewrites\": [\n";
      for (std::size_t k = 0; k < results[i].size(); ++k) {
        const RewriteResult& r = results[i][k];
        o << "    {\"text\": " << nlohmann::json(r.text).dump()
          << ", \"th\": " << json_number(r.breakdown.th)
          << ", \"syn\": " << json_number(r.breakdown.syn)
          << ", \"sem_lex\": " << json_number(r.breakdown.sem_lex)
          << ", \"sem_pair\": " << json_number(r.breakdown.sem_pair)
          << ", \"total\": " << json_number(r.breakdown.total) << "}"
          << (k + 1 < results[i].size() ? "," : "") << "\n";
      }
      o << "  ]}" << (i + 1 < stories.size() ? "," : "") << "\n";
    }
    o << "]\n";
    return kOk;
  }
  for (std::size_t i = 0; i < stories.size(); ++i) {
    // Tokens output doubles as an evaluate --hyp file, so no separators.
    if (i > 0 && f.format != "tokens") o << '\n';
    for (const RewriteResult& r : results[i]) {
      if (f.format == "tokens") {
        for (std::size_t t = 0; t < r.tokens.size(); ++t) {
          o << (t ? " " : "") << r.tokens[t];
        }
        o << '\n';
      } else {
        o << r.text << '\n';
      }
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct EvaluateFlags {
  std::string hyp, refs, taxonomy, taxonomy_lemmas;
};

std::vector<std::string> split_paths(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::optional<Taxonomy> synonym_taxonomy(const std::string& edges, const std::string& lemmas) {
  if (edges.empty() && lemmas.empty()) return std::nullopt;
  if (edges.empty() || lemmas.empty()) {
    throw ExitError(kUsage, "synonym matching needs both --taxonomy and --taxonomy-lemmas");
  }
  require_exists(edges, "--taxonomy");
  require_exists(lemmas, "--taxonomy-lemmas");
  return load_taxonomy(edges, lemmas);
}

// refs[story][reference]
std::vector<std::vector<TokenList>> load_reference_sets(const std::vector<std::string>& files,
                                                        std::size_t expected) {
  std::vector<std::vector<TokenList>> refs(expected);
  for (const std::string& file : files) {
    require_exists(file, "--refs");
    const auto lines = read_token_lines(file);
    if (lines.size() != expected) {
      throw ExitError(kUsage, "line count mismatch: " + file + " has " +
                                  std::to_string(lines.size()) + " lines, expected " +
                                  std::to_string(expected));
    }
    for (std::size_t i = 0; i < expected; ++i) refs[i].push_back(lines[i]);
  }
  return refs;
}

int cmd_evaluate(const EvaluateFlags& f, std::ostream& out) {
  require_exists(f.hyp, "--hyp");
  const auto hyps = read_token_lines(f.hyp);
  const auto files = split_paths(f.refs);
  if (files.empty()) throw ExitError(kUsage, "--refs: at least one reference file required");
  if (hyps.empty()) throw ExitError(kUsage, "--hyp: no lines in " + f.hyp);
  const auto refs = load_reference_sets(files, hyps.size());
  const auto tax = synonym_taxonomy(f.taxonomy, f.taxonomy_lemmas);
  const SynonymIndex synonyms(tax ? &*tax : nullptr);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", corpus_score(hyps, refs, synonyms));
  out << buf << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct TuneFlags {
  std::string dev, refs, theme, out, grid = "0:1:0.1";
  std::string grid_alpha, grid_beta, grid_gamma;
  ResourceFlags resources;
  SearchFlags search;
};

int cmd_tune(const TuneFlags& f, std::ostream& out) {
  require_exists(f.dev, "--dev");
  require_exists(f.refs, "--refs");
  require_exists(f.theme, "--theme");
  const ThemeProfile profile = read_profile(fs::path(f.theme));
  const auto dev = prepare_stories(read_stories(f.dev, "--dev"), profile.filters);
  if (dev.empty()) throw ExitError(kUsage, "--dev: no stories in " + f.dev);

  std::vector<std::string> ref_files;
  if (fs::is_directory(f.refs)) {
    for (const auto& entry : fs::directory_iterator(f.refs)) {
      if (entry.is_regular_file()) ref_files.push_back(entry.path().string());
    }
    std::sort(ref_files.begin(), ref_files.end());
  } else {
    ref_files = split_paths(f.refs);
  }
  if (ref_files.empty()) throw ExitError(kUsage, "--refs: no reference files");
  const auto refs = load_reference_sets(ref_files, dev.size());
  const ResourceSet resources = load_resources(f.resources);

  GridSpec grid = uniform_grid(f.grid);
  if (!f.grid_alpha.empty()) grid.alpha = parse_axis(f.grid_alpha);
  if (!f.grid_beta.empty()) grid.beta = parse_axis(f.grid_beta);
  if (!f.grid_gamma.empty()) grid.gamma = parse_axis(f.grid_gamma);

  TuneOptions options;
  options.decoder = decoder_from(f.search);
  options.scoring = scoring_from(f.search);
  options.threads = default_thread_count();
  const TuneResult result = tune(dev, refs, profile, resources, grid, options);
  Sink sink(f.out, out);
  write_tune_tsv(sink.get(), result);
  return kOk;
}

void add_resource_flags(CLI::App* app, ResourceFlags& r) {
  app->add_option("--embeddings", r.embeddings, "Word vectors (text format)")->required();
  app->add_option("--deplm", r.deplm, "Dependency triple counts TSV")->required();
  app->add_option("--taxonomy", r.taxonomy, "Taxonomy edges TSV (child, parent)")->required();
  app->add_option("--taxonomy-lemmas", r.taxonomy_lemmas,
                  "Taxonomy lemma map TSV (lemma, class, concept)")
      ->required();
  app->add_option("--taxonomy-freq", r.taxonomy_freq, "Concept frequency TSV (concept, count)");
}

void add_search_flags(CLI::App* app, SearchFlags& s) {
  app->add_option("--alpha", s.alpha, "Semantic coherence weight")->capture_default_str();
  app->add_option("--beta", s.beta, "Syntactic compatibility weight")->capture_default_str();
  app->add_option("--gamma", s.gamma, "Thematicity weight")->capture_default_str();
  app->add_option("--beam", s.beam, "Beam width")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--n-best", s.n_best, "Rewrites per story")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--sem-mode", s.sem_mode, "full or lex-cos")
      ->capture_default_str()
      ->check(CLI::IsMember({"full", "lex-cos"}));
  app->add_option("--order", s.order, "Search order: multi, ltr or head")
      ->capture_default_str()
      ->check(CLI::IsMember({"multi", "ltr", "head"}));
  app->add_option("--delete-penalty", s.delete_penalty,
                  "Score added per deleted word; -inf disables deletion")
      ->capture_default_str();
  app->add_flag("--no-keep", s.no_keep, "Do not offer keeping the original word");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Theme rewriting for dependency-parsed stories", "rewriter"};
  app.require_subcommand(1);

  BuildThemeFlags build;
  auto* build_cmd = app.add_subcommand("build-theme", "Build a theme profile JSON");
  build_cmd->add_option("--corpus", build.corpus, "Theme corpus (CoNLL-U file or directory)")
      ->required();
  build_cmd->add_option("--background", build.background,
                        "Background corpus for document frequencies")
      ->required();
  build_cmd->add_option("--out", build.out, "Output profile path")->required();
  build_cmd->add_option("--name", build.name, "Theme name (default: corpus file stem)");
  build_cmd->add_option("--stoplist", build.stoplist, "Stop words");
  build_cmd->add_option("--mathlist", build.mathlist, "Math words");
  build_cmd->add_option("--offensive", build.offensive, "Offensive words");
  build_cmd->add_option("--top-k", build.top_k, "Candidates per class")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  build_cmd->add_option("--compound-k", build.compound_k, "Maximum noun compound length")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  RewriteFlags rewrite;
  auto* rewrite_cmd = app.add_subcommand("rewrite", "Rewrite stories into a theme");
  rewrite_cmd->add_option("--story", rewrite.story, "Stories (CoNLL-U)")->required();
  rewrite_cmd->add_option("--theme", rewrite.theme, "Theme profile JSON")->required();
  rewrite_cmd->add_option("--out", rewrite.out, "Output path (default stdout)");
  rewrite_cmd->add_option("--format", rewrite.format, "text, json or tokens")
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "json", "tokens"}));
  rewrite_cmd->add_option("--stoplist", rewrite.stoplist, "Extra stop words");
  rewrite_cmd->add_option("--mathlist", rewrite.mathlist, "Extra math words");
  add_resource_flags(rewrite_cmd, rewrite.resources);
  add_search_flags(rewrite_cmd, rewrite.search);

  EvaluateFlags evaluate;
  auto* eval_cmd = app.add_subcommand("evaluate", "Corpus meteor-lite score");
  eval_cmd->add_option("--hyp", evaluate.hyp, "Hypotheses, one story per line")->required();
  eval_cmd->add_option("--refs", evaluate.refs, "Comma-separated reference files")->required();
  eval_cmd->add_option("--taxonomy", evaluate.taxonomy, "Taxonomy edges for synonym matching");
  eval_cmd->add_option("--taxonomy-lemmas", evaluate.taxonomy_lemmas,
                       "Taxonomy lemma map for synonym matching");

  TuneFlags tune_flags;
  auto* tune_cmd = app.add_subcommand("tune", "Grid-search the score weights");
  tune_cmd->add_option("--dev", tune_flags.dev, "Dev stories (CoNLL-U file or directory)")
      ->required();
  tune_cmd->add_option("--refs", tune_flags.refs,
                       "Directory (or comma list) of reference files, one line per story")
      ->required();
  tune_cmd->add_option("--theme", tune_flags.theme, "Theme profile JSON")->required();
  tune_cmd->add_option("--out", tune_flags.out, "Output TSV (default stdout)");
  tune_cmd->add_option("--grid", tune_flags.grid, "lo:hi:step or list, for every weight")
      ->capture_default_str();
  tune_cmd->add_option("--grid-alpha", tune_flags.grid_alpha, "Override the alpha axis");
  tune_cmd->add_option("--grid-beta", tune_flags.grid_beta, "Override the beta axis");
  tune_cmd->add_option("--grid-gamma", tune_flags.grid_gamma, "Override the gamma axis");
  add_resource_flags(tune_cmd, tune_flags.resources);
  add_search_flags(tune_cmd, tune_flags.search);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    // Subcommand help arrives as a ParseError with a zero exit code.
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*build_cmd) return cmd_build_theme(build, out);
    if (*rewrite_cmd) return cmd_rewrite(rewrite, out);
    if (*eval_cmd) return cmd_evaluate(evaluate, out);
    if (*tune_cmd) return cmd_tune(tune_flags, out);
  } catch (const ExitError& e) {
    err << "error: " << e.what() << '\n';
    return e.code;
  } catch (const DegenerateThemeError& e) {
    err << "error: " << e.what() << '\n';
    return kDegenerateTheme;
  } catch (const EmptyCandidatesError& e) {
    err << "error: " << e.what() << '\n';
    return kEmptyCandidates;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace rewriter::cli
