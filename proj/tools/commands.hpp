#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace xmodal::cli {

namespace fs = std::filesystem;

struct SynthOptions {
  std::string kind;  // "two-view" or "retrieval"
  fs::path spec;
  fs::path out;
  std::optional<std::uint64_t> seed;
};

struct FeaturizeOptions {
  fs::path pairs;
  fs::path images;
  std::size_t dim = 1000;
  fs::path out;
  bool strict = false;
};

struct FitOptions {
  fs::path features;  // directory holding Q.cmxf, U.cmxf, V.cmxf
  std::optional<std::size_t> k;
  double ridge = 1e-6;
  double min_correlation = 0.0;
  fs::path model;
};

struct ScoreOptions {
  std::string mode;  // "baseline" or "cca"
  fs::path features;
  fs::path pairs;
  std::optional<fs::path> model;
  fs::path out;
  bool strict = false;
};

struct EvalOptions {
  fs::path scores;
  fs::path out;  // directory for metrics.json, roc.csv, pr.csv
};

struct CompareOptions {
  fs::path baseline;  // scores CSV or metrics JSON
  fs::path proposed;
  std::optional<fs::path> out;
};

// Each command prints one summary line to stdout and throws xmodal::Error on
// failure.
void run_synth(const SynthOptions& opt);
void run_featurize(const FeaturizeOptions& opt);
void run_fit(const FitOptions& opt);
void run_score(const ScoreOptions& opt);
void run_eval(const EvalOptions& opt);
void run_compare(const CompareOptions& opt);

}  // namespace xmodal::cli
