// Command-line front end: synth, featurize, fit, score, eval, compare.
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "xmodal/error.hpp"

int main(int argc, char** argv) {
  using namespace xmodal::cli;

  CLI::App app{"Cross-modal query-item relevance via canonical correlation analysis"};
  app.require_subcommand(1);

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth_cmd->add_option("kind", synth.kind, "two-view or retrieval")
      ->required()
      ->check(CLI::IsMember({"two-view", "retrieval"}));
  synth_cmd->add_option("--spec", synth.spec, "Generator spec (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--seed", synth.seed, "Override the spec seed");

  FeaturizeOptions feat;
  auto* feat_cmd = app.add_subcommand("featurize", "Hashed TF-IDF + image views from a pairs file");
  feat_cmd->add_option("--pairs", feat.pairs, "Pairs file (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  feat_cmd->add_option("--images", feat.images, "Image feature store (matrix file)")
      ->required()
      ->check(CLI::ExistingFile);
  feat_cmd->add_option("--dim", feat.dim, "Hashed dimensionality")->capture_default_str();
  feat_cmd->add_option("--out", feat.out, "Output directory")->required();
  feat_cmd->add_flag("--strict", feat.strict, "Abort on the first invalid record");

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit CCA between Q and I = [U | V]");
  fit_cmd->add_option("--features", fit.features, "Directory with Q.cmxf, U.cmxf, V.cmxf")
      ->required()
      ->check(CLI::ExistingDirectory);
  fit_cmd->add_option("--k", fit.k, "Canonical pairs to keep (default: query dimensionality)");
  fit_cmd->add_option("--ridge", fit.ridge, "Relative ridge regularization")
      ->capture_default_str();
  fit_cmd->add_option("--min-correlation", fit.min_correlation,
                      "Drop trailing components below this correlation");
  fit_cmd->add_option("--model", fit.model, "Model output (JSON)")->required();

  ScoreOptions score;
  auto* score_cmd = app.add_subcommand("score", "Cosine scores per query-item pair");
  score_cmd->add_option("--mode", score.mode, "baseline or cca")
      ->required()
      ->check(CLI::IsMember({"baseline", "cca"}));
  score_cmd->add_option("--features", score.features, "Directory with Q.cmxf, U.cmxf, V.cmxf")
      ->required()
      ->check(CLI::ExistingDirectory);
  score_cmd->add_option("--pairs", score.pairs, "Pairs file supplying labels")
      ->required()
      ->check(CLI::ExistingFile);
  score_cmd->add_option("--model", score.model, "Model file (cca mode)")
      ->check(CLI::ExistingFile);
  score_cmd->add_option("--out", score.out, "Scores CSV")->required();
  score_cmd->add_flag("--strict", score.strict, "Abort on the first invalid record");

  EvalOptions ev;
  auto* eval_cmd = app.add_subcommand("eval", "AUROC, AUPRC and curve files");
  eval_cmd->add_option("--scores", ev.scores, "Scores CSV")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", ev.out, "Output directory")->required();

  CompareOptions cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Relative gains of proposed over baseline");
  cmp_cmd->add_option("--baseline", cmp.baseline, "Scores CSV or metrics JSON")
      ->required()
      ->check(CLI::ExistingFile);
  cmp_cmd->add_option("--proposed", cmp.proposed, "Scores CSV or metrics JSON")
      ->required()
      ->check(CLI::ExistingFile);
  cmp_cmd->add_option("--out", cmp.out, "Comparison JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << '\n';
    return e.get_exit_code();
  }

  try {
    if (*synth_cmd) run_synth(synth);
    if (*feat_cmd) run_featurize(feat);
    if (*fit_cmd) run_fit(fit);
    if (*score_cmd) run_score(score);
    if (*eval_cmd) run_eval(ev);
    if (*cmp_cmd) run_compare(cmp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
