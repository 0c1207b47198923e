#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "xmodal/cca.hpp"
#include "xmodal/corpus.hpp"
#include "xmodal/error.hpp"
#include "xmodal/eval.hpp"
#include "xmodal/format.hpp"
#include "xmodal/similarity.hpp"
#include "xmodal/synthdata.hpp"
#include "xmodal/textfeat.hpp"

namespace xmodal::cli {

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

nlohmann::json read_json(const fs::path& path) {
  auto j = nlohmann::json::parse(read_text(path), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw Error("malformed JSON in '" + path.string() + "'");
  return j;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error("cannot create output directory '" + dir.string() + "'");
  }
}

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) ensure_dir(file.parent_path());
}

std::vector<corpus::QueryItemPair> load_valid_pairs(const fs::path& path, bool strict) {
  auto loaded = corpus::load_pairs(path, strict);
  for (const auto& r : loaded.rejections) {
    std::cerr << "warning: " << path.string() << ":" << r.line << ": " << r.reason << '\n';
  }
  return std::move(loaded.pairs);
}

struct FeatureSet {
  corpus::FeatureMatrix q;
  corpus::FeatureMatrix v;
  corpus::FeatureMatrix u;
};

FeatureSet read_features(const fs::path& dir) {
  return {corpus::read_matrix(dir / "Q.cmxf"), corpus::read_matrix(dir / "V.cmxf"),
          corpus::read_matrix(dir / "U.cmxf")};
}

Matrix item_view(const FeatureSet& f) {
  // Image columns first, then title columns.
  return hconcat(f.u.values, f.v.values);
}

eval::Metrics load_metrics(const fs::path& path) {
  if (path.extension() == ".json") return eval::metrics_from_json(read_text(path));
  return eval::metrics_of(eval::evaluate(similarity::read_scores(path)));
}

}  // namespace

void run_synth(const SynthOptions& opt) {
  const auto spec_json = read_json(opt.spec);
  ensure_dir(opt.out);
  if (opt.kind == "two-view") {
    auto spec = synthdata::two_view_spec_from_json(spec_json);
    if (opt.seed) spec.seed = *opt.seed;
    const auto data = synthdata::gen_two_view(spec);
    corpus::write_matrix(data.x, opt.out / "X.cmxf");
    corpus::write_matrix(data.y, opt.out / "Y.cmxf");
    std::cout << "two-view: t=" << spec.t << " p=" << spec.p << " q=" << spec.q
              << " correlations=" << spec.correlations.size() << " seed=" << spec.seed << '\n';
  } else if (opt.kind == "retrieval") {
    auto spec = synthdata::retrieval_spec_from_json(spec_json);
    if (opt.seed) spec.seed = *opt.seed;
    const auto data = synthdata::gen_retrieval(spec);
    corpus::write_pairs(data.pairs, opt.out / "pairs.jsonl");
    corpus::write_matrix(data.q, opt.out / "Q.cmxf");
    corpus::write_matrix(data.v, opt.out / "V.cmxf");
    corpus::write_matrix(data.u, opt.out / "U.cmxf");
    std::size_t positives = 0;
    for (int l : data.labels) positives += l == 1;
    std::cout << "retrieval: t=" << spec.t << " positives=" << positives
              << " d_text=" << spec.d_text << " d_image=" << spec.d_image << " seed=" << spec.seed
              << '\n';
  } else {
    throw Error("unknown synth kind '" + opt.kind + "' (expected two-view or retrieval)");
  }
}

void run_featurize(const FeaturizeOptions& opt) {
  const textfeat::HashSpec spec{opt.dim};
  spec.validate();
  const auto pairs = load_valid_pairs(opt.pairs, opt.strict);
  const corpus::ImageFeatureStore images(corpus::read_matrix(opt.images), std::nullopt);

  std::vector<std::pair<std::string, std::string>> titles;
  titles.reserve(pairs.size());
  for (const auto& p : pairs) titles.emplace_back(p.category, p.title);
  const auto stats = textfeat::build_category_stats(titles);

  auto text = textfeat::featurize_pairs(pairs, stats, spec);
  const auto views = corpus::assemble_views(pairs, images, std::move(text.q), std::move(text.v));

  ensure_dir(opt.out);
  corpus::write_matrix(views.q, opt.out / "Q.cmxf");
  corpus::write_matrix(views.v, opt.out / "V.cmxf");
  corpus::write_matrix(views.u, opt.out / "U.cmxf");
  write_text(opt.out / "stats.json", textfeat::stats_to_json(stats).dump(2) + "\n");
  std::cout << "featurize: pairs=" << pairs.size() << " categories=" << stats.size()
            << " d=" << spec.d << " image_dim=" << images.dim() << '\n';
}

void run_fit(const FitOptions& opt) {
  const auto f = read_features(opt.features);
  if (f.q.rows() != f.u.rows() || f.q.rows() != f.v.rows()) {
    throw Error("row mismatch between Q, U and V");
  }
  cca::CcaConfig config;
  config.k = opt.k;
  config.ridge = opt.ridge;
  config.min_correlation = opt.min_correlation;

  auto model = cca::fit(f.q.values, item_view(f), config);
  model.hash_spec = textfeat::HashSpec{f.q.cols()};
  model.item_layout = cca::ItemLayout{f.u.cols(), f.v.cols()};
  ensure_parent(opt.model);
  cca::save_model(model, opt.model);

  std::cout << "fit: m=" << model.m() << " n=" << model.n() << " k=" << model.k() << " rho[:5]=";
  for (std::size_t j = 0; j < std::min<std::size_t>(5, model.k()); ++j) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%.6f", j ? "," : "", model.rho[j]);
    std::cout << buf;
  }
  std::cout << '\n';
}

void run_score(const ScoreOptions& opt) {
  if (opt.mode != "baseline" && opt.mode != "cca") {
    throw Error("unknown score mode '" + opt.mode + "' (expected baseline or cca)");
  }
  if (opt.mode == "cca" && !opt.model) throw Error("cca mode requires --model");

  const auto labels = corpus::labels_of(load_valid_pairs(opt.pairs, opt.strict));
  const auto f = read_features(opt.features);
  std::vector<similarity::ScoredPair> scores;
  if (opt.mode == "baseline") {
    scores = similarity::score_baseline(f.q.values, f.v.values, labels);
  } else {
    const auto model = cca::load_model(*opt.model);
    if (model.item_layout && (model.item_layout->image_dim != f.u.cols() ||
                              model.item_layout->title_dim != f.v.cols())) {
      throw Error("feature dimensions do not match the model's item layout");
    }
    scores = similarity::score_cca(model, f.q.values, item_view(f), labels);
  }
  ensure_parent(opt.out);
  similarity::write_scores(scores, opt.out);
  std::cout << "score: mode=" << opt.mode << " rows=" << scores.size() << '\n';
}

void run_eval(const EvalOptions& opt) {
  const auto report = eval::evaluate(similarity::read_scores(opt.scores));
  ensure_dir(opt.out);
  write_text(opt.out / "metrics.json", eval::metrics_to_json(eval::metrics_of(report)));
  eval::write_roc_csv(report.roc, opt.out / "roc.csv");
  eval::write_pr_csv(report.pr, opt.out / "pr.csv");
  char buf[128];
  std::snprintf(buf, sizeof(buf), "eval: n=%zu positives=%zu auroc=%.6f auprc=%.6f", report.n,
                report.positives, report.auroc, report.auprc);
  std::cout << buf << '\n';
}

void run_compare(const CompareOptions& opt) {
  eval::Comparison cmp;
  if (opt.baseline.extension() != ".json" && opt.proposed.extension() != ".json") {
    cmp = eval::compare(similarity::read_scores(opt.baseline),
                        similarity::read_scores(opt.proposed));
  } else {
    cmp = eval::compare_metrics(load_metrics(opt.baseline), load_metrics(opt.proposed));
  }
  if (opt.out) {
    ensure_parent(*opt.out);
    write_text(*opt.out, eval::comparison_to_json(cmp));
  }
  std::cout << eval::comparison_summary(cmp) << '\n';
}

}  // namespace xmodal::cli
