#include "xmodal/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "json.hpp"
#include "xmodal/error.hpp"
#include "xmodal/format.hpp"

namespace xmodal::eval {

namespace {

struct Counts {
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

Counts count_labels(const std::vector<ScoredPair>& scored) {
  Counts c;
  for (const auto& s : scored) (s.label == 1 ? c.positives : c.negatives)++;
  return c;
}

// Tie blocks in descending score order: (positives, negatives) per block.
std::vector<Counts> descending_blocks(const std::vector<ScoredPair>& scored) {
  std::vector<std::size_t> order(scored.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&scored](std::size_t a, std::size_t b) { return scored[a].score > scored[b].score; });
  std::vector<Counts> blocks;
  for (std::size_t k = 0; k < order.size();) {
    Counts block;
    const double s = scored[order[k]].score;
    while (k < order.size() && scored[order[k]].score == s) {
      (scored[order[k]].label == 1 ? block.positives : block.negatives)++;
      ++k;
    }
    blocks.push_back(block);
  }
  return blocks;
}

void check_scores(const std::vector<ScoredPair>& scored) {
  for (const auto& s : scored) {
    if (!std::isfinite(s.score)) throw Error("non-finite score at row " + std::to_string(s.row_index));
    if (s.label != 0 && s.label != 1) throw Error("label out of range at row " + std::to_string(s.row_index));
  }
}

void write_curve(const std::vector<CurvePoint>& points, const char* header,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write curve file '" + path.string() + "'");
  out << header << '\n';
  for (const auto& p : points) out << format_double(p.x) << ',' << format_double(p.y) << '\n';
  if (!out) throw Error("failed writing curve file '" + path.string() + "'");
}

}  // namespace

double auroc(const std::vector<ScoredPair>& scored) {
  check_scores(scored);
  const Counts c = count_labels(scored);
  if (c.positives == 0 || c.negatives == 0) throw Error("undefined AUROC: need both classes");

  std::vector<std::size_t> order(scored.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&scored](std::size_t a, std::size_t b) { return scored[a].score < scored[b].score; });
  // Ranks are 1-based; a tie block spanning ranks [lo, hi] gets (lo + hi) / 2.
  double rank_sum_pos = 0.0;
  for (std::size_t k = 0; k < order.size();) {
    std::size_t end = k;
    while (end < order.size() && scored[order[end]].score == scored[order[k]].score) ++end;
    const double avg_rank = 0.5 * static_cast<double>(k + 1 + end);
    std::size_t pos = 0;
    for (std::size_t x = k; x < end; ++x) pos += scored[order[x]].label == 1;
    rank_sum_pos += avg_rank * static_cast<double>(pos);
    k = end;
  }
  const double p = static_cast<double>(c.positives);
  const double n = static_cast<double>(c.negatives);
  return (rank_sum_pos - p * (p + 1.0) / 2.0) / (p * n);
}

double auprc(const std::vector<ScoredPair>& scored) {
  return pr_points(scored).auprc;
}

RocCurve roc_points(const std::vector<ScoredPair>& scored) {
  const double area = auroc(scored);
  const Counts c = count_labels(scored);
  RocCurve roc;
  roc.points.push_back({0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (const Counts& block : descending_blocks(scored)) {
    tp += block.positives;
    fp += block.negatives;
    roc.points.push_back({static_cast<double>(fp) / static_cast<double>(c.negatives),
                          static_cast<double>(tp) / static_cast<double>(c.positives)});
  }
  roc.auroc = area;
  return roc;
}

PrCurve pr_points(const std::vector<ScoredPair>& scored) {
  check_scores(scored);
  const Counts c = count_labels(scored);
  if (c.positives == 0) throw Error("undefined AUPRC: no positive labels");
  PrCurve pr;
  std::size_t tp = 0;
  std::size_t seen = 0;
  double sum = 0.0;
  for (const Counts& block : descending_blocks(scored)) {
    tp += block.positives;
    seen += block.positives + block.negatives;
    const double precision = static_cast<double>(tp) / static_cast<double>(seen);
    sum += static_cast<double>(block.positives) * precision;
    pr.points.push_back({static_cast<double>(tp) / static_cast<double>(c.positives), precision});
  }
  pr.auprc = sum / static_cast<double>(c.positives);
  return pr;
}

double trapezoid_area(const std::vector<CurvePoint>& points) {
  double area = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k) {
    area += (points[k].x - points[k - 1].x) * (points[k].y + points[k - 1].y) / 2.0;
  }
  return area;
}

EvalReport evaluate(const std::vector<ScoredPair>& scored) {
  EvalReport r;
  r.roc = roc_points(scored);
  r.pr = pr_points(scored);
  r.auroc = r.roc.auroc;
  r.auprc = r.pr.auprc;
  const Counts c = count_labels(scored);
  r.positives = c.positives;
  r.negatives = c.negatives;
  r.n = scored.size();
  return r;
}

Metrics metrics_of(const EvalReport& report) {
  return {report.auroc, report.auprc, report.positives, report.negatives, report.n};
}

Comparison compare_metrics(const Metrics& baseline, const Metrics& proposed) {
  if (baseline.auroc <= 0.0 || baseline.auprc <= 0.0) {
    throw Error("relative gain undefined for a zero baseline");
  }
  return {baseline, proposed, (proposed.auroc - baseline.auroc) / baseline.auroc * 100.0,
          (proposed.auprc - baseline.auprc) / baseline.auprc * 100.0};
}

Comparison compare(const std::vector<ScoredPair>& baseline,
                   const std::vector<ScoredPair>& proposed) {
  if (baseline.size() != proposed.size()) {
    throw Error("label mismatch: score lists have different lengths");
  }
  for (std::size_t k = 0; k < baseline.size(); ++k) {
    if (baseline[k].label != proposed[k].label) {
      throw Error("label mismatch at row " + std::to_string(k));
    }
  }
  return compare_metrics(metrics_of(evaluate(baseline)), metrics_of(evaluate(proposed)));
}

namespace {

nlohmann::ordered_json metrics_json(const Metrics& m) {
  nlohmann::ordered_json j;
  j["auroc"] = m.auroc;
  j["auprc"] = m.auprc;
  j["positives"] = m.positives;
  j["negatives"] = m.negatives;
  j["n"] = m.n;
  return j;
}

}  // namespace

std::string metrics_to_json(const Metrics& m) { return metrics_json(m).dump(2) + "\n"; }

Metrics metrics_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) throw Error("metrics file is not a JSON object");
  try {
    Metrics m;
    m.auroc = j.at("auroc").get<double>();
    m.auprc = j.at("auprc").get<double>();
    m.positives = j.value("positives", std::size_t{0});
    m.negatives = j.value("negatives", std::size_t{0});
    m.n = j.value("n", std::size_t{0});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("metrics schema mismatch: ") + e.what());
  }
}

std::string comparison_to_json(const Comparison& c) {
  nlohmann::ordered_json j;
  j["baseline"] = metrics_json(c.baseline);
  j["proposed"] = metrics_json(c.proposed);
  j["auroc_gain_pct"] = c.auroc_gain_pct;
  j["auprc_gain_pct"] = c.auprc_gain_pct;
  return j.dump(2) + "\n";
}

std::string comparison_summary(const Comparison& c) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "AUROC %.4f -> %.4f (%+.2f%%), AUPRC %.4f -> %.4f (%+.2f%%)", c.baseline.auroc,
                c.proposed.auroc, c.auroc_gain_pct, c.baseline.auprc, c.proposed.auprc,
                c.auprc_gain_pct);
  return buf;
}

void write_roc_csv(const RocCurve& roc, const std::filesystem::path& path) {
  write_curve(roc.points, "fpr,tpr", path);
}

void write_pr_csv(const PrCurve& pr, const std::filesystem::path& path) {
  write_curve(pr.points, "recall,precision", path);
}

}  // namespace xmodal::eval
