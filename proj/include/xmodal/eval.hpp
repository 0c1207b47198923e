#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "xmodal/similarity.hpp"

namespace xmodal::eval {

using similarity::ScoredPair;

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// Points are (false positive rate, true positive rate), one per distinct
/// threshold, bracketed by (0,0) and (1,1).
struct RocCurve {
  std::vector<CurvePoint> points;
  double auroc = 0.0;
};

/// Points are (recall, precision), one per distinct threshold in descending
/// score order.
struct PrCurve {
  std::vector<CurvePoint> points;
  double auprc = 0.0;
};

/// Mann-Whitney statistic with average ranks for ties.
double auroc(const std::vector<ScoredPair>& scored);

/// Average precision; tied scores are processed as one block.
double auprc(const std::vector<ScoredPair>& scored);

RocCurve roc_points(const std::vector<ScoredPair>& scored);
PrCurve pr_points(const std::vector<ScoredPair>& scored);

/// Trapezoidal area under a curve given as (x, y) points.
double trapezoid_area(const std::vector<CurvePoint>& points);

struct EvalReport {
  RocCurve roc;
  PrCurve pr;
  double auroc = 0.0;
  double auprc = 0.0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t n = 0;
};

EvalReport evaluate(const std::vector<ScoredPair>& scored);

/// Headline numbers of a report, as stored in metrics files.
struct Metrics {
  double auroc = 0.0;
  double auprc = 0.0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t n = 0;
};

Metrics metrics_of(const EvalReport& report);

struct Comparison {
  Metrics baseline;
  Metrics proposed;
  double auroc_gain_pct = 0.0;  // (proposed - baseline) / baseline * 100
  double auprc_gain_pct = 0.0;
};

Comparison compare_metrics(const Metrics& baseline, const Metrics& proposed);
/// Requires identical labels row by row.
Comparison compare(const std::vector<ScoredPair>& baseline, const std::vector<ScoredPair>& proposed);

std::string metrics_to_json(const Metrics& m);
Metrics metrics_from_json(const std::string& text);
std::string comparison_to_json(const Comparison& c);
std::string comparison_summary(const Comparison& c);

void write_roc_csv(const RocCurve& roc, const std::filesystem::path& path);
void write_pr_csv(const PrCurve& pr, const std::filesystem::path& path);

}  // namespace xmodal::eval
