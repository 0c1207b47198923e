#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "xmodal/cca.hpp"
#include "xmodal/matrix.hpp"

namespace xmodal::similarity {

struct ScoredPair {
  std::size_t row_index = 0;
  double score = 0.0;
  int label = 0;

  friend bool operator==(const ScoredPair&, const ScoredPair&) = default;
};

/// a.b / (|a| |b|); 0 when either norm is below 1e-12.
double cosine(std::span<const double> a, std::span<const double> b);

/// Row-wise cosine between two equally shaped matrices.
std::vector<ScoredPair> score_rows(const Matrix& a, const Matrix& b, const std::vector<int>& labels);

/// cos(Q, V) on the raw text views.
std::vector<ScoredPair> score_baseline(const Matrix& q, const Matrix& v,
                                       const std::vector<int>& labels);

/// cos(Q', I') after projecting both views through the model.
std::vector<ScoredPair> score_cca(const cca::CcaModel& model, const Matrix& q, const Matrix& i,
                                  const std::vector<int>& labels);

/// CSV with header row_index,score,label; scores in shortest round-trip form.
void write_scores(const std::vector<ScoredPair>& scores, const std::filesystem::path& path);
std::vector<ScoredPair> read_scores(const std::filesystem::path& path);

}  // namespace xmodal::similarity
