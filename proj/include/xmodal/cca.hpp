#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "xmodal/linalg.hpp"
#include "xmodal/matrix.hpp"
#include "xmodal/textfeat.hpp"

namespace xmodal::cca {

struct CcaConfig {
  /// Canonical pairs to keep; defaults to min(m, n).
  std::optional<std::size_t> k;
  /// Ridge scale: C + ridge * (trace(C) / dim) * I on both within-view blocks.
  double ridge = 1e-6;
  /// Trailing components with rho below this are dropped.
  double min_correlation = 0.0;

  void validate() const;
};

/// Column layout of a concatenated item view [image | title].
struct ItemLayout {
  std::size_t image_dim = 0;
  std::size_t title_dim = 0;

  friend bool operator==(const ItemLayout&, const ItemLayout&) = default;
};

struct CcaModel {
  std::vector<double> mean_q;
  std::vector<double> mean_i;
  Matrix w_q;  // m x k
  Matrix w_i;  // n x k
  std::vector<double> rho;
  CcaConfig config;
  textfeat::HashSpec hash_spec;
  std::optional<ItemLayout> item_layout;

  std::size_t m() const { return w_q.rows(); }
  std::size_t n() const { return w_i.rows(); }
  std::size_t k() const { return rho.size(); }

  /// Structural invariants: shapes, finiteness, rho in [0, 1 + 1e-9] and
  /// non-increasing, config ranges.
  void validate() const;
};

/// Whitening + SVD solution of the two-view CCA problem.
CcaModel fit(const Matrix& q, const Matrix& i, const CcaConfig& config = {});

Matrix project_query(const CcaModel& model, const Matrix& q);
Matrix project_item(const CcaModel& model, const Matrix& i);

/// Maximum deviations from the canonical constraints on training data.
/// "Regularized" figures use the ridge-shifted within-view covariances the
/// model was fitted against; those decide `passed`.
struct ConstraintReport {
  double query_whitening = 0.0;      // max |W_Q^T C~_QQ W_Q - I|
  double item_whitening = 0.0;       // max |W_I^T C~_II W_I - I|
  double cross_offdiagonal = 0.0;    // max off-diagonal |W_Q^T C_QI W_I|
  double cross_diagonal = 0.0;       // max |diag(W_Q^T C_QI W_I) - rho|
  double query_relation = 0.0;       // max_j ||C_QI w_I - rho lambda_Q C~_QQ w_Q||
  double item_relation = 0.0;        // max_j ||C_IQ w_Q - rho lambda_I C~_II w_I||
  double query_whitening_unregularized = 0.0;
  double item_whitening_unregularized = 0.0;
  std::vector<double> lambda_q;      // sqrt(w_I^T C~_II w_I / w_Q^T C~_QQ w_Q)
  double tolerance = 1e-6;
  bool passed = false;
};

ConstraintReport verify_constraints(const CcaModel& model, const Matrix& q, const Matrix& i,
                                    double tolerance = 1e-6);

inline constexpr int kModelFormatVersion = 1;

std::string model_to_json(const CcaModel& model);
CcaModel model_from_json(const std::string& text);
void save_model(const CcaModel& model, const std::filesystem::path& path);
CcaModel load_model(const std::filesystem::path& path);

}  // namespace xmodal::cca
