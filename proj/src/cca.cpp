#include "xmodal/cca.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "json.hpp"
#include "xmodal/error.hpp"

namespace xmodal::cca {

namespace {

using linalg::SymmetricMatrix;

SymmetricMatrix regularized(const SymmetricMatrix& c, double ridge) {
  if (ridge == 0.0 || c.order() == 0) return c;
  return c.shifted(ridge * c.trace() / static_cast<double>(c.order()));
}

// max |W^T C W - I|
double whitening_deviation(const Matrix& w, const Matrix& c) {
  const Matrix g = multiply_at_b(w, multiply(c, w));
  return max_abs_diff(g, Matrix::identity(g.rows()));
}

double quad_form(const Matrix& c, const Matrix& w, std::size_t col) {
  const auto v = w.column(col);
  double s = 0.0;
  for (std::size_t r = 0; r < c.rows(); ++r) s += v[r] * dot(c.row(r), v);
  return s;
}

Matrix centered_with(const Matrix& x, const std::vector<double>& means) {
  Matrix out = x;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] -= means[c];
  }
  return out;
}

void flip_column(Matrix& m, std::size_t c) {
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) = -m(r, c);
}

}  // namespace

void CcaConfig::validate() const {
  if (k && *k < 1) throw Error("k must be >= 1");
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw Error("ridge must be a finite value >= 0");
  if (!(min_correlation >= 0.0 && min_correlation < 1.0)) {
    throw Error("min_correlation must lie in [0, 1)");
  }
}

void CcaModel::validate() const {
  config.validate();
  hash_spec.validate();
  const std::size_t kk = k();
  if (kk < 1) throw Error("model has no canonical components");
  if (mean_q.size() != m()) throw Error("mean_q length does not match w_q rows");
  if (mean_i.size() != n()) throw Error("mean_i length does not match w_i rows");
  if (w_q.cols() != kk) throw Error("w_q column count does not match rho length");
  if (w_i.cols() != kk) throw Error("w_i column count does not match rho length");
  if (kk > std::min(m(), n())) throw Error("k exceeds min(m, n)");
  if (config.k && *config.k < kk) throw Error("config.k is smaller than the stored components");
  for (std::size_t j = 0; j < kk; ++j) {
    if (!(rho[j] >= 0.0 && rho[j] <= 1.0 + 1e-9)) {
      throw Error("rho[" + std::to_string(j) + "] outside [0, 1]");
    }
    if (j > 0 && rho[j] > rho[j - 1]) throw Error("rho is not in descending order");
  }
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(mean_q) || !finite(mean_i) || !all_finite(w_q) || !all_finite(w_i)) {
    throw Error("model contains non-finite values");
  }
  if (item_layout && item_layout->image_dim + item_layout->title_dim != n()) {
    throw Error("item layout dimensions do not sum to n");
  }
}

CcaModel fit(const Matrix& q, const Matrix& i, const CcaConfig& config) {
  config.validate();
  if (q.rows() != i.rows()) {
    throw Error("fit: query and item views have different row counts (" +
                std::to_string(q.rows()) + " vs " + std::to_string(i.rows()) + ")");
  }
  if (q.rows() < 2) throw Error("fit: need at least 2 rows, got " + std::to_string(q.rows()));
  if (q.cols() == 0 || i.cols() == 0) throw Error("fit: views must have at least one column");
  if (!all_finite(q) || !all_finite(i)) throw Error("fit: non-finite input values");

  const std::size_t m = q.cols();
  const std::size_t n = i.cols();
  const std::size_t r = std::min(m, n);
  const std::size_t k = config.k.value_or(r);
  if (k > r) {
    throw Error("fit: k = " + std::to_string(k) + " exceeds min(m, n) = " + std::to_string(r));
  }

  auto cq = linalg::center_columns(q);
  auto ci = linalg::center_columns(i);
  const auto blocks = linalg::covariance_blocks(cq.centered, ci.centered);

  auto factor = [&config](const SymmetricMatrix& c, const char* view) {
    try {
      return linalg::cholesky(regularized(c, config.ridge));
    } catch (const Error& e) {
      throw Error(std::string("fit: ") + view + " covariance " + e.what() +
                  " after regularization (ridge " + std::to_string(config.ridge) +
                  "); increase --ridge");
    }
  };
  const Matrix lq = factor(blocks.c_qq, "query");
  const Matrix li = factor(blocks.c_ii, "item");

  // T = L_Q^{-1} C_QI L_I^{-T}
  const Matrix x = linalg::solve_lower(lq, blocks.c_qi);
  const Matrix t = transpose(linalg::solve_lower(li, transpose(x)));
  const auto svd = linalg::thin_svd(t);

  std::size_t keep = k;
  while (keep > 0 && svd.singular[keep - 1] < config.min_correlation) --keep;
  if (keep == 0) throw Error("fit: no canonical correlation reaches min_correlation");

  CcaModel model;
  model.mean_q = std::move(cq.means);
  model.mean_i = std::move(ci.means);
  model.w_q = linalg::solve_lower_transposed(lq, svd.left.left_columns(keep));
  model.w_i = linalg::solve_lower_transposed(li, svd.right.left_columns(keep));
  model.rho.assign(svd.singular.begin(), svd.singular.begin() + static_cast<std::ptrdiff_t>(keep));
  model.config = config;
  model.config.k = k;

  for (std::size_t j = 0; j < keep; ++j) {
    if (model.w_q(linalg::dominant_index(model.w_q, j), j) < 0.0) {
      flip_column(model.w_q, j);
      flip_column(model.w_i, j);
    }
  }
  return model;
}

Matrix project_query(const CcaModel& model, const Matrix& q) {
  if (q.cols() != model.m()) {
    throw Error("project_query: expected " + std::to_string(model.m()) + " columns, got " +
                std::to_string(q.cols()));
  }
  return multiply(centered_with(q, model.mean_q), model.w_q);
}

Matrix project_item(const CcaModel& model, const Matrix& i) {
  if (i.cols() != model.n()) {
    throw Error("project_item: expected " + std::to_string(model.n()) + " columns, got " +
                std::to_string(i.cols()));
  }
  return multiply(centered_with(i, model.mean_i), model.w_i);
}

ConstraintReport verify_constraints(const CcaModel& model, const Matrix& q, const Matrix& i,
                                    double tolerance) {
  if (q.cols() != model.m() || i.cols() != model.n()) {
    throw Error("verify_constraints: training matrices do not match model dimensions");
  }
  const auto cq = linalg::center_columns(q);
  const auto ci = linalg::center_columns(i);
  const auto blocks = linalg::covariance_blocks(cq.centered, ci.centered);
  const SymmetricMatrix rqq = regularized(blocks.c_qq, model.config.ridge);
  const SymmetricMatrix rii = regularized(blocks.c_ii, model.config.ridge);

  ConstraintReport rep;
  rep.tolerance = tolerance;
  rep.query_whitening = whitening_deviation(model.w_q, rqq.values());
  rep.item_whitening = whitening_deviation(model.w_i, rii.values());
  rep.query_whitening_unregularized = whitening_deviation(model.w_q, blocks.c_qq.values());
  rep.item_whitening_unregularized = whitening_deviation(model.w_i, blocks.c_ii.values());

  const Matrix cross = multiply_at_b(model.w_q, multiply(blocks.c_qi, model.w_i));
  for (std::size_t a = 0; a < cross.rows(); ++a) {
    for (std::size_t b = 0; b < cross.cols(); ++b) {
      const double v = cross(a, b);
      if (a == b) {
        rep.cross_diagonal = std::max(rep.cross_diagonal, std::abs(v - model.rho[a]));
      } else {
        rep.cross_offdiagonal = std::max(rep.cross_offdiagonal, std::abs(v));
      }
    }
  }

  const Matrix c_iq = transpose(blocks.c_qi);
  const Matrix qi_wi = multiply(blocks.c_qi, model.w_i);  // m x k
  const Matrix iq_wq = multiply(c_iq, model.w_q);         // n x k
  const Matrix qq_wq = multiply(rqq.values(), model.w_q);
  const Matrix ii_wi = multiply(rii.values(), model.w_i);
  for (std::size_t j = 0; j < model.k(); ++j) {
    const double lambda_q =
        std::sqrt(quad_form(rii.values(), model.w_i, j) / quad_form(rqq.values(), model.w_q, j));
    const double lambda_i = 1.0 / lambda_q;
    rep.lambda_q.push_back(lambda_q);

    double res_q = 0.0;
    for (std::size_t r = 0; r < model.m(); ++r) {
      const double d = qi_wi(r, j) - model.rho[j] * lambda_q * qq_wq(r, j);
      res_q += d * d;
    }
    double res_i = 0.0;
    for (std::size_t r = 0; r < model.n(); ++r) {
      const double d = iq_wq(r, j) - model.rho[j] * lambda_i * ii_wi(r, j);
      res_i += d * d;
    }
    rep.query_relation = std::max(rep.query_relation, std::sqrt(res_q));
    rep.item_relation = std::max(rep.item_relation, std::sqrt(res_i));
  }

  auto ok = [tolerance](double v) { return std::isfinite(v) && v <= tolerance; };
  rep.passed = ok(rep.query_whitening) && ok(rep.item_whitening) && ok(rep.cross_offdiagonal) &&
               ok(rep.cross_diagonal) && ok(rep.query_relation) && ok(rep.item_relation);
  return rep;
}

std::string model_to_json(const CcaModel& model) {
  model.validate();
  nlohmann::ordered_json j;
  j["version"] = kModelFormatVersion;
  j["m"] = model.m();
  j["n"] = model.n();
  j["k"] = model.k();
  j["ridge"] = model.config.ridge;
  j["min_correlation"] = model.config.min_correlation;
  j["mean_q"] = model.mean_q;
  j["mean_i"] = model.mean_i;
  j["rho"] = model.rho;
  j["w_q"] = std::vector<double>(model.w_q.data().begin(), model.w_q.data().end());
  j["w_i"] = std::vector<double>(model.w_i.data().begin(), model.w_i.data().end());
  j["hash_spec"] = {{"d", model.hash_spec.d}, {"algorithm", textfeat::kHashAlgorithm}};
  if (model.item_layout) {
    j["item_layout"] = {{"order", "image,title"},
                        {"image_dim", model.item_layout->image_dim},
                        {"title_dim", model.item_layout->title_dim}};
  }
  return j.dump() + "\n";
}

CcaModel model_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) throw Error("model file is not a JSON object");

  CcaModel model;
  try {
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw Error("unsupported model version " + std::to_string(version));
    }
    const auto m = j.at("m").get<std::size_t>();
    const auto n = j.at("n").get<std::size_t>();
    const auto k = j.at("k").get<std::size_t>();
    model.config.ridge = j.at("ridge").get<double>();
    model.config.min_correlation = j.at("min_correlation").get<double>();
    model.config.k = k;
    model.mean_q = j.at("mean_q").get<std::vector<double>>();
    model.mean_i = j.at("mean_i").get<std::vector<double>>();
    model.rho = j.at("rho").get<std::vector<double>>();
    auto w_q = j.at("w_q").get<std::vector<double>>();
    auto w_i = j.at("w_i").get<std::vector<double>>();
    if (model.rho.size() != k) throw Error("rho length does not match k");
    if (w_q.size() != m * k) throw Error("w_q has " + std::to_string(w_q.size()) +
                                         " values, expected m*k = " + std::to_string(m * k));
    if (w_i.size() != n * k) throw Error("w_i has " + std::to_string(w_i.size()) +
                                         " values, expected n*k = " + std::to_string(n * k));
    model.w_q = Matrix(m, k, std::move(w_q));
    model.w_i = Matrix(n, k, std::move(w_i));

    const auto& hs = j.at("hash_spec");
    if (hs.at("algorithm").get<std::string>() != textfeat::kHashAlgorithm) {
      throw Error("unsupported hash algorithm '" + hs.at("algorithm").get<std::string>() + "'");
    }
    model.hash_spec.d = hs.at("d").get<std::size_t>();

    if (auto it = j.find("item_layout"); it != j.end()) {
      if (it->at("order").get<std::string>() != "image,title") {
        throw Error("unsupported item layout order");
      }
      model.item_layout =
          ItemLayout{it->at("image_dim").get<std::size_t>(), it->at("title_dim").get<std::size_t>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("model schema mismatch: ") + e.what());
  }
  model.validate();
  return model;
}

void save_model(const CcaModel& model, const std::filesystem::path& path) {
  const std::string text = model_to_json(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write model file '" + path.string() + "'");
  out << text;
  if (!out) throw Error("failed writing model file '" + path.string() + "'");
}

CcaModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file '" + path.string() + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return model_from_json(text);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace xmodal::cca
