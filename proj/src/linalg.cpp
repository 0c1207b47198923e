#include "xmodal/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "xmodal/error.hpp"

namespace xmodal::linalg {

namespace {

constexpr int kMaxSweeps = 100;

// Orthogonalizes column `target` of `basis` against columns [0, count) twice
// (modified Gram-Schmidt with one reorthogonalization pass) and returns the
// remaining norm. The column is left unnormalized.
double orthogonalize_column(Matrix& basis, std::size_t target, std::size_t count) {
  const std::size_t n = basis.rows();
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t c = 0; c < count; ++c) {
      double proj = 0.0;
      for (std::size_t r = 0; r < n; ++r) proj += basis(r, c) * basis(r, target);
      for (std::size_t r = 0; r < n; ++r) basis(r, target) -= proj * basis(r, c);
    }
  }
  double norm = 0.0;
  for (std::size_t r = 0; r < n; ++r) norm += basis(r, target) * basis(r, target);
  return std::sqrt(norm);
}

void scale_column(Matrix& m, std::size_t c, double factor) {
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) *= factor;
}

// Fills column `target` with a unit vector orthogonal to columns [0, target),
// trying standard basis vectors in index order.
void complete_column(Matrix& basis, std::size_t target) {
  for (std::size_t e = 0; e < basis.rows(); ++e) {
    for (std::size_t r = 0; r < basis.rows(); ++r) basis(r, target) = (r == e) ? 1.0 : 0.0;
    const double norm = orthogonalize_column(basis, target, target);
    if (norm > 0.5) {
      scale_column(basis, target, 1.0 / norm);
      return;
    }
  }
  throw Error("thin_svd: cannot complete orthonormal basis");
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols()) {
    throw Error("symmetric matrix must be square, got " + std::to_string(values_.rows()) + "x" +
                std::to_string(values_.cols()));
  }
  for (std::size_t i = 0; i < order(); ++i) {
    for (std::size_t j = i + 1; j < order(); ++j) {
      const double a = values_(i, j);
      const double b = values_(j, i);
      if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) {
        throw Error("matrix is not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) +
                    ")");
      }
    }
  }
}

double SymmetricMatrix::trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < order(); ++i) s += values_(i, i);
  return s;
}

SymmetricMatrix SymmetricMatrix::shifted(double shift) const {
  Matrix m = values_;
  for (std::size_t i = 0; i < order(); ++i) m(i, i) += shift;
  return SymmetricMatrix(std::move(m));
}

Centered center_columns(const Matrix& m) {
  if (m.rows() == 0) throw Error("center_columns: empty matrix");
  std::vector<double> means(m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) means[c] += row[c];
  }
  for (double& v : means) v /= static_cast<double>(m.rows());

  Matrix centered = m;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = centered.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) row[c] -= means[c];
  }
  return {std::move(centered), std::move(means)};
}

CovarianceBlocks covariance_blocks(const Matrix& q_centered, const Matrix& i_centered) {
  if (q_centered.rows() != i_centered.rows()) {
    throw Error("covariance_blocks: row counts differ (" + std::to_string(q_centered.rows()) +
                " vs " + std::to_string(i_centered.rows()) + ")");
  }
  const std::size_t t = q_centered.rows();
  if (t < 2) throw Error("covariance_blocks: need at least 2 rows, got " + std::to_string(t));
  const double scale = 1.0 / static_cast<double>(t - 1);

  auto scaled = [scale](Matrix m) {
    for (double& v : m.data()) v *= scale;
    return m;
  };
  return CovarianceBlocks{
      SymmetricMatrix(scaled(multiply_at_b(q_centered, q_centered))),
      SymmetricMatrix(scaled(multiply_at_b(i_centered, i_centered))),
      scaled(multiply_at_b(q_centered, i_centered)),
  };
}

Matrix cholesky(const SymmetricMatrix& a) {
  const std::size_t n = a.order();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw Error("not positive definite (pivot " + std::to_string(j) + ")");
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

Matrix solve_lower(const Matrix& lower, const Matrix& rhs) {
  const std::size_t n = lower.rows();
  if (lower.cols() != n || rhs.rows() != n) throw Error("solve_lower: shape mismatch");
  Matrix x = rhs;
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = x.row(i);
    for (std::size_t k = 0; k < i; ++k) {
      const double lik = lower(i, k);
      if (lik == 0.0) continue;
      auto xk = x.row(k);
      for (std::size_t c = 0; c < x.cols(); ++c) xi[c] -= lik * xk[c];
    }
    const double inv = 1.0 / lower(i, i);
    for (double& v : xi) v *= inv;
  }
  return x;
}

Matrix solve_lower_transposed(const Matrix& lower, const Matrix& rhs) {
  const std::size_t n = lower.rows();
  if (lower.cols() != n || rhs.rows() != n) throw Error("solve_lower_transposed: shape mismatch");
  Matrix x = rhs;
  for (std::size_t ii = n; ii-- > 0;) {
    auto xi = x.row(ii);
    for (std::size_t k = ii + 1; k < n; ++k) {
      const double lki = lower(k, ii);
      if (lki == 0.0) continue;
      auto xk = x.row(k);
      for (std::size_t c = 0; c < x.cols(); ++c) xi[c] -= lki * xk[c];
    }
    const double inv = 1.0 / lower(ii, ii);
    for (double& v : xi) v *= inv;
  }
  return x;
}

std::size_t dominant_index(const Matrix& m, std::size_t c) {
  std::size_t best = 0;
  double best_abs = -1.0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double v = std::abs(m(r, c));
    if (v > best_abs) {
      best_abs = v;
      best = r;
    }
  }
  return best;
}

EigenDecomposition sym_eigen(const SymmetricMatrix& input) {
  const std::size_t n = input.order();
  Matrix a = input.values();
  Matrix v = Matrix::identity(n);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += std::abs(a(p, q));
    }
    if (off == 0.0) break;
    // Early sweeps skip small rotations (Rutishauser threshold).
    const double threshold = sweep < 3 ? 0.2 * off / static_cast<double>(n * n) : 0.0;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(a(p, p)) + g == std::abs(a(p, p)) &&
            std::abs(a(q, q)) + g == std::abs(a(q, q))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        if (std::abs(apq) <= threshold || apq == 0.0) continue;

        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        auto row_p = a.row(p);
        auto row_q = a.row(q);
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = row_p[k];
          const double aqk = row_q[k];
          row_p[k] = c * apk - s * aqk;
          row_q[k] = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    if (sweep == kMaxSweeps - 1) throw Error("sym_eigen: Jacobi iteration did not converge");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&a](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  EigenDecomposition out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    out.values[j] = a(src, src);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, j) = v(r, src);
    if (out.vectors(dominant_index(out.vectors, j), j) < 0.0) scale_column(out.vectors, j, -1.0);
  }
  return out;
}

ThinSvd thin_svd(const Matrix& a) {
  const std::size_t p = a.rows();
  const std::size_t q = a.cols();
  const bool wide = p <= q;
  const std::size_t r = std::min(p, q);
  // The Gram matrix lives on the smaller side; the other side is recovered by
  // back-substitution through `a`.
  const Matrix& small_side = wide ? a : transpose(a);
  const std::size_t gram_order = small_side.rows();
  const std::size_t other_dim = small_side.cols();

  Matrix gram(gram_order, gram_order);
  for (std::size_t i = 0; i < gram_order; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double s = dot(small_side.row(i), small_side.row(j));
      gram(i, j) = s;
      gram(j, i) = s;
    }
  }
  EigenDecomposition eig = sym_eigen(SymmetricMatrix(std::move(gram)));

  std::vector<double> sigma(r);
  for (std::size_t j = 0; j < r; ++j) sigma[j] = std::sqrt(std::max(eig.values[j], 0.0));
  const double sigma_max = r > 0 ? sigma[0] : 0.0;
  const double negligible =
      sigma_max * 1e-13 * static_cast<double>(std::max<std::size_t>(p, q));

  Matrix primary = eig.vectors.left_columns(r);
  Matrix secondary(other_dim, r);
  for (std::size_t j = 0; j < r; ++j) {
    if (sigma[j] > negligible && sigma[j] > 0.0) {
      // secondary_j = small_side^T primary_j / sigma_j
      for (std::size_t c = 0; c < other_dim; ++c) {
        double s = 0.0;
        for (std::size_t k = 0; k < gram_order; ++k) s += small_side(k, c) * primary(k, j);
        secondary(c, j) = s / sigma[j];
      }
      const double norm = orthogonalize_column(secondary, j, j);
      if (norm > 0.5) {
        scale_column(secondary, j, 1.0 / norm);
        continue;
      }
    }
    complete_column(secondary, j);
  }

  ThinSvd out{wide ? std::move(primary) : std::move(secondary), std::move(sigma),
              wide ? std::move(secondary) : std::move(primary)};
  for (std::size_t j = 0; j < r; ++j) {
    if (out.left(dominant_index(out.left, j), j) < 0.0) {
      scale_column(out.left, j, -1.0);
      scale_column(out.right, j, -1.0);
    }
  }
  return out;
}

}  // namespace xmodal::linalg
