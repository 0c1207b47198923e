#pragma once

#include <vector>

#include "xmodal/matrix.hpp"

// Dense real linear algebra used by the CCA solver. Everything here is a pure
// function of its inputs and bitwise deterministic.
namespace xmodal::linalg {

/// Square matrix checked for symmetry on construction:
/// |A(i,j) - A(j,i)| <= 1e-12 * max(1, |A(i,j)|).
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(Matrix values);

  std::size_t order() const { return values_.rows(); }
  const Matrix& values() const { return values_; }
  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }

  double trace() const;
  /// A + shift * I.
  SymmetricMatrix shifted(double shift) const;

 private:
  Matrix values_;
};

/// Covariance blocks of two centered views. C_IQ is the transpose of c_qi.
struct CovarianceBlocks {
  SymmetricMatrix c_qq;
  SymmetricMatrix c_ii;
  Matrix c_qi;
};

struct Centered {
  Matrix centered;
  std::vector<double> means;
};

Centered center_columns(const Matrix& m);

/// Blocks with the 1/(t-1) normalization. Inputs must already be centered.
CovarianceBlocks covariance_blocks(const Matrix& q_centered, const Matrix& i_centered);

/// Lower-triangular L with A = L L^T. Throws when a pivot is not positive,
/// naming the pivot index.
Matrix cholesky(const SymmetricMatrix& a);

/// Solves L X = B for lower-triangular L.
Matrix solve_lower(const Matrix& lower, const Matrix& rhs);
/// Solves L^T X = B for lower-triangular L.
Matrix solve_lower_transposed(const Matrix& lower, const Matrix& rhs);

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // column j pairs with values[j]
};

/// Cyclic Jacobi. Each eigenvector has its largest-magnitude entry positive.
EigenDecomposition sym_eigen(const SymmetricMatrix& a);

struct ThinSvd {
  Matrix left;                  // p x r
  std::vector<double> singular;  // r = min(p, q), descending, non-negative
  Matrix right;                 // q x r
};

/// Thin SVD through the Gram matrix of the smaller side. Each left vector has
/// its largest-magnitude entry positive; the right vector follows it.
ThinSvd thin_svd(const Matrix& a);

/// Index of the largest-magnitude entry of column `c` (first wins on ties).
std::size_t dominant_index(const Matrix& m, std::size_t c);

}  // namespace xmodal::linalg
