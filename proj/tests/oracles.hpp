#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here goes through the Cholesky/SVD solver path, the tie-block
// metric code or the hashed vectorizer it checks.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "xmodal/linalg.hpp"
#include "xmodal/matrix.hpp"
#include "xmodal/similarity.hpp"
#include "xmodal/textfeat.hpp"
#include "xmodal/tokenizer.hpp"

namespace xmodal::oracle {

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (double& v : m.data()) v = normal(rng);
  return m;
}

/// Symmetric positive definite: B B^T + order * I.
inline Matrix random_spd(std::mt19937_64& rng, std::size_t order) {
  const Matrix b = random_matrix(rng, order, order);
  Matrix a = multiply(b, transpose(b));
  for (std::size_t i = 0; i < order; ++i) a(i, i) += static_cast<double>(order);
  return a;
}

inline Matrix random_symmetric(std::mt19937_64& rng, std::size_t order) {
  Matrix a = random_matrix(rng, order, order);
  for (std::size_t i = 0; i < order; ++i) {
    for (std::size_t j = 0; j < i; ++j) a(i, j) = a(j, i);
  }
  return a;
}

/// Gauss-Jordan inverse with partial pivoting.
inline Matrix invert(const Matrix& input) {
  const std::size_t n = input.rows();
  Matrix a = input;
  Matrix inv = Matrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (a(pivot, col) == 0.0) throw std::runtime_error("oracle: singular matrix");
    for (std::size_t c = 0; c < n; ++c) {
      std::swap(a(col, c), a(pivot, c));
      std::swap(inv(col, c), inv(pivot, c));
    }
    const double d = a(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      a(col, c) /= d;
      inv(col, c) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

/// Sample covariance between the columns of x and y, 1/(t-1), computed with
/// a two-pass mean.
inline Matrix sample_cov(const Matrix& x, const Matrix& y) {
  const std::size_t t = x.rows();
  std::vector<double> mx(x.cols(), 0.0), my(y.cols(), 0.0);
  for (std::size_t r = 0; r < t; ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) mx[c] += x(r, c) / static_cast<double>(t);
    for (std::size_t c = 0; c < y.cols(); ++c) my[c] += y(r, c) / static_cast<double>(t);
  }
  Matrix cov(x.cols(), y.cols());
  for (std::size_t a = 0; a < x.cols(); ++a) {
    for (std::size_t b = 0; b < y.cols(); ++b) {
      double s = 0.0;
      for (std::size_t r = 0; r < t; ++r) s += (x(r, a) - mx[a]) * (y(r, b) - my[b]);
      cov(a, b) = s / static_cast<double>(t - 1);
    }
  }
  return cov;
}

struct CcaReference {
  std::vector<double> rho;  // descending
  Matrix w_q;               // eigenvectors of C_QQ^-1 C_QI C_II^-1 C_IQ
  double eigen_residual = 0.0;
};

/// Solves C_QQ^-1 C_QI C_II^-1 C_IQ w = rho^2 w through the symmetric similar
/// matrix C_QQ^-1/2 C_QI C_II^-1 C_IQ C_QQ^-1/2, with C_II inverted
/// explicitly. The residual of the unsymmetric equation is reported.
inline CcaReference brute_force_cca(const Matrix& q, const Matrix& i) {
  const Matrix cqq = sample_cov(q, q);
  const Matrix cii = sample_cov(i, i);
  const Matrix cqi = sample_cov(q, i);
  const Matrix ciq = transpose(cqi);
  const Matrix cii_inv = invert(cii);
  const std::size_t m = q.cols();

  const auto qq_eig = linalg::sym_eigen(linalg::SymmetricMatrix(cqq));
  Matrix inv_sqrt(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        s += qq_eig.vectors(a, j) * qq_eig.vectors(b, j) / std::sqrt(qq_eig.values[j]);
      }
      inv_sqrt(a, b) = s;
    }
  }
  Matrix sym = multiply(inv_sqrt, multiply(cqi, multiply(cii_inv, multiply(ciq, inv_sqrt))));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      const double avg = 0.5 * (sym(a, b) + sym(b, a));
      sym(a, b) = avg;
      sym(b, a) = avg;
    }
  }
  const auto eig = linalg::sym_eigen(linalg::SymmetricMatrix(sym));

  CcaReference ref;
  const std::size_t r = std::min(q.cols(), i.cols());
  ref.w_q = multiply(inv_sqrt, eig.vectors).left_columns(r);
  for (std::size_t j = 0; j < r; ++j) ref.rho.push_back(std::sqrt(std::max(eig.values[j], 0.0)));

  const Matrix full = multiply(invert(cqq), multiply(cqi, multiply(cii_inv, ciq)));
  const Matrix fw = multiply(full, ref.w_q);
  for (std::size_t j = 0; j < r; ++j) {
    double num = 0.0, den = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      const double d = fw(a, j) - ref.rho[j] * ref.rho[j] * ref.w_q(a, j);
      num += d * d;
      den += ref.w_q(a, j) * ref.w_q(a, j);
    }
    ref.eigen_residual = std::max(ref.eigen_residual, std::sqrt(num / den));
  }
  return ref;
}

/// Orthonormal basis for the column span (modified Gram-Schmidt, two passes).
inline Matrix orthonormal_basis(const Matrix& a) {
  Matrix q = a;
  for (std::size_t j = 0; j < q.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < j; ++p) {
        double s = 0.0;
        for (std::size_t r = 0; r < q.rows(); ++r) s += q(r, p) * q(r, j);
        for (std::size_t r = 0; r < q.rows(); ++r) q(r, j) -= s * q(r, p);
      }
    }
    double n = 0.0;
    for (std::size_t r = 0; r < q.rows(); ++r) n += q(r, j) * q(r, j);
    n = std::sqrt(n);
    for (std::size_t r = 0; r < q.rows(); ++r) q(r, j) /= n;
  }
  return q;
}

/// Upper bound on the sine of the largest principal angle between the column
/// spans of a and b (Frobenius norm of the residual of projecting a onto b).
inline double subspace_sine(const Matrix& a, const Matrix& b) {
  const Matrix qa = orthonormal_basis(a);
  const Matrix qb = orthonormal_basis(b);
  const Matrix coeff = multiply_at_b(qb, qa);
  const Matrix proj = multiply(qb, coeff);
  double s = 0.0;
  for (std::size_t k = 0; k < qa.size(); ++k) {
    const double d = qa.data()[k] - proj.data()[k];
    s += d * d;
  }
  return std::sqrt(s);
}

/// Fraction of positive/negative pairs ordered correctly, ties count half.
inline double all_pairs_auroc(const std::vector<similarity::ScoredPair>& scored) {
  double good = 0.0;
  double total = 0.0;
  for (const auto& p : scored) {
    if (p.label != 1) continue;
    for (const auto& n : scored) {
      if (n.label != 0) continue;
      total += 1.0;
      if (p.score > n.score) good += 1.0;
      else if (p.score == n.score) good += 0.5;
    }
  }
  return good / total;
}

/// Mean over positives of the precision among all items scoring at least as
/// high as that positive.
inline double rank_walk_auprc(const std::vector<similarity::ScoredPair>& scored) {
  double sum = 0.0;
  std::size_t positives = 0;
  for (const auto& p : scored) {
    if (p.label != 1) continue;
    ++positives;
    std::size_t above = 0, above_pos = 0;
    for (const auto& o : scored) {
      if (o.score >= p.score) {
        ++above;
        above_pos += o.label == 1;
      }
    }
    sum += static_cast<double>(above_pos) / static_cast<double>(above);
  }
  return sum / static_cast<double>(positives);
}

/// Explicit vocabulary-indexed TF-IDF: entry j is tf(vocab[j]) * idf(vocab[j]).
inline std::vector<double> explicit_tfidf(const std::vector<std::string>& vocab,
                                          const std::vector<std::string>& tokens,
                                          const textfeat::CategoryStats& stats) {
  std::vector<double> out(vocab.size(), 0.0);
  for (std::size_t j = 0; j < vocab.size(); ++j) {
    const auto tf = std::count(tokens.begin(), tokens.end(), vocab[j]);
    if (tf == 0) continue;
    auto it = stats.df.find(vocab[j]);
    const double df = it == stats.df.end() ? 0.0 : static_cast<double>(it->second);
    out[j] = static_cast<double>(tf) *
             (std::log((1.0 + static_cast<double>(stats.doc_count)) / (1.0 + df)) + 1.0);
  }
  return out;
}

inline std::string random_token(std::mt19937_64& rng) {
  static const char kAlphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789";
  std::uniform_int_distribution<int> len(3, 10);
  std::uniform_int_distribution<int> pick(0, 35);
  std::string s;
  const int n = len(rng);
  for (int k = 0; k < n; ++k) s += kAlphabet[pick(rng)];
  return s;
}

/// Distinct random tokens.
inline std::vector<std::string> random_vocabulary(std::mt19937_64& rng, std::size_t size) {
  std::set<std::string> seen;
  std::vector<std::string> vocab;
  while (vocab.size() < size) {
    auto t = random_token(rng);
    if (seen.insert(t).second) vocab.push_back(std::move(t));
  }
  return vocab;
}

}  // namespace xmodal::oracle

namespace xmodal::oracle {

struct HashingFidelity {
  double mean_signed_relative = 0.0;    // mean of (hashed - explicit) / explicit
  double mean_absolute_relative = 0.0;  // mean of |hashed - explicit| / |explicit|
  std::size_t trials = 0;
};

/// Random vocabularies of 50..max_vocab tokens with random document
/// frequencies; two documents per trial drawing each token with probability
/// 0.8 and a term count of 1..3. Compares hashed and explicit inner products.
inline HashingFidelity hashing_fidelity(std::uint64_t seed, std::size_t trials,
                                        std::size_t max_vocab, std::size_t d) {
  std::mt19937_64 rng(seed);
  const textfeat::HashSpec spec{d};
  std::uniform_int_distribution<std::size_t> vocab_size(50, max_vocab);
  std::uniform_int_distribution<std::uint64_t> df(1, 100);
  std::uniform_int_distribution<int> tf(1, 3);
  std::bernoulli_distribution present(0.8);
  std::bernoulli_distribution seen(0.5);

  HashingFidelity out;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const auto vocab = random_vocabulary(rng, vocab_size(rng));
    textfeat::CategoryStats stats{"c", 100, {}};
    for (const auto& t : vocab) {
      if (seen(rng)) stats.df[t] = df(rng);
    }
    auto draw_doc = [&]() {
      std::vector<std::string> tokens;
      std::string text;
      for (const auto& t : vocab) {
        if (!present(rng)) continue;
        for (int k = tf(rng); k > 0; --k) {
          tokens.push_back(t);
          text += t + ' ';
        }
      }
      return std::make_pair(tokens, text);
    };
    const auto [x_tokens, x_text] = draw_doc();
    const auto [y_tokens, y_text] = draw_doc();
    const double exact = dot(explicit_tfidf(vocab, x_tokens, stats),
                             explicit_tfidf(vocab, y_tokens, stats));
    const double hashed = dot(textfeat::hashed_tfidf(x_text, stats, spec),
                              textfeat::hashed_tfidf(y_text, stats, spec));
    out.mean_signed_relative += (hashed - exact) / exact;
    out.mean_absolute_relative += std::abs(hashed - exact) / std::abs(exact);
  }
  out.trials = trials;
  out.mean_signed_relative /= static_cast<double>(trials);
  out.mean_absolute_relative /= static_cast<double>(trials);
  return out;
}

}  // namespace xmodal::oracle

namespace xmodal::oracle {

/// Two views sharing a random linear signal: i = q * mix + noise.
struct ViewPair {
  Matrix q;
  Matrix i;
};

inline ViewPair correlated_views(std::mt19937_64& rng, std::size_t t, std::size_t m,
                                 std::size_t n, double noise = 1.0) {
  ViewPair v{random_matrix(rng, t, m), Matrix()};
  const Matrix mix = random_matrix(rng, m, n);
  v.i = multiply(v.q, mix);
  std::normal_distribution<double> normal;
  for (double& x : v.i.data()) x += noise * normal(rng);
  // Non-zero column means exercise centering.
  for (std::size_t r = 0; r < t; ++r) {
    for (std::size_t c = 0; c < m; ++c) v.q(r, c) += static_cast<double>(c) - 1.5;
  }
  return v;
}

}  // namespace xmodal::oracle
