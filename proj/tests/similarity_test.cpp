#include "xmodal/similarity.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "xmodal/error.hpp"

namespace xmodal::similarity {
namespace {

using V = std::vector<double>;

TEST(CosineTest, Examples) {
  EXPECT_NEAR(cosine(V{1, 0}, V{2, 0}), 1.0, 1e-15);
  EXPECT_NEAR(cosine(V{1, 0}, V{0, 3}), 0.0, 1e-15);
  EXPECT_NEAR(cosine(V{1, 1}, V{1, 0}), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(cosine(V{1, 2}, V{-1, -2}), -1.0, 1e-15);
  EXPECT_EQ(cosine(V{0, 0}, V{1, 2}), 0.0);
  EXPECT_EQ(cosine(V{1e-13, 0}, V{1, 2}), 0.0);
  EXPECT_THROW(cosine(V{1, 2}, V{1}), Error);
}

TEST(CosineTest, SymmetricScaleInvariantAndBounded) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int trial = 0; trial < 200; ++trial) {
    V a(7), b(7);
    for (auto& x : a) x = normal(rng);
    for (auto& x : b) x = normal(rng);
    const double c = cosine(a, b);
    EXPECT_EQ(c, cosine(b, a));
    EXPECT_GE(c, -1.0 - 1e-12);
    EXPECT_LE(c, 1.0 + 1e-12);
    const double s = scale(rng);
    V as = a;
    for (auto& x : as) x *= s;
    EXPECT_NEAR(cosine(as, b), c, 1e-12);
  }
}

TEST(ScoreTest, BaselineExamples) {
  const Matrix q(2, 2, V{1, 0, 1, 1});
  const Matrix v(2, 2, V{3, 0, 0, 1});
  const auto s = score_baseline(q, v, {1, 0});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].row_index, 0u);
  EXPECT_NEAR(s[0].score, 1.0, 1e-15);
  EXPECT_EQ(s[0].label, 1);
  EXPECT_NEAR(s[1].score, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(s[1].label, 0);
  EXPECT_THROW(score_baseline(q, Matrix(2, 3), {1, 0}), Error);
  EXPECT_THROW(score_baseline(q, v, {1}), Error);
}

TEST(ScoreTest, DuplicatedViewScoresNearOne) {
  // I = [Q | 0]: the zero block needs the ridge, and every pair then projects
  // onto (almost) the same direction.
  std::mt19937_64 rng(5);
  const Matrix q = oracle::random_matrix(rng, 300, 3);
  const Matrix i = hconcat(q, Matrix(300, 2));
  const auto model = cca::fit(q, i);
  const auto s = score_cca(model, q, i, std::vector<int>(300, 1));
  for (const auto& p : s) EXPECT_NEAR(p.score, 1.0, 1e-4);
}

TEST(ScoreTest, SingleComponentScoresAreSigns) {
  std::mt19937_64 rng(6);
  const auto v = oracle::correlated_views(rng, 200, 3, 4);
  cca::CcaConfig c;
  c.k = 1;
  const auto model = cca::fit(v.q, v.i, c);
  const auto s = score_cca(model, v.q, v.i, std::vector<int>(200, 0));
  const Matrix pq = cca::project_query(model, v.q);
  const Matrix pi = cca::project_item(model, v.i);
  for (std::size_t r = 0; r < 200; ++r) {
    const double prod = pq(r, 0) * pi(r, 0);
    EXPECT_EQ(s[r].score, prod > 0 ? 1.0 : (prod < 0 ? -1.0 : 0.0));
  }
}

TEST(ScoreTest, CcaScoreIsCosineOfProjections) {
  std::mt19937_64 rng(7);
  const auto v = oracle::correlated_views(rng, 150, 4, 6);
  const auto model = cca::fit(v.q, v.i);
  const auto s = score_cca(model, v.q, v.i, std::vector<int>(150, 1));
  for (std::size_t r = 0; r < 150; ++r) {
    // Project by hand: (x - mean) W.
    V a(model.k(), 0.0), b(model.k(), 0.0);
    for (std::size_t j = 0; j < model.k(); ++j) {
      for (std::size_t c = 0; c < model.m(); ++c) a[j] += (v.q(r, c) - model.mean_q[c]) * model.w_q(c, j);
      for (std::size_t c = 0; c < model.n(); ++c) b[j] += (v.i(r, c) - model.mean_i[c]) * model.w_i(c, j);
    }
    double ab = 0, aa = 0, bb = 0;
    for (std::size_t j = 0; j < model.k(); ++j) {
      ab += a[j] * b[j];
      aa += a[j] * a[j];
      bb += b[j] * b[j];
    }
    EXPECT_NEAR(s[r].score, ab / std::sqrt(aa * bb), 1e-12);
  }
}

TEST(ScoresFileTest, RoundTrip) {
  std::vector<ScoredPair> s{{0, 0.1, 1}, {1, -0.30000000000000004, 0}, {2, 1e-300, 1}};
  const auto path = std::filesystem::temp_directory_path() / "xmodal_scores_test.csv";
  write_scores(s, path);
  EXPECT_EQ(read_scores(path), s);
  std::filesystem::remove(path);
  EXPECT_THROW(read_scores(path), Error);
}

}  // namespace
}  // namespace xmodal::similarity
