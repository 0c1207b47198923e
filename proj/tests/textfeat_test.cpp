#include "xmodal/textfeat.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "xmodal/error.hpp"
#include "xmodal/tokenizer.hpp"

namespace xmodal::textfeat {
namespace {

using Tokens = std::vector<std::string>;

TEST(TokenizeTest, Examples) {
  EXPECT_EQ(tokenize("iPhone 12 Pro-Max"), (Tokens{"iphone", "12", "pro", "max"}));
  EXPECT_EQ(tokenize(""), Tokens{});
  EXPECT_EQ(tokenize("Größe 42"), (Tokens{"größe", "42"}));
}

TEST(TokenizeTest, SeparatorsAndDuplicates) {
  EXPECT_EQ(tokenize("  red,,RED__red  "), (Tokens{"red", "red", "red"}));
  EXPECT_EQ(tokenize("ÄÖÜ café"), (Tokens{"äöü", "café"}));
  EXPECT_EQ(tokenize("a\xff" "b"), (Tokens{"a", "b"}));  // invalid byte separates
  EXPECT_EQ(tokenize("!!! ???"), Tokens{});
}

TEST(Fnv1aTest, ReferenceVectors) {
  // Computed independently from the published FNV-1a 64 parameters.
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("red"), 0x89e9be1960f4c21cULL);
  EXPECT_EQ(fnv1a64("shoe"), 0x46dc5118e28e0df2ULL);
}

TEST(HashSpecTest, IndexAndSign) {
  const HashSpec spec{8};
  EXPECT_EQ(spec.index("red"), 4u);
  EXPECT_EQ(spec.sign("red"), -1.0);
  EXPECT_EQ(spec.index("shoe"), 2u);
  EXPECT_EQ(spec.sign("shoe"), 1.0);
  EXPECT_THROW(HashSpec{1}.validate(), Error);
}

TEST(CategoryStatsTest, Examples) {
  auto stats = build_category_stats({{"c", "red shoe"}, {"c", "red hat"}});
  ASSERT_EQ(stats.size(), 1u);
  const auto& c = stats.at("c");
  EXPECT_EQ(c.doc_count, 2u);
  EXPECT_EQ(c.df.at("red"), 2u);
  EXPECT_EQ(c.df.at("shoe"), 1u);
  EXPECT_EQ(c.df.at("hat"), 1u);

  stats = build_category_stats({{"c", "red red red"}});
  EXPECT_EQ(stats.at("c").df.at("red"), 1u);

  stats = build_category_stats({{"a", "red"}, {"b", "blue"}, {"b", "red"}});
  ASSERT_EQ(stats.size(), 2u);
  EXPECT_EQ(stats.at("a").doc_count, 1u);
  EXPECT_EQ(stats.at("b").doc_count, 2u);
  EXPECT_EQ(stats.at("b").df.count("blue"), 1u);
  EXPECT_EQ(stats.at("a").df.count("blue"), 0u);
}

TEST(CategoryStatsTest, JsonRoundTripAndValidation) {
  const auto stats = build_category_stats({{"c", "red shoe"}, {"d", "blue hat"}});
  EXPECT_EQ(stats_from_json(stats_to_json(stats)), stats);
  EXPECT_THROW(stats_from_json(nlohmann::json::parse(
                   R"({"category":"c","doc_count":1,"df":{"red":2}})")),
               Error);
  EXPECT_THROW(stats_from_json(nlohmann::json::parse(R"({"category":"c"})")), Error);
}

CategoryStats two_doc_stats() {
  return build_category_stats({{"c", "red shoe"}, {"c", "red hat"}}).at("c");
}

TEST(IdfTest, Examples) {
  CategoryStats s{"c", 2, {{"a", 1}, {"b", 2}}};
  EXPECT_NEAR(idf(s, "a"), 1.405465, 1e-6);
  EXPECT_DOUBLE_EQ(idf(s, "a"), std::log(1.5) + 1.0);
  EXPECT_EQ(idf(s, "b"), 1.0);
  EXPECT_NEAR(idf(s, "zzz"), 2.098612, 1e-6);
}

TEST(HashedTfidfTest, Examples) {
  const HashSpec spec{8};
  const auto stats = two_doc_stats();

  EXPECT_EQ(hashed_tfidf("", stats, spec), std::vector<double>(8, 0.0));

  // "shoe": df = 1, N = 2; fnv1a64("shoe") mod 8 = 2 with bit 63 clear.
  auto v = hashed_tfidf("shoe", stats, spec);
  std::vector<double> expected(8, 0.0);
  expected[2] = std::log(1.5) + 1.0;
  EXPECT_EQ(v, expected);

  // A title-table token with df = 1 and sign bit set: "red" lands on 4, negative.
  const CategoryStats red_stats{"c", 2, {{"red", 1}}};
  v = hashed_tfidf("red", red_stats, spec);
  expected.assign(8, 0.0);
  expected[4] = -(std::log(1.5) + 1.0);
  EXPECT_EQ(v, expected);

  // "h" and "aa" share bucket 7 under d = 8 with opposite signs (found by a
  // brute-force search over short lowercase strings); equal unseen idf.
  ASSERT_EQ(spec.index("h"), 7u);
  ASSERT_EQ(spec.index("aa"), 7u);
  ASSERT_EQ(spec.sign("h"), -spec.sign("aa"));
  v = hashed_tfidf("h aa", stats, spec);
  EXPECT_EQ(v[7], 0.0);
  EXPECT_EQ(v, std::vector<double>(8, 0.0));
}

TEST(HashedTfidfTest, TermCountsScaleWeight) {
  const HashSpec spec{16};
  const auto stats = two_doc_stats();
  const auto one = hashed_tfidf("hat", stats, spec);
  const auto three = hashed_tfidf("hat HAT hat", stats, spec);
  for (std::size_t k = 0; k < 16; ++k) EXPECT_EQ(three[k], 3.0 * one[k]);
}

TEST(HashedTfidfTest, LinearityOverTokens) {
  std::mt19937_64 rng(17);
  const HashSpec spec{13};
  const auto stats = build_category_stats({{"c", "alpha beta gamma"}, {"c", "beta delta"}}).at("c");
  const auto vocab = oracle::random_vocabulary(rng, 30);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::string text;
    std::vector<double> sum(13, 0.0);
    for (int k = 0; k < 6; ++k) {
      const auto& tok = vocab[pick(rng)];
      text += tok + " ";
      const auto single = hashed_tfidf(tok, stats, spec);
      for (std::size_t j = 0; j < 13; ++j) sum[j] += single[j];
    }
    const auto whole = hashed_tfidf(text, stats, spec);
    for (std::size_t j = 0; j < 13; ++j) EXPECT_NEAR(whole[j], sum[j], 1e-12);
  }
}

TEST(HashedTfidfTest, SignedPermutationOfExplicitVectorWhenInjective) {
  std::mt19937_64 rng(23);
  const HashSpec spec{1000};
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto vocab = oracle::random_vocabulary(rng, 20);
    std::set<std::size_t> buckets;
    for (const auto& t : vocab) buckets.insert(spec.index(t));
    if (buckets.size() != vocab.size()) continue;  // not injective on this vocabulary
    ++checked;

    CategoryStats stats{"c", 10, {}};
    std::uniform_int_distribution<std::uint64_t> df(1, 10);
    for (std::size_t j = 0; j < vocab.size(); j += 2) stats.df[vocab[j]] = df(rng);

    std::vector<std::string> tokens;
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
    for (int k = 0; k < 15; ++k) tokens.push_back(vocab[pick(rng)]);
    std::string text;
    for (const auto& t : tokens) text += t + " ";

    const auto hashed = hashed_tfidf(text, stats, spec);
    const auto exact = oracle::explicit_tfidf(vocab, tokens, stats);
    std::vector<double> rebuilt(spec.d, 0.0);
    for (std::size_t j = 0; j < vocab.size(); ++j) {
      rebuilt[spec.index(vocab[j])] = spec.sign(vocab[j]) * exact[j];
    }
    EXPECT_EQ(hashed, rebuilt);
  }
  EXPECT_GT(checked, 100);
}

TEST(FeaturizePairsTest, Examples) {
  const HashSpec spec{32};
  const std::vector<corpus::QueryItemPair> pairs = {
      {"red shoe", "red shoe", "a", "i1", 1},
      {"zebra", "red hat", "a", "i2", 0},
      {"red", "red", "b", "i3", 1},
      {"red", "red", "a", "i4", 1},
  };
  const auto stats = build_category_stats({{"a", "red shoe"}, {"a", "red hat"}, {"b", "red"},
                                           {"b", "blue"}, {"b", "green"}});
  const auto views = featurize_pairs(pairs, stats, spec);
  ASSERT_EQ(views.q.rows(), 4u);
  ASSERT_EQ(views.q.cols(), 32u);
  EXPECT_EQ(views.v.cols(), 32u);

  // Identical query and title -> identical rows.
  for (std::size_t c = 0; c < 32; ++c) EXPECT_EQ(views.q.values(0, c), views.v.values(0, c));

  // Unseen token uses df = 0.
  const double unseen = std::log(3.0) + 1.0;
  EXPECT_EQ(views.q.values(1, spec.index("zebra")), spec.sign("zebra") * unseen);

  // Same query text, different category tables -> different rows.
  EXPECT_NE(views.q.values.row(2)[spec.index("red")], views.q.values.row(3)[spec.index("red")]);

  const std::vector<corpus::QueryItemPair> orphan = {{"q", "t", "nowhere", "i", 1}};
  try {
    featurize_pairs(orphan, stats, spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("nowhere"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("row 0"), std::string::npos);
  }
}

}  // namespace
}  // namespace xmodal::textfeat

namespace xmodal::textfeat {
namespace {

TEST(HashedTfidfTest, InnerProductsAreUnbiasedUnderHashing) {
  const auto f = oracle::hashing_fidelity(2024, 1000, 500, 1000);
  EXPECT_LT(std::abs(f.mean_signed_relative), 0.05);
  EXPECT_LT(f.mean_absolute_relative, 0.05);
}

}  // namespace
}  // namespace xmodal::textfeat
