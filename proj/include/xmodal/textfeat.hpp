#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "xmodal/corpus.hpp"

namespace xmodal::textfeat {

/// Document-frequency table for the item titles of one listing category.
struct CategoryStats {
  std::string category;
  std::uint64_t doc_count = 0;
  std::map<std::string, std::uint64_t> df;

  /// Throws unless doc_count >= 1 and 1 <= df[t] <= doc_count for all t.
  void validate() const;

  friend bool operator==(const CategoryStats&, const CategoryStats&) = default;
};

using StatsMap = std::map<std::string, CategoryStats>;

std::uint64_t fnv1a64(std::string_view bytes);

/// Signed feature hashing: index = fnv1a64 mod d, sign = -1 iff bit 63 set.
struct HashSpec {
  std::size_t d = 1000;

  void validate() const;
  std::size_t index(std::string_view token) const;
  double sign(std::string_view token) const;

  friend bool operator==(const HashSpec&, const HashSpec&) = default;
};

inline constexpr std::string_view kHashAlgorithm = "fnv1a64-signed";

/// Presence-based document frequencies per category.
StatsMap build_category_stats(const std::vector<std::pair<std::string, std::string>>& titles);

/// ln((1 + N) / (1 + df)) + 1, with df = 0 for unseen tokens.
double idf(const CategoryStats& stats, std::string_view token);

/// Raw term count times idf, hashed into spec.d signed buckets.
std::vector<double> hashed_tfidf(std::string_view text, const CategoryStats& stats,
                                 const HashSpec& spec);

struct TextViews {
  corpus::FeatureMatrix q;
  corpus::FeatureMatrix v;
};

/// Query and title of each pair are vectorized against the pair's category.
TextViews featurize_pairs(const std::vector<corpus::QueryItemPair>& pairs, const StatsMap& stats,
                          const HashSpec& spec);

nlohmann::json stats_to_json(const StatsMap& stats);
StatsMap stats_from_json(const nlohmann::json& j);

}  // namespace xmodal::textfeat
