#include "xmodal/textfeat.hpp"

#include <cmath>
#include <set>

#include "xmodal/error.hpp"
#include "xmodal/tokenizer.hpp"

namespace xmodal::textfeat {

void CategoryStats::validate() const {
  if (doc_count < 1) throw Error("category '" + category + "': doc_count must be >= 1");
  for (const auto& [token, count] : df) {
    if (count < 1 || count > doc_count) {
      throw Error("category '" + category + "': df['" + token + "'] = " + std::to_string(count) +
                  " outside [1, " + std::to_string(doc_count) + "]");
    }
  }
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

void HashSpec::validate() const {
  if (d < 2) throw Error("hash dimensionality must be >= 2, got " + std::to_string(d));
}

std::size_t HashSpec::index(std::string_view token) const { return fnv1a64(token) % d; }

double HashSpec::sign(std::string_view token) const {
  return (fnv1a64(token) >> 63) == 0 ? 1.0 : -1.0;
}

StatsMap build_category_stats(const std::vector<std::pair<std::string, std::string>>& titles) {
  StatsMap out;
  for (const auto& [category, title] : titles) {
    auto& stats = out[category];
    stats.category = category;
    ++stats.doc_count;
    const auto tokens = tokenize(title);
    for (const auto& token : std::set<std::string>(tokens.begin(), tokens.end())) {
      ++stats.df[token];
    }
  }
  return out;
}

double idf(const CategoryStats& stats, std::string_view token) {
  auto it = stats.df.find(std::string(token));
  const double df = it == stats.df.end() ? 0.0 : static_cast<double>(it->second);
  const double n = static_cast<double>(stats.doc_count);
  return std::log((1.0 + n) / (1.0 + df)) + 1.0;
}

std::vector<double> hashed_tfidf(std::string_view text, const CategoryStats& stats,
                                 const HashSpec& spec) {
  spec.validate();
  std::vector<double> out(spec.d, 0.0);
  std::map<std::string, int> term_counts;
  for (auto& token : tokenize(text)) ++term_counts[std::move(token)];
  for (const auto& [token, tf] : term_counts) {
    out[spec.index(token)] += spec.sign(token) * static_cast<double>(tf) * idf(stats, token);
  }
  return out;
}

TextViews featurize_pairs(const std::vector<corpus::QueryItemPair>& pairs, const StatsMap& stats,
                          const HashSpec& spec) {
  spec.validate();
  Matrix q(pairs.size(), spec.d);
  Matrix v(pairs.size(), spec.d);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto it = stats.find(pairs[i].category);
    if (it == stats.end()) {
      throw Error("no category statistics for '" + pairs[i].category + "' (row " +
                  std::to_string(i) + ")");
    }
    const auto qv = hashed_tfidf(pairs[i].query, it->second, spec);
    const auto tv = hashed_tfidf(pairs[i].title, it->second, spec);
    std::copy(qv.begin(), qv.end(), q.row(i).begin());
    std::copy(tv.begin(), tv.end(), v.row(i).begin());
  }
  return {corpus::FeatureMatrix{std::move(q), std::nullopt},
          corpus::FeatureMatrix{std::move(v), std::nullopt}};
}

nlohmann::json stats_to_json(const StatsMap& stats) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [name, s] : stats) {
    arr.push_back({{"category", s.category}, {"doc_count", s.doc_count}, {"df", s.df}});
  }
  return arr;
}

StatsMap stats_from_json(const nlohmann::json& j) {
  StatsMap out;
  auto read_one = [&out](const nlohmann::json& item) {
    CategoryStats s;
    try {
      s.category = item.at("category").get<std::string>();
      s.doc_count = item.at("doc_count").get<std::uint64_t>();
      s.df = item.at("df").get<std::map<std::string, std::uint64_t>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("invalid category statistics: ") + e.what());
    }
    s.validate();
    out[s.category] = std::move(s);
  };
  if (j.is_array()) {
    for (const auto& item : j) read_one(item);
  } else if (j.is_object()) {
    read_one(j);
  } else {
    throw Error("category statistics must be an object or an array of objects");
  }
  return out;
}

}  // namespace xmodal::textfeat
