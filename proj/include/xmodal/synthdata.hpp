#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "xmodal/corpus.hpp"

// Seeded generators with known structure, standing in for judged search logs.
namespace xmodal::synthdata {

struct TwoViewSpec {
  std::size_t t = 1000;
  std::size_t p = 3;
  std::size_t q = 3;
  std::vector<double> correlations;  // population canonical correlations
  std::uint64_t seed = 0;

  void validate() const;
};

struct TwoViewData {
  corpus::FeatureMatrix x;
  corpus::FeatureMatrix y;
};

/// X[:, j] = rho_j u_j + sqrt(1 - rho_j^2) e_j and Y[:, j] = u_j for the
/// correlated columns; every other column is independent noise.
TwoViewData gen_two_view(const TwoViewSpec& spec);

struct RetrievalSpec {
  std::size_t t = 1000;
  std::size_t topic_dim = 16;
  std::size_t d_text = 32;
  std::size_t d_image = 64;
  double text_coverage = 0.5;   // leading fraction of topic dims seen by titles
  double image_coverage = 0.5;  // trailing fraction seen by images
  double noise = 2.0;
  double prevalence = 0.78;
  std::uint64_t seed = 0;

  void validate() const;
  std::size_t text_topics() const;
  std::size_t image_topics() const;
};

struct RetrievalData {
  std::vector<corpus::QueryItemPair> pairs;  // token-id text rendering of the same latents
  corpus::FeatureMatrix q;                   // t x d_text
  corpus::FeatureMatrix v;                   // t x d_text
  corpus::FeatureMatrix u;                   // t x d_image, row_ids = image ids
  std::vector<int> labels;
};

/// Latent-topic query/item generator. Relevant pairs share the topic vector
/// between the query and item sides; irrelevant pairs draw the item topic
/// independently. Queries see every topic dimension through a fixed random
/// map, titles only the text-covered subset through the same map, images the
/// image-covered subset through their own map.
RetrievalData gen_retrieval(const RetrievalSpec& spec);

inline constexpr std::size_t kRetrievalCategories = 4;

TwoViewSpec two_view_spec_from_json(const nlohmann::json& j);
RetrievalSpec retrieval_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TwoViewSpec& spec);
nlohmann::json to_json(const RetrievalSpec& spec);

}  // namespace xmodal::synthdata
