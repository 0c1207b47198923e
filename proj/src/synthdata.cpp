#include "xmodal/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "xmodal/error.hpp"
#include "xmodal/rng.hpp"

namespace xmodal::synthdata {

namespace {

// Topic magnitude above which a dimension is rendered as a word (the median
// of |N(0,1)|).
constexpr double kWordThreshold = 0.6744897501960817;

std::size_t covered(double fraction, std::size_t dims) {
  const auto n = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(dims)));
  return std::clamp<std::size_t>(n, 1, dims);
}

Matrix random_map(CounterRng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
  for (double& v : m.data()) v = rng.normal() * scale;
  return m;
}

// out = sum_{j in [lo, hi)} z[j] * map.row(j) + noise * e
void emit_view(std::span<double> out, const std::vector<double>& z, std::size_t lo, std::size_t hi,
               const Matrix& map, double noise, CounterRng& rng) {
  for (double& v : out) v = 0.0;
  for (std::size_t j = lo; j < hi; ++j) {
    auto row = map.row(j);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += z[j] * row[c];
  }
  for (double& v : out) v += noise * rng.normal();
}

// One word per topic dimension whose magnitude clears the threshold, always
// including the strongest dimension so the text is never empty.
std::string render_words(const std::vector<double>& z, std::size_t lo, std::size_t hi) {
  std::size_t strongest = lo;
  for (std::size_t j = lo; j < hi; ++j) {
    if (std::abs(z[j]) > std::abs(z[strongest])) strongest = j;
  }
  std::string text;
  for (std::size_t j = lo; j < hi; ++j) {
    if (j != strongest && std::abs(z[j]) <= kWordThreshold) continue;
    if (!text.empty()) text += ' ';
    text += 'w' + std::to_string(j) + (z[j] >= 0.0 ? 'p' : 'n');
  }
  return text;
}

template <typename T>
T field(const nlohmann::json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(std::string("spec field '") + key + "' has the wrong type");
  }
}

}  // namespace

void TwoViewSpec::validate() const {
  if (t < 1) throw Error("two-view spec: t must be >= 1");
  if (p < 1 || q < 1) throw Error("two-view spec: p and q must be >= 1");
  if (correlations.size() > std::min(p, q)) {
    throw Error("two-view spec: more correlations than min(p, q)");
  }
  for (std::size_t j = 0; j < correlations.size(); ++j) {
    const double r = correlations[j];
    if (!(r >= 0.0 && r < 1.0)) throw Error("two-view spec: correlations must lie in [0, 1)");
    if (j > 0 && r > correlations[j - 1]) {
      throw Error("two-view spec: correlations must be non-increasing");
    }
  }
}

TwoViewData gen_two_view(const TwoViewSpec& spec) {
  spec.validate();
  CounterRng shared(spec.seed, "two_view/shared");
  CounterRng x_noise(spec.seed, "two_view/x_noise");
  CounterRng y_noise(spec.seed, "two_view/y_noise");

  Matrix x(spec.t, spec.p);
  Matrix y(spec.t, spec.q);
  const std::size_t r = spec.correlations.size();
  for (std::size_t row = 0; row < spec.t; ++row) {
    for (std::size_t j = 0; j < r; ++j) {
      const double rho = spec.correlations[j];
      const double u = shared.normal();
      x(row, j) = rho * u + std::sqrt(1.0 - rho * rho) * x_noise.normal();
      y(row, j) = u;
    }
    for (std::size_t j = r; j < spec.p; ++j) x(row, j) = x_noise.normal();
    for (std::size_t j = r; j < spec.q; ++j) y(row, j) = y_noise.normal();
  }
  return {corpus::FeatureMatrix{std::move(x), std::nullopt},
          corpus::FeatureMatrix{std::move(y), std::nullopt}};
}

void RetrievalSpec::validate() const {
  if (t < 1) throw Error("retrieval spec: t must be >= 1");
  if (topic_dim < 1 || d_text < 1 || d_image < 1) {
    throw Error("retrieval spec: all dimensions must be >= 1");
  }
  if (!(text_coverage > 0.0 && text_coverage <= 1.0) ||
      !(image_coverage > 0.0 && image_coverage <= 1.0)) {
    throw Error("retrieval spec: coverages must lie in (0, 1]");
  }
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw Error("retrieval spec: noise must be >= 0");
  if (!(prevalence > 0.0 && prevalence < 1.0)) {
    throw Error("retrieval spec: prevalence must lie in (0, 1)");
  }
}

std::size_t RetrievalSpec::text_topics() const { return covered(text_coverage, topic_dim); }
std::size_t RetrievalSpec::image_topics() const { return covered(image_coverage, topic_dim); }

RetrievalData gen_retrieval(const RetrievalSpec& spec) {
  spec.validate();
  const std::size_t k = spec.topic_dim;
  const std::size_t text_hi = spec.text_topics();
  const std::size_t image_lo = k - spec.image_topics();

  CounterRng maps(spec.seed, "retrieval/maps");
  const Matrix text_map = random_map(maps, k, spec.d_text);
  const Matrix image_map = random_map(maps, k, spec.d_image);

  CounterRng labels_rng(spec.seed, "retrieval/labels");
  CounterRng query_topic(spec.seed, "retrieval/query_topic");
  CounterRng other_topic(spec.seed, "retrieval/item_topic");
  CounterRng query_noise(spec.seed, "retrieval/query_noise");
  CounterRng title_noise(spec.seed, "retrieval/title_noise");
  CounterRng image_noise(spec.seed, "retrieval/image_noise");
  CounterRng category_rng(spec.seed, "retrieval/category");

  RetrievalData out;
  Matrix q(spec.t, spec.d_text);
  Matrix v(spec.t, spec.d_text);
  Matrix u(spec.t, spec.d_image);
  std::vector<std::string> image_ids;
  image_ids.reserve(spec.t);
  out.pairs.reserve(spec.t);
  out.labels.reserve(spec.t);

  std::vector<double> zq(k);
  std::vector<double> zo(k);
  for (std::size_t row = 0; row < spec.t; ++row) {
    const int label = labels_rng.uniform() < spec.prevalence ? 1 : 0;
    for (double& z : zq) z = query_topic.normal();
    // Drawn for every row so that label flips do not shift later draws.
    for (double& z : zo) z = other_topic.normal();
    const std::vector<double>& zi = label == 1 ? zq : zo;

    emit_view(q.row(row), zq, 0, k, text_map, spec.noise, query_noise);
    emit_view(v.row(row), zi, 0, text_hi, text_map, spec.noise, title_noise);
    emit_view(u.row(row), zi, image_lo, k, image_map, spec.noise, image_noise);

    char id[32];
    std::snprintf(id, sizeof(id), "img%06zu", row);
    image_ids.emplace_back(id);
    const auto category = static_cast<std::size_t>(category_rng.uniform() *
                                                   static_cast<double>(kRetrievalCategories));
    out.pairs.push_back(corpus::QueryItemPair{render_words(zq, 0, k),
                                              render_words(zi, 0, text_hi),
                                              "cat" + std::to_string(category), id, label});
    out.labels.push_back(label);
  }
  out.q = corpus::FeatureMatrix{std::move(q), std::nullopt};
  out.v = corpus::FeatureMatrix{std::move(v), std::nullopt};
  out.u = corpus::FeatureMatrix{std::move(u), std::move(image_ids)};
  return out;
}

TwoViewSpec two_view_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("two-view spec must be a JSON object");
  TwoViewSpec s;
  s.t = field(j, "t", s.t);
  s.p = field(j, "p", s.p);
  s.q = field(j, "q", s.q);
  s.correlations = field(j, "correlations", s.correlations);
  s.seed = field(j, "seed", s.seed);
  s.validate();
  return s;
}

RetrievalSpec retrieval_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("retrieval spec must be a JSON object");
  RetrievalSpec s;
  s.t = field(j, "t", s.t);
  s.topic_dim = field(j, "topic_dim", s.topic_dim);
  s.d_text = field(j, "d_text", s.d_text);
  s.d_image = field(j, "d_image", s.d_image);
  s.text_coverage = field(j, "text_coverage", s.text_coverage);
  s.image_coverage = field(j, "image_coverage", s.image_coverage);
  s.noise = field(j, "noise", s.noise);
  s.prevalence = field(j, "prevalence", s.prevalence);
  s.seed = field(j, "seed", s.seed);
  s.validate();
  return s;
}

nlohmann::json to_json(const TwoViewSpec& s) {
  return {{"t", s.t}, {"p", s.p}, {"q", s.q}, {"correlations", s.correlations}, {"seed", s.seed}};
}

nlohmann::json to_json(const RetrievalSpec& s) {
  return {{"t", s.t},
          {"topic_dim", s.topic_dim},
          {"d_text", s.d_text},
          {"d_image", s.d_image},
          {"text_coverage", s.text_coverage},
          {"image_coverage", s.image_coverage},
          {"noise", s.noise},
          {"prevalence", s.prevalence},
          {"seed", s.seed}};
}

}  // namespace xmodal::synthdata
