#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "xmodal/matrix.hpp"

namespace xmodal::corpus {

struct QueryItemPair {
  std::string query;
  std::string title;
  std::string category;
  std::string image_id;
  int label = 0;

  friend bool operator==(const QueryItemPair&, const QueryItemPair&) = default;
};

/// Dense feature rows with optional unique string keys.
struct FeatureMatrix {
  Matrix values;
  std::optional<std::vector<std::string>> row_ids;

  std::size_t rows() const { return values.rows(); }
  std::size_t cols() const { return values.cols(); }

  /// Throws if a value is non-finite or row_ids are misaligned / duplicated.
  void validate() const;

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;
};

struct Rejection {
  std::size_t line = 0;  // 1-based
  std::string reason;
};

struct LoadResult {
  std::vector<QueryItemPair> pairs;
  std::vector<Rejection> rejections;
};

/// Reads a JSONL pairs file. Invalid records are skipped and reported unless
/// `strict`, in which case the first one throws.
LoadResult load_pairs(const std::filesystem::path& path, bool strict = false);

/// Serializes pairs as JSONL with keys in schema order.
void write_pairs(const std::vector<QueryItemPair>& pairs, const std::filesystem::path& path);

// Binary matrix file: "CMXF", u32 version, u32 rows, u32 cols, u8 has_row_ids,
// optional u32-length-prefixed UTF-8 row ids, then rows*cols binary64 values.
// All integers and floats little-endian.
inline constexpr std::uint32_t kMatrixFormatVersion = 1;

std::vector<char> encode_matrix(const FeatureMatrix& m);
FeatureMatrix decode_matrix(const std::vector<char>& bytes);
void write_matrix(const FeatureMatrix& m, const std::filesystem::path& path);
FeatureMatrix read_matrix(const std::filesystem::path& path);

inline constexpr std::size_t kDefaultImageDim = 1024;

/// Image feature rows keyed by image id.
class ImageFeatureStore {
 public:
  /// `expected_dim` defaults to the matrix width when absent.
  explicit ImageFeatureStore(FeatureMatrix matrix,
                             std::optional<std::size_t> expected_dim = kDefaultImageDim);

  std::size_t dim() const { return matrix_.cols(); }
  std::size_t size() const { return matrix_.rows(); }
  const FeatureMatrix& matrix() const { return matrix_; }
  /// Row index for `image_id`, or nullopt.
  std::optional<std::size_t> find(const std::string& image_id) const;

 private:
  FeatureMatrix matrix_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct Views {
  FeatureMatrix q;
  FeatureMatrix v;
  FeatureMatrix u;
  std::vector<int> labels;
};

/// Aligns the query/title matrices with image rows looked up per pair.
Views assemble_views(const std::vector<QueryItemPair>& pairs, const ImageFeatureStore& images,
                     FeatureMatrix q, FeatureMatrix v);

std::vector<int> labels_of(const std::vector<QueryItemPair>& pairs);

}  // namespace xmodal::corpus
