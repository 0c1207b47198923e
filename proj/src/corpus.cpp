#include "xmodal/corpus.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <limits>
#include <unordered_set>

#include "json.hpp"
#include "xmodal/error.hpp"
#include "xmodal/tokenizer.hpp"

namespace xmodal::corpus {

namespace {

constexpr char kMagic[4] = {'C', 'M', 'X', 'F'};

void put_u32(std::vector<char>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFFu));
}

void put_u64(std::vector<char>& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFFu));
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(std::string(what) + " exceeds the u32 range of the matrix format");
  }
  return static_cast<std::uint32_t>(v);
}

class Reader {
 public:
  explicit Reader(const std::vector<char>& bytes) : bytes_(bytes) {}

  std::size_t remaining() const { return bytes_.size() - pos_; }

  void need(std::size_t n, const char* what) const {
    if (remaining() < n) throw Error(std::string("truncated ") + what);
  }

  std::uint8_t u8(const char* what) {
    need(1, what);
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= std::uint32_t{static_cast<std::uint8_t>(bytes_[pos_++])} << (8 * b);
    return v;
  }

  std::uint64_t u64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= std::uint64_t{static_cast<std::uint8_t>(bytes_[pos_++])} << (8 * b);
    return v;
  }

  std::string string(std::size_t n, const char* what) {
    need(n, what);
    std::string s(bytes_.data() + pos_, n);
    pos_ += n;
    return s;
  }

 private:
  const std::vector<char>& bytes_;
  std::size_t pos_ = 0;
};

// Returns an empty string when the record is valid.
std::string check_record(const nlohmann::json& rec, QueryItemPair& out) {
  if (!rec.is_object()) return "record is not a JSON object";
  for (const char* key : {"query", "title", "category", "image_id"}) {
    auto it = rec.find(key);
    if (it == rec.end()) return std::string("missing field '") + key + "'";
    if (!it->is_string()) return std::string("field '") + key + "' is not a string";
  }
  auto label = rec.find("label");
  if (label == rec.end()) return "missing field 'label'";
  if (!label->is_number_integer()) return "field 'label' is not an integer";

  out.query = rec["query"].get<std::string>();
  out.title = rec["title"].get<std::string>();
  out.category = rec["category"].get<std::string>();
  out.image_id = rec["image_id"].get<std::string>();
  const auto value = label->get<std::int64_t>();
  if (value != 0 && value != 1) return "label out of range";
  out.label = static_cast<int>(value);

  if (out.category.empty()) return "empty category";
  if (out.image_id.empty()) return "empty image_id";
  if (tokenize(out.query).empty()) return "query is empty after tokenization";
  if (tokenize(out.title).empty()) return "title is empty after tokenization";
  return {};
}

}  // namespace

void FeatureMatrix::validate() const {
  for (std::size_t r = 0; r < values.rows(); ++r) {
    auto row = values.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!std::isfinite(row[c])) {
        throw Error("non-finite value at (" + std::to_string(r) + ", " + std::to_string(c) + ")");
      }
    }
  }
  if (row_ids) {
    if (row_ids->size() != values.rows()) {
      throw Error("row_ids length " + std::to_string(row_ids->size()) + " does not match rows " +
                  std::to_string(values.rows()));
    }
    std::unordered_set<std::string_view> seen;
    for (const auto& id : *row_ids) {
      if (!seen.insert(id).second) throw Error("duplicate row id '" + id + "'");
    }
  }
}

LoadResult load_pairs(const std::filesystem::path& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open pairs file '" + path.string() + "'");

  LoadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    QueryItemPair pair;
    std::string reason;
    if (line.empty()) {
      reason = "empty line";
    } else {
      nlohmann::json rec = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
      reason = rec.is_discarded() ? "malformed JSON" : check_record(rec, pair);
    }
    if (reason.empty()) {
      result.pairs.push_back(std::move(pair));
      continue;
    }
    if (strict) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": " + reason);
    }
    result.rejections.push_back({line_no, std::move(reason)});
  }
  return result;
}

void write_pairs(const std::vector<QueryItemPair>& pairs, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write pairs file '" + path.string() + "'");
  for (const auto& p : pairs) {
    nlohmann::ordered_json rec;
    rec["query"] = p.query;
    rec["title"] = p.title;
    rec["category"] = p.category;
    rec["image_id"] = p.image_id;
    rec["label"] = p.label;
    out << rec.dump() << '\n';
  }
  if (!out) throw Error("failed writing pairs file '" + path.string() + "'");
}

std::vector<char> encode_matrix(const FeatureMatrix& m) {
  m.validate();
  std::vector<char> out(std::begin(kMagic), std::end(kMagic));
  put_u32(out, kMatrixFormatVersion);
  put_u32(out, checked_u32(m.rows(), "row count"));
  put_u32(out, checked_u32(m.cols(), "column count"));
  out.push_back(m.row_ids ? 1 : 0);
  if (m.row_ids) {
    for (const auto& id : *m.row_ids) {
      put_u32(out, checked_u32(id.size(), "row id length"));
      out.insert(out.end(), id.begin(), id.end());
    }
  }
  out.reserve(out.size() + m.values.size() * 8);
  for (double v : m.values.data()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

FeatureMatrix decode_matrix(const std::vector<char>& bytes) {
  if (bytes.size() < 4 || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw Error("bad magic");
  }
  Reader in(bytes);
  in.string(4, "magic");
  const std::uint32_t version = in.u32("header");
  if (version != kMatrixFormatVersion) {
    throw Error("unsupported matrix format version " + std::to_string(version));
  }
  const std::size_t rows = in.u32("header");
  const std::size_t cols = in.u32("header");
  const std::uint8_t has_ids = in.u8("header");
  if (has_ids > 1) throw Error("invalid has_row_ids flag " + std::to_string(has_ids));

  FeatureMatrix m;
  if (has_ids == 1) {
    std::vector<std::string> ids;
    ids.reserve(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      const std::uint32_t len = in.u32("row ids");
      ids.push_back(in.string(len, "row ids"));
    }
    m.row_ids = std::move(ids);
  }
  const std::size_t count = rows * cols;
  if (cols != 0 && count / cols != rows) throw Error("matrix dimensions overflow");
  if (in.remaining() / 8 < count) throw Error("truncated payload");
  std::vector<double> data(count);
  for (std::size_t k = 0; k < count; ++k) {
    data[k] = std::bit_cast<double>(in.u64("payload"));
    if (!std::isfinite(data[k])) {
      throw Error("non-finite value at (" + std::to_string(k / cols) + ", " +
                  std::to_string(k % cols) + ")");
    }
  }
  if (in.remaining() != 0) throw Error("trailing bytes after payload");
  m.values = Matrix(rows, cols, std::move(data));
  m.validate();
  return m;
}

void write_matrix(const FeatureMatrix& m, const std::filesystem::path& path) {
  const std::vector<char> bytes = encode_matrix(m);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write matrix file '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing matrix file '" + path.string() + "'");
}

FeatureMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open matrix file '" + path.string() + "'");
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_matrix(bytes);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

ImageFeatureStore::ImageFeatureStore(FeatureMatrix matrix, std::optional<std::size_t> expected_dim)
    : matrix_(std::move(matrix)) {
  matrix_.validate();
  if (!matrix_.row_ids) throw Error("image store matrix has no row ids");
  if (expected_dim && *expected_dim != matrix_.cols()) {
    throw Error("image store has " + std::to_string(matrix_.cols()) + " columns, expected " +
                std::to_string(*expected_dim));
  }
  index_.reserve(matrix_.rows());
  for (std::size_t r = 0; r < matrix_.rows(); ++r) index_.emplace((*matrix_.row_ids)[r], r);
}

std::optional<std::size_t> ImageFeatureStore::find(const std::string& image_id) const {
  auto it = index_.find(image_id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Views assemble_views(const std::vector<QueryItemPair>& pairs, const ImageFeatureStore& images,
                     FeatureMatrix q, FeatureMatrix v) {
  if (q.rows() != pairs.size() || v.rows() != pairs.size()) {
    throw Error("row count mismatch: " + std::to_string(pairs.size()) + " pairs, query matrix " +
                std::to_string(q.rows()) + " rows, title matrix " + std::to_string(v.rows()) +
                " rows");
  }
  Matrix u(pairs.size(), images.dim());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto row = images.find(pairs[i].image_id);
    if (!row) {
      throw Error("unresolved image_id '" + pairs[i].image_id + "' at row " + std::to_string(i));
    }
    auto src = images.matrix().values.row(*row);
    std::copy(src.begin(), src.end(), u.row(i).begin());
  }
  return Views{std::move(q), std::move(v), FeatureMatrix{std::move(u), std::nullopt},
               labels_of(pairs)};
}

std::vector<int> labels_of(const std::vector<QueryItemPair>& pairs) {
  std::vector<int> labels;
  labels.reserve(pairs.size());
  for (const auto& p : pairs) labels.push_back(p.label);
  return labels;
}

}  // namespace xmodal::corpus
