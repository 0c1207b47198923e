#include "xmodal/similarity.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "xmodal/error.hpp"
#include "xmodal/format.hpp"

namespace xmodal::similarity {

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error("cosine: length mismatch (" + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()) + ")");
  }
  const double na = norm2(a);
  const double nb = norm2(b);
  if (na < 1e-12 || nb < 1e-12) return 0.0;
  return dot(a, b) / (na * nb);
}

std::vector<ScoredPair> score_rows(const Matrix& a, const Matrix& b,
                                   const std::vector<int>& labels) {
  if (a.rows() != b.rows() || a.rows() != labels.size()) {
    throw Error("score: row counts differ (" + std::to_string(a.rows()) + ", " +
                std::to_string(b.rows()) + ", " + std::to_string(labels.size()) + " labels)");
  }
  if (a.cols() != b.cols()) {
    throw Error("score: views have different dimensions (" + std::to_string(a.cols()) + " vs " +
                std::to_string(b.cols()) + ")");
  }
  std::vector<ScoredPair> out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    out[r] = ScoredPair{r, cosine(a.row(r), b.row(r)), labels[r]};
  }
  return out;
}

std::vector<ScoredPair> score_baseline(const Matrix& q, const Matrix& v,
                                       const std::vector<int>& labels) {
  return score_rows(q, v, labels);
}

std::vector<ScoredPair> score_cca(const cca::CcaModel& model, const Matrix& q, const Matrix& i,
                                  const std::vector<int>& labels) {
  return score_rows(cca::project_query(model, q), cca::project_item(model, i), labels);
}

void write_scores(const std::vector<ScoredPair>& scores, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write scores file '" + path.string() + "'");
  out << "row_index,score,label\n";
  for (const auto& s : scores) {
    out << s.row_index << ',' << format_double(s.score) << ',' << s.label << '\n';
  }
  if (!out) throw Error("failed writing scores file '" + path.string() + "'");
}

std::vector<ScoredPair> read_scores(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open scores file '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || (line != "row_index,score,label" &&
                                  line != "row_index,score,label\r")) {
    throw Error(path.string() + ": missing header row_index,score,label");
  }
  std::vector<ScoredPair> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": expected 3 fields");
    }
    try {
      ScoredPair s;
      s.row_index = parse_unsigned(line.substr(0, c1));
      s.score = parse_double(line.substr(c1 + 1, c2 - c1 - 1));
      const std::string label = line.substr(c2 + 1);
      if (label != "0" && label != "1") throw Error("label must be 0 or 1");
      s.label = label == "1" ? 1 : 0;
      out.push_back(s);
    } catch (const Error& e) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace xmodal::similarity
