#include "dynev/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "dynev/error.hpp"

namespace dynev {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return f;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

struct Header {
  std::string format;    // coordinate | array
  std::string field;     // real | integer | pattern
  std::string symmetry;  // symmetric | general
};

Header read_header(std::istream& in, std::size_t& line_no, std::string& line) {
  if (!std::getline(in, line)) throw ParseError("empty Matrix Market file", 1);
  line_no = 1;
  std::istringstream hs(line);
  std::string banner, object;
  Header h;
  hs >> banner >> object >> h.format >> h.field >> h.symmetry;
  if (banner != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", 1);
  object = lower(object);
  h.format = lower(h.format);
  h.field = lower(h.field);
  h.symmetry = lower(h.symmetry);
  if (object != "matrix") throw ParseError("unsupported object '" + object + "'", 1);
  if (h.format != "coordinate" && h.format != "array")
    throw ParseError("unsupported format '" + h.format + "'", 1);
  if (h.field != "real" && h.field != "integer" && h.field != "double" &&
      !(h.field == "pattern" && h.format == "coordinate"))
    throw ParseError("unsupported field '" + h.field + "'", 1);
  if (h.symmetry != "symmetric" && h.symmetry != "general")
    throw ParseError("unsupported symmetry '" + h.symmetry + "'", 1);
  // skip comments
  while (std::getline(in, line)) {
    ++line_no;
    auto p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos || line[p] == '%') continue;
    return h;
  }
  throw ParseError("missing size line", line_no + 1);
}

bool next_data_line(std::istream& in, std::size_t& line_no, std::string& line) {
  while (std::getline(in, line)) {
    ++line_no;
    auto p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos || line[p] == '%') continue;
    return true;
  }
  return false;
}

double parse_value(std::istringstream& ls, std::size_t line_no) {
  double v;
  if (!(ls >> v)) throw ParseError("bad numeric value", line_no);
  if (!std::isfinite(v)) throw ParseError("non-finite value", line_no);
  return v;
}

}  // namespace

SparseSymMatrix read_matrix_market(std::istream& in) {
  std::size_t line_no = 0;
  std::string line;
  Header h = read_header(in, line_no, line);
  if (h.format == "array") {
    // rewind is not possible on arbitrary streams; parse the array body here
    std::istringstream ss(line);
    long long rows, cols;
    if (!(ss >> rows >> cols) || rows < 1 || rows != cols)
      throw ParseError("array size line must be 'n n'", line_no);
    DenseMatrix a(rows, cols);
    for (long long j = 0; j < cols; ++j)
      for (long long i = (h.symmetry == "symmetric" ? j : 0); i < rows; ++i) {
        if (!next_data_line(in, line_no, line)) throw ParseError("unexpected end of data", line_no + 1);
        std::istringstream ls(line);
        a(i, j) = parse_value(ls, line_no);
        if (h.symmetry == "symmetric") a(j, i) = a(i, j);
      }
    try {
      return SparseSymMatrix::from_dense(a);
    } catch (const DimensionError& e) {
      throw ParseError(e.what(), line_no);
    }
  }

  std::istringstream ss(line);
  long long rows, cols, nnz;
  if (!(ss >> rows >> cols >> nnz) || rows < 1 || cols < 1 || nnz < 0)
    throw ParseError("bad size line", line_no);
  if (rows != cols) throw ParseError("matrix is not square", line_no);
  const Index n = static_cast<Index>(rows);

  std::vector<SparseSymMatrix::Triplet> lower_t, upper_t;
  for (long long k = 0; k < nnz; ++k) {
    if (!next_data_line(in, line_no, line))
      throw ParseError("expected " + std::to_string(nnz) + " entries, got " + std::to_string(k),
                       line_no + 1);
    std::istringstream ls(line);
    long long i, j;
    if (!(ls >> i >> j)) throw ParseError("bad entry indices", line_no);
    if (i < 1 || i > rows || j < 1 || j > cols) throw ParseError("entry index out of range", line_no);
    double v = h.field == "pattern" ? 1.0 : parse_value(ls, line_no);
    SparseSymMatrix::Triplet t{static_cast<Index>(i - 1), static_cast<Index>(j - 1), v};
    if (h.symmetry == "symmetric") {
      if (t.row < t.col) std::swap(t.row, t.col);
      lower_t.push_back(t);
    } else if (t.row >= t.col) {
      lower_t.push_back(t);
    } else {
      upper_t.push_back(t);
    }
  }
  if (h.symmetry == "general") {
    auto key = [](const SparseSymMatrix::Triplet& t) { return std::pair(t.row, t.col); };
    std::vector<SparseSymMatrix::Triplet> mirrored;
    for (auto t : upper_t) mirrored.push_back({t.col, t.row, t.value});
    auto cmp = [&](const auto& a, const auto& b) { return key(a) < key(b); };
    std::vector<SparseSymMatrix::Triplet> strict_lower;
    for (auto& t : lower_t)
      if (t.row != t.col) strict_lower.push_back(t);
    std::sort(mirrored.begin(), mirrored.end(), cmp);
    std::sort(strict_lower.begin(), strict_lower.end(), cmp);
    auto same = [](const std::vector<SparseSymMatrix::Triplet>& a,
                   const std::vector<SparseSymMatrix::Triplet>& b) {
      if (a.size() != b.size()) return false;
      for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k].row != b[k].row || a[k].col != b[k].col || a[k].value != b[k].value) return false;
      return true;
    };
    if (!same(mirrored, strict_lower)) throw ParseError("general matrix is not symmetric", line_no);
  }
  if (next_data_line(in, line_no, line)) throw ParseError("trailing data after entries", line_no);
  return SparseSymMatrix::from_triangle(n, std::move(lower_t));
}

SparseSymMatrix read_matrix_market(const std::string& path) {
  auto f = open_in(path);
  return read_matrix_market(f);
}

DenseMatrix read_matrix_market_dense(std::istream& in) {
  std::size_t line_no = 0;
  std::string line;
  Header h = read_header(in, line_no, line);
  std::istringstream ss(line);
  long long rows, cols;
  if (!(ss >> rows >> cols) || rows < 1 || cols < 1) throw ParseError("bad size line", line_no);
  if (h.format == "coordinate") {
    long long nnz;
    if (!(ss >> nnz)) throw ParseError("bad size line", line_no);
    DenseMatrix a = DenseMatrix::Zero(rows, cols);
    for (long long k = 0; k < nnz; ++k) {
      if (!next_data_line(in, line_no, line)) throw ParseError("unexpected end of data", line_no + 1);
      std::istringstream ls(line);
      long long i, j;
      if (!(ls >> i >> j) || i < 1 || i > rows || j < 1 || j > cols)
        throw ParseError("bad entry indices", line_no);
      double v = h.field == "pattern" ? 1.0 : parse_value(ls, line_no);
      a(i - 1, j - 1) += v;
      if (h.symmetry == "symmetric" && i != j) a(j - 1, i - 1) += v;
    }
    return a;
  }
  DenseMatrix a(rows, cols);
  for (long long j = 0; j < cols; ++j)
    for (long long i = (h.symmetry == "symmetric" ? j : 0); i < rows; ++i) {
      if (!next_data_line(in, line_no, line)) throw ParseError("unexpected end of data", line_no + 1);
      std::istringstream ls(line);
      a(i, j) = parse_value(ls, line_no);
      if (h.symmetry == "symmetric") a(j, i) = a(i, j);
    }
  return a;
}

DenseMatrix read_matrix_market_dense(const std::string& path) {
  auto f = open_in(path);
  return read_matrix_market_dense(f);
}

void write_matrix_market(std::ostream& out, const SparseSymMatrix& a) {
  auto lower = a.lower_triplets();
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << a.n() << ' ' << a.n() << ' ' << lower.size() << '\n';
  out << std::setprecision(17);
  for (const auto& t : lower) out << t.row + 1 << ' ' << t.col + 1 << ' ' << t.value << '\n';
}

void write_matrix_market(const std::string& path, const SparseSymMatrix& a) {
  auto f = open_out(path);
  write_matrix_market(f, a);
}

void write_matrix_market_dense(std::ostream& out, const DenseMatrix& a) {
  out << "%%MatrixMarket matrix array real general\n";
  out << a.rows() << ' ' << a.cols() << '\n';
  out << std::setprecision(17);
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) out << a(i, j) << '\n';
}

void write_matrix_market_dense(const std::string& path, const DenseMatrix& a) {
  auto f = open_out(path);
  write_matrix_market_dense(f, a);
}

std::vector<SparseVector> read_update_stream(std::istream& in, Index dim) {
  std::vector<SparseVector> out;
  std::string line;
  std::size_t line_no = 0;
  long long last_t = std::numeric_limits<long long>::min();
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    if (!j.is_object() || !j.contains("t") || !j.contains("idx") || !j.contains("val"))
      throw ParseError("record needs fields t, idx, val", line_no);
    if (!j["t"].is_number_integer()) throw ParseError("t must be an integer", line_no);
    if (!j["idx"].is_array() || !j["val"].is_array())
      throw ParseError("idx and val must be arrays", line_no);
    const long long t = j["t"].get<long long>();
    if (t <= last_t) throw ParseError("t must be strictly increasing", line_no);
    last_t = t;
    std::vector<std::pair<Index, double>> entries;
    if (j["idx"].size() != j["val"].size()) throw ParseError("idx/val length mismatch", line_no);
    for (std::size_t k = 0; k < j["idx"].size(); ++k) {
      const auto& ji = j["idx"][k];
      const auto& jv = j["val"][k];
      if (!ji.is_number_integer()) throw ParseError("idx entries must be integers", line_no);
      if (!jv.is_number()) throw ParseError("val entries must be numbers", line_no);
      entries.emplace_back(ji.get<Index>(), jv.get<double>());
    }
    try {
      out.push_back(SparseVector::from_pairs(dim, std::move(entries)));
    } catch (const std::exception& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return out;
}

std::vector<SparseVector> read_update_stream(const std::string& path, Index dim) {
  auto f = open_in(path);
  return read_update_stream(f, dim);
}

void write_update_stream(std::ostream& out, const std::vector<SparseVector>& updates) {
  for (std::size_t t = 0; t < updates.size(); ++t) {
    const auto& v = updates[t];
    nlohmann::json j;
    j["t"] = t + 1;
    j["idx"] = std::vector<Index>(v.indices().begin(), v.indices().end());
    j["val"] = std::vector<double>(v.values().begin(), v.values().end());
    out << j.dump() << '\n';
  }
}

void write_update_stream(const std::string& path, const std::vector<SparseVector>& updates) {
  auto f = open_out(path);
  write_update_stream(f, updates);
}

}  // namespace dynev
