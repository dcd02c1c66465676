#include "ossfield/csvio.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "ossfield/errors.hpp"

namespace ossf {
namespace csvio {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

double parse_scalar(const std::string& tok) {
  try {
    size_t pos = 0;
    double v = std::stod(tok, &pos);
    while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos])))
      ++pos;
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("cannot parse numeric entry '" + tok + "'");
  }
}

Matrix from_rows(const std::vector<std::vector<double>>& rows,
                 const std::string& what) {
  if (rows.empty()) throw ValidationError(what + ": no rows");
  const size_t cols = rows.front().size();
  if (cols == 0) throw ValidationError(what + ": empty row");
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(cols));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw ValidationError(what + ": ragged rows (" +
                            std::to_string(rows[i].size()) + " vs " +
                            std::to_string(cols) + " entries)");
    }
    for (size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

}  // namespace

Matrix read_matrix(const std::string& csv_text) {
  std::vector<std::vector<double>> rows;
  std::istringstream is(csv_text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    for (const std::string& tok : split(line, ',')) row.push_back(parse_scalar(tok));
    rows.push_back(std::move(row));
  }
  return from_rows(rows, "CSV matrix");
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return read_matrix(os.str());
}

std::string write_matrix(const Matrix& m) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << m(i, j);
    }
    os << '\n';
  }
  return os.str();
}

void write_matrix_file(const Matrix& m, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot open '" + path + "' for writing");
  f << write_matrix(m);
}

Matrix parse_literal(const std::string& text) {
  std::vector<std::vector<double>> rows;
  for (const std::string& row_text : split(text, ';')) {
    std::vector<double> row;
    for (const std::string& tok : split(row_text, ',')) row.push_back(parse_scalar(tok));
    rows.push_back(std::move(row));
  }
  return from_rows(rows, "matrix literal");
}

}  // namespace csvio
}  // namespace ossf
