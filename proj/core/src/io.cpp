#include "linattn/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "linattn/error.hpp"

namespace linattn {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix_csv(const std::string& path, const Matrix& M, const std::vector<std::string>& header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  if (!header.empty()) out << '\n';
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) out << (j ? "," : "") << format_double(M(i, j));
    out << '\n';
  }
  if (!out) fail(ErrorCode::IoError, "write to '" + path + "' failed");
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> r;
    while (std::getline(ss, cell, ',')) {
      try {
        r.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "row " + std::to_string(rows.size()) + ": bad value '" + cell + "'");
      }
    }
    if (!rows.empty() && r.size() != rows.front().size())
      fail(ErrorCode::ParseError, "row " + std::to_string(rows.size()) + ": inconsistent column count");
    rows.push_back(std::move(r));
  }
  if (rows.empty()) return Matrix();
  Matrix M(Eigen::Index(rows.size()), Eigen::Index(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) M(Eigen::Index(i), Eigen::Index(j)) = rows[i][j];
  return M;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorCode::IoError, "write to '" + path + "' failed");
}

}  // namespace linattn
