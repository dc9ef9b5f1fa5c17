#include "nsgap/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "nsgap/errors.hpp"

namespace nsgap {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix_csv(const std::string& path,
                      const std::vector<std::string>& column_names,
                      const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw Error("write_matrix_csv: cannot open " + path);
  const Eigen::Index cols = m.cols();
  if (!column_names.empty() &&
      static_cast<Eigen::Index>(column_names.size()) != cols) {
    throw InvalidInputError("write_matrix_csv: header size mismatch");
  }
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (j) out << ',';
    out << (column_names.empty() ? "c" + std::to_string(j + 1)
                                 : column_names[static_cast<std::size_t>(j)]);
  }
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (j) out << ',';
      out << format_full(m(i, j));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("read_matrix_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw Error("read_matrix_csv: empty file " + path);
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      row.push_back(std::stod(cell));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error("read_matrix_csv: ragged row in " + path);
    }
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    rows.empty() ? 0
                                 : static_cast<Eigen::Index>(
                                       rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return m;
}

}  // namespace nsgap
