#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace nsgap {

/// Shortest representation that round-trips a double (17 significant digits).
std::string format_full(double v);

/// Writes a matrix as RFC-4180 CSV, row-major, one header row. Column names
/// default to c1..cn when empty.
void write_matrix_csv(const std::string& path,
                      const std::vector<std::string>& column_names,
                      const Eigen::MatrixXd& m);

/// Reads back a CSV written by write_matrix_csv (header row skipped).
Eigen::MatrixXd read_matrix_csv(const std::string& path);

}  // namespace nsgap
