#pragma once

#include "cqsim/empirical.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cqsim {

// File formats:
//   scores  header row of detector names, then one row of numbers per observation
//   labels  one integer per line, optional non-numeric header line
//   matrix  k x k values with a header row and a leading name column
// Numbers are written with 17 significant digits so files round-trip exactly.

std::string format_double(double v);

/// Parse errors are DataError and name the source, line and column.
ScoreMatrix parse_scores_csv(std::istream& in, std::string_view source = "<stream>");
ScoreMatrix read_scores_csv(const std::filesystem::path& path);

std::vector<int> parse_labels_csv(std::istream& in, std::string_view source = "<stream>");
std::vector<int> read_labels_csv(const std::filesystem::path& path);

void write_scores_csv(std::ostream& out, const Eigen::MatrixXd& values,
                      const std::vector<std::string>& names);
void write_labels_csv(std::ostream& out, std::span<const int> labels,
                      std::string_view header = "label");
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& values,
                      const std::vector<std::string>& names);

} // namespace cqsim
