#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <string>

namespace llbcs {

/// Stable text form for doubles in result files: shortest of %.12g, no
/// locale dependence, so identical values always produce identical bytes.
std::string format_double(double x);

/// Writes a vector as `index,value` rows with a header line.
void write_series_csv(const std::filesystem::path& path,
                      const Eigen::VectorXd& values);

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace llbcs
