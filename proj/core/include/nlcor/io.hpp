// io.hpp
// File export helpers shared by the CLI: CSV/JSON matrix dumps, tidy CSV
// writing, run manifests and flat key=value config files.
//
// Every floating-point value is serialized with 17 significant digits so a
// rerun with identical inputs produces byte-identical files.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace nlcor {

std::string format_double(double v);

// Matrix with ticker row/column headers.
void write_matrix_csv(const std::string& path, const std::vector<std::string>& labels,
                      const Eigen::MatrixXd& values);

void write_matrix_json(const std::string& path, const std::vector<std::string>& labels,
                       const Eigen::MatrixXd& values, const std::string& measure,
                       int window_index, const std::string& end_date, int bins);

// Tidy CSV: one header row plus preformatted cells.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::uint64_t fnv1a64(const std::string& bytes);

// "fnv1a64:<16 hex digits>" of a file's contents.
std::string file_checksum(const std::string& path);

struct Manifest {
  std::string command;
  std::string version;
  std::uint64_t seed = 0;
  std::string input_path;
  std::string input_checksum;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> outputs;
};

void write_manifest(const std::string& path, const Manifest& manifest);

// Flat config file: one key=value per line, '#' comments, blank lines
// ignored. Keys are returned in file order.
std::vector<std::pair<std::string, std::string>> read_kv_config(const std::string& path);

// Two-column CSV `date,rate`; returns the rates in file order.
std::vector<double> read_rate_series(const std::string& path);

}  // namespace nlcor
