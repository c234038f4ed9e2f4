// io.cpp

#include "nlcor/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nlcor/errors.hpp"

namespace nlcor {
namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file '" + path + "'");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_matrix_csv(const std::string& path, const std::vector<std::string>& labels,
                      const Eigen::MatrixXd& values) {
  const int n = static_cast<int>(values.rows());
  if (static_cast<int>(labels.size()) != n)
    throw ValidationError("write_matrix_csv: label count does not match matrix size");
  std::ofstream out = open_out(path);
  out << "ticker";
  for (const std::string& t : labels) out << ',' << t;
  out << '\n';
  for (int i = 0; i < n; ++i) {
    out << labels[i];
    for (int j = 0; j < static_cast<int>(values.cols()); ++j)
      out << ',' << format_double(values(i, j));
    out << '\n';
  }
}

void write_matrix_json(const std::string& path, const std::vector<std::string>& labels,
                       const Eigen::MatrixXd& values, const std::string& measure,
                       int window_index, const std::string& end_date, int bins) {
  nlohmann::json j;
  j["measure"] = measure;
  j["window_index"] = window_index;
  j["window_end_date"] = end_date;
  if (bins > 0) j["bins"] = bins;
  j["tickers"] = labels;
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < static_cast<int>(values.rows()); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < static_cast<int>(values.cols()); ++c) row.push_back(values(i, c));
    rows.push_back(std::move(row));
  }
  j["values"] = std::move(rows);
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out = open_out(path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw ValidationError("write_csv: row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string file_checksum(const std::string& path) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(read_file(path))));
  return buf;
}

void write_manifest(const std::string& path, const Manifest& manifest) {
  nlohmann::json j;
  j["command"] = manifest.command;
  j["version"] = manifest.version;
  j["seed"] = manifest.seed;
  j["input"] = manifest.input_path;
  j["input_checksum"] = manifest.input_checksum;
  nlohmann::json cfg;
  for (const auto& [key, value] : manifest.config) cfg[key] = value;
  j["config"] = std::move(cfg);
  std::vector<std::string> outputs = manifest.outputs;
  std::sort(outputs.begin(), outputs.end());
  j["outputs"] = outputs;
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

std::vector<std::pair<std::string, std::string>> read_kv_config(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw UsageError("config " + path + ": line " + std::to_string(line_no) +
                       " is not key=value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw UsageError("config " + path + ": empty key on line " + std::to_string(line_no));
    entries.emplace_back(key, value);
  }
  return entries;
}

std::vector<double> read_rate_series(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty rate file");
  std::vector<double> rates;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t comma = stripped.find(',');
    if (comma == std::string::npos)
      throw ParseError(path + ": row " + std::to_string(line_no) + " needs date,rate");
    const std::string cell = trim(stripped.substr(comma + 1));
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size())
      throw ParseError(path + ": row " + std::to_string(line_no) + ": cannot parse rate '" +
                       cell + "'");
    rates.push_back(v);
  }
  if (rates.empty()) throw ParseError(path + ": no rate rows");
  return rates;
}

}  // namespace nlcor
