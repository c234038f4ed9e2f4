// panel.cpp

#include "nlcor/panel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "nlcor/errors.hpp"

namespace nlcor {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

PriceTable parse_price_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("price csv: empty file");

  const std::vector<std::string> header = split_fields(line);
  if (header.empty() || trim(header[0]) != "date")
    throw ParseError("price csv: first header column must be 'date'");
  const int n = static_cast<int>(header.size()) - 1;
  if (n < 1) throw ParseError("price csv: no ticker columns");

  std::vector<std::string> tickers(n);
  for (int j = 0; j < n; ++j) {
    tickers[j] = trim(header[j + 1]);
    if (tickers[j].empty()) throw ParseError("price csv: empty ticker name in header");
  }

  struct Row {
    std::string date;
    std::vector<double> values;
  };
  std::vector<Row> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (static_cast<int>(fields.size()) > n + 1)
      throw ParseError("price csv: row " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " columns, expected " +
                       std::to_string(n + 1));

    Row row;
    row.date = trim(fields[0]);
    if (row.date.empty())
      throw ParseError("price csv: row " + std::to_string(line_no) + " has an empty date");

    // A short row or an empty cell counts as missing data: the whole date is
    // dropped, matching the row-deletion alignment rule.
    bool missing = static_cast<int>(fields.size()) < n + 1;
    row.values.resize(n);
    for (int j = 0; j + 1 < static_cast<int>(fields.size()); ++j) {
      const std::string cell = trim(fields[j + 1]);
      if (cell.empty()) {
        missing = true;
        continue;
      }
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw ParseError("price csv: row " + std::to_string(line_no) + ", column '" +
                         tickers[j] + "': cannot parse '" + cell + "' as a number");
      row.values[j] = v;
    }
    if (missing) continue;
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("price csv: no complete rows");

  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.date < b.date; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].date == rows[i - 1].date)
      throw ValidationError("price csv: duplicate date '" + rows[i].date + "'");
  }

  PriceTable table;
  table.tickers = std::move(tickers);
  table.dates.reserve(rows.size());
  table.prices.resize(static_cast<int>(rows.size()), n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    table.dates.push_back(rows[i].date);
    for (int j = 0; j < n; ++j) {
      const double p = rows[i].values[j];
      if (!(p > 0.0) || !std::isfinite(p))
        throw ValidationError("price csv: non-positive price for ticker '" +
                              table.tickers[j] + "' on " + rows[i].date);
      table.prices(static_cast<int>(i), j) = p;
    }
  }
  return table;
}

PriceTable load_price_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_price_csv(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

ReturnPanel to_log_returns(const PriceTable& table) {
  const int m = table.length();
  const int n = table.n_series();
  if (m < 2) throw InsufficientDataError("to_log_returns: need at least 2 price rows");

  ReturnPanel panel;
  panel.tickers = table.tickers;
  panel.dates.assign(table.dates.begin() + 1, table.dates.end());
  panel.returns.resize(m - 1, n);
  for (int j = 0; j < n; ++j) {
    for (int t = 0; t + 1 < m; ++t) {
      panel.returns(t, j) = std::log(table.prices(t + 1, j)) - std::log(table.prices(t, j));
    }
  }
  return panel;
}

std::vector<WindowView> rolling_windows(const ReturnPanel& panel, const WindowSpec& spec) {
  if (spec.length < 2) throw ValidationError("rolling_windows: window length must be >= 2");
  if (spec.step < 1) throw ValidationError("rolling_windows: step must be >= 1");
  const int l = panel.length();
  if (l < spec.length)
    throw InsufficientDataError("rolling_windows: panel has " + std::to_string(l) +
                                " steps, window needs " + std::to_string(spec.length));

  const int count = (l - spec.length) / spec.step + 1;
  std::vector<WindowView> views;
  views.reserve(count);
  for (int w = 0; w < count; ++w) {
    views.push_back(WindowView{&panel, w, w * spec.step, spec.length});
  }
  return views;
}

ReturnPanel window_panel(const WindowView& view) {
  ReturnPanel panel;
  panel.tickers = view.panel->tickers;
  panel.dates.assign(view.panel->dates.begin() + view.start,
                     view.panel->dates.begin() + view.end());
  panel.returns = view.block();
  return panel;
}

}  // namespace nlcor
