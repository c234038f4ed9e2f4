// panel.hpp
// Price tables, log-return panels and rolling windows.
//
// Matrices are stored with time in rows and series in columns, so each
// series occupies one contiguous Eigen column. Dates are opaque ordered
// labels; the library never does calendar arithmetic on them.

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace nlcor {

// Aligned table of strictly positive closing prices.
struct PriceTable {
  std::vector<std::string> tickers;
  std::vector<std::string> dates;  // strictly increasing, one per row
  Eigen::MatrixXd prices;          // M x N

  int n_series() const { return static_cast<int>(tickers.size()); }
  int length() const { return static_cast<int>(dates.size()); }
};

// Log returns x_t = log p_t - log p_{t-1}; one row per return step.
struct ReturnPanel {
  std::vector<std::string> tickers;
  std::vector<std::string> dates;  // length M-1, date of each return step
  Eigen::MatrixXd returns;         // (M-1) x N

  int n_series() const { return static_cast<int>(tickers.size()); }
  int length() const { return static_cast<int>(dates.size()); }
};

struct WindowSpec {
  int length = 1000;  // T, trading days per window
  int step = 20;      // deltaT, stride between consecutive windows
};

// Read-only view of one rolling window: return rows [start, start+length).
// Views borrow the panel and stay valid only while it is alive.
struct WindowView {
  const ReturnPanel* panel = nullptr;
  int index = 0;
  int start = 0;
  int length = 0;

  int end() const { return start + length; }
  int n_series() const { return panel->n_series(); }
  const std::string& end_date() const { return panel->dates[start + length - 1]; }
  Eigen::Block<const Eigen::MatrixXd> block() const {
    return panel->returns.middleRows(start, length);
  }
};

// Parse a wide CSV price table: header `date,TICKER1,...`, one row per date.
// Rows with a missing cell are dropped (alignment by row deletion); rows are
// sorted by date afterwards. Non-numeric cells raise ParseError with row and
// column; non-positive prices raise ValidationError naming ticker and date.
PriceTable load_price_table(const std::string& path);
PriceTable parse_price_csv(const std::string& text);

ReturnPanel to_log_returns(const PriceTable& table);

// All full windows of the given spec: window w starts at row w*step and the
// count is floor((L - T)/step) + 1.
std::vector<WindowView> rolling_windows(const ReturnPanel& panel, const WindowSpec& spec);

// Materialized copy of one window as a standalone panel.
ReturnPanel window_panel(const WindowView& view);

}  // namespace nlcor
