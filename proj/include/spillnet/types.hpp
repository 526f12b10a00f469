#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace spillnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Date = std::chrono::year_month_day;

/// Parses `YYYY-MM-DD`. Throws ValidationError on anything else.
Date parse_date(std::string_view text);
std::string format_date(const Date& date);

/// Sector identifier. `id` is the short label used in files; `name` and
/// `code` are optional metadata (e.g. "Agriculture and forestry", "801010").
struct SeriesId {
  std::string id;
  std::string name;
  std::string code;

  friend bool operator==(const SeriesId& a, const SeriesId& b) { return a.id == b.id; }
};

std::vector<std::string> ids_of(const std::vector<SeriesId>& series);

}  // namespace spillnet
