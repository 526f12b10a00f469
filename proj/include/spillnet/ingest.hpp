#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "spillnet/types.hpp"

namespace spillnet {

/// One daily bar in log-price units.
struct OhlcBar {
  double open = 0.0;
  double high = 0.0;
  double low = 0.0;
  double close = 0.0;
};

/// Throws ValidationError if the bar is non-finite or its range ordering is violated.
void validate_bar(const OhlcBar& bar, const std::string& series, const Date& date);

struct IngestConfig {
  bool already_log = false;
  std::vector<Date> exclusion_dates;
  double max_drop_fraction = 0.05;
  int adf_lag = 2;
  std::size_t min_series = 2;
  std::size_t min_dates = 10;
  /// Optional id -> (name, code) metadata attached to loaded series.
  std::map<std::string, std::pair<std::string, std::string>> series_meta;
};

/// Reads an ingest config from a JSON file. Unknown keys are rejected.
IngestConfig load_ingest_config(const std::filesystem::path& path);
/// Same, from JSON text (an object with the keys above).
IngestConfig parse_ingest_config(const std::string& json_text);

/// Rectangular, aligned panel. bars[i][t] is series i on calendar[t].
struct OhlcPanel {
  std::vector<SeriesId> series_ids;
  std::vector<Date> calendar;
  std::vector<std::vector<OhlcBar>> bars;
  std::set<Date> exclusion_dates;

  std::size_t num_series() const { return series_ids.size(); }
  std::size_t num_dates() const { return calendar.size(); }
};

struct LoadReport {
  std::size_t rows_read = 0;
  std::size_t dates_seen = 0;       // union of dates across series
  std::size_t dates_dropped = 0;    // not shared by every series
  std::size_t exclusions_applied = 0;
  std::size_t negative_volatilities = 0;
  std::vector<Date> dropped_dates;

  std::string summary() const;
};

struct LoadResult {
  OhlcPanel panel;
  LoadReport report;
};

/// Loads a long-form CSV (`series_id,date,open,high,low,close`) or a
/// manifest (`series_id,path`) whose entries point at per-series files with
/// header `date,open,high,low,close`. The format is chosen from the header.
LoadResult load_panel(const std::filesystem::path& source, const IngestConfig& config);

/// Same as load_panel but from in-memory long-form CSV text.
LoadResult load_panel_text(const std::string& csv, const IngestConfig& config);

/// Garman-Klass daily variance of one log-price bar.
double garman_klass(const OhlcBar& bar);

/// N x T matrix of daily variances, excluded dates removed.
struct VolatilityPanel {
  std::vector<SeriesId> series_ids;
  std::vector<Date> dates;
  Matrix values;  // rows = series, cols = dates
  std::size_t negative_count = 0;

  std::size_t num_series() const { return series_ids.size(); }
  std::size_t num_dates() const { return dates.size(); }

  /// Columns whose date lies in [first, last]. Throws SliceError when empty.
  VolatilityPanel slice(const Date& first, const Date& last) const;
};

VolatilityPanel panel_volatility(const OhlcPanel& panel);

struct DescriptiveStats {
  double mean = 0.0;
  double median = 0.0;
  double max = 0.0;
  double min = 0.0;
  double std = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
  double adf_statistic = 0.0;
  bool adf_significant_1pct = false;
};

/// Asymptotic Dickey-Fuller critical values for the constant-only regression.
struct AdfCriticalValues {
  static constexpr double one_pct = -3.43035;
  static constexpr double five_pct = -2.86154;
  static constexpr double ten_pct = -2.56677;
};

/// t-ratio of gamma in dv_t = a + gamma v_{t-1} + sum_k b_k dv_{t-k} + u_t.
double adf_statistic(const std::vector<double>& series, int lag);

/// Table-style summary of one volatility series. Skewness and kurtosis use
/// biased central moments; kurtosis is raw (normal = 3); std uses T-1.
DescriptiveStats describe(const std::vector<double>& series, int adf_lag);

}  // namespace spillnet
