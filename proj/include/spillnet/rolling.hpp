#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "spillnet/connect.hpp"
#include "spillnet/ingest.hpp"
#include "spillnet/var.hpp"

namespace spillnet {

struct RollingConfig {
  std::size_t window = 240;
  std::size_t step = 1;
  VarSpec var_spec;
  int horizon = 10;

  /// Throws ConfigError when the window cannot support the VAR or step is 0.
  void validate(std::size_t num_series) const;
};

/// Number of windows of length `window` advancing by `step` over `length` points.
std::size_t window_count(std::size_t length, std::size_t window, std::size_t step);

/// fit -> decompose -> aggregate on one N x T block.
struct WindowAnalysis {
  VarModel model;
  ConnectednessTable table;
};

WindowAnalysis analyze(const Eigen::Ref<const Matrix>& data, const std::vector<std::string>& ids,
                       const VarSpec& spec, int horizon);
WindowAnalysis analyze(const VolatilityPanel& panel, const VarSpec& spec, int horizon);

struct WindowFailure {
  std::size_t index = 0;
  Date end_date;
  std::string message;
};

/// Per-window series. Failed windows keep their slot with NaN values.
struct RollingResult {
  RollingConfig config;
  std::vector<std::string> series_ids;
  std::vector<Date> window_end_dates;
  std::vector<double> total_pct;
  Matrix from_pct;  // windows x series
  Matrix to_pct;
  Matrix net_pct;
  std::vector<bool> unstable;
  std::vector<WindowFailure> failures;

  std::size_t num_windows() const { return window_end_dates.size(); }
};

/// Rolling analysis with windows spread over `threads` OpenMP threads
/// (0 = runtime default). Output does not depend on the thread count.
RollingResult roll(const VolatilityPanel& panel, const RollingConfig& config, int threads = 0);

/// Single-threaded reference path; same results as roll().
RollingResult roll_serial(const VolatilityPanel& panel, const RollingConfig& config);

enum class GridMode {
  Product,     // every (W, H, p)
  Robustness,  // W x H at the base lag, plus every lag at the base (W, H)
};

struct SweepGrid {
  std::vector<std::size_t> windows{220, 240, 260};
  std::vector<int> horizons{5, 10, 15};
  std::vector<int> lags{1, 2, 3, 4, 5};
  GridMode mode = GridMode::Robustness;
  std::size_t base_window = 240;
  int base_horizon = 10;
  int base_lag = 2;
  std::size_t step = 1;
  bool include_intercept = true;

  std::vector<RollingConfig> combinations() const;
};

std::string combination_label(const RollingConfig& config);

struct SweepEntry {
  RollingConfig config;
  std::optional<RollingResult> result;
  std::string error;  // set when the whole combination failed
};

/// Order statistics of total_pct across combinations, per window end date.
struct SweepEnvelope {
  std::vector<Date> dates;
  std::vector<double> min;
  std::vector<double> median;
  std::vector<double> max;
  std::vector<std::size_t> count;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  SweepEnvelope envelope;
  /// Largest |total_i - total_j| over pairs of curves and shared dates.
  double max_abs_deviation = 0.0;
  /// pairwise_max_abs_deviation(i, j) over successful entries (NaN otherwise).
  Matrix pairwise_max_abs_deviation;
};

SweepResult sweep(const VolatilityPanel& panel, const SweepGrid& grid, int threads = 0);

SweepEnvelope envelope_of(const std::vector<const RollingResult*>& results);

}  // namespace spillnet
