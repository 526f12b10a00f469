#include "spillnet/rolling.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>

#include <fmt/format.h>
#include <omp.h>

#include "spillnet/error.hpp"

namespace spillnet {

void RollingConfig::validate(std::size_t num_series) const {
  var_spec.validate();
  if (step < 1) throw ConfigError("rolling step must be >= 1");
  if (horizon < 1) throw ConfigError(fmt::format("horizon must be >= 1, got {}", horizon));
  const auto needed = min_var_observations(num_series, var_spec.lag_order);
  if (window < needed) {
    throw ConfigError(fmt::format("window of {} days is too short for VAR({}) on {} series (need {})", window,
                                  var_spec.lag_order, num_series, needed));
  }
}

std::size_t window_count(std::size_t length, std::size_t window, std::size_t step) {
  if (window == 0 || step == 0 || length < window) return 0;
  return (length - window) / step + 1;
}

WindowAnalysis analyze(const Eigen::Ref<const Matrix>& data, const std::vector<std::string>& ids,
                       const VarSpec& spec, int horizon) {
  VarModel model = fit_var(data, spec, ids);
  FevdMatrix fevd = gfevd(model, horizon, ids);
  return {std::move(model), connectedness(fevd)};
}

WindowAnalysis analyze(const VolatilityPanel& panel, const VarSpec& spec, int horizon) {
  return analyze(panel.values, ids_of(panel.series_ids), spec, horizon);
}

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

RollingResult prepare(const VolatilityPanel& panel, const RollingConfig& config) {
  config.validate(panel.num_series());
  if (panel.num_dates() < config.window) {
    throw LengthError(fmt::format("panel has {} dates, fewer than the {}-day window", panel.num_dates(),
                                  config.window));
  }
  const std::size_t windows = window_count(panel.num_dates(), config.window, config.step);
  const auto k = static_cast<Eigen::Index>(windows);
  const auto n = static_cast<Eigen::Index>(panel.num_series());
  RollingResult r;
  r.config = config;
  r.series_ids = ids_of(panel.series_ids);
  r.window_end_dates.reserve(windows);
  for (std::size_t w = 0; w < windows; ++w) {
    r.window_end_dates.push_back(panel.dates[w * config.step + config.window - 1]);
  }
  r.total_pct.assign(windows, kMissing);
  r.from_pct = Matrix::Constant(k, n, kMissing);
  r.to_pct = Matrix::Constant(k, n, kMissing);
  r.net_pct = Matrix::Constant(k, n, kMissing);
  r.unstable.assign(windows, false);
  return r;
}

// Runs one window and writes its row of the result. Returns an error message
// for windows whose fit or decomposition is degenerate. Only the window's own
// row and slots are written, so windows may run concurrently.
std::string process_window(const VolatilityPanel& panel, RollingResult& r, std::size_t w, char& unstable) {
  const auto& cfg = r.config;
  const auto start = static_cast<Eigen::Index>(w * cfg.step);
  const auto row = static_cast<Eigen::Index>(w);
  try {
    const auto a = analyze(panel.values.middleCols(start, static_cast<Eigen::Index>(cfg.window)), r.series_ids,
                           cfg.var_spec, cfg.horizon);
    r.total_pct[w] = a.table.total_pct;
    r.from_pct.row(row) = a.table.from_pct.transpose();
    r.to_pct.row(row) = a.table.to_pct.transpose();
    r.net_pct.row(row) = a.table.net_pct.transpose();
    unstable = a.model.stable ? 0 : 1;
    return {};
  } catch (const Error& e) {
    return e.what();
  }
}

void finish(RollingResult& r, const std::vector<std::string>& messages, const std::vector<char>& unstable) {
  for (std::size_t w = 0; w < r.num_windows(); ++w) r.unstable[w] = unstable[w] != 0;
  for (std::size_t w = 0; w < messages.size(); ++w) {
    if (!messages[w].empty()) r.failures.push_back({w, r.window_end_dates[w], messages[w]});
  }
}

}  // namespace

RollingResult roll_serial(const VolatilityPanel& panel, const RollingConfig& config) {
  RollingResult r = prepare(panel, config);
  std::vector<std::string> messages(r.num_windows());
  std::vector<char> unstable(r.num_windows(), 0);
  for (std::size_t w = 0; w < r.num_windows(); ++w) messages[w] = process_window(panel, r, w, unstable[w]);
  finish(r, messages, unstable);
  return r;
}

RollingResult roll(const VolatilityPanel& panel, const RollingConfig& config, int threads) {
  RollingResult r = prepare(panel, config);
  const auto windows = static_cast<std::ptrdiff_t>(r.num_windows());
  std::vector<std::string> messages(r.num_windows());
  // std::vector<bool> packs bits; flags are staged as chars so each window owns its byte.
  std::vector<char> unstable(r.num_windows(), 0);
  std::exception_ptr fatal;
  const int team = threads > 0 ? threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 4) num_threads(team)
  for (std::ptrdiff_t w = 0; w < windows; ++w) {
    const auto uw = static_cast<std::size_t>(w);
    try {
      messages[uw] = process_window(panel, r, uw, unstable[uw]);
    } catch (...) {
#pragma omp critical(spillnet_roll_fatal)
      if (!fatal) fatal = std::current_exception();
    }
  }
  if (fatal) std::rethrow_exception(fatal);
  finish(r, messages, unstable);
  return r;
}

std::vector<RollingConfig> SweepGrid::combinations() const {
  std::vector<RollingConfig> out;
  auto add = [&](std::size_t w, int h, int p) {
    RollingConfig c;
    c.window = w;
    c.step = step;
    c.horizon = h;
    c.var_spec = {p, include_intercept};
    for (const auto& e : out) {
      if (e.window == w && e.horizon == h && e.var_spec.lag_order == p) return;
    }
    out.push_back(c);
  };
  if (mode == GridMode::Product) {
    for (auto w : windows)
      for (auto h : horizons)
        for (auto p : lags) add(w, h, p);
  } else {
    for (auto w : windows)
      for (auto h : horizons) add(w, h, base_lag);
    for (auto p : lags) add(base_window, base_horizon, p);
  }
  return out;
}

std::string combination_label(const RollingConfig& config) {
  return fmt::format("W{}_H{}_p{}", config.window, config.horizon, config.var_spec.lag_order);
}

namespace {

double median_of(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

SweepEnvelope envelope_of(const std::vector<const RollingResult*>& results) {
  std::map<Date, std::vector<double>> by_date;
  for (const auto* r : results) {
    for (std::size_t w = 0; w < r->num_windows(); ++w) {
      if (std::isfinite(r->total_pct[w])) by_date[r->window_end_dates[w]].push_back(r->total_pct[w]);
    }
  }
  SweepEnvelope env;
  for (auto& [date, values] : by_date) {
    env.dates.push_back(date);
    env.count.push_back(values.size());
    env.median.push_back(median_of(values));  // sorts values
    env.min.push_back(values.front());
    env.max.push_back(values.back());
  }
  return env;
}

SweepResult sweep(const VolatilityPanel& panel, const SweepGrid& grid, int threads) {
  SweepResult out;
  for (const auto& cfg : grid.combinations()) {
    SweepEntry entry{cfg, std::nullopt, {}};
    try {
      entry.result = roll(panel, cfg, threads);
    } catch (const Error& e) {
      entry.error = e.what();
    }
    out.entries.push_back(std::move(entry));
  }

  std::vector<const RollingResult*> ok;
  for (const auto& e : out.entries)
    if (e.result) ok.push_back(&*e.result);
  out.envelope = envelope_of(ok);

  const auto m = static_cast<Eigen::Index>(out.entries.size());
  out.pairwise_max_abs_deviation = Matrix::Constant(m, m, kMissing);
  for (Eigen::Index a = 0; a < m; ++a) {
    const auto& ea = out.entries[static_cast<std::size_t>(a)];
    if (!ea.result) continue;
    std::map<Date, double> lookup;
    for (std::size_t w = 0; w < ea.result->num_windows(); ++w) {
      lookup.emplace(ea.result->window_end_dates[w], ea.result->total_pct[w]);
    }
    for (Eigen::Index b = 0; b < m; ++b) {
      const auto& eb = out.entries[static_cast<std::size_t>(b)];
      if (!eb.result) continue;
      double worst = 0.0;
      for (std::size_t w = 0; w < eb.result->num_windows(); ++w) {
        auto it = lookup.find(eb.result->window_end_dates[w]);
        if (it == lookup.end()) continue;
        const double diff = std::abs(it->second - eb.result->total_pct[w]);
        if (std::isfinite(diff)) worst = std::max(worst, diff);
      }
      out.pairwise_max_abs_deviation(a, b) = worst;
      out.max_abs_deviation = std::max(out.max_abs_deviation, worst);
    }
  }
  return out;
}

}  // namespace spillnet
