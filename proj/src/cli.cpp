#include "spillnet/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "spillnet/connect.hpp"
#include "spillnet/error.hpp"
#include "spillnet/output.hpp"

namespace spillnet::cli {

Subperiod parse_subperiod(const std::string& text) {
  const auto eq = text.find('=');
  const auto colon = text.find(':', eq == std::string::npos ? 0 : eq);
  if (eq == std::string::npos || eq == 0 || colon == std::string::npos) {
    throw ConfigError(fmt::format("subperiod '{}' must look like NAME=YYYY-MM-DD:YYYY-MM-DD", text));
  }
  Subperiod s;
  s.name = text.substr(0, eq);
  try {
    s.first = parse_date(text.substr(eq + 1, colon - eq - 1));
    s.last = parse_date(text.substr(colon + 1));
  } catch (const ValidationError& e) {
    throw ConfigError(fmt::format("subperiod '{}': {}", text, e.what()));
  }
  if (s.last < s.first) throw ConfigError(fmt::format("subperiod '{}' ends before it starts", text));
  return s;
}

namespace {

GridMode parse_grid_mode(const std::string& text) {
  if (text == "product") return GridMode::Product;
  if (text == "robustness") return GridMode::Robustness;
  throw ConfigError(fmt::format("unknown sweep grid mode '{}' (expected product or robustness)", text));
}

void apply_json(RunConfig& cfg, const nlohmann::json& j) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& key = it.key();
    const auto& v = it.value();
    if (key == "input") {
      cfg.inputs = {v.get<std::string>()};
    } else if (key == "inputs") {
      cfg.inputs.clear();
      for (const auto& p : v) cfg.inputs.emplace_back(p.get<std::string>());
    } else if (key == "ingest") {
      cfg.ingest = parse_ingest_config(v.dump());
    } else if (key == "lag") {
      cfg.var_spec.lag_order = v.get<int>();
    } else if (key == "include_intercept") {
      cfg.var_spec.include_intercept = v.get<bool>();
    } else if (key == "horizon") {
      cfg.horizon = v.get<int>();
    } else if (key == "window") {
      cfg.window = v.get<std::size_t>();
    } else if (key == "step") {
      cfg.step = v.get<std::size_t>();
    } else if (key == "subperiods") {
      cfg.subperiods.clear();
      if (v.is_object()) {
        for (auto s = v.begin(); s != v.end(); ++s) {
          cfg.subperiods.push_back(parse_subperiod(s.key() + "=" + s.value().get<std::string>()));
        }
      } else {
        for (const auto& s : v) cfg.subperiods.push_back(parse_subperiod(s.get<std::string>()));
      }
    } else if (key == "sweep") {
      for (auto s = v.begin(); s != v.end(); ++s) {
        if (s.key() == "windows") {
          cfg.sweep.windows = s.value().get<std::vector<std::size_t>>();
        } else if (s.key() == "horizons") {
          cfg.sweep.horizons = s.value().get<std::vector<int>>();
        } else if (s.key() == "lags") {
          cfg.sweep.lags = s.value().get<std::vector<int>>();
        } else if (s.key() == "mode") {
          cfg.sweep.mode = parse_grid_mode(s.value().get<std::string>());
        } else {
          throw ConfigError(fmt::format("unknown sweep key '{}'", s.key()));
        }
      }
    } else if (key == "out") {
      cfg.out_dir = v.get<std::string>();
    } else if (key == "threads") {
      cfg.threads = v.get<int>();
    } else if (key == "format") {
      cfg.format = v.get<std::string>();
    } else if (key == "dot") {
      cfg.dot = v.get<bool>();
    } else if (key == "decimals") {
      cfg.decimals = v.get<int>();
    } else if (key == "pagerank") {
      cfg.pagerank.damping = v.value("damping", cfg.pagerank.damping);
      cfg.pagerank.tol = v.value("tol", cfg.pagerank.tol);
      cfg.pagerank.max_iter = v.value("max_iter", cfg.pagerank.max_iter);
    } else {
      throw ConfigError(fmt::format("unknown config key '{}'", key));
    }
  }
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  RunConfig cfg;
  try {
    nlohmann::json j;
    in >> j;
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    apply_json(cfg, j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("config '{}': {}", path.string(), e.what()));
  }
  if (cfg.inputs.size() == 1 && cfg.inputs.front().is_relative()) {
    cfg.inputs.front() = path.parent_path() / cfg.inputs.front();
  }
  return cfg;
}

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> input;
  std::optional<int> lag;
  std::optional<int> horizon;
  std::optional<std::size_t> window;
  std::optional<std::size_t> step;
  std::vector<std::string> subperiods;
  std::optional<int> threads;
  std::optional<std::string> out;
  std::optional<std::string> format;
  bool dot = false;
  bool no_intercept = false;
  std::optional<int> decimals;
  std::optional<double> damping;
  std::vector<std::size_t> sweep_windows;
  std::vector<int> sweep_horizons;
  std::vector<int> sweep_lags;
  std::optional<std::string> grid;
};

RunConfig resolve(const Overrides& o) {
  RunConfig cfg;
  std::string config_path = o.config;
  if (config_path.empty()) {
    if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') config_path = env;
  }
  if (!config_path.empty()) cfg = load_run_config(config_path);
  if (o.input) cfg.inputs = {*o.input};
  if (o.lag) cfg.var_spec.lag_order = *o.lag;
  if (o.no_intercept) cfg.var_spec.include_intercept = false;
  if (o.horizon) cfg.horizon = *o.horizon;
  if (o.window) cfg.window = *o.window;
  if (o.step) cfg.step = *o.step;
  if (!o.subperiods.empty()) {
    cfg.subperiods.clear();
    for (const auto& s : o.subperiods) cfg.subperiods.push_back(parse_subperiod(s));
  }
  if (o.threads) cfg.threads = *o.threads;
  if (o.out) cfg.out_dir = *o.out;
  if (o.format) cfg.format = *o.format;
  if (o.dot) cfg.dot = true;
  if (o.decimals) cfg.decimals = *o.decimals;
  if (o.damping) cfg.pagerank.damping = *o.damping;
  if (!o.sweep_windows.empty()) cfg.sweep.windows = o.sweep_windows;
  if (!o.sweep_horizons.empty()) cfg.sweep.horizons = o.sweep_horizons;
  if (!o.sweep_lags.empty()) cfg.sweep.lags = o.sweep_lags;
  if (o.grid) cfg.sweep.mode = parse_grid_mode(*o.grid);

  cfg.sweep.base_window = cfg.window;
  cfg.sweep.base_horizon = cfg.horizon;
  cfg.sweep.base_lag = cfg.var_spec.lag_order;
  cfg.sweep.step = cfg.step;
  cfg.sweep.include_intercept = cfg.var_spec.include_intercept;

  if (cfg.inputs.size() != 1) throw ConfigError("exactly one input file is required");
  if (cfg.format != "csv" && cfg.format != "json") {
    throw ConfigError(fmt::format("unknown format '{}' (expected csv or json)", cfg.format));
  }
  cfg.var_spec.validate();
  if (cfg.horizon < 1) throw ConfigError("horizon must be >= 1");
  return cfg;
}

struct Loaded {
  LoadReport report;
  VolatilityPanel panel;
};

Loaded load(const RunConfig& cfg, std::ostream& out) {
  auto loaded = load_panel(cfg.inputs.front(), cfg.ingest);
  VolatilityPanel vol = panel_volatility(loaded.panel);
  out << "load: " << loaded.report.summary() << '\n';
  return {std::move(loaded.report), std::move(vol)};
}

std::filesystem::path out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return cfg.out_dir / name;
}

void write(const RunConfig& cfg, const std::string& name, const std::string& contents, std::ostream& out) {
  const auto path = out_path(cfg, name);
  output::write_file(path, contents);
  out << "wrote " << path.string() << '\n';
}

int cmd_describe(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto data = load(cfg, out);
  std::vector<output::StatsRow> rows;
  nlohmann::json json_rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < data.panel.values.rows(); ++i) {
    const auto& id = data.panel.series_ids[static_cast<std::size_t>(i)].id;
    const Vector row = data.panel.values.row(i).transpose();
    std::vector<double> series(row.data(), row.data() + row.size());
    output::StatsRow r{id, std::nullopt, "ok"};
    try {
      r.stats = describe(series, cfg.ingest.adf_lag);
    } catch (const DegenerateSeriesError& e) {
      r.status = "degenerate";
      err << "warning: series '" << id << "' is degenerate: " << e.what() << '\n';
    } catch (const SingularDesignError& e) {
      r.status = "degenerate";
      err << "warning: series '" << id << "' is degenerate: " << e.what() << '\n';
    }
    nlohmann::json j{{"series_id", id}, {"status", r.status}};
    if (r.stats) {
      const auto& s = *r.stats;
      j.update({{"mean", s.mean}, {"median", s.median}, {"max", s.max}, {"min", s.min}, {"std", s.std},
                {"skewness", s.skewness}, {"kurtosis", s.kurtosis}, {"adf", s.adf_statistic},
                {"adf_significant_1pct", s.adf_significant_1pct}});
    }
    json_rows.push_back(j);
    rows.push_back(std::move(r));
  }
  if (cfg.format == "json") {
    write(cfg, "descriptive_stats.json", json_rows.dump(2) + "\n", out);
  } else {
    write(cfg, "descriptive_stats.csv", output::stats_csv(rows, cfg.decimals), out);
  }
  write(cfg, "load_report.json", output::to_json(data.report).dump(2) + "\n", out);
  return 0;
}

void static_outputs(const RunConfig& cfg, const VolatilityPanel& panel, const std::string& prefix,
                    std::ostream& out) {
  const auto ids = ids_of(panel.series_ids);
  const auto analysis = analyze(panel, cfg.var_spec, cfg.horizon);
  const auto& table = analysis.table;
  const auto npm = net_pairwise(table.fevd);
  const auto net = build_network(npm, table);
  const auto sub = max_out_subgraph(net);
  const auto pr = pagerank(net, cfg.pagerank.damping, cfg.pagerank.tol, cfg.pagerank.max_iter);

  out << fmt::format("{}: {} series, {} dates, total connectedness {:.2f}%{}\n", prefix, panel.num_series(),
                     panel.num_dates(), table.total_pct, analysis.model.stable ? "" : " (unstable VAR)");
  if (cfg.format == "json") {
    nlohmann::json j = output::to_json(table);
    j["var_model"] = output::to_json(analysis.model, ids);
    auto edges = nlohmann::json::array();
    for (const auto& e : net.edges) {
      edges.push_back({{"source", net.nodes[e.source].id}, {"target", net.nodes[e.target].id}, {"weight_pct", e.weight}});
    }
    j["edges"] = edges;
    auto nodes = nlohmann::json::array();
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
      nodes.push_back({{"id", net.nodes[i].id}, {"net_pct", net.nodes[i].net_pct},
                       {"role", role_name(net.nodes[i].role)}, {"pagerank", pr.scores[i]}});
    }
    j["nodes"] = nodes;
    write(cfg, prefix + "_static.json", j.dump(2) + "\n", out);
  } else {
    write(cfg, prefix + "_connectedness.csv", output::connectedness_csv(table, cfg.decimals), out);
    write(cfg, prefix + "_fevd.csv", output::fevd_csv(table.fevd, cfg.decimals), out);
    write(cfg, prefix + "_edges.csv", output::edges_csv(net, cfg.decimals), out);
    write(cfg, prefix + "_max_out_edges.csv", output::edges_csv(sub, cfg.decimals), out);
    write(cfg, prefix + "_nodes.csv", output::nodes_csv(net, pr, cfg.decimals), out);
    write(cfg, prefix + "_var_model.json", output::to_json(analysis.model, ids).dump(2) + "\n", out);
  }
  if (cfg.dot) {
    write(cfg, prefix + "_network.dot", to_dot(net, &pr), out);
    write(cfg, prefix + "_max_out.dot", to_dot(sub, &pr), out);
  }
}

int cmd_static(const RunConfig& cfg, std::ostream& out) {
  const auto data = load(cfg, out);
  static_outputs(cfg, data.panel, "full", out);
  for (const auto& s : cfg.subperiods) static_outputs(cfg, data.panel.slice(s.first, s.last), s.name, out);
  return 0;
}

RollingConfig rolling_config(const RunConfig& cfg) {
  RollingConfig rc;
  rc.window = cfg.window;
  rc.step = cfg.step;
  rc.var_spec = cfg.var_spec;
  rc.horizon = cfg.horizon;
  return rc;
}

int cmd_roll(const RunConfig& cfg, std::ostream& out) {
  const auto data = load(cfg, out);
  const auto result = roll(data.panel, rolling_config(cfg), cfg.threads);
  out << fmt::format("roll: {} windows, {} failed\n", result.num_windows(), result.failures.size());
  if (cfg.format == "json") {
    write(cfg, "rolling.json", output::to_json(result).dump(2) + "\n", out);
  } else {
    write(cfg, "rolling_total.csv", output::rolling_total_csv(result, cfg.decimals), out);
    write(cfg, "rolling_from.csv", output::rolling_wide_csv(result, Measure::From, cfg.decimals), out);
    write(cfg, "rolling_to.csv", output::rolling_wide_csv(result, Measure::To, cfg.decimals), out);
    write(cfg, "rolling_net.csv", output::rolling_wide_csv(result, Measure::Net, cfg.decimals), out);
  }
  if (!result.failures.empty()) write(cfg, "rolling_failures.csv", output::rolling_failures_csv(result), out);
  return 0;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const auto data = load(cfg, out);
  const auto result = sweep(data.panel, cfg.sweep, cfg.threads);
  std::size_t failed = 0;
  for (const auto& e : result.entries) failed += e.result ? 0 : 1;
  out << fmt::format("sweep: {} combinations, {} failed, max |total deviation| {:.4f} points\n", result.entries.size(),
                     failed, result.max_abs_deviation);
  if (cfg.format == "json") {
    nlohmann::json j = output::to_json(result);
    auto curves = nlohmann::json::object();
    for (const auto& e : result.entries)
      if (e.result) curves[combination_label(e.config)] = output::to_json(*e.result);
    j["results"] = curves;
    write(cfg, "sweep.json", j.dump(2) + "\n", out);
  } else {
    write(cfg, "sweep_totals.csv", output::sweep_totals_csv(result, cfg.decimals), out);
  }
  write(cfg, "sweep_envelope.csv", output::sweep_envelope_csv(result.envelope, cfg.decimals), out);
  write(cfg, "sweep_summary.json", output::to_json(result).dump(2) + "\n", out);
  write(cfg, "sweep_failures.csv", output::sweep_failures_csv(result), out);
  return 0;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Volatility spillover connectedness toolkit"};
  app.require_subcommand(1);
  Overrides o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", o.input, "Long-form OHLC CSV or series manifest");
    sub->add_option("--config", o.config, fmt::format("JSON run config (default: ${})", kConfigEnv));
    sub->add_option("--lag", o.lag, "VAR lag order p (default 2)");
    sub->add_option("--horizon", o.horizon, "Forecast horizon H (default 10)");
    sub->add_option("--window", o.window, "Rolling window W in days (default 240)");
    sub->add_option("--step", o.step, "Rolling step in days (default 1)");
    sub->add_option("--subperiod", o.subperiods, "Named date range NAME=START:END (repeatable)");
    sub->add_option("--threads", o.threads, "Worker threads (0 = all)");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--format", o.format, "Output format: csv or json");
    sub->add_flag("--dot", o.dot, "Also write Graphviz network files");
    sub->add_flag("--no-intercept", o.no_intercept, "Fit the VAR without an intercept");
    sub->add_option("--decimals", o.decimals, "Fixed decimals for numbers (default: full precision)");
    sub->add_option("--damping", o.damping, "PageRank damping factor (default 0.85)");
  };

  auto* describe_cmd = app.add_subcommand("describe", "Descriptive statistics and ADF tests per series");
  auto* static_cmd = app.add_subcommand("static", "Full-sample and subperiod connectedness tables and networks");
  auto* roll_cmd = app.add_subcommand("roll", "Rolling-window connectedness series");
  auto* sweep_cmd = app.add_subcommand("sweep", "Rolling analysis over a (W, H, p) grid");
  for (auto* sub : {describe_cmd, static_cmd, roll_cmd, sweep_cmd}) add_common(sub);
  sweep_cmd->add_option("--sweep-windows", o.sweep_windows, "Window sizes (default 220 240 260)");
  sweep_cmd->add_option("--sweep-horizons", o.sweep_horizons, "Horizons (default 5 10 15)");
  sweep_cmd->add_option("--sweep-lags", o.sweep_lags, "Lag orders (default 1 2 3 4 5)");
  sweep_cmd->add_option("--grid", o.grid, "product or robustness (default robustness)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o_out, o_err;
    const int code = app.exit(e, o_out, o_err);
    out << o_out.str();
    err << o_err.str();
    return code == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = resolve(o);
    if (describe_cmd->parsed()) return cmd_describe(cfg, out, err);
    if (static_cmd->parsed()) return cmd_static(cfg, out);
    if (roll_cmd->parsed()) return cmd_roll(cfg, out);
    return cmd_sweep(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace spillnet::cli
