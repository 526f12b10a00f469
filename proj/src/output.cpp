#include "spillnet/output.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include <fmt/format.h>

#include "spillnet/error.hpp"

namespace spillnet::output {

std::string number(double value, int decimals) {
  if (std::isnan(value)) return {};
  if (decimals >= 0) return fmt::format("{:.{}f}", value, decimals);
  return fmt::format("{}", value);
}

namespace {

std::string join_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ',';
    line += cells[i];
  }
  return line + '\n';
}

nlohmann::json json_number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json json_matrix(const Matrix& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json_number(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json json_vector(const Vector& v) {
  auto out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(json_number(v(i)));
  return out;
}

}  // namespace

std::string stats_csv(const std::vector<StatsRow>& rows, int decimals) {
  std::string out =
      "series_id,mean,median,max,min,std,skewness,kurtosis,adf,adf_significant_1pct,status\n";
  for (const auto& r : rows) {
    std::vector<std::string> cells{r.series_id};
    if (r.stats) {
      const auto& s = *r.stats;
      for (double v : {s.mean, s.median, s.max, s.min, s.std, s.skewness, s.kurtosis, s.adf_statistic}) {
        cells.push_back(number(v, decimals));
      }
      cells.push_back(s.adf_significant_1pct ? "true" : "false");
    } else {
      cells.resize(10);
    }
    cells.push_back(r.status);
    out += join_row(cells);
  }
  return out;
}

std::string connectedness_csv(const ConnectednessTable& table, int decimals) {
  const auto& ids = table.series_ids();
  const Matrix& d = table.fevd.normalized;
  std::vector<std::string> header{"industry"};
  header.insert(header.end(), ids.begin(), ids.end());
  header.push_back("From");
  std::string out = join_row(header);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::vector<std::string> row{ids[i]};
    for (std::size_t j = 0; j < ids.size(); ++j) {
      row.push_back(number(100.0 * d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), decimals));
    }
    row.push_back(number(table.from_pct(static_cast<Eigen::Index>(i)), decimals));
    out += join_row(row);
  }
  std::vector<std::string> to{"To"}, net{"Net"};
  for (Eigen::Index i = 0; i < table.to_pct.size(); ++i) {
    to.push_back(number(table.to_pct(i), decimals));
    net.push_back(number(table.net_pct(i), decimals));
  }
  to.push_back(number(table.total_pct, decimals));
  net.emplace_back();
  return out + join_row(to) + join_row(net);
}

std::string fevd_csv(const FevdMatrix& fevd, int decimals) {
  std::vector<std::string> header{"receiver"};
  header.insert(header.end(), fevd.series_ids.begin(), fevd.series_ids.end());
  std::string out = join_row(header);
  for (Eigen::Index i = 0; i < fevd.normalized.rows(); ++i) {
    std::vector<std::string> row{fevd.series_ids[static_cast<std::size_t>(i)]};
    for (Eigen::Index j = 0; j < fevd.normalized.cols(); ++j) row.push_back(number(fevd.normalized(i, j), decimals));
    out += join_row(row);
  }
  return out;
}

std::string edges_csv(const SpilloverNetwork& net, int decimals) {
  std::string out = "source,target,weight_pct\n";
  for (const auto& e : net.edges) {
    out += join_row({net.nodes[e.source].id, net.nodes[e.target].id, number(e.weight, decimals)});
  }
  return out;
}

std::string nodes_csv(const SpilloverNetwork& net, const PageRankScores& scores, int decimals) {
  std::string out = "id,net_pct,role,pagerank\n";
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    const auto& node = net.nodes[i];
    out += join_row({node.id, number(node.net_pct, decimals), role_name(node.role),
                     i < scores.scores.size() ? number(scores.scores[i]) : std::string()});
  }
  return out;
}

std::string rolling_total_csv(const RollingResult& result, int decimals) {
  std::string out = "window_end_date,total_pct,unstable\n";
  for (std::size_t w = 0; w < result.num_windows(); ++w) {
    out += join_row({format_date(result.window_end_dates[w]), number(result.total_pct[w], decimals),
                     result.unstable[w] ? "1" : "0"});
  }
  return out;
}

std::string rolling_wide_csv(const RollingResult& result, Measure measure, int decimals) {
  const char* prefix = measure == Measure::From ? "from" : measure == Measure::To ? "to" : "net";
  const Matrix& m = measure == Measure::From ? result.from_pct
                    : measure == Measure::To ? result.to_pct
                                             : result.net_pct;
  std::vector<std::string> header{"window_end_date"};
  for (const auto& id : result.series_ids) header.push_back(fmt::format("{}_{}", prefix, id));
  std::string out = join_row(header);
  for (std::size_t w = 0; w < result.num_windows(); ++w) {
    std::vector<std::string> row{format_date(result.window_end_dates[w])};
    for (Eigen::Index i = 0; i < m.cols(); ++i) row.push_back(number(m(static_cast<Eigen::Index>(w), i), decimals));
    out += join_row(row);
  }
  return out;
}

namespace {

std::string csv_text(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string rolling_failures_csv(const RollingResult& result) {
  std::string out = "window_index,window_end_date,error\n";
  for (const auto& f : result.failures) {
    out += join_row({std::to_string(f.index), format_date(f.end_date), csv_text(f.message)});
  }
  return out;
}

std::string sweep_totals_csv(const SweepResult& result, int decimals) {
  std::vector<const SweepEntry*> ok;
  for (const auto& e : result.entries)
    if (e.result) ok.push_back(&e);
  std::vector<std::string> header{"window_end_date"};
  std::map<Date, std::vector<std::string>> rows;
  for (std::size_t c = 0; c < ok.size(); ++c) {
    header.push_back("total_" + combination_label(ok[c]->config));
    const auto& r = *ok[c]->result;
    for (std::size_t w = 0; w < r.num_windows(); ++w) {
      auto& row = rows[r.window_end_dates[w]];
      row.resize(ok.size());
      row[c] = number(r.total_pct[w], decimals);
    }
  }
  std::string out = join_row(header);
  for (auto& [date, cells] : rows) {
    cells.resize(ok.size());
    cells.insert(cells.begin(), format_date(date));
    out += join_row(cells);
  }
  return out;
}

std::string sweep_envelope_csv(const SweepEnvelope& env, int decimals) {
  std::string out = "date,min,median,max\n";
  for (std::size_t k = 0; k < env.dates.size(); ++k) {
    out += join_row({format_date(env.dates[k]), number(env.min[k], decimals), number(env.median[k], decimals),
                     number(env.max[k], decimals)});
  }
  return out;
}

std::string sweep_failures_csv(const SweepResult& result) {
  std::string out = "combination,window_end_date,error\n";
  for (const auto& e : result.entries) {
    const auto label = combination_label(e.config);
    if (!e.result) {
      out += join_row({label, "", csv_text(e.error)});
      continue;
    }
    for (const auto& f : e.result->failures) {
      out += join_row({label, format_date(f.end_date), csv_text(f.message)});
    }
  }
  return out;
}

nlohmann::json to_json(const VarModel& model, const std::vector<std::string>& ids) {
  nlohmann::json j;
  j["series_ids"] = ids;
  j["lag_order"] = model.spec.lag_order;
  j["include_intercept"] = model.spec.include_intercept;
  j["effective_sample"] = model.effective_sample;
  j["stable"] = model.stable;
  j["max_companion_modulus"] = model.max_companion_modulus;
  j["intercept"] = json_vector(model.intercept);
  auto coefs = nlohmann::json::array();
  for (const auto& phi : model.coefficients) coefs.push_back(json_matrix(phi));
  j["coefficients"] = coefs;
  j["residual_covariance"] = json_matrix(model.residual_covariance);
  return j;
}

nlohmann::json to_json(const ConnectednessTable& table) {
  nlohmann::json j;
  j["series_ids"] = table.series_ids();
  j["horizon"] = table.fevd.horizon;
  j["normalized"] = json_matrix(table.fevd.normalized);
  j["from_pct"] = json_vector(table.from_pct);
  j["to_pct"] = json_vector(table.to_pct);
  j["net_pct"] = json_vector(table.net_pct);
  j["self_pct"] = json_vector(table.self_pct);
  j["total_pct"] = json_number(table.total_pct);
  return j;
}

nlohmann::json to_json(const RollingResult& result) {
  nlohmann::json j;
  j["series_ids"] = result.series_ids;
  j["window"] = result.config.window;
  j["step"] = result.config.step;
  j["lag_order"] = result.config.var_spec.lag_order;
  j["horizon"] = result.config.horizon;
  auto dates = nlohmann::json::array();
  for (const auto& d : result.window_end_dates) dates.push_back(format_date(d));
  j["window_end_dates"] = dates;
  auto total = nlohmann::json::array();
  for (double v : result.total_pct) total.push_back(json_number(v));
  j["total_pct"] = total;
  j["from_pct"] = json_matrix(result.from_pct);
  j["to_pct"] = json_matrix(result.to_pct);
  j["net_pct"] = json_matrix(result.net_pct);
  j["unstable"] = result.unstable;
  auto failures = nlohmann::json::array();
  for (const auto& f : result.failures) {
    failures.push_back({{"window_index", f.index}, {"window_end_date", format_date(f.end_date)}, {"error", f.message}});
  }
  j["failures"] = failures;
  return j;
}

nlohmann::json to_json(const SweepResult& result) {
  nlohmann::json j;
  auto combos = nlohmann::json::array();
  for (const auto& e : result.entries) {
    nlohmann::json c{{"label", combination_label(e.config)},
                     {"window", e.config.window},
                     {"horizon", e.config.horizon},
                     {"lag_order", e.config.var_spec.lag_order},
                     {"ok", e.result.has_value()}};
    if (e.result) {
      c["windows"] = e.result->num_windows();
      c["failed_windows"] = e.result->failures.size();
    } else {
      c["error"] = e.error;
    }
    combos.push_back(c);
  }
  j["combinations"] = combos;
  j["max_abs_deviation_pct"] = result.max_abs_deviation;
  j["pairwise_max_abs_deviation_pct"] = json_matrix(result.pairwise_max_abs_deviation);
  return j;
}

nlohmann::json to_json(const LoadReport& report) {
  auto dropped = nlohmann::json::array();
  for (const auto& d : report.dropped_dates) dropped.push_back(format_date(d));
  return {{"rows_read", report.rows_read},
          {"dates_seen", report.dates_seen},
          {"dates_dropped", report.dates_dropped},
          {"dropped_dates", dropped},
          {"exclusions_applied", report.exclusions_applied},
          {"negative_volatilities", report.negative_volatilities},
          {"summary", report.summary()}};
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  out << contents;
  if (!out) throw Error(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace spillnet::output
