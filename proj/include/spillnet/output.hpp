#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spillnet/connect.hpp"
#include "spillnet/ingest.hpp"
#include "spillnet/netgraph.hpp"
#include "spillnet/rolling.hpp"

namespace spillnet::output {

/// Shortest round-trip representation, or fixed `decimals` when >= 0.
/// NaN becomes an empty cell.
std::string number(double value, int decimals = -1);

struct StatsRow {
  std::string series_id;
  std::optional<DescriptiveStats> stats;
  std::string status = "ok";
};

std::string stats_csv(const std::vector<StatsRow>& rows, int decimals = -1);

/// N pairwise rows with a From column, then To and Net rows; the total sits
/// in the last cell of the To row.
std::string connectedness_csv(const ConnectednessTable& table, int decimals = -1);
std::string fevd_csv(const FevdMatrix& fevd, int decimals = -1);
std::string edges_csv(const SpilloverNetwork& net, int decimals = -1);
std::string nodes_csv(const SpilloverNetwork& net, const PageRankScores& scores, int decimals = -1);

std::string rolling_total_csv(const RollingResult& result, int decimals = -1);
/// Wide file with columns `<prefix>_<id>` for from / to / net.
std::string rolling_wide_csv(const RollingResult& result, Measure measure, int decimals = -1);
std::string rolling_failures_csv(const RollingResult& result);

std::string sweep_totals_csv(const SweepResult& result, int decimals = -1);
std::string sweep_envelope_csv(const SweepEnvelope& envelope, int decimals = -1);
std::string sweep_failures_csv(const SweepResult& result);

nlohmann::json to_json(const VarModel& model, const std::vector<std::string>& ids);
nlohmann::json to_json(const ConnectednessTable& table);
nlohmann::json to_json(const RollingResult& result);
nlohmann::json to_json(const SweepResult& result);
nlohmann::json to_json(const LoadReport& report);

void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace spillnet::output
