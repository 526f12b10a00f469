#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "spillnet/ingest.hpp"
#include "spillnet/netgraph.hpp"
#include "spillnet/rolling.hpp"
#include "spillnet/var.hpp"

namespace spillnet::cli {

/// Environment variable naming a config file used when --config is absent.
inline constexpr const char* kConfigEnv = "SPILLNET_CONFIG";

struct Subperiod {
  std::string name;
  Date first;
  Date last;
};

/// Parses `NAME=YYYY-MM-DD:YYYY-MM-DD`.
Subperiod parse_subperiod(const std::string& text);

struct RunConfig {
  std::vector<std::filesystem::path> inputs;
  IngestConfig ingest;
  VarSpec var_spec;  // p = 2
  int horizon = 10;
  std::size_t window = 240;
  std::size_t step = 1;
  std::vector<Subperiod> subperiods;
  SweepGrid sweep;
  std::filesystem::path out_dir = ".";
  int threads = 0;
  std::string format = "csv";
  bool dot = false;
  int decimals = -1;
  PageRankOptions pagerank;
};

/// Reads a JSON run config. Missing keys keep their defaults.
RunConfig load_run_config(const std::filesystem::path& path);

/// Entry point behind the `spillnet` executable. Returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace spillnet::cli
