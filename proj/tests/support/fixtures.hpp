#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spillnet/types.hpp"

namespace spillnet::testing {

/// Published full-sample connectedness table (percent, two decimals).
struct PublishedTable {
  std::vector<std::string> ids;
  Matrix pct;  // pairwise block
  Vector from;
  Vector to;
  Vector net;
  double total = 0.0;
};

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline PublishedTable load_published_table() {
  std::ifstream in(std::string(SPILLNET_FIXTURE_DIR) + "/published_table.csv");
  std::string line;
  std::getline(in, line);
  auto header = split_csv(line);
  PublishedTable t;
  t.ids.assign(header.begin() + 1, header.end() - 1);
  const auto n = static_cast<Eigen::Index>(t.ids.size());
  t.pct.resize(n, n);
  t.from.resize(n);
  t.to.resize(n);
  t.net.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::getline(in, line);
    auto cells = split_csv(line);
    for (Eigen::Index j = 0; j < n; ++j) t.pct(i, j) = std::stod(cells[static_cast<std::size_t>(j + 1)]);
    t.from(i) = std::stod(cells[static_cast<std::size_t>(n + 1)]);
  }
  std::getline(in, line);
  auto to = split_csv(line);
  for (Eigen::Index j = 0; j < n; ++j) t.to(j) = std::stod(to[static_cast<std::size_t>(j + 1)]);
  t.total = std::stod(to[static_cast<std::size_t>(n + 1)]);
  std::getline(in, line);
  auto net = split_csv(line);
  for (Eigen::Index j = 0; j < n; ++j) t.net(j) = std::stod(net[static_cast<std::size_t>(j + 1)]);
  return t;
}

}  // namespace spillnet::testing
