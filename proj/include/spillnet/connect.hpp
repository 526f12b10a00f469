#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spillnet/fevd.hpp"

namespace spillnet {

/// Connectedness measures in percent.
///
/// from_pct is the off-diagonal row sum and to_pct the off-diagonal column sum
/// of the normalized decomposition. Neither is divided by its row or column
/// total: rows already sum to one, and dividing by column totals would make
/// published To values above 100 impossible.
struct ConnectednessTable {
  FevdMatrix fevd;
  Vector from_pct;
  Vector to_pct;
  Vector net_pct;
  Vector self_pct;
  double total_pct = 0.0;

  const std::vector<std::string>& series_ids() const { return fevd.series_ids; }
};

ConnectednessTable connectedness(const FevdMatrix& fevd);

/// c_ij = 100 * max(d_ij - d_ji, 0). Row i receives net from column j.
struct NetPairwiseMatrix {
  Matrix values;
  std::vector<std::string> series_ids;
};

NetPairwiseMatrix net_pairwise(const FevdMatrix& fevd);

enum class Measure { From, To, Net };

Measure parse_measure(const std::string& text);

/// Descending by value; ties by series id.
std::vector<std::pair<std::string, double>> rank(const ConnectednessTable& table, Measure measure);

}  // namespace spillnet
