#include "spillnet/connect.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "spillnet/error.hpp"

namespace spillnet {

namespace {

std::vector<std::string> ids_or_default(const std::vector<std::string>& ids, Eigen::Index n) {
  if (!ids.empty()) return ids;
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(fmt::format("series{}", i + 1));
  return out;
}

}  // namespace

ConnectednessTable connectedness(const FevdMatrix& fevd) {
  const Matrix& d = fevd.normalized;
  const Eigen::Index n = d.rows();
  ConnectednessTable t;
  t.fevd = fevd;
  t.fevd.series_ids = ids_or_default(fevd.series_ids, n);
  t.self_pct = 100.0 * d.diagonal();
  t.from_pct = 100.0 * d.rowwise().sum() - t.self_pct;
  t.to_pct = 100.0 * d.colwise().sum().transpose() - t.self_pct;
  t.net_pct = t.to_pct - t.from_pct;
  t.total_pct = n > 0 ? t.from_pct.sum() / static_cast<double>(n) : 0.0;
  return t;
}

NetPairwiseMatrix net_pairwise(const FevdMatrix& fevd) {
  const Matrix& d = fevd.normalized;
  const Eigen::Index n = d.rows();
  NetPairwiseMatrix out{Matrix::Zero(n, n), ids_or_default(fevd.series_ids, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double diff = d(i, j) - d(j, i);
      if (i != j && diff > 0.0) out.values(i, j) = 100.0 * diff;
    }
  }
  return out;
}

Measure parse_measure(const std::string& text) {
  if (text == "from") return Measure::From;
  if (text == "to") return Measure::To;
  if (text == "net") return Measure::Net;
  throw ConfigError(fmt::format("unknown measure '{}' (expected from, to or net)", text));
}

std::vector<std::pair<std::string, double>> rank(const ConnectednessTable& table, Measure measure) {
  const Vector& v = measure == Measure::From ? table.from_pct
                    : measure == Measure::To ? table.to_pct
                                             : table.net_pct;
  const auto& ids = table.series_ids();
  std::vector<std::pair<std::string, double>> out;
  out.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) out.emplace_back(ids[i], v(static_cast<Eigen::Index>(i)));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

}  // namespace spillnet
