#include "spillnet/netgraph.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "spillnet/error.hpp"

namespace spillnet {

const char* role_name(NodeRole role) {
  return role == NodeRole::Transmitter ? "transmitter" : "receiver";
}

SpilloverNetwork build_network(const NetPairwiseMatrix& npm, const ConnectednessTable& table) {
  if (npm.series_ids != table.series_ids()) {
    throw SchemaError("net pairwise matrix and connectedness table list different series");
  }
  const auto n = static_cast<Eigen::Index>(npm.series_ids.size());
  if (npm.values.rows() != n || npm.values.cols() != n) {
    throw SchemaError("net pairwise matrix shape does not match its series ids");
  }
  SpilloverNetwork net;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = table.net_pct(i);
    net.nodes.push_back({npm.series_ids[static_cast<std::size_t>(i)], v,
                         v > 0.0 ? NodeRole::Transmitter : NodeRole::Receiver});
  }
  // Row i receives from column j: a positive c_ij is the edge j -> i.
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double w = npm.values(i, j);
      if (i != j && w > 0.0) net.edges.push_back({static_cast<std::size_t>(j), static_cast<std::size_t>(i), w});
    }
  }
  return net;
}

SpilloverNetwork max_out_subgraph(const SpilloverNetwork& net) {
  SpilloverNetwork out;
  out.nodes = net.nodes;
  std::vector<const NetworkEdge*> best(net.nodes.size(), nullptr);
  for (const auto& e : net.edges) {
    const NetworkEdge*& b = best[e.source];
    if (b == nullptr || e.weight > b->weight ||
        (e.weight == b->weight && net.nodes[e.target].id < net.nodes[b->target].id)) {
      b = &e;
    }
  }
  for (const auto* e : best)
    if (e != nullptr) out.edges.push_back(*e);
  return out;
}

PageRankScores pagerank(const SpilloverNetwork& net, double damping, double tol, int max_iter) {
  if (!(damping > 0.0 && damping < 1.0)) throw ConfigError("PageRank damping must lie in (0, 1)");
  if (!(tol > 0.0)) throw ConfigError("PageRank tolerance must be positive");
  const std::size_t n = net.nodes.size();
  PageRankScores out;
  out.damping = damping;
  if (n == 0) return out;

  std::vector<double> out_weight(n, 0.0);
  for (const auto& e : net.edges) out_weight[e.source] += e.weight;

  const double dn = static_cast<double>(n);
  std::vector<double> rank(n, 1.0 / dn), next(n);
  double residual = 0.0;
  for (int iter = 1; iter <= max_iter; ++iter) {
    double dangling = 0.0;
    for (std::size_t u = 0; u < n; ++u)
      if (out_weight[u] <= 0.0) dangling += rank[u];
    const double base = (1.0 - damping) / dn + damping * dangling / dn;
    std::fill(next.begin(), next.end(), base);
    for (const auto& e : net.edges) next[e.target] += damping * rank[e.source] * e.weight / out_weight[e.source];

    residual = 0.0;
    for (std::size_t u = 0; u < n; ++u) residual += std::abs(next[u] - rank[u]);
    rank.swap(next);
    if (residual < tol) {
      double total = 0.0;
      for (double r : rank) total += r;
      for (double& r : rank) r /= total;
      out.scores = std::move(rank);
      out.iterations_used = iter;
      return out;
    }
  }
  throw ConvergenceError(
      fmt::format("PageRank did not converge in {} iterations (last L1 change {:.3e})", max_iter, residual),
      residual);
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_dot(const SpilloverNetwork& net, const PageRankScores* scores) {
  double max_net = 0.0, max_w = 0.0;
  for (const auto& node : net.nodes) max_net = std::max(max_net, std::abs(node.net_pct));
  for (const auto& e : net.edges) max_w = std::max(max_w, e.weight);

  std::string dot = "digraph spillover {\n  node [shape=circle, style=filled, fontcolor=white];\n";
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    const auto& node = net.nodes[i];
    const double size = 0.4 + (max_net > 0.0 ? 1.2 * std::abs(node.net_pct) / max_net : 0.0);
    const char* color = node.role == NodeRole::Transmitter ? "red" : "blue";
    dot += fmt::format("  {} [fillcolor={}, width={:.4f}, net_pct={:.6f}, role={}", quoted(node.id), color, size,
                       node.net_pct, role_name(node.role));
    if (scores != nullptr && i < scores->scores.size()) dot += fmt::format(", pagerank={:.10f}", scores->scores[i]);
    dot += "];\n";
  }
  for (const auto& e : net.edges) {
    const double width = 0.5 + (max_w > 0.0 ? 4.5 * e.weight / max_w : 0.0);
    const char* color = net.nodes[e.source].role == NodeRole::Transmitter ? "red" : "blue";
    dot += fmt::format("  {} -> {} [weight_pct={:.6f}, penwidth={:.4f}, color={}];\n", quoted(net.nodes[e.source].id),
                       quoted(net.nodes[e.target].id), e.weight, width, color);
  }
  dot += "}\n";
  return dot;
}

}  // namespace spillnet
