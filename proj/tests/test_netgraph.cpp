#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "spillnet/error.hpp"
#include "spillnet/netgraph.hpp"

using namespace spillnet;
using spillnet::testing::load_published_table;

namespace {

struct Built {
  ConnectednessTable table;
  SpilloverNetwork net;
};

Built from_shares(const Matrix& d, std::vector<std::string> ids) {
  const auto fevd = fevd_from_normalized(d, std::move(ids));
  Built b{connectedness(fevd), {}};
  b.net = build_network(net_pairwise(fevd), b.table);
  return b;
}

std::vector<oracle::Edge> oracle_edges(const SpilloverNetwork& net) {
  std::vector<oracle::Edge> out;
  for (const auto& e : net.edges) out.push_back({e.source, e.target, e.weight});
  return out;
}

SpilloverNetwork graph(std::size_t n, const std::vector<NetworkEdge>& edges) {
  SpilloverNetwork net;
  for (std::size_t i = 0; i < n; ++i) net.nodes.push_back({"n" + std::to_string(i), 0.0, NodeRole::Receiver});
  net.edges = edges;
  return net;
}

std::vector<std::string> by_score(const SpilloverNetwork& net, const PageRankScores& pr) {
  std::vector<std::size_t> order(net.nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pr.scores[a] > pr.scores[b]; });
  std::vector<std::string> ids;
  for (auto i : order) ids.push_back(net.nodes[i].id);
  return ids;
}

}  // namespace

TEST_CASE("identity shares give an empty network") {
  const auto b = from_shares(Matrix::Identity(3, 3), {"a", "b", "c"});
  CHECK(b.net.nodes.size() == 3);
  CHECK(b.net.edges.empty());
  const auto pr = pagerank(b.net);
  for (double s : pr.scores) CHECK(s == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("two-node network") {
  const auto b = from_shares((Matrix(2, 2) << 0.6, 0.4, 0.3, 0.7).finished(), {"series1", "series2"});
  REQUIRE(b.net.edges.size() == 1);
  const auto& e = b.net.edges[0];
  CHECK(b.net.nodes[e.source].id == "series2");
  CHECK(b.net.nodes[e.target].id == "series1");
  CHECK(e.weight == doctest::Approx(10.0));
  CHECK(b.net.nodes[1].role == NodeRole::Transmitter);
  CHECK(b.net.nodes[0].role == NodeRole::Receiver);
  CHECK(b.net.nodes[1].net_pct == doctest::Approx(10.0));

  const auto pr = pagerank(b.net);
  const auto expected = oracle::pagerank_linear(2, oracle_edges(b.net), 0.85);
  for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(pr.scores[i] - expected[i]) < 1e-10);
  CHECK(pr.scores[0] > pr.scores[1]);
}

TEST_CASE("edge count equals the number of positive pairwise entries") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix d(5, 5);
    for (Eigen::Index i = 0; i < 5; ++i) {
      for (Eigen::Index j = 0; j < 5; ++j) d(i, j) = u(rng);
      d.row(i) /= d.row(i).sum();
    }
    const auto fevd = fevd_from_normalized(d, {"a", "b", "c", "d", "e"});
    const auto npm = net_pairwise(fevd);
    const auto net = build_network(npm, connectedness(fevd));
    CHECK(net.edges.size() == static_cast<std::size_t>((npm.values.array() > 0.0).count()));
    for (const auto& e : net.edges) CHECK(e.weight > 0.0);
    // Net pairwise flows are antisymmetric in direction, so at most one edge per pair.
    CHECK(net.edges.size() <= 10);
  }
}

TEST_CASE("max-out subgraph") {
  const auto net = graph(4, {{0, 1, 2.0}, {0, 2, 5.0}, {1, 2, 1.0}, {1, 3, 1.0}, {3, 0, 0.5}});
  const auto m = max_out_subgraph(net);
  REQUIRE(m.edges.size() == 3);
  CHECK(m.nodes.size() == 4);
  CHECK(m.edges[0].source == 0);
  CHECK(m.edges[0].target == 2);
  // Tie between n2 and n3 goes to the smaller id.
  CHECK(m.edges[1].source == 1);
  CHECK(m.edges[1].target == 2);
  CHECK(m.edges[2].source == 3);
  CHECK(max_out_subgraph(graph(3, {})).edges.empty());
}

TEST_CASE("PageRank on a complete graph is uniform") {
  std::vector<NetworkEdge> edges;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      if (i != j) edges.push_back({i, j, 3.0});
  const auto pr = pagerank(graph(6, edges));
  for (double s : pr.scores) CHECK(std::abs(s - 1.0 / 6) < 1e-10);
}

TEST_CASE("PageRank matches the linear solve") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<NetworkEdge> edges;
    for (std::size_t i = 0; i < 7; ++i)
      for (std::size_t j = 0; j < 7; ++j)
        if (i != j && u(rng) < 0.3) edges.push_back({i, j, 10.0 * u(rng)});
    const auto net = graph(7, edges);
    for (double damping : {0.5, 0.85, 0.95}) {
      const auto pr = pagerank(net, damping);
      const auto expected = oracle::pagerank_linear(7, oracle_edges(net), damping);
      double sum = 0.0;
      for (std::size_t i = 0; i < 7; ++i) {
        CHECK(std::abs(pr.scores[i] - expected[i]) < 1e-10);
        CHECK(pr.scores[i] > 0.0);
        sum += pr.scores[i];
      }
      CHECK(std::abs(sum - 1.0) < 1e-12);
      CHECK(pr.damping == damping);
      CHECK(pr.iterations_used >= 1);
    }
  }
}

TEST_CASE("PageRank star graph ranks the hub first") {
  std::vector<NetworkEdge> edges;
  for (std::size_t i = 1; i < 8; ++i) edges.push_back({i, 0, 1.0 + static_cast<double>(i)});
  const auto pr = pagerank(graph(8, edges));
  for (std::size_t i = 1; i < 8; ++i) CHECK(pr.scores[0] > pr.scores[i]);
}

TEST_CASE("PageRank is invariant to scaling the weights") {
  const auto net = graph(4, {{0, 1, 2.0}, {1, 2, 3.0}, {2, 0, 1.0}, {3, 0, 4.0}, {0, 3, 0.5}});
  auto scaled = net;
  for (auto& e : scaled.edges) e.weight *= 37.5;
  const auto a = pagerank(net), b = pagerank(scaled);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(a.scores[i] - b.scores[i]) < 1e-12);
}

TEST_CASE("PageRank errors") {
  const auto net = graph(3, {{0, 1, 1.0}, {1, 2, 2.0}});
  CHECK_THROWS_AS(pagerank(net, 0.0), ConfigError);
  CHECK_THROWS_AS(pagerank(net, 1.0), ConfigError);
  CHECK_THROWS_AS(pagerank(net, 0.85, 0.0), ConfigError);
  try {
    pagerank(net, 0.85, 1e-12, 1);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual() > 0.0);
  }
  CHECK(pagerank(graph(0, {})).scores.empty());
}

TEST_CASE("published table network") {
  const auto pub = load_published_table();
  const auto b = from_shares(pub.pct / 100.0, pub.ids);
  const auto pr = pagerank(b.net);
  const auto expected = oracle::pagerank_linear(b.net.nodes.size(), oracle_edges(b.net), 0.85);
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(std::abs(pr.scores[i] - expected[i]) < 1e-10);

  const auto order = by_score(b.net, pr);
  // Bank and non-bank finance are the most central nodes.
  CHECK(order[0] == "NBF");
  CHECK(order[1] == "Bank");
  CHECK(order[2] == "ND");
  CHECK(order[3] == "Steel");
  CHECK(order[4] == "Media");
  CHECK(pr.scores[25] == doctest::Approx(0.2752).epsilon(1e-3));
  CHECK(pr.scores[24] == doctest::Approx(0.1526).epsilon(1e-3));

  // NBF only receives, so it has no outgoing edges.
  for (const auto& e : b.net.edges) CHECK(b.net.nodes[e.source].id != "NBF");
  const auto m = max_out_subgraph(b.net);
  CHECK(m.edges.size() == b.net.nodes.size() - 1);
}

TEST_CASE("DOT rendering") {
  const auto b = from_shares((Matrix(2, 2) << 0.6, 0.4, 0.3, 0.7).finished(), {"series1", "series2"});
  const auto pr = pagerank(b.net);
  const auto dot = to_dot(b.net, &pr);
  CHECK(dot.rfind("digraph spillover {", 0) == 0);
  CHECK(dot.find("\"series2\" -> \"series1\"") != std::string::npos);
  CHECK(dot.find("\"series2\" [fillcolor=red") != std::string::npos);
  CHECK(dot.find("\"series1\" [fillcolor=blue") != std::string::npos);
  CHECK(dot.find("pagerank=") != std::string::npos);
  CHECK(to_dot(b.net).find("pagerank=") == std::string::npos);
  CHECK(dot.back() == '\n');
}

TEST_CASE("mismatched inputs are rejected") {
  const auto f1 = fevd_from_normalized(Matrix::Identity(2, 2), {"a", "b"});
  const auto f2 = fevd_from_normalized(Matrix::Identity(2, 2), {"a", "c"});
  CHECK_THROWS_AS(build_network(net_pairwise(f1), connectedness(f2)), SchemaError);
}
