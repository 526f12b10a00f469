#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spillnet/connect.hpp"

namespace spillnet {

enum class NodeRole { Transmitter, Receiver };

const char* role_name(NodeRole role);

struct NetworkNode {
  std::string id;
  double net_pct = 0.0;
  NodeRole role = NodeRole::Receiver;
};

/// Directed edge source -> target; weight is the net pairwise share in percent.
struct NetworkEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  double weight = 0.0;
};

struct SpilloverNetwork {
  std::vector<NetworkNode> nodes;
  std::vector<NetworkEdge> edges;
};

/// One edge j -> i per positive c_ij. Throws SchemaError on id mismatch.
SpilloverNetwork build_network(const NetPairwiseMatrix& npm, const ConnectednessTable& table);

/// Keeps only each node's heaviest outgoing edge (ties: smaller target id).
SpilloverNetwork max_out_subgraph(const SpilloverNetwork& net);

struct PageRankScores {
  std::vector<double> scores;
  double damping = 0.85;
  int iterations_used = 0;
};

struct PageRankOptions {
  double damping = 0.85;
  double tol = 1e-12;
  int max_iter = 1000;
};

/// Weighted PageRank by power iteration. Dangling nodes spread uniformly.
PageRankScores pagerank(const SpilloverNetwork& net, double damping = 0.85, double tol = 1e-12,
                        int max_iter = 1000);

/// Graphviz description; red nodes transmit, blue nodes receive.
std::string to_dot(const SpilloverNetwork& net, const PageRankScores* scores = nullptr);

}  // namespace spillnet
