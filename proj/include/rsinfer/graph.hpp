#pragma once

// Simple undirected graphs, the two random-graph generators used by the
// simulation designs, and BFS all-pairs shortest-path distances.

#include <iosfwd>
#include <string>
#include <vector>

#include "rsinfer/philox.hpp"

namespace rsinfer {

class Graph {
 public:
  explicit Graph(int n) : adjacency_(n) {}

  int node_count() const { return static_cast<int>(adjacency_.size()); }
  const std::vector<int> &neighbors(int i) const { return adjacency_[i]; }

  bool has_edge(int i, int j) const;
  // inserts both directions, keeps neighbor lists sorted, rejects loops and duplicates
  void add_edge(int i, int j);

  long edge_count() const;
  int degree(int i) const { return static_cast<int>(adjacency_[i].size()); }

 private:
  std::vector<std::vector<int>> adjacency_;
};

// Every unordered pair is an edge independently with probability lambda/(n-1).
Graph erdos_renyi(int n, double lambda, RngStream &rng);

// Preferential attachment seeded with erdos_renyi(20, 1): nodes 20..n-1 are
// added one at a time, each attaching to m_attach distinct existing nodes
// drawn without replacement with probability proportional to current degree.
// Attachment weights are degree + a tiny floor so isolated seed nodes stay
// reachable, and they refresh only after a node has placed all its edges.
Graph barabasi_albert(int n, int m_attach, RngStream &rng);

int max_degree(const Graph &g);

class DistanceMatrix {
 public:
  static constexpr int kInfinite = -1;

  explicit DistanceMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, kInfinite) {}

  int nodes() const { return n_; }
  int operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  void set(int i, int j, int d) { data_[static_cast<std::size_t>(i) * n_ + j] = d; }
  bool reachable(int i, int j) const { return (*this)(i, j) != kInfinite; }

 private:
  int n_;
  std::vector<int> data_;
};

// BFS from every node; unreachable pairs carry DistanceMatrix::kInfinite.
DistanceMatrix all_pairs_distances(const Graph &g);

// Edge-list text format: header line "n=<n>", then one "i j" line per edge
// (0-based, i < j).
void write_graph(std::ostream &os, const Graph &g);
Graph read_graph(std::istream &is);
Graph load_graph_file(const std::string &path);
void save_graph_file(const std::string &path, const Graph &g);

}  // namespace rsinfer
