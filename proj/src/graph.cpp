#include "rsinfer/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rsinfer {

bool Graph::has_edge(int i, int j) const {
  const auto &adj = adjacency_[i];
  return std::binary_search(adj.begin(), adj.end(), j);
}

void Graph::add_edge(int i, int j) {
  if (i == j) throw std::invalid_argument("Graph: loops are not allowed");
  if (i < 0 || j < 0 || i >= node_count() || j >= node_count())
    throw std::invalid_argument("Graph: node index out of range");
  if (has_edge(i, j)) return;
  auto &ai = adjacency_[i];
  ai.insert(std::upper_bound(ai.begin(), ai.end(), j), j);
  auto &aj = adjacency_[j];
  aj.insert(std::upper_bound(aj.begin(), aj.end(), i), i);
}

long Graph::edge_count() const {
  long twice = 0;
  for (int i = 0; i < node_count(); ++i) twice += degree(i);
  return twice / 2;
}

Graph erdos_renyi(int n, double lambda, RngStream &rng) {
  if (n < 2) throw std::invalid_argument("erdos_renyi: need n >= 2");
  if (!(lambda >= 0.0 && lambda <= n - 1.0))
    throw std::invalid_argument("erdos_renyi: lambda must be in [0, n-1]");
  const double p = lambda / (n - 1.0);
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform01() <= p) g.add_edge(i, j);
  return g;
}

Graph barabasi_albert(int n, int m_attach, RngStream &rng) {
  constexpr int kSeedSize = 20;
  if (n < kSeedSize + 1) throw std::invalid_argument("barabasi_albert: need n >= 21");
  if (m_attach < 1 || m_attach > kSeedSize)
    throw std::invalid_argument("barabasi_albert: m_attach must be in [1, 20]");

  Graph g(n);
  {
    Graph seed = erdos_renyi(kSeedSize, 1.0, rng);
    for (int i = 0; i < kSeedSize; ++i)
      for (int j : seed.neighbors(i))
        if (j > i) g.add_edge(i, j);
  }

  std::vector<double> weight(n, 0.0);
  std::vector<int> chosen(m_attach);
  for (int v = kSeedSize; v < n; ++v) {
    const int existing = v;
    double total = 0.0;
    for (int i = 0; i < existing; ++i) total += g.degree(i);
    // tiny floor keeps degree-0 seed nodes reachable without disturbing the
    // preferential-attachment proportions
    const double floor_w = (total > 0.0) ? 1e-9 * total / existing : 1.0;
    for (int i = 0; i < existing; ++i) weight[i] = g.degree(i) + floor_w;
    total += floor_w * existing;

    const int picks = std::min(m_attach, existing);
    for (int pick = 0; pick < picks; ++pick) {
      double target = rng.uniform01() * total;
      int sel = -1;
      for (int i = 0; i < existing; ++i) {
        if (weight[i] <= 0.0) continue;
        target -= weight[i];
        if (target <= 0.0) {
          sel = i;
          break;
        }
      }
      if (sel < 0) {  // numeric tail: take the last weighted node
        for (int i = existing - 1; i >= 0; --i)
          if (weight[i] > 0.0) {
            sel = i;
            break;
          }
      }
      chosen[pick] = sel;
      total -= weight[sel];
      weight[sel] = 0.0;  // without replacement
    }
    // edges land only after all of this node's picks are made
    for (int pick = 0; pick < picks; ++pick) g.add_edge(v, chosen[pick]);
  }
  return g;
}

int max_degree(const Graph &g) {
  int best = 0;
  for (int i = 0; i < g.node_count(); ++i) best = std::max(best, g.degree(i));
  return best;
}

DistanceMatrix all_pairs_distances(const Graph &g) {
  const int n = g.node_count();
  DistanceMatrix dist(n);
#pragma omp parallel
  {
    std::vector<int> level(n);
    std::deque<int> queue;
#pragma omp for schedule(dynamic, 16)
    for (int src = 0; src < n; ++src) {
      std::fill(level.begin(), level.end(), DistanceMatrix::kInfinite);
      level[src] = 0;
      queue.clear();
      queue.push_back(src);
      while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int w : g.neighbors(u)) {
          if (level[w] == DistanceMatrix::kInfinite) {
            level[w] = level[u] + 1;
            queue.push_back(w);
          }
        }
      }
      for (int j = 0; j < n; ++j) dist.set(src, j, level[j]);
    }
  }
  return dist;
}

void write_graph(std::ostream &os, const Graph &g) {
  os << "n=" << g.node_count() << "\n";
  for (int i = 0; i < g.node_count(); ++i)
    for (int j : g.neighbors(i))
      if (j > i) os << i << " " << j << "\n";
}

Graph read_graph(std::istream &is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind("n=", 0) != 0)
    throw std::invalid_argument("graph file: expected header line n=<count>");
  const int n = std::stoi(header.substr(2));
  Graph g(n);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    int i, j;
    if (!(ss >> i >> j)) throw std::invalid_argument("graph file: bad edge line: " + line);
    g.add_edge(i, j);
  }
  return g;
}

Graph load_graph_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("graph file: cannot open " + path);
  return read_graph(in);
}

void save_graph_file(const std::string &path, const Graph &g) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("graph file: cannot write " + path);
  write_graph(out, g);
}

}  // namespace rsinfer
