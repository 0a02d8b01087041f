#pragma once

#include <cmath>
#include <cstdint>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gridmon/errors.hpp"
#include "gridmon/grid.hpp"
#include "gridmon/rng.hpp"

namespace gridmon {

using Edge = std::pair<std::uint32_t, std::uint32_t>;  // canonical: first < second

/// Communication network over the agents. Undirected, no self-loops, and
/// connected; connectivity is checked eagerly at construction. Hop distances
/// and the diameter are precomputed (agent counts are small).
class Topology {
 public:
  Topology(std::uint32_t n_agents, const std::vector<Edge>& edges)
      : n_agents_(n_agents), adj_(n_agents) {
    if (n_agents == 0) throw ConfigError("graph: need at least one agent");
    std::set<Edge> canonical;
    for (const Edge& e : edges) {
      if (e.first == e.second)
        throw ConfigError("graph: self-loop at node " + std::to_string(e.first));
      if (e.first >= n_agents || e.second >= n_agents)
        throw ConfigError("graph: edge (" + std::to_string(e.first) + "," +
                          std::to_string(e.second) + ") references a node >= " +
                          std::to_string(n_agents));
      canonical.insert({std::min(e.first, e.second), std::max(e.first, e.second)});
    }
    edges_.assign(canonical.begin(), canonical.end());
    for (const Edge& e : edges_) {
      adj_[e.first].push_back(e.second);
      adj_[e.second].push_back(e.first);
    }
    compute_distances();
  }

  std::uint32_t n_agents() const { return n_agents_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::uint32_t>& neighbors(std::uint32_t n) const { return adj_[n]; }

  /// BFS hop distance between two nodes.
  std::uint32_t distance(std::uint32_t a, std::uint32_t b) const { return dist_[a][b]; }

  /// Maximum hop distance over all node pairs; 0 for a single node.
  std::uint32_t diameter() const { return diameter_; }

  static Topology path(std::uint32_t n) {
    std::vector<Edge> e;
    for (std::uint32_t i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return Topology(n, e);
  }

  static Topology ring(std::uint32_t n) {
    std::vector<Edge> e;
    for (std::uint32_t i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    if (n > 2) e.push_back({0, n - 1});
    return Topology(n, e);
  }

  static Topology star(std::uint32_t n) {
    std::vector<Edge> e;
    for (std::uint32_t i = 1; i < n; ++i) e.push_back({0, i});
    return Topology(n, e);
  }

  static Topology complete(std::uint32_t n) {
    std::vector<Edge> e;
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j) e.push_back({i, j});
    return Topology(n, e);
  }

  /// Link agents whose start positions are within Euclidean `radius`.
  static Topology grid_proximity(const std::vector<GridPos>& positions, double radius) {
    std::vector<Edge> e;
    const auto n = static_cast<std::uint32_t>(positions.size());
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j) {
        const double dx = positions[i].x - positions[j].x;
        const double dy = positions[i].y - positions[j].y;
        if (std::sqrt(dx * dx + dy * dy) <= radius) e.push_back({i, j});
      }
    return Topology(n, e);
  }

 private:
  void compute_distances() {
    const std::uint32_t unreachable = ~std::uint32_t{0};
    dist_.assign(n_agents_, std::vector<std::uint32_t>(n_agents_, unreachable));
    for (std::uint32_t s = 0; s < n_agents_; ++s) {
      dist_[s][s] = 0;
      std::queue<std::uint32_t> q;
      q.push(s);
      while (!q.empty()) {
        const std::uint32_t u = q.front();
        q.pop();
        for (std::uint32_t v : adj_[u])
          if (dist_[s][v] == unreachable) {
            dist_[s][v] = dist_[s][u] + 1;
            q.push(v);
          }
      }
    }
    diameter_ = 0;
    for (std::uint32_t a = 0; a < n_agents_; ++a)
      for (std::uint32_t b = 0; b < n_agents_; ++b) {
        if (dist_[a][b] == unreachable)
          throw ConfigError("graph not connected: no path " + std::to_string(a) +
                            "<->" + std::to_string(b));
        diameter_ = std::max(diameter_, dist_[a][b]);
      }
  }

  std::uint32_t n_agents_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::uint32_t>> adj_;
  std::vector<std::vector<std::uint32_t>> dist_;
  std::uint32_t diameter_ = 0;
};

/// Per-step link availability. Guarantees hold only for Static; Bernoulli is
/// an intermittence experiment.
struct LinkModel {
  enum class Kind { Static, Bernoulli };
  Kind kind = Kind::Static;
  double p_up = 1.0;

  void validate() const {
    if (kind == Kind::Bernoulli && !(p_up > 0.0 && p_up <= 1.0))
      throw ConfigError("links: p_up must be in (0, 1]");
  }
};

/// Edges usable this step. Static keeps everything; Bernoulli keeps each edge
/// independently with probability p_up (drawn in canonical edge order).
inline std::vector<Edge> sample_links(const Topology& topology, const LinkModel& model,
                                      RngStream& rng) {
  if (model.kind == LinkModel::Kind::Static) return topology.edges();
  std::vector<Edge> up;
  up.reserve(topology.edges().size());
  for (const Edge& e : topology.edges())
    if (bernoulli(rng, model.p_up)) up.push_back(e);
  return up;
}

/// Neighbor lists induced by an edge set.
inline std::vector<std::vector<std::uint32_t>> adjacency_of(std::uint32_t n_agents,
                                                            const std::vector<Edge>& edges) {
  std::vector<std::vector<std::uint32_t>> adj(n_agents);
  for (const Edge& e : edges) {
    adj[e.first].push_back(e.second);
    adj[e.second].push_back(e.first);
  }
  return adj;
}

}  // namespace gridmon
