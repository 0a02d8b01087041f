// Independent test oracles: brute-force and enumeration routines kept apart
// from the implementation paths they check.
#pragma once

#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "gridmon/graph.hpp"

namespace oracles {

using gridmon::Edge;

/// Floyd-Warshall all-pairs shortest paths over an undirected edge list.
inline std::vector<std::vector<std::uint32_t>> floyd_warshall(
    std::uint32_t n, const std::vector<Edge>& edges) {
  const std::uint32_t inf = std::numeric_limits<std::uint32_t>::max() / 4;
  std::vector<std::vector<std::uint32_t>> d(n, std::vector<std::uint32_t>(n, inf));
  for (std::uint32_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const Edge& e : edges) {
    d[e.first][e.second] = 1;
    d[e.second][e.first] = 1;
  }
  for (std::uint32_t k = 0; k < n; ++k)
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j)
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

inline bool is_connected(std::uint32_t n, const std::vector<Edge>& edges) {
  if (n == 0) return false;
  std::vector<std::uint32_t> parent(n);
  for (std::uint32_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&parent](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : edges) parent[find(e.first)] = find(e.second);
  for (std::uint32_t i = 1; i < n; ++i)
    if (find(i) != find(0)) return false;
  return true;
}

/// Every labeled connected graph on n nodes, as canonical edge lists.
inline std::vector<std::vector<Edge>> all_connected_graphs(std::uint32_t n) {
  std::vector<Edge> all_edges;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) all_edges.push_back({i, j});
  std::vector<std::vector<Edge>> out;
  const std::uint64_t masks = std::uint64_t{1} << all_edges.size();
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    std::vector<Edge> edges;
    for (std::size_t b = 0; b < all_edges.size(); ++b)
      if (mask & (std::uint64_t{1} << b)) edges.push_back(all_edges[b]);
    if (is_connected(n, edges)) out.push_back(std::move(edges));
  }
  return out;
}

/// Strict CSV reader: every row must have exactly the header's column count.
/// Fields never contain commas or quotes in this project's outputs.
struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline Csv read_csv_strict(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  Csv csv;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    if (first) {
      csv.header = fields;
      first = false;
    } else {
      if (fields.size() != csv.header.size())
        throw std::runtime_error(path + ": ragged row: " + line);
      csv.rows.push_back(fields);
    }
  }
  if (first) throw std::runtime_error(path + ": empty file");
  return csv;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace oracles
