#pragma once

#include <bit>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridmon/errors.hpp"
#include "gridmon/executor.hpp"

namespace gridmon {

using nlohmann::json;

namespace detail {

inline void check_keys(const json& obj, const std::string& path,
                       std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError(path + ": unknown key \"" + item.key() + "\"");
  }
}

inline const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path + ": missing required key \"" + key + "\"");
  return *it;
}

inline const json& as_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  return j;
}

inline double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  return j.get<double>();
}

inline std::int64_t get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
  return j.get<std::int64_t>();
}

inline std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path + ": expected a string");
  return j.get<std::string>();
}

inline GridPos get_pos(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2)
    throw ConfigError(path + ": expected a [x, y] pair");
  return GridPos{static_cast<std::int32_t>(get_int(j[0], path + "[0]")),
                 static_cast<std::int32_t>(get_int(j[1], path + "[1]"))};
}

inline int line_of_offset(const std::string& text, std::size_t offset) {
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace detail

/// A validated configuration document plus run options that live outside
/// RunConfig proper.
struct ParsedConfig {
  RunConfig run;
  std::string output_dir;  // empty unless [run].output_dir was given
};

/// Builds a RunConfig from the configuration document. Sections: [grid],
/// [zones], [graph], [dual], [run] are required; [links], [policy],
/// [theorem] are optional. Unknown keys are rejected everywhere.
inline ParsedConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  detail::check_keys(doc, "config", {"grid", "zones", "graph", "links", "dual",
                                     "policy", "run", "theorem"});
  ParsedConfig out;
  RunConfig& cfg = out.run;

  {
    const json& g = detail::as_object(detail::require(doc, "grid", "config"), "grid");
    detail::check_keys(g, "grid", {"width", "height", "slip_prob"});
    cfg.grid.width = static_cast<std::int32_t>(
        detail::get_int(detail::require(g, "width", "grid"), "grid.width"));
    cfg.grid.height = static_cast<std::int32_t>(
        detail::get_int(detail::require(g, "height", "grid"), "grid.height"));
    cfg.grid.slip_prob =
        g.contains("slip_prob") ? detail::get_number(g["slip_prob"], "grid.slip_prob") : 0.0;
    cfg.grid.validate();
  }

  {
    const json& zs = detail::require(doc, "zones", "config");
    if (!zs.is_array() || zs.empty())
      throw ConfigError("zones: expected a non-empty array");
    std::set<std::uint32_t> seen;
    for (std::size_t i = 0; i < zs.size(); ++i) {
      const std::string path = "zones[" + std::to_string(i) + "]";
      const json& z = zs[i];
      if (!z.is_object()) throw ConfigError(path + ": expected an object");
      detail::check_keys(z, path, {"id", "cells", "rect", "c"});
      ZoneSpec zone;
      zone.id = static_cast<std::uint32_t>(
          detail::get_int(detail::require(z, "id", path), path + ".id"));
      zone.threshold = detail::get_number(detail::require(z, "c", path), path + ".c");
      if (!(zone.threshold >= 0.0 && zone.threshold < 1.0))
        throw ConfigError(path + ".c: threshold must be < 1 and >= 0");
      const bool has_cells = z.contains("cells");
      const bool has_rect = z.contains("rect");
      if (has_cells == has_rect)
        throw ConfigError(path + ": give exactly one of \"cells\" or \"rect\"");
      if (has_cells) {
        const json& cells = z["cells"];
        if (!cells.is_array() || cells.empty())
          throw ConfigError(path + ".cells: expected a non-empty array");
        for (std::size_t c = 0; c < cells.size(); ++c)
          zone.cells.push_back(
              detail::get_pos(cells[c], path + ".cells[" + std::to_string(c) + "]"));
      } else {
        const json& rect = z["rect"];
        if (!rect.is_array() || rect.size() != 4)
          throw ConfigError(path + ".rect: expected [x0, y0, x1, y1]");
        const auto x0 = static_cast<std::int32_t>(detail::get_int(rect[0], path + ".rect"));
        const auto y0 = static_cast<std::int32_t>(detail::get_int(rect[1], path + ".rect"));
        const auto x1 = static_cast<std::int32_t>(detail::get_int(rect[2], path + ".rect"));
        const auto y1 = static_cast<std::int32_t>(detail::get_int(rect[3], path + ".rect"));
        if (x1 < x0 || y1 < y0)
          throw ConfigError(path + ".rect: corners must satisfy x0 <= x1, y0 <= y1");
        for (std::int32_t x = x0; x <= x1; ++x)
          for (std::int32_t y = y0; y <= y1; ++y) zone.cells.push_back({x, y});
      }
      if (!seen.insert(zone.id).second)
        throw ConfigError(path + ".id: duplicate zone id");
      cfg.zones.push_back(std::move(zone));
    }
    std::sort(cfg.zones.begin(), cfg.zones.end(),
              [](const ZoneSpec& a, const ZoneSpec& b) { return a.id < b.id; });
    for (std::size_t m = 0; m < cfg.zones.size(); ++m)
      if (cfg.zones[m].id != m + 1)
        throw ConfigError("zones: ids must be exactly 1..M (got id " +
                          std::to_string(cfg.zones[m].id) + ")");
  }

  {
    const json& r = detail::as_object(detail::require(doc, "run", "config"), "run");
    detail::check_keys(r, "run", {"seed", "start_positions", "output_dir"});
    cfg.seed = static_cast<std::uint64_t>(
        detail::get_int(detail::require(r, "seed", "run"), "run.seed"));
    const json& starts = detail::require(r, "start_positions", "run");
    if (!starts.is_array() || starts.empty())
      throw ConfigError("run.start_positions: expected a non-empty array");
    for (std::size_t i = 0; i < starts.size(); ++i)
      cfg.start_positions.push_back(detail::get_pos(
          starts[i], "run.start_positions[" + std::to_string(i) + "]"));
    if (r.contains("output_dir"))
      out.output_dir = detail::get_string(r["output_dir"], "run.output_dir");
  }

  const auto n_agents = static_cast<std::uint32_t>(cfg.start_positions.size());

  {
    const json& g = detail::as_object(detail::require(doc, "graph", "config"), "graph");
    detail::check_keys(g, "graph", {"edges", "generator", "radius"});
    const bool has_edges = g.contains("edges");
    const bool has_gen = g.contains("generator");
    if (has_edges == has_gen)
      throw ConfigError("graph: give exactly one of \"edges\" or \"generator\"");
    if (has_edges) {
      std::vector<Edge> edges;
      const json& es = g["edges"];
      if (!es.is_array()) throw ConfigError("graph.edges: expected an array");
      for (std::size_t i = 0; i < es.size(); ++i) {
        const std::string path = "graph.edges[" + std::to_string(i) + "]";
        const json& e = es[i];
        if (!e.is_array() || e.size() != 2)
          throw ConfigError(path + ": expected a [a, b] pair");
        edges.push_back({static_cast<std::uint32_t>(detail::get_int(e[0], path)),
                         static_cast<std::uint32_t>(detail::get_int(e[1], path))});
      }
      cfg.topology = Topology(n_agents, edges);
    } else {
      const std::string gen = detail::get_string(g["generator"], "graph.generator");
      if (gen == "path") cfg.topology = Topology::path(n_agents);
      else if (gen == "ring") cfg.topology = Topology::ring(n_agents);
      else if (gen == "star") cfg.topology = Topology::star(n_agents);
      else if (gen == "complete") cfg.topology = Topology::complete(n_agents);
      else if (gen == "grid_proximity") {
        if (!g.contains("radius"))
          throw ConfigError("graph: grid_proximity requires \"radius\"");
        cfg.topology = Topology::grid_proximity(
            cfg.start_positions, detail::get_number(g["radius"], "graph.radius"));
      } else {
        throw ConfigError("graph.generator: unknown generator \"" + gen +
                          "\" (path|ring|star|complete|grid_proximity)");
      }
      if (gen != "grid_proximity" && g.contains("radius"))
        throw ConfigError("graph.radius: only valid with the grid_proximity generator");
    }
  }

  {
    LinkModel links;
    if (doc.contains("links")) {
      const json& l = detail::as_object(doc["links"], "links");
      detail::check_keys(l, "links", {"kind", "p_up"});
      const std::string kind = detail::get_string(detail::require(l, "kind", "links"),
                                                  "links.kind");
      if (kind == "static") {
        links.kind = LinkModel::Kind::Static;
        if (l.contains("p_up"))
          throw ConfigError("links.p_up: only valid with kind \"bernoulli\"");
      } else if (kind == "bernoulli") {
        links.kind = LinkModel::Kind::Bernoulli;
        links.p_up = detail::get_number(detail::require(l, "p_up", "links"), "links.p_up");
      } else {
        throw ConfigError("links.kind: expected \"static\" or \"bernoulli\"");
      }
    }
    links.validate();
    cfg.links = links;
  }

  {
    const json& d = detail::as_object(detail::require(doc, "dual", "config"), "dual");
    detail::check_keys(d, "dual", {"eta", "t_zero", "d", "rollouts"});
    cfg.eta = detail::get_number(detail::require(d, "eta", "dual"), "dual.eta");
    cfg.t_zero = static_cast<std::uint64_t>(
        detail::get_int(detail::require(d, "t_zero", "dual"), "dual.t_zero"));
    cfg.rollouts = static_cast<std::uint64_t>(
        detail::get_int(detail::require(d, "rollouts", "dual"), "dual.rollouts"));
    cfg.retention = d.contains("d")
                        ? static_cast<std::uint64_t>(detail::get_int(d["d"], "dual.d"))
                        : cfg.topology.diameter();
  }

  {
    cfg.policy.kind = PolicyKind::LagrangianGreedy;
    if (doc.contains("policy")) {
      const json& p = detail::as_object(doc["policy"], "policy");
      detail::check_keys(p, "policy", {"kind"});
      const std::string kind =
          detail::get_string(detail::require(p, "kind", "policy"), "policy.kind");
      if (kind == "lagrangian_greedy") cfg.policy.kind = PolicyKind::LagrangianGreedy;
      else if (kind == "uniform") cfg.policy.kind = PolicyKind::Uniform;
      else
        throw ConfigError("policy.kind: expected \"lagrangian_greedy\" or \"uniform\"");
    }
    cfg.policy.n_agents = n_agents;
  }

  {
    if (doc.contains("theorem")) {
      const json& t = detail::as_object(doc["theorem"], "theorem");
      detail::check_keys(t, "theorem", {"beta", "epsilon"});
      if (t.contains("beta")) cfg.beta = detail::get_number(t["beta"], "theorem.beta");
      if (t.contains("epsilon"))
        cfg.epsilon_t0 = detail::get_number(t["epsilon"], "theorem.epsilon");
    }
  }

  cfg.validate();
  return out;
}

/// Parses a config file; syntax errors are reported with a line number.
inline ParsedConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ":" + std::to_string(detail::line_of_offset(text, e.byte)) +
                      ": " + e.what());
  }
  try {
    return config_from_json(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

/// Normalized echo of an effective configuration: zones as explicit cells,
/// the graph as an explicit edge list, defaults filled in. Re-validates and
/// reproduces the run when fed back in.
inline json config_to_json(const ParsedConfig& parsed) {
  const RunConfig& cfg = parsed.run;
  json doc;
  doc["grid"] = {{"width", cfg.grid.width},
                 {"height", cfg.grid.height},
                 {"slip_prob", cfg.grid.slip_prob}};
  doc["zones"] = json::array();
  for (const ZoneSpec& z : cfg.zones) {
    json cells = json::array();
    for (const GridPos& c : z.cells) cells.push_back({c.x, c.y});
    doc["zones"].push_back({{"id", z.id}, {"cells", cells}, {"c", z.threshold}});
  }
  json edges = json::array();
  for (const Edge& e : cfg.topology.edges()) edges.push_back({e.first, e.second});
  doc["graph"] = {{"edges", edges}};
  if (cfg.links.kind == LinkModel::Kind::Static)
    doc["links"] = {{"kind", "static"}};
  else
    doc["links"] = {{"kind", "bernoulli"}, {"p_up", cfg.links.p_up}};
  doc["dual"] = {{"eta", cfg.eta},
                 {"t_zero", cfg.t_zero},
                 {"d", cfg.retention},
                 {"rollouts", cfg.rollouts}};
  doc["policy"] = {
      {"kind", cfg.policy.kind == PolicyKind::Uniform ? "uniform" : "lagrangian_greedy"}};
  json starts = json::array();
  for (const GridPos& p : cfg.start_positions) starts.push_back({p.x, p.y});
  doc["run"] = {{"seed", cfg.seed}, {"start_positions", starts}};
  if (!parsed.output_dir.empty()) doc["run"]["output_dir"] = parsed.output_dir;
  doc["theorem"] = {{"beta", cfg.beta}, {"epsilon", cfg.epsilon_t0}};
  return doc;
}

/// Stable child seed for sweep runs: reproducible, decorrelated across
/// values. child = splitmix64(splitmix64(base ^ fnv1a64(key)) ^ bits(value)).
inline std::uint64_t derive_child_seed(std::uint64_t base_seed, std::string_view key,
                                       double value) {
  return splitmix64(splitmix64(base_seed ^ fnv1a64(key)) ^
                    std::bit_cast<std::uint64_t>(value));
}

/// Applies a swept value to a config. Sweepable keys: eta, t_zero, p_up
/// (sweeping p_up switches the link model to Bernoulli).
inline void apply_sweep_value(ParsedConfig& parsed, const std::string& key, double value) {
  RunConfig& cfg = parsed.run;
  if (key == "eta") {
    cfg.eta = value;
  } else if (key == "t_zero") {
    if (value < 1.0 || value != std::floor(value))
      throw ConfigError("sweep: t_zero values must be positive integers");
    cfg.t_zero = static_cast<std::uint64_t>(value);
  } else if (key == "p_up") {
    cfg.links.kind = LinkModel::Kind::Bernoulli;
    cfg.links.p_up = value;
  } else {
    throw ConfigError("sweep: unsupported key \"" + key + "\" (eta|t_zero|p_up)");
  }
  cfg.seed = derive_child_seed(cfg.seed, key, value);
  cfg.validate();
  cfg.links.validate();
}

}  // namespace gridmon
