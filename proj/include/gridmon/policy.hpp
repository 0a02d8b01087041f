#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <vector>

#include "gridmon/errors.hpp"
#include "gridmon/grid.hpp"
#include "gridmon/rng.hpp"

namespace gridmon {

enum class PolicyKind { LagrangianGreedy, Uniform, External };

/// External policies plug in through a single-function contract:
/// (own position, own multiplier copy, agent id) -> action.
using ExternalPolicyFn =
    std::function<Move(GridPos, const std::vector<double>&, std::uint32_t)>;

struct PolicyParams {
  PolicyKind kind = PolicyKind::LagrangianGreedy;
  std::uint32_t n_agents = 1;
  ExternalPolicyFn external;  // only used by External
};

/// Target zone id (1-based) for an agent: zones are ranked by (multiplier
/// descending, id ascending) and agent n takes the zone of rank
/// n mod min(N, M). The rule depends only on the multipliers and the agent's
/// own id, never on other agents' states, so identical multiplier copies
/// yield a collision-free cover of the top zones.
inline std::uint32_t rank_assignment(const std::vector<double>& lambda,
                                     std::uint32_t agent_id, std::uint32_t n_zones,
                                     std::uint32_t n_agents) {
  if (lambda.size() != n_zones || n_zones == 0 || n_agents == 0)
    throw ContractError("rank_assignment: bad dimensions");
  std::vector<std::uint32_t> order(n_zones);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&lambda](std::uint32_t a, std::uint32_t b) {
    return lambda[a] > lambda[b];
  });
  const std::uint32_t rank = agent_id % std::min(n_zones, n_agents);
  return order[rank] + 1;
}

/// Stationary occupancy vector induced by the rank assignment when all
/// agents hold the same multipliers: 1 for the top min(N, M) zones.
inline std::vector<std::uint8_t> greedy_cover(const std::vector<double>& lambda,
                                              std::uint32_t n_agents) {
  const auto n_zones = static_cast<std::uint32_t>(lambda.size());
  std::vector<std::uint8_t> cover(n_zones, 0);
  for (std::uint32_t r = 0; r < std::min(n_zones, n_agents); ++r)
    cover[rank_assignment(lambda, r, n_zones, n_agents) - 1] = 1;
  return cover;
}

/// Weighted Lagrangian term sum_m lambda_m (V_m - c_m).
inline double lagrangian_value(const std::vector<double>& lambda,
                               const std::vector<std::uint8_t>& cover,
                               const std::vector<double>& thresholds) {
  double v = 0.0;
  for (std::size_t m = 0; m < lambda.size(); ++m)
    v += lambda[m] * (static_cast<double>(cover[m]) - thresholds[m]);
  return v;
}

namespace detail {

/// Nearest cell of a zone by Manhattan distance; ties go to the smaller
/// (x, y) lexicographically, keeping navigation deterministic.
inline GridPos nearest_cell(const ZoneSpec& zone, GridPos from) {
  GridPos best = zone.cells.front();
  auto dist = [&from](GridPos c) { return std::abs(c.x - from.x) + std::abs(c.y - from.y); };
  for (const GridPos& c : zone.cells) {
    const int dc = dist(c), db = dist(best);
    if (dc < db || (dc == db && (c.x < best.x || (c.x == best.x && c.y < best.y)))) best = c;
  }
  return best;
}

}  // namespace detail

/// State-augmented action selection.
///
/// LagrangianGreedy stations the agent inside its assigned zone (Stay once
/// inside) and otherwise moves one step along a shortest grid path toward the
/// zone's nearest cell, reducing the axis with the larger gap first, x before
/// y on ties. Uniform draws uniformly over the five moves. External delegates
/// to the user-supplied function. LagrangianGreedy and External leave the rng
/// untouched.
inline Move act(GridPos position, const std::vector<double>& lambda,
                std::uint32_t agent_id, const PolicyParams& params,
                const std::vector<ZoneSpec>& zones, const GridSpec& grid,
                RngStream& rng) {
  (void)grid;
  switch (params.kind) {
    case PolicyKind::Uniform:
      return kAllMoves[uniform_below(rng, kAllMoves.size())];
    case PolicyKind::External:
      if (!params.external) throw ConfigError("policy: external function not set");
      return params.external(position, lambda, agent_id);
    case PolicyKind::LagrangianGreedy: {
      const std::uint32_t zone_id = rank_assignment(
          lambda, agent_id, static_cast<std::uint32_t>(zones.size()), params.n_agents);
      const ZoneSpec& zone = zones[zone_id - 1];
      if (zone.contains(position)) return Move::Stay;
      const GridPos target = detail::nearest_cell(zone, position);
      const std::int32_t dx = target.x - position.x;
      const std::int32_t dy = target.y - position.y;
      if (dx != 0 && std::abs(dx) >= std::abs(dy)) return dx > 0 ? Move::Right : Move::Left;
      return dy > 0 ? Move::Up : Move::Down;
    }
  }
  throw ConfigError("policy: unknown kind");
}

}  // namespace gridmon
