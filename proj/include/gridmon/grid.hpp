#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gridmon/errors.hpp"
#include "gridmon/rng.hpp"

namespace gridmon {

enum class Move : std::uint8_t { Stay = 0, Up, Down, Left, Right };

inline constexpr std::array<Move, 5> kAllMoves = {Move::Stay, Move::Up, Move::Down,
                                                  Move::Left, Move::Right};

inline std::string_view to_string(Move m) {
  switch (m) {
    case Move::Stay: return "stay";
    case Move::Up: return "up";
    case Move::Down: return "down";
    case Move::Left: return "left";
    case Move::Right: return "right";
  }
  return "?";
}

/// Grid coordinate. Convention: x grows rightward, y grows upward; Up = +y.
struct GridPos {
  std::int32_t x = 0;
  std::int32_t y = 0;
  friend bool operator==(const GridPos&, const GridPos&) = default;
};

struct GridSpec {
  std::int32_t width = 1;
  std::int32_t height = 1;
  /// Probability that an intended move is replaced by a uniformly random
  /// feasible move.
  double slip_prob = 0.0;

  bool contains(GridPos p) const {
    return p.x >= 0 && p.x < width && p.y >= 0 && p.y < height;
  }

  void validate() const {
    if (width < 1 || height < 1)
      throw ConfigError("grid: width and height must be >= 1");
    if (!(slip_prob >= 0.0 && slip_prob < 1.0))
      throw ConfigError("grid: slip_prob must be in [0, 1)");
  }
};

/// A monitored zone: a non-empty cell set and the required long-run fraction
/// of time it must be occupied. Zones may overlap.
struct ZoneSpec {
  std::uint32_t id = 1;  // 1-based, contiguous across a zone list
  std::vector<GridPos> cells;
  double threshold = 0.0;  // c_m in [0, 1)

  bool contains(GridPos p) const {
    return std::find(cells.begin(), cells.end(), p) != cells.end();
  }

  void validate(const GridSpec& grid) const {
    if (cells.empty())
      throw ConfigError("zones[" + std::to_string(id) + "]: cells must be non-empty");
    for (const GridPos& c : cells)
      if (!grid.contains(c))
        throw ConfigError("zones[" + std::to_string(id) + "]: cell (" +
                          std::to_string(c.x) + "," + std::to_string(c.y) +
                          ") outside grid bounds");
    if (!(threshold >= 0.0 && threshold < 1.0))
      throw ConfigError("zones[" + std::to_string(id) + "]: threshold must be < 1 and >= 0");
  }
};

/// Joint agent positions at a given clock tick.
struct WorldState {
  std::vector<GridPos> positions;
  std::uint64_t time = 0;
};

struct JointAction {
  std::vector<Move> moves;
};

inline GridPos apply_move(GridPos p, Move m) {
  switch (m) {
    case Move::Stay: return p;
    case Move::Up: return {p.x, p.y + 1};
    case Move::Down: return {p.x, p.y - 1};
    case Move::Left: return {p.x - 1, p.y};
    case Move::Right: return {p.x + 1, p.y};
  }
  return p;
}

/// Transition kernel. Each agent moves by its action; a move that would exit
/// the grid resolves to Stay; with probability slip_prob the intended move is
/// replaced by a uniformly random feasible move. Agents are processed in id
/// order, so the draw sequence is reproducible for a given seed.
inline WorldState step(const WorldState& state, const JointAction& action,
                       const GridSpec& grid, RngStream& rng) {
  if (action.moves.size() != state.positions.size())
    throw ContractError("step: action has " + std::to_string(action.moves.size()) +
                        " moves for " + std::to_string(state.positions.size()) +
                        " agents");
  WorldState next;
  next.positions.reserve(state.positions.size());
  for (std::size_t n = 0; n < state.positions.size(); ++n) {
    const GridPos p = state.positions[n];
    Move intended = action.moves[n];
    if (grid.slip_prob > 0.0 && bernoulli(rng, grid.slip_prob)) {
      std::array<Move, 5> feasible{};
      std::size_t count = 0;
      for (Move m : kAllMoves)
        if (grid.contains(apply_move(p, m))) feasible[count++] = m;
      intended = feasible[uniform_below(rng, count)];
    }
    GridPos q = apply_move(p, intended);
    if (!grid.contains(q)) q = p;  // boundary clamp
    next.positions.push_back(q);
  }
  next.time = state.time + 1;
  return next;
}

/// Local occupancy indicator: component m is 1 iff `position` lies in zone m.
inline std::vector<std::uint8_t> local_occupancy(GridPos position,
                                                 const std::vector<ZoneSpec>& zones) {
  std::vector<std::uint8_t> out(zones.size(), 0);
  for (std::size_t m = 0; m < zones.size(); ++m)
    out[m] = zones[m].contains(position) ? 1 : 0;
  return out;
}

/// Global zone-occupancy reward: component m is 1 iff any agent is inside
/// zone m (elementwise max over agents' local indicators).
inline std::vector<std::uint8_t> occupancy(const WorldState& state,
                                           const std::vector<ZoneSpec>& zones) {
  std::vector<std::uint8_t> out(zones.size(), 0);
  for (std::size_t m = 0; m < zones.size(); ++m)
    for (const GridPos& p : state.positions)
      if (zones[m].contains(p)) {
        out[m] = 1;
        break;
      }
  return out;
}

}  // namespace gridmon
