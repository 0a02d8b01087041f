#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "gridmon/errors.hpp"
#include "gridmon/grid.hpp"

namespace gridmon {

/// One agent's sliding window of binary estimates of past global rewards.
///
/// A slot for tick tau is created from the agent's local occupancy at tau and
/// then raised toward the global value by max-consensus exchanges while
/// tau > clock - d. Once a slot ages past the retention horizon d (any
/// overestimate of the network diameter) it has reached consensus under
/// static links, so its values are folded into per-rollout running sums and
/// the slot is dropped. Memory stays O(d * M) per agent regardless of the run
/// length.
class EstimateTable {
 public:
  EstimateTable(std::uint32_t agent_id, std::uint32_t n_zones, std::uint64_t retention,
                std::uint64_t t_zero)
      : agent_id_(agent_id), n_zones_(n_zones), retention_(retention), t_zero_(t_zero) {
    if (n_zones == 0) throw ContractError("EstimateTable: n_zones must be >= 1");
    if (t_zero == 0) throw ContractError("EstimateTable: t_zero must be >= 1");
  }

  std::uint32_t agent_id() const { return agent_id_; }
  std::uint32_t n_zones() const { return n_zones_; }
  std::uint64_t retention() const { return retention_; }
  std::uint64_t t_zero() const { return t_zero_; }

  bool started() const { return started_; }
  std::uint64_t clock() const {
    if (!started_) throw ContractError("EstimateTable: no slot initialized yet");
    return clock_;
  }

  std::size_t window_size() const { return window_.size(); }
  std::uint64_t window_lo() const { return clock() - (window_.size() - 1); }

  bool has_slot(std::uint64_t tau) const {
    return started_ && tau <= clock_ && tau >= window_lo();
  }

  std::uint8_t estimate(std::uint64_t tau, std::uint32_t m) const {
    if (!has_slot(tau)) throw ContractError("EstimateTable: tau outside active window");
    return window_[tau - window_lo()][m];
  }

  const std::vector<std::uint8_t>& slot(std::uint64_t tau) const {
    if (!has_slot(tau)) throw ContractError("EstimateTable: tau outside active window");
    return window_[tau - window_lo()];
  }

  /// Opens the slot for tick t with the agent's local occupancy indicators.
  /// Must be called exactly once per tick, before the exchange round. If the
  /// window would exceed d+1 slots, the oldest slot is finalized first.
  void init_slot(std::uint64_t t, std::vector<std::uint8_t> local_bits) {
    if (local_bits.size() != n_zones_)
      throw ContractError("init_slot: expected " + std::to_string(n_zones_) + " bits");
    if (!started_) {
      if (t != 0) throw ContractError("init_slot: first slot must be t=0");
    } else if (t == clock_) {
      throw ContractError("init_slot: slot for t=" + std::to_string(t) +
                          " already initialized");
    } else if (t != clock_ + 1) {
      throw ContractError("init_slot: non-consecutive tick " + std::to_string(t));
    }
    window_.push_back(std::move(local_bits));
    clock_ = t;
    started_ = true;
    if (window_.size() > retention_ + 1) finalize_oldest();
  }

  void init_slot(std::uint64_t t, GridPos position, const std::vector<ZoneSpec>& zones) {
    init_slot(t, local_occupancy(position, zones));
  }

  /// Per-zone count of finalized estimates for rollout k (ticks
  /// [k*T0, (k+1)*T0)). Zeros if nothing finalized for that rollout.
  std::vector<std::uint64_t> finalized_sum(std::uint64_t k) const {
    auto it = finalized_.find(k);
    if (it != finalized_.end()) return it->second;
    return std::vector<std::uint64_t>(n_zones_, 0);
  }

  /// Per-zone count of estimates recorded so far for rollout k: finalized
  /// sums plus any of the rollout's slots still in the active window.
  std::vector<std::uint64_t> rollout_sum(std::uint64_t k) const {
    std::vector<std::uint64_t> out = finalized_sum(k);
    if (!started_) return out;
    const std::uint64_t lo = k * t_zero_;
    const std::uint64_t hi = (k + 1) * t_zero_ - 1;
    for (std::uint64_t tau = std::max(lo, window_lo());
         tau <= std::min(hi, clock_); ++tau)
      for (std::uint32_t m = 0; m < n_zones_; ++m) out[m] += window_[tau - window_lo()][m];
    return out;
  }

  /// Drops finalized buckets for rollouts before k (no longer needed once the
  /// gradients that read them have been computed).
  void drop_finalized_before(std::uint64_t k) {
    finalized_.erase(finalized_.begin(), finalized_.lower_bound(k));
  }

 private:
  friend void gossip_round(std::vector<EstimateTable>& tables,
                           const std::vector<std::vector<std::uint32_t>>& neighbors);

  void finalize_oldest() {
    const std::uint64_t tau = clock_ - (window_.size() - 1);
    auto& bucket = finalized_[tau / t_zero_];
    if (bucket.empty()) bucket.assign(n_zones_, 0);
    for (std::uint32_t m = 0; m < n_zones_; ++m) bucket[m] += window_.front()[m];
    window_.pop_front();
  }

  std::uint32_t agent_id_;
  std::uint32_t n_zones_;
  std::uint64_t retention_;
  std::uint64_t t_zero_;
  bool started_ = false;
  std::uint64_t clock_ = 0;
  std::deque<std::vector<std::uint8_t>> window_;  // oldest slot first
  std::map<std::uint64_t, std::vector<std::uint64_t>> finalized_;
};

/// One synchronous max-consensus round at the tables' common clock t.
///
/// For every agent n and every slot tau in [t-d, t-1], the new estimate is
/// the max of the agent's own and its usable neighbors' previous-tick values.
/// The slot for tau = t was initialized this tick and is not exchanged, and
/// slots older than t-d have already been finalized. The round snapshots all
/// windows before writing, so results are independent of evaluation order.
inline void gossip_round(std::vector<EstimateTable>& tables,
                         const std::vector<std::vector<std::uint32_t>>& neighbors) {
  if (tables.empty()) return;
  if (neighbors.size() != tables.size())
    throw ContractError("gossip_round: neighbor lists do not match table count");
  const std::uint64_t t = tables[0].clock();
  const std::size_t window = tables[0].window_size();
  for (const EstimateTable& tab : tables) {
    if (tab.clock() != t || tab.window_size() != window ||
        tab.n_zones() != tables[0].n_zones())
      throw ContractError("gossip_round: tables out of sync");
  }
  if (window < 2) return;  // only the freshly initialized slot exists

  // Previous-tick snapshot of every slot with tau < t.
  std::vector<std::vector<std::vector<std::uint8_t>>> snap(tables.size());
  for (std::size_t n = 0; n < tables.size(); ++n)
    snap[n].assign(tables[n].window_.begin(), tables[n].window_.end() - 1);

  const std::uint32_t n_zones = tables[0].n_zones();
  for (std::size_t n = 0; n < tables.size(); ++n) {
    for (std::size_t i = 0; i + 1 < window; ++i) {
      std::vector<std::uint8_t>& dst = tables[n].window_[i];
      for (std::uint32_t m = 0; m < n_zones; ++m) {
        std::uint8_t v = snap[n][i][m];
        for (std::uint32_t p : neighbors[n]) v = std::max(v, snap[p][i][m]);
        dst[m] = v;
      }
    }
  }
}

/// Ground-truth global rewards for a logged trajectory (centralized,
/// reference/test path): occupancy() per recorded state.
inline std::vector<std::vector<std::uint8_t>> consensus_oracle(
    const std::vector<WorldState>& history, const std::vector<ZoneSpec>& zones) {
  std::vector<std::vector<std::uint8_t>> out;
  out.reserve(history.size());
  for (const WorldState& s : history) out.push_back(occupancy(s, zones));
  return out;
}

}  // namespace gridmon
