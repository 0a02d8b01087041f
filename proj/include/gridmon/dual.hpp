#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gridmon/errors.hpp"
#include "gridmon/gossip.hpp"

namespace gridmon {

/// Stochastic dual gradients at a rollout boundary. Components lie in
/// [-c_m, 1-c_m]. g_prev re-reads the previous rollout with delay >= T0, so
/// its estimates have reached consensus under static links; g_curr reads the
/// freshest available estimates, which may still underestimate. g_prev is
/// empty at the first boundary (there is no previous rollout).
struct DualGradient {
  std::vector<double> g_prev;
  std::vector<double> g_curr;
  bool has_prev() const { return !g_prev.empty(); }
};

/// Average constraint violation of one rollout, from a per-zone occupancy
/// count. Written exactly this way on both the distributed and centralized
/// paths so equal counts give bit-identical multipliers.
inline double rollout_gradient(double count, double t_zero, double threshold) {
  return count / t_zero - threshold;
}

/// Projected dual step [lambda - eta * g]+.
inline double dual_step(double lambda, double g, double eta) {
  return std::max(0.0, lambda - eta * g);
}

/// An agent's two multiplier copies. lambda_prev is the consensus-delayed
/// copy: it is recomputed one rollout late from estimates old enough to be
/// exact, so under static links it is identical across agents. lambda_curr
/// is the fresh copy driving the policy, possibly slightly above the
/// consensus value because gossip underestimates.
class MultiplierState {
 public:
  MultiplierState(std::uint32_t agent_id, std::uint32_t n_zones, double eta,
                  std::uint64_t t_zero, std::uint64_t retention)
      : agent_id_(agent_id),
        eta_(eta),
        t_zero_(t_zero),
        lambda_prev_(n_zones, 0.0),
        lambda_curr_(n_zones, 0.0) {
    if (!(eta > 0.0)) throw ConfigError("dual: eta must be > 0");
    if (t_zero == 0) throw ConfigError("dual: t_zero must be >= 1");
    if (t_zero < retention)
      throw ConfigError("dual: t_zero (" + std::to_string(t_zero) +
                        ") must be >= retention horizon d (" +
                        std::to_string(retention) + ")");
  }

  std::uint32_t agent_id() const { return agent_id_; }
  double eta() const { return eta_; }
  std::uint64_t t_zero() const { return t_zero_; }
  std::uint64_t rollout_index() const { return rollout_index_; }
  const std::vector<double>& lambda_prev() const { return lambda_prev_; }
  const std::vector<double>& lambda_curr() const { return lambda_curr_; }

 private:
  friend void apply_update(MultiplierState& state, const DualGradient& grads);

  std::uint32_t agent_id_;
  double eta_;
  std::uint64_t t_zero_;
  std::uint64_t rollout_index_ = 0;
  std::vector<double> lambda_prev_;
  std::vector<double> lambda_curr_;
};

/// Both gradients at the boundary clock t = (k+1)*T0: g_curr over rollout k
/// (ticks [k*T0, (k+1)*T0)), g_prev over rollout k-1, each scaled by 1/T0 and
/// offset by the thresholds. Exactly one factor of eta is applied later, in
/// apply_update.
inline DualGradient compute_gradients(const EstimateTable& table,
                                      const std::vector<double>& thresholds,
                                      std::uint64_t k, std::uint64_t t_zero) {
  if (thresholds.size() != table.n_zones())
    throw ContractError("compute_gradients: threshold count mismatch");
  if (table.t_zero() != t_zero)
    throw ContractError("compute_gradients: table was built with a different T0");
  if (!table.started() || table.clock() != (k + 1) * t_zero)
    throw ContractError("compute_gradients: clock is not at the end of rollout " +
                        std::to_string(k) + " (expected t=" +
                        std::to_string((k + 1) * t_zero) + ")");
  DualGradient g;
  const std::vector<std::uint64_t> curr = table.rollout_sum(k);
  g.g_curr.resize(thresholds.size());
  for (std::size_t m = 0; m < thresholds.size(); ++m)
    g.g_curr[m] = rollout_gradient(static_cast<double>(curr[m]),
                                   static_cast<double>(t_zero), thresholds[m]);
  if (k >= 1) {
    const std::vector<std::uint64_t> prev = table.rollout_sum(k - 1);
    g.g_prev.resize(thresholds.size());
    for (std::size_t m = 0; m < thresholds.size(); ++m)
      g.g_prev[m] = rollout_gradient(static_cast<double>(prev[m]),
                                     static_cast<double>(t_zero), thresholds[m]);
  }
  return g;
}

/// Two-copy update at a rollout boundary:
///   lambda_prev <- [lambda_prev - eta * g_prev]+   (consensus-exact redo)
///   lambda_curr <- [lambda_prev - eta * g_curr]+   (fresh copy for the next rollout)
inline void apply_update(MultiplierState& state, const DualGradient& grads) {
  if (grads.g_curr.size() != state.lambda_curr_.size() ||
      (grads.has_prev() && grads.g_prev.size() != state.lambda_prev_.size()))
    throw ContractError("apply_update: gradient size mismatch");
  if (grads.has_prev())
    for (std::size_t m = 0; m < grads.g_prev.size(); ++m)
      state.lambda_prev_[m] = dual_step(state.lambda_prev_[m], grads.g_prev[m], state.eta_);
  for (std::size_t m = 0; m < grads.g_curr.size(); ++m)
    state.lambda_curr_[m] = dual_step(state.lambda_prev_[m], grads.g_curr[m], state.eta_);
  ++state.rollout_index_;
}

/// Exact stochastic dual descent step from ground-truth binary rewards over
/// one rollout; the oracle the distributed updates are tested against.
inline std::vector<double> centralized_update(
    const std::vector<double>& lambda,
    const std::vector<std::vector<std::uint8_t>>& rewards,
    const std::vector<double>& thresholds, double eta, std::uint64_t t_zero) {
  if (rewards.size() != t_zero)
    throw ContractError("centralized_update: expected " + std::to_string(t_zero) +
                        " reward rows");
  std::vector<double> out(lambda.size());
  for (std::size_t m = 0; m < lambda.size(); ++m) {
    std::uint64_t count = 0;
    for (const auto& r : rewards) count += r[m];
    const double g = rollout_gradient(static_cast<double>(count),
                                      static_cast<double>(t_zero), thresholds[m]);
    out[m] = dual_step(lambda[m], g, eta);
  }
  return out;
}

/// Per-zone maximum deviation of the agents' fresh copies above the
/// centralized value at the same boundary. Gossip underestimation makes the
/// deviation nonnegative under static links, and it is bounded by
/// eta * d(G) / T0.
inline std::vector<double> mismatch(const std::vector<double>& lambda_central,
                                    const std::vector<std::vector<double>>& lambda_agents) {
  std::vector<double> out(lambda_central.size(), 0.0);
  for (std::size_t m = 0; m < lambda_central.size(); ++m) {
    double worst = lambda_agents.empty() ? 0.0
                                         : lambda_agents[0][m] - lambda_central[m];
    for (const auto& agent : lambda_agents)
      worst = std::max(worst, agent[m] - lambda_central[m]);
    out[m] = worst;
  }
  return out;
}

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double norm2_sq(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace gridmon
