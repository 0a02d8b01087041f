#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gridmon/dual.hpp"
#include "gridmon/errors.hpp"
#include "gridmon/gossip.hpp"
#include "gridmon/graph.hpp"
#include "gridmon/grid.hpp"
#include "gridmon/log.hpp"
#include "gridmon/policy.hpp"
#include "gridmon/rng.hpp"
#include "gridmon/wire.hpp"

namespace gridmon {

struct RunConfig {
  GridSpec grid;
  std::vector<ZoneSpec> zones;  // sorted by id, ids 1..M
  Topology topology = Topology(1, {});
  LinkModel links;
  PolicyParams policy;
  std::vector<GridPos> start_positions;
  double eta = 0.05;
  std::uint64_t t_zero = 100;
  std::uint64_t retention = 0;  // diameter overestimate d; >= topology.diameter()
  std::uint64_t rollouts = 1;   // K
  std::uint64_t seed = 0;
  double beta = 0.0;        // user estimate of the representation error
  double epsilon_t0 = 0.0;  // user estimate of the finite-horizon error
  bool trace_messages = false;

  std::uint32_t n_agents() const { return topology.n_agents(); }
  std::uint32_t n_zones() const { return static_cast<std::uint32_t>(zones.size()); }

  std::vector<double> thresholds() const {
    std::vector<double> c;
    c.reserve(zones.size());
    for (const ZoneSpec& z : zones) c.push_back(z.threshold);
    return c;
  }

  void validate() const {
    grid.validate();
    links.validate();
    if (zones.empty()) throw ConfigError("zones: need at least one zone");
    for (std::size_t m = 0; m < zones.size(); ++m) {
      if (zones[m].id != m + 1)
        throw ConfigError("zones: ids must be contiguous 1..M, sorted");
      zones[m].validate(grid);
    }
    if (start_positions.size() != topology.n_agents())
      throw ConfigError("run: need one start position per agent (" +
                        std::to_string(topology.n_agents()) + ")");
    for (const GridPos& p : start_positions)
      if (!grid.contains(p))
        throw ConfigError("run: start position (" + std::to_string(p.x) + "," +
                          std::to_string(p.y) + ") outside grid bounds");
    if (retention < topology.diameter())
      throw ConfigError("dual: d (" + std::to_string(retention) +
                        ") must be >= graph diameter (" +
                        std::to_string(topology.diameter()) + ")");
    if (t_zero < std::max<std::uint64_t>(retention, 1))
      throw ConfigError("dual: t_zero must be >= d and >= 1");
    if (rollouts < 1) throw ConfigError("dual: rollouts must be >= 1");
    if (!(eta > 0.0)) throw ConfigError("dual: eta must be > 0");
    if (policy.n_agents != topology.n_agents())
      throw ConfigError("policy: n_agents out of sync with topology");
    if (zones.size() > 0xffff) throw ConfigError("zones: at most 65535 zones");
    if (trace_messages && retention + 1 > 0xffff)
      throw ConfigError("dual: d too large for the message format (window must "
                        "fit a u16)");
  }
};

/// Sufficient feasibility condition: with delta_c = (1 - c_max) / sqrt(M),
/// the premise is beta + (M/T0) d(G) eta + epsilon_T0 + eta/2 < delta_c,
/// alongside the specification checks c_max < 1 and sum_m c_m <= N - 1.
struct TheoremConditions {
  double c_max = 0.0;
  double c_sum = 0.0;
  double delta_c = 0.0;
  double lhs = 0.0;
  bool satisfied = false;  // lhs < delta_c
  bool spec_ok = false;    // c_max < 1 and c_sum <= N - 1
  std::uint32_t n_agents = 0;
  std::uint32_t n_zones = 0;
  std::uint32_t diameter = 0;
};

inline TheoremConditions check_conditions(const RunConfig& cfg) {
  TheoremConditions out;
  out.n_agents = cfg.n_agents();
  out.n_zones = cfg.n_zones();
  out.diameter = cfg.topology.diameter();
  for (const ZoneSpec& z : cfg.zones) {
    out.c_max = std::max(out.c_max, z.threshold);
    out.c_sum += z.threshold;
  }
  const double m = static_cast<double>(out.n_zones);
  out.delta_c = (1.0 - out.c_max) / std::sqrt(m);
  if (!(out.delta_c > 0.0))
    throw ConfigError("zones: c_max must be < 1 (delta_c would not be positive)");
  out.lhs = cfg.beta +
            (m / static_cast<double>(cfg.t_zero)) * static_cast<double>(out.diameter) *
                cfg.eta +
            cfg.epsilon_t0 + cfg.eta / 2.0;
  out.satisfied = out.lhs < out.delta_c;
  out.spec_ok = out.c_max < 1.0 && out.c_sum <= static_cast<double>(out.n_agents) - 1.0;
  return out;
}

/// One simulation tick: positions and ground-truth rewards at time t, and the
/// actions taken at t.
struct StepRecord {
  std::uint64_t t = 0;
  std::vector<GridPos> positions;
  std::vector<Move> actions;
  std::vector<std::uint8_t> rewards;
};

struct AgentBoundaryRecord {
  std::vector<double> lambda_prev;
  std::vector<double> lambda_curr;
  std::vector<double> g_prev;  // empty at the first boundary
  std::vector<double> g_curr;
};

/// State at the boundary closing rollout k (clock t = (k+1) T0).
struct BoundaryRecord {
  std::uint64_t k = 0;
  std::vector<AgentBoundaryRecord> agents;
  std::vector<double> central_lambda;  // centralized reference after this boundary
  std::vector<double> mismatch;        // per-zone max over agents, fresh - central
};

struct Diagnostics {
  std::vector<double> thresholds;
  std::vector<double> terminal_averages;
  std::vector<double> min_trailing_averages;
  std::uint64_t trailing_window = 0;
  std::vector<double> lambda_norm_sq;  // ||lambda^k||^2 for k = 0..K (centralized)
  std::vector<double> drift_samples;   // increments conditioned on ||lambda^k|| >= 1
  double mismatch_max = 0.0;
  double mismatch_bound = 0.0;  // eta * d(G) / T0
  std::uint64_t consensus_violations = 0;
  std::uint64_t deadline_violations = 0;
  double g_norm_sq_max = 0.0;
  bool g_norm_exceeds_one = false;
  TheoremConditions conditions;
};

struct RunResult {
  std::vector<StepRecord> trajectory;      // K * T0 entries
  std::vector<BoundaryRecord> boundaries;  // K entries
  Diagnostics diagnostics;
  std::vector<std::string> message_trace;  // hex lines, when tracing is enabled
  std::vector<std::string> warnings;
};

/// Mean drift of ||lambda^k||^2 over boundaries with ||lambda^k|| >= 1, with
/// a normal-approximation 95% interval. Fewer than 30 qualifying samples is
/// reported as insufficient. The supermartingale property predicts a
/// non-positive mean, so the check passes when mean <= 1.96 * stderr.
struct DriftReport {
  bool sufficient = false;
  std::size_t n_samples = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool consistent_with_supermartingale = true;
};

inline DriftReport drift_report(const Diagnostics& diag) {
  DriftReport r;
  r.n_samples = diag.drift_samples.size();
  if (r.n_samples < 30) return r;
  r.sufficient = true;
  double sum = 0.0;
  for (double d : diag.drift_samples) sum += d;
  r.mean = sum / static_cast<double>(r.n_samples);
  double sq = 0.0;
  for (double d : diag.drift_samples) sq += (d - r.mean) * (d - r.mean);
  r.stddev = std::sqrt(sq / static_cast<double>(r.n_samples - 1));
  const double half = 1.96 * r.stddev / std::sqrt(static_cast<double>(r.n_samples));
  r.ci_lo = r.mean - half;
  r.ci_hi = r.mean + half;
  r.consistent_with_supermartingale = r.mean <= half;
  return r;
}

struct ZoneFeasibility {
  std::uint32_t zone_id = 0;
  double threshold = 0.0;
  double terminal_average = 0.0;
  double min_trailing_average = 0.0;
  double gap = 0.0;  // terminal_average - threshold
  bool pass = false;
};

struct FeasibilityReport {
  double tolerance = 0.0;
  std::vector<ZoneFeasibility> zones;
  bool all_pass = true;
};

/// Per-zone pass/fail on terminal running average >= c_m - tolerance, with
/// the minimum trailing-window average reported as the finite-T liminf proxy.
inline FeasibilityReport feasibility_report(const Diagnostics& diag, double tolerance) {
  FeasibilityReport rep;
  rep.tolerance = tolerance;
  for (std::size_t m = 0; m < diag.thresholds.size(); ++m) {
    ZoneFeasibility z;
    z.zone_id = static_cast<std::uint32_t>(m + 1);
    z.threshold = diag.thresholds[m];
    z.terminal_average = diag.terminal_averages[m];
    z.min_trailing_average = diag.min_trailing_averages[m];
    z.gap = z.terminal_average - z.threshold;
    z.pass = z.terminal_average >= z.threshold - tolerance;
    rep.all_pass = rep.all_pass && z.pass;
    rep.zones.push_back(z);
  }
  return rep;
}

/// Runs the full protocol for K rollouts of T0 ticks each.
///
/// Tick phases, in order: observe ground truth at t, init_slot, gossip round
/// over the sampled links, boundary update when t is a positive multiple of
/// T0, then act and step the environment. Per-agent work inside a phase is
/// order-independent; the phase sequence is the synchronization contract.
/// Fully deterministic given the config and seed.
inline RunResult run(const RunConfig& cfg) {
  cfg.validate();
  RunResult result;
  Diagnostics& diag = result.diagnostics;
  diag.conditions = check_conditions(cfg);
  diag.thresholds = cfg.thresholds();
  if (!diag.conditions.spec_ok)
    result.warnings.push_back(
        "specification check failed (needs c_max < 1 and sum c_m <= N-1); "
        "feasibility is not guaranteed");
  if (!diag.conditions.satisfied)
    result.warnings.push_back("step-size condition not satisfied (lhs >= delta_c); "
                              "the condition is sufficient, not necessary");
  if (cfg.links.kind == LinkModel::Kind::Bernoulli)
    result.warnings.push_back("intermittent links: gossip deadline and consensus "
                              "guarantees assume static links");

  const std::uint32_t n_agents = cfg.n_agents();
  const std::uint32_t n_zones = cfg.n_zones();
  const std::uint64_t t_zero = cfg.t_zero;
  const std::uint64_t horizon = cfg.rollouts * t_zero;
  const std::uint32_t d_graph = cfg.topology.diameter();
  const std::vector<double> thresholds = cfg.thresholds();
  diag.mismatch_bound =
      cfg.eta * static_cast<double>(d_graph) / static_cast<double>(t_zero);

  RngStream env_rng = derive_stream(cfg.seed, "env");
  RngStream link_rng = derive_stream(cfg.seed, "links");
  std::vector<RngStream> policy_rngs;
  for (std::uint32_t n = 0; n < n_agents; ++n)
    policy_rngs.push_back(derive_stream(cfg.seed, "policy", n));

  WorldState state{cfg.start_positions, 0};
  std::vector<EstimateTable> tables;
  std::vector<MultiplierState> multipliers;
  for (std::uint32_t n = 0; n < n_agents; ++n) {
    tables.emplace_back(n, n_zones, cfg.retention, t_zero);
    multipliers.emplace_back(n, n_zones, cfg.eta, t_zero, cfg.retention);
  }

  std::vector<double> central(n_zones, 0.0);  // centralized reference multipliers
  diag.lambda_norm_sq.push_back(0.0);
  std::vector<std::vector<std::uint8_t>> occ_history;  // ground truth per tick
  occ_history.reserve(horizon + 1);
  std::vector<std::vector<std::uint64_t>> true_counts(
      cfg.rollouts, std::vector<std::uint64_t>(n_zones, 0));

  result.trajectory.reserve(horizon);
  result.boundaries.reserve(cfg.rollouts);

  for (std::uint64_t t = 0; t <= horizon; ++t) {
    const std::vector<std::uint8_t> reward = occupancy(state, cfg.zones);
    occ_history.push_back(reward);
    if (t < horizon)
      for (std::uint32_t m = 0; m < n_zones; ++m)
        true_counts[t / t_zero][m] += reward[m];

    for (std::uint32_t n = 0; n < n_agents; ++n)
      tables[n].init_slot(t, state.positions[n], cfg.zones);
    const std::vector<Edge> usable = sample_links(cfg.topology, cfg.links, link_rng);
    gossip_round(tables, adjacency_of(n_agents, usable));

    if (cfg.trace_messages)
      for (const EstimateTable& tab : tables)
        result.message_trace.push_back(hex_dump(serialize(encode_message(tab))));

    // Deadline audit: estimates of age d(G) must match ground truth.
    // Violations can only occur under intermittent links.
    if (t >= d_graph) {
      const std::uint64_t tau = t - d_graph;
      for (std::uint32_t n = 0; n < n_agents; ++n)
        for (std::uint32_t m = 0; m < n_zones; ++m)
          if (tables[n].estimate(tau, m) != occ_history[tau][m])
            ++diag.deadline_violations;
    }

    if (t > 0 && t % t_zero == 0) {
      const std::uint64_t k = t / t_zero - 1;  // rollout being closed
      BoundaryRecord rec;
      rec.k = k;
      const std::vector<double> central_before = central;  // lambda^k
      for (std::uint32_t n = 0; n < n_agents; ++n) {
        const DualGradient grads = compute_gradients(tables[n], thresholds, k, t_zero);
        diag.g_norm_sq_max = std::max(diag.g_norm_sq_max, norm2_sq(grads.g_curr));
        apply_update(multipliers[n], grads);
        AgentBoundaryRecord arec;
        arec.lambda_prev = multipliers[n].lambda_prev();
        arec.lambda_curr = multipliers[n].lambda_curr();
        arec.g_prev = grads.g_prev;
        arec.g_curr = grads.g_curr;
        rec.agents.push_back(std::move(arec));
        for (std::uint32_t m = 0; m < n_zones; ++m)
          if (multipliers[n].lambda_prev()[m] != central_before[m])
            ++diag.consensus_violations;
        tables[n].drop_finalized_before(k);
      }
      // Centralized reference step from the true counts of rollout k.
      for (std::uint32_t m = 0; m < n_zones; ++m) {
        const double g = rollout_gradient(static_cast<double>(true_counts[k][m]),
                                          static_cast<double>(t_zero), thresholds[m]);
        central[m] = dual_step(central[m], g, cfg.eta);
      }
      rec.central_lambda = central;
      std::vector<std::vector<double>> fresh_copies;
      fresh_copies.reserve(n_agents);
      for (const MultiplierState& ms : multipliers) fresh_copies.push_back(ms.lambda_curr());
      rec.mismatch = mismatch(central, fresh_copies);
      for (double dev : rec.mismatch) diag.mismatch_max = std::max(diag.mismatch_max, dev);
      const double lam_sq_before = diag.lambda_norm_sq.back();
      const double lam_sq_after = norm2_sq(central);
      diag.lambda_norm_sq.push_back(lam_sq_after);
      if (lam_sq_before >= 1.0)
        diag.drift_samples.push_back(lam_sq_after - lam_sq_before);
      result.boundaries.push_back(std::move(rec));
    }

    if (t == horizon) break;

    JointAction action;
    action.moves.resize(n_agents);
    for (std::uint32_t n = 0; n < n_agents; ++n)
      action.moves[n] = act(state.positions[n], multipliers[n].lambda_curr(), n,
                            cfg.policy, cfg.zones, cfg.grid, policy_rngs[n]);
    StepRecord srec;
    srec.t = t;
    srec.positions = state.positions;
    srec.actions = action.moves;
    srec.rewards = reward;
    result.trajectory.push_back(std::move(srec));
    state = step(state, action, cfg.grid, env_rng);
  }

  diag.g_norm_exceeds_one = diag.g_norm_sq_max > 1.0;
  if (diag.g_norm_exceeds_one)
    result.warnings.push_back("||g||^2 exceeded 1; the drift analysis assumes "
                              "||g||^2 <= 1");
  if (diag.deadline_violations > 0)
    result.warnings.push_back("gossip deadline violated " +
                              std::to_string(diag.deadline_violations) +
                              " times (expected only under intermittent links)");

  // Terminal running averages over t = 0..K*T0-1, and the minimum
  // trailing-window average (window = max(1, T/10)) as the liminf proxy.
  diag.terminal_averages.assign(n_zones, 0.0);
  diag.min_trailing_averages.assign(n_zones, 0.0);
  diag.trailing_window = std::max<std::uint64_t>(1, horizon / 10);
  const std::uint64_t w = diag.trailing_window;
  for (std::uint32_t m = 0; m < n_zones; ++m) {
    std::vector<std::uint64_t> prefix(horizon + 1, 0);
    for (std::uint64_t t = 0; t < horizon; ++t)
      prefix[t + 1] = prefix[t] + occ_history[t][m];
    diag.terminal_averages[m] =
        static_cast<double>(prefix[horizon]) / static_cast<double>(horizon);
    double min_avg = 1.0;
    for (std::uint64_t s = 0; s + w <= horizon; ++s)
      min_avg = std::min(min_avg, static_cast<double>(prefix[s + w] - prefix[s]) /
                                      static_cast<double>(w));
    diag.min_trailing_averages[m] = min_avg;
  }

  for (const std::string& w_msg : result.warnings) log_warn(w_msg);
  return result;
}

}  // namespace gridmon
