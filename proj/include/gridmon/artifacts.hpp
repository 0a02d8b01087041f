#pragma once

#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridmon/errors.hpp"
#include "gridmon/executor.hpp"

namespace gridmon {

/// Shortest decimal string that parses back to exactly the same double.
/// Integer-valued doubles print without an exponent.
inline std::string format_double(double v) {
  char buf[40];
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline FilePtr open_out(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw ConfigError(path + ": cannot open for writing");
  return f;
}

}  // namespace detail

/// trajectory.csv: t,agent_id,x,y,action,r_1..r_M — one row per (tick, agent),
/// rewards are the ground-truth occupancy at that tick.
inline void write_trajectory_csv(const std::string& path, const RunResult& result,
                                 std::uint32_t n_zones) {
  auto f = detail::open_out(path);
  std::string header = "t,agent_id,x,y,action";
  for (std::uint32_t m = 1; m <= n_zones; ++m) header += ",r_" + std::to_string(m);
  std::fprintf(f.get(), "%s\n", header.c_str());
  for (const StepRecord& rec : result.trajectory) {
    std::string rewards;
    for (std::uint32_t m = 0; m < n_zones; ++m)
      rewards += std::string(",") + (rec.rewards[m] ? "1" : "0");
    for (std::size_t n = 0; n < rec.positions.size(); ++n)
      std::fprintf(f.get(), "%llu,%zu,%d,%d,%s%s\n",
                   static_cast<unsigned long long>(rec.t), n, rec.positions[n].x,
                   rec.positions[n].y, to_string(rec.actions[n]).data(),
                   rewards.c_str());
  }
}

/// multipliers.csv: k,agent_id,m,lambda_prev,lambda_curr,g_prev,g_curr —
/// one row per (boundary, agent, zone); g_prev is empty at the first boundary.
inline void write_multipliers_csv(const std::string& path, const RunResult& result) {
  auto f = detail::open_out(path);
  std::fprintf(f.get(), "k,agent_id,m,lambda_prev,lambda_curr,g_prev,g_curr\n");
  for (const BoundaryRecord& rec : result.boundaries)
    for (std::size_t n = 0; n < rec.agents.size(); ++n) {
      const AgentBoundaryRecord& a = rec.agents[n];
      for (std::size_t m = 0; m < a.lambda_curr.size(); ++m) {
        const std::string g_prev = a.g_prev.empty() ? "" : format_double(a.g_prev[m]);
        std::fprintf(f.get(), "%llu,%zu,%zu,%s,%s,%s,%s\n",
                     static_cast<unsigned long long>(rec.k), n, m + 1,
                     format_double(a.lambda_prev[m]).c_str(),
                     format_double(a.lambda_curr[m]).c_str(), g_prev.c_str(),
                     format_double(a.g_curr[m]).c_str());
      }
    }
}

/// zone_averages.csv: t,avg_1..avg_M — running occupancy averages over [0, t].
inline void write_zone_averages_csv(const std::string& path, const RunResult& result,
                                    std::uint32_t n_zones) {
  auto f = detail::open_out(path);
  std::string header = "t";
  for (std::uint32_t m = 1; m <= n_zones; ++m) header += ",avg_" + std::to_string(m);
  std::fprintf(f.get(), "%s\n", header.c_str());
  std::vector<std::uint64_t> sums(n_zones, 0);
  for (const StepRecord& rec : result.trajectory) {
    std::string row = std::to_string(rec.t);
    for (std::uint32_t m = 0; m < n_zones; ++m) {
      sums[m] += rec.rewards[m];
      row += "," + format_double(static_cast<double>(sums[m]) /
                                 static_cast<double>(rec.t + 1));
    }
    std::fprintf(f.get(), "%s\n", row.c_str());
  }
}

/// lambda.csv: k,lambda_1..lambda_M — the centralized reference sequence,
/// which the delayed copies agree with under static links.
inline void write_lambda_csv(const std::string& path, const RunResult& result,
                             std::uint32_t n_zones) {
  auto f = detail::open_out(path);
  std::string header = "k";
  for (std::uint32_t m = 1; m <= n_zones; ++m) header += ",lambda_" + std::to_string(m);
  std::fprintf(f.get(), "%s\n", header.c_str());
  std::string zero_row = "0";
  for (std::uint32_t m = 0; m < n_zones; ++m) zero_row += ",0";
  std::fprintf(f.get(), "%s\n", zero_row.c_str());
  for (const BoundaryRecord& rec : result.boundaries) {
    std::string row = std::to_string(rec.k + 1);
    for (std::uint32_t m = 0; m < n_zones; ++m)
      row += "," + format_double(rec.central_lambda[m]);
    std::fprintf(f.get(), "%s\n", row.c_str());
  }
}

/// mismatch.csv: k,mismatch_max,bound — worst fresh-copy deviation above the
/// centralized value per boundary, against the eta*d(G)/T0 bound.
inline void write_mismatch_csv(const std::string& path, const RunResult& result) {
  auto f = detail::open_out(path);
  std::fprintf(f.get(), "k,mismatch_max,bound\n");
  const std::string bound = format_double(result.diagnostics.mismatch_bound);
  for (const BoundaryRecord& rec : result.boundaries) {
    double worst = 0.0;
    for (double m : rec.mismatch) worst = std::max(worst, m);
    std::fprintf(f.get(), "%llu,%s,%s\n", static_cast<unsigned long long>(rec.k),
                 format_double(worst).c_str(), bound.c_str());
  }
}

/// messages.log: one hex-dumped canonical gossip message per line.
inline void write_messages_log(const std::string& path, const RunResult& result) {
  auto f = detail::open_out(path);
  for (const std::string& line : result.message_trace)
    std::fprintf(f.get(), "%s\n", line.c_str());
}

inline nlohmann::json summary_json(const RunResult& result, const FeasibilityReport& feas,
                                   const DriftReport& drift) {
  const Diagnostics& diag = result.diagnostics;
  nlohmann::json j;
  j["conditions"] = {{"c_max", diag.conditions.c_max},
                     {"c_sum", diag.conditions.c_sum},
                     {"delta_c", diag.conditions.delta_c},
                     {"lhs", diag.conditions.lhs},
                     {"satisfied", diag.conditions.satisfied},
                     {"spec_ok", diag.conditions.spec_ok},
                     {"n_agents", diag.conditions.n_agents},
                     {"n_zones", diag.conditions.n_zones},
                     {"diameter", diag.conditions.diameter}};
  j["zones"] = nlohmann::json::array();
  for (const ZoneFeasibility& z : feas.zones)
    j["zones"].push_back({{"id", z.zone_id},
                          {"threshold", z.threshold},
                          {"terminal_average", z.terminal_average},
                          {"min_trailing_average", z.min_trailing_average},
                          {"gap", z.gap},
                          {"pass", z.pass}});
  j["feasibility"] = {{"tolerance", feas.tolerance}, {"all_pass", feas.all_pass}};
  j["trailing_window"] = diag.trailing_window;
  j["lambda_norm_sq"] = diag.lambda_norm_sq;
  j["mismatch"] = {{"max", diag.mismatch_max}, {"bound", diag.mismatch_bound}};
  j["consensus_violations"] = diag.consensus_violations;
  j["deadline_violations"] = diag.deadline_violations;
  j["g_norm_sq"] = {{"max", diag.g_norm_sq_max}, {"exceeds_one", diag.g_norm_exceeds_one}};
  j["drift"] = {{"sufficient", drift.sufficient},
                {"n_samples", drift.n_samples},
                {"mean", drift.mean},
                {"stddev", drift.stddev},
                {"ci_lo", drift.ci_lo},
                {"ci_hi", drift.ci_hi},
                {"consistent_with_supermartingale", drift.consistent_with_supermartingale}};
  j["warnings"] = result.warnings;
  return j;
}

inline void write_text(const std::string& path, const std::string& text) {
  auto f = detail::open_out(path);
  std::fwrite(text.data(), 1, text.size(), f.get());
}

}  // namespace gridmon
