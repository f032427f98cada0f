#pragma once

// Random benchmark instances and descriptive statistics of instances.
//
// Generator rules (all reals rounded half away from zero):
//   p_jm   = round(b_j * a_jm + noise_jm),  b_j, a_jm ~ U[1,10], noise ~ U[0,10]
//   s_ijm  = round(alpha_ijm * p_jm), alpha ~ U[0.1,0.5] or U[0.5,1],
//            or s_ijm = round(U(5,25))
//   w_j    ~ uniform integer on {1..10}
//   d_j    = max(0, round(U(Cmax (1 - tau - R/2), Cmax (1 - tau + R/2))))
//   s0     = 0, WR = ceil(|M|/2) or |M|
//
// Each matrix is drawn from its own mt19937_64 stream whose seed is derived
// from the master seed with derive_seed(seed, k), k = 1..6 in the order
// b, a, noise, setups, weights, deadlines.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "wtsched/core.hpp"
#include "wtsched/rng.hpp"

namespace wtsched {

enum class SetupMode { AlphaLow, AlphaHigh, Uniform };
enum class WrMode { Half, Full };

inline std::string to_string(SetupMode m) {
  switch (m) {
    case SetupMode::AlphaLow: return "alo";
    case SetupMode::AlphaHigh: return "ahi";
    case SetupMode::Uniform: return "u525";
  }
  return "?";
}

inline std::string to_string(WrMode m) { return m == WrMode::Half ? "half" : "full"; }

inline SetupMode parse_setup_mode(const std::string& s) {
  if (s == "alo") return SetupMode::AlphaLow;
  if (s == "ahi") return SetupMode::AlphaHigh;
  if (s == "u525") return SetupMode::Uniform;
  throw Error("unknown setup mode '" + s + "' (expected alo, ahi or u525)");
}

inline WrMode parse_wr_mode(const std::string& s) {
  if (s == "half") return WrMode::Half;
  if (s == "full") return WrMode::Full;
  throw Error("unknown WR mode '" + s + "' (expected half or full)");
}

struct GenConfig {
  int machines = 2;
  int jobs_multiplier = 5;
  SetupMode setup_mode = SetupMode::AlphaLow;
  double tau = 0.5;
  double due_range = 0.8;
  WrMode wr_mode = WrMode::Half;
  std::uint64_t seed = 1;

  int jobs() const { return jobs_multiplier * machines; }
  int resources() const { return wr_mode == WrMode::Half ? (machines + 1) / 2 : machines; }

  void check() const {
    if (machines < 2) throw Error("generator needs at least 2 machines");
    if (jobs_multiplier < 1) throw Error("job multiplier must be >= 1");
    if (due_range < 0) throw Error("due-date range must be >= 0");
  }
};

struct InstanceStats {
  double tau_real = 0;
  double range_real = 0;
  Time cmax_estimate = 0;
  double mean_p = 0;
  double mean_s = 0;
};

/// Makespan estimate ceil((sum_j min_m p_jm + S1) / |M|), where S1 adds the
/// |J|-|M| smallest per-job minimum setups (the first job of every machine
/// needs no setup).
inline Time estimate_cmax(const Instance& inst) {
  const int n = inst.num_jobs, M = inst.num_machines;
  Time total = 0;
  for (int j = 0; j < n; ++j) {
    Time best = std::numeric_limits<Time>::max();
    for (int m = 0; m < M; ++m) best = std::min(best, inst.p(j, m));
    total += best;
  }
  if (n > M) {
    std::vector<Time> min_setup(n, std::numeric_limits<Time>::max());
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        if (i != j)
          for (int m = 0; m < M; ++m) min_setup[j] = std::min(min_setup[j], inst.s(i, j, m));
    std::sort(min_setup.begin(), min_setup.end());
    for (int k = 0; k < n - M; ++k) total += min_setup[k];
  }
  return (total + M - 1) / M;
}

inline Instance generate(const GenConfig& cfg) {
  cfg.check();
  const int n = cfg.jobs(), M = cfg.machines;
  Instance inst(n, M);
  inst.resources = cfg.resources();
  inst.initial_setup = 0;

  Rng rb(derive_seed(cfg.seed, 1)), ra(derive_seed(cfg.seed, 2)), rn(derive_seed(cfg.seed, 3)),
      rs(derive_seed(cfg.seed, 4)), rw(derive_seed(cfg.seed, 5)), rd(derive_seed(cfg.seed, 6));

  std::vector<double> b(n);
  for (auto& v : b) v = rb.uniform(1, 10);
  std::vector<double> a(static_cast<std::size_t>(n) * M);
  for (auto& v : a) v = ra.uniform(1, 10);
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < M; ++m)
      inst.p(j, m) = std::llround(b[j] * a[j * M + m] + rn.uniform(0, 10));

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int m = 0; m < M; ++m) {
        switch (cfg.setup_mode) {
          case SetupMode::AlphaLow:
            inst.s(i, j, m) = std::llround(rs.uniform(0.1, 0.5) * static_cast<double>(inst.p(j, m)));
            break;
          case SetupMode::AlphaHigh:
            inst.s(i, j, m) = std::llround(rs.uniform(0.5, 1.0) * static_cast<double>(inst.p(j, m)));
            break;
          case SetupMode::Uniform:
            inst.s(i, j, m) = std::llround(rs.uniform(5, 25));
            break;
        }
      }
    }

  for (auto& w : inst.weight) w = rw.between(1, 10);

  const double cmax = static_cast<double>(estimate_cmax(inst));
  const double lo = cmax * (1.0 - cfg.tau - cfg.due_range / 2);
  const double hi = cmax * (1.0 - cfg.tau + cfg.due_range / 2);
  for (auto& d : inst.due) d = std::max<Time>(0, std::llround(rd.uniform(lo, hi)));

  inst.meta["generator"] = "wtsched-gen-1";
  inst.meta["seed"] = std::to_string(cfg.seed);
  inst.meta["machines"] = std::to_string(cfg.machines);
  inst.meta["mult"] = std::to_string(cfg.jobs_multiplier);
  inst.meta["setup"] = to_string(cfg.setup_mode);
  inst.meta["tau"] = format_real(cfg.tau);
  inst.meta["R"] = format_real(cfg.due_range);
  inst.meta["wr_mode"] = to_string(cfg.wr_mode);
  inst.meta["rounding"] = "nearest-half-away";
  inst.check();
  return inst;
}

/// Re-derives the per-job factors b_j of a generated instance from its seed.
inline std::vector<double> generator_job_factors(std::uint64_t seed, int jobs) {
  Rng rb(derive_seed(seed, 1));
  std::vector<double> b(jobs);
  for (auto& v : b) v = rb.uniform(1, 10);
  return b;
}

inline InstanceStats stats(const Instance& inst) {
  InstanceStats st;
  st.cmax_estimate = estimate_cmax(inst);
  if (st.cmax_estimate == 0) throw Error("undefined-stats: estimated makespan is 0");
  const double cmax = static_cast<double>(st.cmax_estimate);
  double dsum = 0;
  for (auto d : inst.due) dsum += static_cast<double>(d);
  const auto [dmin, dmax] = std::minmax_element(inst.due.begin(), inst.due.end());
  st.tau_real = 1.0 - dsum / inst.num_jobs / cmax;
  st.range_real = static_cast<double>(*dmax - *dmin) / cmax;
  double psum = 0;
  for (auto p : inst.processing) psum += static_cast<double>(p);
  st.mean_p = psum / static_cast<double>(inst.processing.size());
  double ssum = 0;
  std::size_t count = 0;
  for (int i = 0; i < inst.num_jobs; ++i)
    for (int j = 0; j < inst.num_jobs; ++j)
      if (i != j)
        for (int m = 0; m < inst.num_machines; ++m) {
          ssum += static_cast<double>(inst.s(i, j, m));
          ++count;
        }
  st.mean_s = count ? ssum / static_cast<double>(count) : 0.0;
  return st;
}

}  // namespace wtsched
