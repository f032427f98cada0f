#pragma once

// One entry point for the primal methods, shared by the CLI and the
// benchmark harness.

#include <cstdint>
#include <optional>
#include <string>

#include "wtsched/core.hpp"
#include "wtsched/heuristics.hpp"
#include "wtsched/relaxation.hpp"
#include "wtsched/rng.hpp"

namespace wtsched {

enum class Algo { Atcs, Ga, SaAtcs, SaGa, Mip };

inline std::string to_string(Algo a) {
  switch (a) {
    case Algo::Atcs: return "atcs";
    case Algo::Ga: return "ga";
    case Algo::SaAtcs: return "sa-atcs";
    case Algo::SaGa: return "sa-ga";
    case Algo::Mip: return "mip";
  }
  return "?";
}

inline Algo parse_algo(const std::string& s) {
  for (Algo a : {Algo::Atcs, Algo::Ga, Algo::SaAtcs, Algo::SaGa, Algo::Mip})
    if (to_string(a) == s) return a;
  throw Error("unknown algorithm '" + s + "' (expected atcs, ga, sa-atcs, sa-ga or mip)");
}

struct SolveOptions {
  GaParams ga{};
  SaParams sa{};
  AllocLimits alloc{};
  TinyCaps tiny{};
  // Sequences from an externally solved relaxation; `mip` falls back to the
  // in-process tiny solver when absent.
  std::optional<SequencePlan> relaxation_plan;
};

struct SolveOutcome {
  TimedSchedule schedule;
  std::int64_t cp_calls = 0;  // exact allocations performed
  std::int64_t pruned = 0;    // GA chromosomes skipped by the cutoff
};

/// GA and SA seeds are derived from `seed`, so a run is reproducible from
/// the algorithm name and that one number.
inline SolveOutcome solve(const Instance& inst, Algo algo, const SolveOptions& opt, std::uint64_t seed) {
  inst.check();
  const std::int64_t per_alloc = inst.unlimited_resources() ? 0 : 1;
  SolveOutcome out;
  auto ga = [&] {
    GaParams p = opt.ga;
    p.seed = derive_seed(seed, 1);
    p.alloc = opt.alloc;
    auto r = ga_run(inst, p);
    out.cp_calls += r.cp_calls + per_alloc;
    out.pruned += r.pruned;
    return r;
  };
  auto sa = [&](const SequencePlan& start) {
    SaParams p = opt.sa;
    p.seed = derive_seed(seed, 2);
    p.alloc = opt.alloc;
    auto r = sa_run(inst, start, p);
    out.cp_calls += per_alloc * (r.evaluations - r.noops + 1);
    return r.schedule;
  };
  auto atcs_plan = [&] {
    const auto [tau, range] = due_factors(inst);
    return atcs_sequence(inst, atcs_scaling(inst, tau, range));
  };
  switch (algo) {
    case Algo::Atcs:
      out.schedule = mip_primal(inst, atcs_plan(), opt.alloc);
      out.cp_calls += per_alloc;
      break;
    case Algo::Ga:
      out.schedule = ga().schedule;
      break;
    case Algo::SaAtcs:
      out.schedule = sa(atcs_plan());
      break;
    case Algo::SaGa: {
      const auto g = ga();
      out.schedule = sa(ga_assign(inst, g.best).first);
      break;
    }
    case Algo::Mip: {
      SequencePlan plan;
      if (opt.relaxation_plan) {
        plan = *opt.relaxation_plan;
      } else {
        const auto lb = solve_tiny_exact(inst, opt.tiny);
        if (!lb.plan) throw Error("relaxation has no feasible solution");
        plan = *lb.plan;
      }
      out.schedule = mip_primal(inst, plan, opt.alloc);
      out.cp_calls += per_alloc;
      break;
    }
  }
  return out;
}

}  // namespace wtsched
