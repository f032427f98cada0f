#pragma once

// Shared fixtures and random generators for the test suites.

#include <cstdint>
#include <vector>

#include "wtsched/core.hpp"
#include "wtsched/rng.hpp"

namespace wtsched::testing {

struct RandomShape {
  int jobs = 4;
  int machines = 2;
  int resources = 1;
  Time s0 = 0;
  Time p_max = 10;
  Time s_max = 8;
  Time d_max = 30;
  Cost w_max = 5;
};

/// Unstructured random instance, independent of the benchmark generator.
inline Instance random_instance(std::uint64_t seed, const RandomShape& shape) {
  Rng rng(seed);
  Instance inst(shape.jobs, shape.machines);
  inst.resources = shape.resources;
  inst.initial_setup = shape.s0;
  for (int j = 0; j < shape.jobs; ++j) {
    for (int m = 0; m < shape.machines; ++m) inst.p(j, m) = rng.between(1, shape.p_max);
    inst.due[j] = rng.between(0, shape.d_max);
    inst.weight[j] = rng.between(1, shape.w_max);
  }
  for (int i = 0; i < shape.jobs; ++i)
    for (int j = 0; j < shape.jobs; ++j)
      for (int m = 0; m < shape.machines; ++m)
        if (i != j) inst.s(i, j, m) = rng.between(0, shape.s_max);
  inst.check();
  return inst;
}

inline SequencePlan random_plan(Rng& rng, int jobs, int machines) {
  std::vector<JobId> perm(jobs);
  for (int j = 0; j < jobs; ++j) perm[j] = j;
  rng.shuffle(perm);
  SequencePlan plan(machines);
  for (JobId j : perm) plan.seq[rng.below(machines)].push_back(j);
  return plan;
}

/// Two machines, one setup unit. Machine 0 runs a then c, machine 1 runs b
/// then d; the setups of c and d (5 each) both become ready at t=4 and
/// compete for the single unit.
inline Instance contention_instance(int resources = 1) {
  Instance inst(4, 2);  // a=0, b=1, c=2, d=3
  inst.resources = resources;
  inst.initial_setup = 0;
  const Time p[4] = {4, 4, 3, 3};
  for (int j = 0; j < 4; ++j)
    for (int m = 0; m < 2; ++m) inst.p(j, m) = p[j];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int m = 0; m < 2; ++m)
        if (i != j) inst.s(i, j, m) = 5;
  inst.due = {100, 100, 12, 12};
  inst.weight = {1, 1, 1, 2};
  inst.check();
  return inst;
}

inline SequencePlan contention_plan() { return SequencePlan({{0, 2}, {1, 3}}); }

}  // namespace wtsched::testing
