#pragma once

// Exhaustive solver for very small instances: every assignment, every order
// per machine, every resource-acquisition order. Slow and obviously correct.

#include <algorithm>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "wtsched/core.hpp"
#include "wtsched/resalloc.hpp"

namespace wtsched {

struct OracleCaps {
  int jobs = 6;
  int machines = 3;
};

/// Optimal schedule; ties go to the lexicographically smallest plan.
inline TimedSchedule solve_exact_tiny(const Instance& inst, OracleCaps caps = {}) {
  const int n = inst.num_jobs, M = inst.num_machines;
  if (n > caps.jobs || M > caps.machines)
    throw SizeCapExceeded("oracle handles at most " + std::to_string(caps.jobs) + " jobs and " +
                          std::to_string(caps.machines) + " machines (instance has " + std::to_string(n) + " x " +
                          std::to_string(M) + ")");
  TimedSchedule best;
  SequencePlan best_plan;
  bool found = false;
  std::vector<int> assign(n, 0);
  while (true) {
    std::vector<std::vector<JobId>> groups(M);
    for (int j = 0; j < n; ++j) groups[assign[j]].push_back(j);
    SequencePlan plan(M);
    std::function<void(int)> orders = [&](int m) {
      if (m == M) {
        auto sched = allocate_bruteforce(inst, plan);
        if (!found || sched.objective < best.objective ||
            (sched.objective == best.objective && plan.seq < best_plan.seq)) {
          best = std::move(sched);
          best_plan = plan;
          found = true;
        }
        return;
      }
      plan.seq[m] = groups[m];
      do {
        orders(m + 1);
      } while (std::next_permutation(plan.seq[m].begin(), plan.seq[m].end()));
    };
    orders(0);
    int k = n - 1;
    while (k >= 0 && assign[k] == M - 1) assign[k--] = 0;
    if (k < 0) break;
    ++assign[k];
  }
  best.proven_optimal_allocation = true;
  return best;
}

}  // namespace wtsched
