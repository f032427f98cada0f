#pragma once

// Domain model for weighted-tardiness scheduling on unrelated parallel
// machines with sequence- and machine-dependent setups that each occupy one
// unit of a renewable resource pool of size WR.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wtsched {

using Time = std::int64_t;
using Cost = std::int64_t;
using JobId = int;
using MachineId = int;

inline constexpr JobId kNoJob = -1;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInstance : public Error {
 public:
  using Error::Error;
};

class InvalidPlan : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class SizeCapExceeded : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Instance
// ---------------------------------------------------------------------------

/// A problem instance. Jobs and machines are identified by their index
/// (0..num_jobs-1, 0..num_machines-1). Matrices are stored flat:
/// processing is job-major (job, machine), setups are (pred, job, machine).
struct Instance {
  int num_jobs = 0;
  int num_machines = 0;
  std::vector<Time> processing;  // [j * M + m]
  std::vector<Time> setups;      // [(i * N + j) * M + m], diagonal unused (0)
  Time initial_setup = 0;        // s0, first job on any machine
  std::vector<Time> due;
  std::vector<Cost> weight;
  int resources = 1;  // WR
  std::map<std::string, std::string> meta;

  Instance() = default;
  Instance(int jobs, int machines)
      : num_jobs(jobs),
        num_machines(machines),
        processing(static_cast<std::size_t>(jobs) * machines, 0),
        setups(static_cast<std::size_t>(jobs) * jobs * machines, 0),
        due(jobs, 0),
        weight(jobs, 1),
        resources(machines) {}

  Time p(JobId j, MachineId m) const {
    return processing[static_cast<std::size_t>(j) * num_machines + m];
  }
  Time& p(JobId j, MachineId m) {
    return processing[static_cast<std::size_t>(j) * num_machines + m];
  }
  Time s(JobId i, JobId j, MachineId m) const {
    return setups[(static_cast<std::size_t>(i) * num_jobs + j) * num_machines + m];
  }
  Time& s(JobId i, JobId j, MachineId m) {
    return setups[(static_cast<std::size_t>(i) * num_jobs + j) * num_machines + m];
  }

  /// Setup of `j` on `m` when preceded by `prev` (kNoJob for the first slot).
  Time setup_after(JobId prev, JobId j, MachineId m) const {
    return prev == kNoJob ? initial_setup : s(prev, j, m);
  }

  bool unlimited_resources() const { return resources >= num_machines; }

  /// Throws InvalidInstance when the data violates the model invariants.
  void check() const {
    if (num_jobs < 1) throw InvalidInstance("instance needs at least one job");
    if (num_machines < 1) throw InvalidInstance("instance needs at least one machine");
    const auto n = static_cast<std::size_t>(num_jobs);
    const auto m = static_cast<std::size_t>(num_machines);
    if (processing.size() != n * m) throw InvalidInstance("processing matrix has wrong size");
    if (setups.size() != n * n * m) throw InvalidInstance("setup tensor has wrong size");
    if (due.size() != n || weight.size() != n)
      throw InvalidInstance("due/weight vectors have wrong size");
    if (resources < 1 || resources > num_machines)
      throw InvalidInstance("WR must lie in [1, |M|]");
    if (initial_setup < 0) throw InvalidInstance("negative initial setup");
    for (auto v : processing)
      if (v < 0) throw InvalidInstance("negative processing time");
    for (int i = 0; i < num_jobs; ++i)
      for (int j = 0; j < num_jobs; ++j)
        for (int k = 0; k < num_machines; ++k)
          if (i != j && s(i, j, k) < 0) throw InvalidInstance("negative setup time");
    for (auto v : due)
      if (v < 0) throw InvalidInstance("negative deadline");
    for (auto v : weight)
      if (v < 1) throw InvalidInstance("weights must be >= 1");
  }
};

// ---------------------------------------------------------------------------
// Plans and schedules
// ---------------------------------------------------------------------------

/// Ordered job list per machine.
struct SequencePlan {
  std::vector<std::vector<JobId>> seq;

  SequencePlan() = default;
  explicit SequencePlan(int machines) : seq(machines) {}
  explicit SequencePlan(std::vector<std::vector<JobId>> s) : seq(std::move(s)) {}

  int machines() const { return static_cast<int>(seq.size()); }
  friend bool operator==(const SequencePlan&, const SequencePlan&) = default;
};

struct JobTiming {
  MachineId machine = -1;
  Time setup_start = 0;
  Time setup_end = 0;
  Time completion = 0;
  friend bool operator==(const JobTiming&, const JobTiming&) = default;
};

struct TimedSchedule {
  std::vector<JobTiming> jobs;  // indexed by job id
  Cost objective = 0;
  bool proven_optimal_allocation = false;
  friend bool operator==(const TimedSchedule&, const TimedSchedule&) = default;
};

struct Violation {
  std::string kind;
  std::string detail;
};

struct ValidationReport {
  bool feasible = true;
  std::vector<Violation> violations;

  void add(std::string kind, std::string detail) {
    feasible = false;
    violations.push_back({std::move(kind), std::move(detail)});
  }
  bool has(std::string_view kind) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.kind == kind; });
  }
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Shortest round-trip decimal form of a double.
inline std::string format_real(double v) {
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << v;
  std::string shortest = os.str();
  for (int prec = 1; prec < std::numeric_limits<double>::max_digits10; ++prec) {
    std::ostringstream t;
    t.precision(prec);
    t << v;
    if (std::stod(t.str()) == v) return t.str();
  }
  return shortest;
}

inline Cost weighted_tardiness(Time completion, Time deadline, Cost weight) {
  return weight * std::max<Time>(0, completion - deadline);
}

inline void check_plan(const Instance& inst, const SequencePlan& plan) {
  if (plan.machines() != inst.num_machines)
    throw InvalidPlan("plan has " + std::to_string(plan.machines()) + " machines, instance has " +
                      std::to_string(inst.num_machines));
  std::vector<int> seen(inst.num_jobs, 0);
  for (const auto& s : plan.seq) {
    for (JobId j : s) {
      if (j < 0 || j >= inst.num_jobs) throw InvalidPlan("unknown job id " + std::to_string(j));
      if (seen[j]++) throw InvalidPlan("job " + std::to_string(j) + " appears twice");
    }
  }
  for (int j = 0; j < inst.num_jobs; ++j)
    if (!seen[j]) throw InvalidPlan("job " + std::to_string(j) + " is not sequenced");
}

inline Cost objective_of(const Instance& inst, const std::vector<JobTiming>& jobs) {
  Cost total = 0;
  for (int j = 0; j < inst.num_jobs; ++j)
    total += weighted_tardiness(jobs[j].completion, inst.due[j], inst.weight[j]);
  return total;
}

/// Timing without resource contention: each setup starts as soon as the
/// previous job on its machine completes. This is the WR = |M| schedule.
inline TimedSchedule evaluate_sequential(const Instance& inst, const SequencePlan& plan) {
  check_plan(inst, plan);
  TimedSchedule out;
  out.jobs.resize(inst.num_jobs);
  for (MachineId m = 0; m < inst.num_machines; ++m) {
    Time t = 0;
    JobId prev = kNoJob;
    for (JobId j : plan.seq[m]) {
      auto& jt = out.jobs[j];
      jt.machine = m;
      jt.setup_start = t;
      jt.setup_end = t + inst.setup_after(prev, j, m);
      jt.completion = jt.setup_end + inst.p(j, m);
      t = jt.completion;
      prev = j;
    }
  }
  out.objective = objective_of(inst, out.jobs);
  out.proven_optimal_allocation = inst.unlimited_resources();
  return out;
}

/// Recovers the per-machine order of a schedule (by setup start).
inline SequencePlan plan_of(const Instance& inst, const TimedSchedule& sched) {
  SequencePlan plan(inst.num_machines);
  std::vector<JobId> order(inst.num_jobs);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](JobId a, JobId b) {
    const auto& x = sched.jobs[a];
    const auto& y = sched.jobs[b];
    if (x.setup_start != y.setup_start) return x.setup_start < y.setup_start;
    return x.completion < y.completion;
  });
  for (JobId j : order) {
    const MachineId m = sched.jobs[j].machine;
    if (m >= 0 && m < inst.num_machines) plan.seq[m].push_back(j);
  }
  return plan;
}

/// Weighted tardiness summed per machine.
inline std::vector<Cost> machine_tardiness(const Instance& inst, const TimedSchedule& sched) {
  std::vector<Cost> out(inst.num_machines, 0);
  for (int j = 0; j < inst.num_jobs; ++j)
    out[sched.jobs[j].machine] +=
        weighted_tardiness(sched.jobs[j].completion, inst.due[j], inst.weight[j]);
  return out;
}

/// Checks every defining constraint of a schedule. Violations are collected,
/// never thrown.
inline ValidationReport validate(const Instance& inst, const TimedSchedule& sched) {
  ValidationReport rep;
  if (static_cast<int>(sched.jobs.size()) != inst.num_jobs) {
    rep.add("job-coverage", "schedule lists " + std::to_string(sched.jobs.size()) +
                                " jobs, instance has " + std::to_string(inst.num_jobs));
    return rep;
  }
  std::vector<std::vector<JobId>> on(inst.num_machines);
  for (JobId j = 0; j < inst.num_jobs; ++j) {
    const auto& jt = sched.jobs[j];
    if (jt.machine < 0 || jt.machine >= inst.num_machines) {
      rep.add("machine-range", "job " + std::to_string(j) + " on unknown machine " +
                                   std::to_string(jt.machine));
      continue;
    }
    if (jt.setup_start < 0 || jt.setup_end < jt.setup_start)
      rep.add("negative-time", "job " + std::to_string(j) + " has an invalid setup interval");
    if (jt.completion != jt.setup_end + inst.p(j, jt.machine))
      rep.add("completion-mismatch",
              "job " + std::to_string(j) + " completion != setup_end + p");
    on[jt.machine].push_back(j);
  }
  if (!rep.feasible && rep.has("machine-range")) return rep;

  for (MachineId m = 0; m < inst.num_machines; ++m) {
    auto& js = on[m];
    std::stable_sort(js.begin(), js.end(), [&](JobId a, JobId b) {
      const auto& x = sched.jobs[a];
      const auto& y = sched.jobs[b];
      if (x.setup_start != y.setup_start) return x.setup_start < y.setup_start;
      return x.completion < y.completion;
    });
    JobId prev = kNoJob;
    for (JobId j : js) {
      const auto& jt = sched.jobs[j];
      const Time want = inst.setup_after(prev, j, m);
      if (jt.setup_end - jt.setup_start != want)
        rep.add("setup-duration", "job " + std::to_string(j) + " on machine " +
                                      std::to_string(m) + ": setup " +
                                      std::to_string(jt.setup_end - jt.setup_start) +
                                      ", expected " + std::to_string(want));
      if (prev != kNoJob && jt.setup_start < sched.jobs[prev].completion)
        rep.add("machine-overlap", "job " + std::to_string(j) + " starts setup before job " +
                                       std::to_string(prev) + " completes on machine " +
                                       std::to_string(m));
      prev = j;
    }
  }

  // Setup occupancy over half-open intervals [start, end); empty intervals
  // hold no unit. Releases at t are processed before acquisitions at t.
  std::vector<std::pair<Time, int>> events;
  for (JobId j = 0; j < inst.num_jobs; ++j) {
    const auto& jt = sched.jobs[j];
    if (jt.setup_end > jt.setup_start) {
      events.emplace_back(jt.setup_start, +1);
      events.emplace_back(jt.setup_end, -1);
    }
  }
  std::sort(events.begin(), events.end());
  int active = 0;
  for (const auto& [t, delta] : events) {
    active += delta;
    if (active > inst.resources) {
      rep.add("resource-capacity", std::to_string(active) + " simultaneous setups at t=" +
                                       std::to_string(t) + " exceed WR=" +
                                       std::to_string(inst.resources));
      break;
    }
  }

  const Cost recomputed = objective_of(inst, sched.jobs);
  if (recomputed != sched.objective)
    rep.add("objective-mismatch", "stored " + std::to_string(sched.objective) +
                                      ", recomputed " + std::to_string(recomputed));
  return rep;
}

}  // namespace wtsched
