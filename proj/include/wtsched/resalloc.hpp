#pragma once

// Optimal allocation of the WR setup resources for fixed machine sequences.
//
// With the sequences fixed, each machine is a chain of setup intervals; a
// setup of job j on machine m may start once the previous job on m has
// completed, occupies one resource unit for its whole duration, and the job
// completes `p` after the setup ends. The objective is regular, so some
// optimal schedule is active and it suffices to search schedules built by
// repeatedly handing the earliest-free unit to one of the pending setups.
//
// allocate_exact searches that space depth-first:
//
//  * setups are dispatched in non-decreasing start order; the start of the
//    chosen setup is max(machine ready, earliest unit release, last start).
//    Ordering any feasible schedule by setup start and replaying it this way
//    never delays a setup, so the space contains an optimum.
//  * branching is restricted to the conflict set: setups whose earliest start
//    precedes the earliest completion among pending setups. Any other choice
//    is dominated by first running the setup that completes earliest.
//  * two consecutive setups that start at the same instant are only tried in
//    increasing machine order (the other order yields the same state).
//  * a node is closed when the contention-free completion of every remaining
//    chain fits in the free units (that completion is then optimal for the
//    subtree), and pruned when the contention-free bound reaches the
//    incumbent.
//
// Zero-length setups hold no unit and start as soon as their machine is
// ready.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <vector>

#include "wtsched/core.hpp"

namespace wtsched {

struct AllocLimits {
  std::int64_t node_cap = 5'000'000;
  double time_cap = 10.0;  // seconds
};

struct AllocStats {
  std::int64_t nodes = 0;
  bool completed = true;
};

namespace detail {

struct SetupStep {
  JobId job;
  Time size;
  Time proc;
  Time due;
  Cost weight;
};

using Chains = std::vector<std::vector<SetupStep>>;

inline Chains make_chains(const Instance& inst, const SequencePlan& plan) {
  Chains chains(inst.num_machines);
  for (MachineId m = 0; m < inst.num_machines; ++m) {
    JobId prev = kNoJob;
    for (JobId j : plan.seq[m]) {
      chains[m].push_back({j, inst.setup_after(prev, j, m), inst.p(j, m), inst.due[j], inst.weight[j]});
      prev = j;
    }
  }
  return chains;
}

inline int contended_machines(const Chains& chains) {
  int n = 0;
  for (const auto& c : chains)
    if (std::any_of(c.begin(), c.end(), [](const SetupStep& s) { return s.size > 0; })) ++n;
  return n;
}

/// Partial schedule of the dispatch scheme.
struct AllocState {
  std::vector<int> next;
  std::vector<Time> ready;
  std::vector<Time> release;  // per resource unit
  Time last_start = 0;
  Cost cost = 0;
};

class Dispatcher {
 public:
  Dispatcher(const Instance& inst, const Chains& chains) : inst_(inst), chains_(chains) {}

  AllocState root(std::vector<JobTiming>* rec) const {
    AllocState s;
    s.next.assign(inst_.num_machines, 0);
    s.ready.assign(inst_.num_machines, 0);
    s.release.assign(inst_.resources, 0);
    for (MachineId m = 0; m < inst_.num_machines; ++m) flush_zero(s, m, rec);
    return s;
  }

  bool pending(const AllocState& s, MachineId m) const {
    return s.next[m] < static_cast<int>(chains_[m].size());
  }

  const SetupStep& head(const AllocState& s, MachineId m) const { return chains_[m][s.next[m]]; }

  static std::size_t free_unit(const AllocState& s) {
    return static_cast<std::size_t>(std::min_element(s.release.begin(), s.release.end()) -
                                    s.release.begin());
  }

  Time earliest_start(const AllocState& s, MachineId m) const {
    return std::max({s.ready[m], s.release[free_unit(s)], s.last_start});
  }

  /// Starts the head setup of `m` on the earliest-free unit.
  Time place(AllocState& s, MachineId m, std::vector<JobTiming>* rec) const {
    const auto& st = head(s, m);
    const std::size_t u = free_unit(s);
    const Time start = std::max({s.ready[m], s.release[u], s.last_start});
    s.release[u] = start + st.size;
    s.last_start = start;
    finish(s, m, start, rec);
    flush_zero(s, m, rec);
    return start;
  }

  /// Schedules every remaining setup at its machine's ready time.
  void complete_free(AllocState& s, std::vector<JobTiming>* rec) const {
    for (MachineId m = 0; m < inst_.num_machines; ++m)
      while (pending(s, m)) finish(s, m, s.ready[m], rec);
  }

  /// Contention-free value of the remaining chains; the first remaining
  /// setup of each machine starts no earlier than `floor`.
  Cost remaining_bound(const AllocState& s, Time floor) const {
    Cost total = 0;
    for (MachineId m = 0; m < inst_.num_machines; ++m) {
      Time t = std::max(s.ready[m], floor);
      for (int k = s.next[m]; k < static_cast<int>(chains_[m].size()); ++k) {
        const auto& st = chains_[m][k];
        t += st.size + st.proc;
        total += weighted_tardiness(t, st.due, st.weight);
      }
    }
    return total;
  }

  /// True when running every remaining setup at its ready time never needs
  /// more than WR units. Requires all pending machines to be ready at or
  /// after the last dispatched start.
  bool free_completion_fits(const AllocState& s, std::vector<std::pair<Time, int>>& events) const {
    events.clear();
    for (Time r : s.release)
      if (r > s.last_start) {
        events.emplace_back(s.last_start, +1);
        events.emplace_back(r, -1);
      }
    for (MachineId m = 0; m < inst_.num_machines; ++m) {
      Time t = s.ready[m];
      for (int k = s.next[m]; k < static_cast<int>(chains_[m].size()); ++k) {
        const auto& st = chains_[m][k];
        if (st.size > 0) {
          events.emplace_back(t, +1);
          events.emplace_back(t + st.size, -1);
        }
        t += st.size + st.proc;
      }
    }
    std::sort(events.begin(), events.end());
    int active = 0;
    for (const auto& e : events) {
      active += e.second;
      if (active > inst_.resources) return false;
    }
    return true;
  }

  const Instance& instance() const { return inst_; }
  const Chains& chains() const { return chains_; }

 private:
  void finish(AllocState& s, MachineId m, Time start, std::vector<JobTiming>* rec) const {
    const auto& st = head(s, m);
    const Time completion = start + st.size + st.proc;
    s.cost += weighted_tardiness(completion, st.due, st.weight);
    s.ready[m] = completion;
    if (rec) (*rec)[st.job] = {m, start, start + st.size, completion};
    ++s.next[m];
  }

  void flush_zero(AllocState& s, MachineId m, std::vector<JobTiming>* rec) const {
    while (pending(s, m) && head(s, m).size == 0) finish(s, m, s.ready[m], rec);
  }

  const Instance& inst_;
  const Chains& chains_;
};

inline double dispatch_priority(const SetupStep& st, Time now) {
  const Time slack = st.due - now - st.size - st.proc;
  return static_cast<double>(st.weight) / static_cast<double>(std::max<Time>(slack, 0) + 1);
}

inline TimedSchedule greedy_with(const Dispatcher& d) {
  const Instance& inst = d.instance();
  TimedSchedule out;
  out.jobs.resize(inst.num_jobs);
  AllocState s = d.root(&out.jobs);
  for (;;) {
    Time min_ready = std::numeric_limits<Time>::max();
    for (MachineId m = 0; m < inst.num_machines; ++m)
      if (d.pending(s, m)) min_ready = std::min(min_ready, s.ready[m]);
    if (min_ready == std::numeric_limits<Time>::max()) break;
    const Time now = std::max(min_ready, s.release[Dispatcher::free_unit(s)]);
    MachineId pick = -1;
    double best = -1.0;
    for (MachineId m = 0; m < inst.num_machines; ++m) {
      if (!d.pending(s, m) || s.ready[m] > now) continue;
      const auto& st = d.head(s, m);
      const double pr = dispatch_priority(st, now);
      if (pick < 0 || pr > best || (pr == best && st.job < d.head(s, pick).job)) {
        pick = m;
        best = pr;
      }
    }
    d.place(s, pick, &out.jobs);
  }
  out.objective = s.cost;
  return out;
}

class BranchAndBound {
 public:
  BranchAndBound(const Dispatcher& d, const AllocLimits& limits, Cost incumbent)
      : d_(d), limits_(limits), best_(incumbent), start_(std::chrono::steady_clock::now()) {}

  void run() {
    std::vector<MachineId> path;
    dfs(d_.root(nullptr), -1, -1, path);
  }

  bool improved() const { return improved_; }
  bool aborted() const { return aborted_; }
  std::int64_t nodes() const { return nodes_; }
  Cost best() const { return best_; }

  TimedSchedule rebuild() const {
    TimedSchedule out;
    out.jobs.resize(d_.instance().num_jobs);
    AllocState s = d_.root(&out.jobs);
    for (MachineId m : best_path_) d_.place(s, m, &out.jobs);
    d_.complete_free(s, &out.jobs);
    out.objective = s.cost;
    return out;
  }

 private:
  struct Child {
    Time est;
    double priority;
    MachineId machine;
  };

  bool out_of_budget() {
    if (aborted_) return true;
    if (++nodes_ > limits_.node_cap) aborted_ = true;
    if ((nodes_ & 1023) == 0) {
      const std::chrono::duration<double> el = std::chrono::steady_clock::now() - start_;
      if (el.count() > limits_.time_cap) aborted_ = true;
    }
    return aborted_;
  }

  void record(std::vector<MachineId>& path, Cost value) {
    best_ = value;
    best_path_ = path;
    improved_ = true;
  }

  void dfs(const AllocState& s, MachineId prev_m, Time prev_start, std::vector<MachineId>& path) {
    if (out_of_budget()) return;
    const Instance& inst = d_.instance();
    const Time min_release = s.release[Dispatcher::free_unit(s)];
    const Time floor = std::max(min_release, s.last_start);

    bool any = false;
    Time min_ready = std::numeric_limits<Time>::max();
    for (MachineId m = 0; m < inst.num_machines; ++m)
      if (d_.pending(s, m)) {
        any = true;
        min_ready = std::min(min_ready, s.ready[m]);
      }
    if (!any) {
      if (s.cost < best_) record(path, s.cost);
      return;
    }
    if (s.cost + d_.remaining_bound(s, floor) >= best_) return;

    if (min_ready >= s.last_start && d_.free_completion_fits(s, events_)) {
      const Cost value = s.cost + d_.remaining_bound(s, 0);
      if (value < best_) record(path, value);
      return;
    }

    std::vector<Child> kids;
    Time threshold = std::numeric_limits<Time>::max();
    for (MachineId m = 0; m < inst.num_machines; ++m) {
      if (!d_.pending(s, m)) continue;
      const Time est = std::max(s.ready[m], floor);
      threshold = std::min(threshold, est + d_.head(s, m).size);
      kids.push_back({est, dispatch_priority(d_.head(s, m), est), m});
    }
    std::erase_if(kids, [&](const Child& c) {
      return c.est >= threshold || (c.machine < prev_m && c.est == prev_start);
    });
    std::sort(kids.begin(), kids.end(), [](const Child& a, const Child& b) {
      if (a.est != b.est) return a.est < b.est;
      if (a.priority != b.priority) return a.priority > b.priority;
      return a.machine < b.machine;
    });
    for (const auto& k : kids) {
      AllocState child = s;
      const Time start = d_.place(child, k.machine, nullptr);
      path.push_back(k.machine);
      dfs(child, k.machine, start, path);
      path.pop_back();
      if (aborted_) return;
    }
  }

  const Dispatcher& d_;
  AllocLimits limits_;
  Cost best_;
  std::vector<MachineId> best_path_;
  bool improved_ = false;
  bool aborted_ = false;
  std::int64_t nodes_ = 0;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::pair<Time, int>> events_;
};

}  // namespace detail

/// Event-driven list scheduling: whenever a unit is free and setups are
/// ready, start the ready setup with the largest w / (slack + 1). Always
/// WR-feasible; used as the incumbent seed for allocate_exact.
inline TimedSchedule allocate_greedy(const Instance& inst, const SequencePlan& plan) {
  check_plan(inst, plan);
  const auto chains = detail::make_chains(inst, plan);
  if (inst.unlimited_resources() || detail::contended_machines(chains) <= inst.resources)
    return evaluate_sequential(inst, plan);
  TimedSchedule out = detail::greedy_with(detail::Dispatcher(inst, chains));
  out.proven_optimal_allocation = false;
  return out;
}

/// Minimum total weighted tardiness over all WR-feasible timings of `plan`.
/// `proven_optimal_allocation` is false when the search stopped at a limit;
/// the best schedule found is returned in that case.
inline TimedSchedule allocate_exact(const Instance& inst, const SequencePlan& plan,
                                    const AllocLimits& limits = {}, AllocStats* stats = nullptr) {
  check_plan(inst, plan);
  const auto chains = detail::make_chains(inst, plan);
  if (inst.unlimited_resources() || detail::contended_machines(chains) <= inst.resources) {
    if (stats) *stats = {};
    auto out = evaluate_sequential(inst, plan);
    out.proven_optimal_allocation = true;
    return out;
  }
  const detail::Dispatcher d(inst, chains);
  TimedSchedule greedy = detail::greedy_with(d);
  const Cost lower = d.remaining_bound(d.root(nullptr), 0) + d.root(nullptr).cost;
  if (greedy.objective == lower) {
    if (stats) *stats = {};
    greedy.proven_optimal_allocation = true;
    return greedy;
  }
  detail::BranchAndBound bnb(d, limits, greedy.objective);
  bnb.run();
  if (stats) *stats = {bnb.nodes(), !bnb.aborted()};
  TimedSchedule out = bnb.improved() ? bnb.rebuild() : std::move(greedy);
  out.proven_optimal_allocation = !bnb.aborted();
  return out;
}

/// Reference allocator for small plans: enumerates every order in which the
/// positive-length setups acquire a unit and places each, in list order, at
/// the earliest instant with a free unit over its whole duration (serial
/// schedule generation). Exponential; intended as a test oracle.
inline TimedSchedule allocate_bruteforce(const Instance& inst, const SequencePlan& plan) {
  check_plan(inst, plan);
  const auto chains = detail::make_chains(inst, plan);
  const int M = inst.num_machines;
  std::vector<int> remaining(M, 0);
  int total = 0;
  for (int m = 0; m < M; ++m)
    for (const auto& st : chains[m])
      if (st.size > 0) {
        ++remaining[m];
        ++total;
      }

  TimedSchedule best;
  best.objective = std::numeric_limits<Cost>::max();
  std::vector<MachineId> order;

  auto simulate = [&]() {
    std::vector<JobTiming> timing(inst.num_jobs);
    std::vector<std::pair<Time, Time>> busy;
    std::vector<int> pos(M, 0);
    std::vector<Time> ready(M, 0);
    auto run_zero = [&](int m) {
      while (pos[m] < static_cast<int>(chains[m].size()) && chains[m][pos[m]].size == 0) {
        const auto& st = chains[m][pos[m]++];
        timing[st.job] = {m, ready[m], ready[m], ready[m] + st.proc};
        ready[m] += st.proc;
      }
    };
    for (int m = 0; m < M; ++m) run_zero(m);
    for (MachineId m : order) {
      const auto& st = chains[m][pos[m]++];
      std::vector<Time> cands{ready[m]};
      for (const auto& [a, b] : busy)
        if (b >= ready[m]) cands.push_back(b);
      std::sort(cands.begin(), cands.end());
      Time start = -1;
      for (Time t : cands) {
        // Occupancy is piecewise constant and only rises at interval starts.
        std::vector<Time> probes{t};
        for (const auto& [a, b] : busy)
          if (a > t && a < t + st.size) probes.push_back(a);
        bool ok = true;
        for (Time x : probes) {
          int used = 0;
          for (const auto& [a, b] : busy)
            if (a <= x && x < b) ++used;
          if (used >= inst.resources) {
            ok = false;
            break;
          }
        }
        if (ok) {
          start = t;
          break;
        }
      }
      busy.emplace_back(start, start + st.size);
      timing[st.job] = {m, start, start + st.size, start + st.size + st.proc};
      ready[m] = start + st.size + st.proc;
      run_zero(m);
    }
    const Cost value = objective_of(inst, timing);
    if (value < best.objective) {
      best.objective = value;
      best.jobs = std::move(timing);
    }
  };

  auto enumerate = [&](auto&& self) -> void {
    if (static_cast<int>(order.size()) == total) {
      simulate();
      return;
    }
    for (int m = 0; m < M; ++m) {
      if (!remaining[m]) continue;
      --remaining[m];
      order.push_back(m);
      self(self);
      order.pop_back();
      ++remaining[m];
    }
  };
  enumerate(enumerate);
  best.proven_optimal_allocation = true;
  return best;
}

}  // namespace wtsched
