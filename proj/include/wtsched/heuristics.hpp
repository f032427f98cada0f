#pragma once

// Primal heuristics: ATCS dispatching, a permutation-coded genetic algorithm
// and simulated annealing with external/internal swaps. Sequences are built
// without resource limits; the final timing always comes from mip_primal,
// i.e. optimal resource allocation for the fixed sequences.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "wtsched/core.hpp"
#include "wtsched/instgen.hpp"
#include "wtsched/relaxation.hpp"
#include "wtsched/resalloc.hpp"
#include "wtsched/rng.hpp"

namespace wtsched {

// ---------------------------------------------------------------------------
// ATCS
// ---------------------------------------------------------------------------

struct AtcsScaling {
  double mu = 0;
  double eta = 0;
  double A2 = 0;
  double k1 = 0;
  double k2 = 0;
  double p_bar = 0;
  double s_bar = 0;
};

inline constexpr double kAtcsFloor = 0.05;

/// Scaling from the summary figures. k1 is floored at kAtcsFloor; k2 only
/// when tau <= 0.
inline AtcsScaling atcs_scaling(double mu, double eta, double p_bar, double s_bar, double tau, double due_range) {
  AtcsScaling sc;
  sc.mu = mu;
  sc.eta = eta;
  sc.p_bar = p_bar;
  sc.s_bar = s_bar;
  sc.A2 = tau < 0.8 ? 1.8 : 2.0;
  sc.k1 = 1.2 * std::log(mu) - due_range;
  if (tau < 0.5) sc.k1 -= 0.5;
  if (eta < 0.5 && mu > 5) sc.k1 -= 0.5;
  sc.k1 = std::max(sc.k1, kAtcsFloor);
  sc.k2 = tau / (sc.A2 * std::sqrt(eta));
  if (tau <= 0) sc.k2 = std::max(sc.k2, kAtcsFloor);
  return sc;
}

/// Scaling for an instance: p_bar over all p, s_bar over all s (s0 excluded).
inline AtcsScaling atcs_scaling(const Instance& inst, double tau, double due_range) {
  double psum = 0;
  for (Time p : inst.processing) psum += static_cast<double>(p);
  const double p_bar = psum / static_cast<double>(inst.processing.size());
  double ssum = 0;
  std::size_t count = 0;
  for (int i = 0; i < inst.num_jobs; ++i)
    for (int j = 0; j < inst.num_jobs; ++j)
      if (i != j)
        for (int m = 0; m < inst.num_machines; ++m) {
          ssum += static_cast<double>(inst.s(i, j, m));
          ++count;
        }
  const double s_bar = count ? ssum / static_cast<double>(count) : 0.0;
  const double mu = static_cast<double>(inst.num_jobs) / inst.num_machines;
  return atcs_scaling(mu, p_bar > 0 ? s_bar / p_bar : 0.0, p_bar, s_bar, tau, due_range);
}

/// Priority of job j on machine m after `last` (kNoJob: empty machine, s0).
/// The load does not enter the index.
inline double atcs_priority(const Instance& inst, JobId j, MachineId m, JobId last, const AtcsScaling& sc) {
  const double p = static_cast<double>(inst.p(j, m));
  const double s = static_cast<double>(inst.setup_after(last, j, m));
  const double slack = std::max(static_cast<double>(inst.due[j]) - p, 0.0);
  const double w_over_p = p > 0 ? static_cast<double>(inst.weight[j]) / p : std::numeric_limits<double>::infinity();
  const double slack_term = slack > 0 ? std::exp(-slack / (sc.k1 * sc.p_bar)) : 1.0;
  const double setup_term = s > 0 ? std::exp(-s / (sc.k2 * sc.s_bar)) : 1.0;
  return w_over_p * slack_term * setup_term;
}

/// tau and R of an instance: generator values from meta when present,
/// otherwise the statistics of its deadlines (0 and 0 when undefined).
inline std::pair<double, double> due_factors(const Instance& inst) {
  const auto t = inst.meta.find("tau");
  const auto r = inst.meta.find("R");
  if (t != inst.meta.end() && r != inst.meta.end()) return {std::stod(t->second), std::stod(r->second)};
  try {
    const auto st = stats(inst);
    return {st.tau_real, st.range_real};
  } catch (const Error&) {
    return {0.0, 0.0};
  }
}

/// The dispatching loop of ATCS, without resource allocation.
inline SequencePlan atcs_sequence(const Instance& inst, const AtcsScaling& sc) {
  const int n = inst.num_jobs, M = inst.num_machines;
  SequencePlan plan(M);
  std::vector<Time> load(M, 0);
  std::vector<JobId> last(M, kNoJob);
  std::vector<bool> done(n, false);
  for (int step = 0; step < n; ++step) {
    const MachineId ms = static_cast<MachineId>(std::min_element(load.begin(), load.end()) - load.begin());
    JobId best = kNoJob;
    double best_score = -1;
    for (JobId j = 0; j < n; ++j) {
      if (done[j]) continue;
      const double score = atcs_priority(inst, j, ms, last[ms], sc);
      if (best == kNoJob || score > best_score) {
        best = j;
        best_score = score;
      }
    }
    MachineId target = 0;
    Time best_c = std::numeric_limits<Time>::max();
    for (MachineId m = 0; m < M; ++m) {
      const Time c = load[m] + inst.p(best, m) + inst.setup_after(last[m], best, m);
      if (c < best_c) {
        best_c = c;
        target = m;
      }
    }
    load[target] = best_c;
    last[target] = best;
    plan.seq[target].push_back(best);
    done[best] = true;
  }
  return plan;
}

inline TimedSchedule atcs_run(const Instance& inst, const AllocLimits& limits = {}, AllocStats* stats_out = nullptr) {
  const auto [tau, range] = due_factors(inst);
  return mip_primal(inst, atcs_sequence(inst, atcs_scaling(inst, tau, range)), limits, stats_out);
}

// ---------------------------------------------------------------------------
// Genetic algorithm
// ---------------------------------------------------------------------------

using Chromosome = std::vector<JobId>;

inline bool is_permutation_of_jobs(const Chromosome& ch, int n) {
  if (static_cast<int>(ch.size()) != n) return false;
  std::vector<bool> seen(n, false);
  for (JobId j : ch) {
    if (j < 0 || j >= n || seen[j]) return false;
    seen[j] = true;
  }
  return true;
}

struct DecodeResult {
  Cost fitness = 0;
  SequencePlan plan;
  bool pruned = false;
  bool allocated = false;                // allocate_exact was called
  std::optional<Cost> audited_exact;     // exact value of a pruned chromosome (audit mode)
};

/// Left-to-right list assignment of a chromosome. Each job goes to the
/// machine with the least weighted tardiness, then the earliest completion,
/// then the smallest id. Returns the plan and its unconstrained value.
inline std::pair<SequencePlan, Cost> ga_assign(const Instance& inst, const Chromosome& ch) {
  const int n = inst.num_jobs, M = inst.num_machines;
  if (!is_permutation_of_jobs(ch, n)) throw InvalidPlan("chromosome is not a permutation of the jobs");
  SequencePlan plan(M);
  std::vector<Time> load(M, 0);
  std::vector<JobId> last(M, kNoJob);
  Cost acc = 0;
  for (JobId j : ch) {
    MachineId pick = 0;
    Cost pick_wt = std::numeric_limits<Cost>::max();
    Time pick_c = std::numeric_limits<Time>::max();
    for (MachineId m = 0; m < M; ++m) {
      const Time c = load[m] + inst.p(j, m) + inst.setup_after(last[m], j, m);
      const Cost wt = weighted_tardiness(c, inst.due[j], inst.weight[j]);
      if (wt < pick_wt || (wt == pick_wt && c < pick_c)) {
        pick = m;
        pick_wt = wt;
        pick_c = c;
      }
    }
    load[pick] = pick_c;
    last[pick] = j;
    acc += pick_wt;
    plan.seq[pick].push_back(j);
  }
  return {std::move(plan), acc};
}

/// Fitness of a chromosome. With limited resources the unconstrained value
/// is replaced by the optimal allocation, unless it already reaches
/// `cutoff`; the chromosome is then marked pruned and keeps that value.
inline DecodeResult ga_decode(const Instance& inst, const Chromosome& ch, std::optional<Cost> cutoff = std::nullopt,
                              const AllocLimits& limits = {}, bool audit = false) {
  DecodeResult out;
  std::tie(out.plan, out.fitness) = ga_assign(inst, ch);
  if (inst.unlimited_resources()) return out;
  if (cutoff && out.fitness >= *cutoff) {
    out.pruned = true;
    if (audit) out.audited_exact = allocate_exact(inst, out.plan, limits).objective;
    return out;
  }
  out.fitness = allocate_exact(inst, out.plan, limits).objective;
  out.allocated = true;
  return out;
}

/// One-point crossover with repair. Offspring take the left part of one
/// parent and the right part of the other; genes of the left part that also
/// occur in the right part are dropped, and genes missing afterwards are
/// inserted at the split point in the order they appear in the left donor.
inline std::pair<Chromosome, Chromosome> ga_crossover(const Chromosome& p1, const Chromosome& p2, std::size_t k) {
  if (p1.size() != p2.size() || p1.size() < 2) throw Error("crossover needs parents of equal length >= 2");
  if (k < 1 || k >= p1.size()) throw Error("split point out of range");
  const std::size_t n = p1.size();
  auto make = [&](const Chromosome& left_donor, const Chromosome& right_donor) {
    const Chromosome right(right_donor.begin() + static_cast<std::ptrdiff_t>(k), right_donor.end());
    std::vector<bool> in_right(n, false);
    for (JobId g : right) in_right[g] = true;
    Chromosome child;
    std::vector<bool> present(n, false);
    for (std::size_t i = 0; i < k; ++i)
      if (!in_right[left_donor[i]]) {
        child.push_back(left_donor[i]);
        present[left_donor[i]] = true;
      }
    for (JobId g : right) present[g] = true;
    for (JobId g : left_donor)
      if (!present[g]) child.push_back(g);
    child.insert(child.end(), right.begin(), right.end());
    return child;
  };
  return {make(p1, p2), make(p2, p1)};
}

/// Swaps two distinct positions drawn uniformly.
inline Chromosome ga_mutate(Chromosome ch, Rng& rng) {
  if (ch.size() < 2) throw Error("mutation needs at least two genes");
  const auto a = rng.below(ch.size());
  auto b = rng.below(ch.size());
  while (b == a) b = rng.below(ch.size());
  std::swap(ch[a], ch[b]);
  return ch;
}

struct GaParams {
  int population = 100;
  int generations = 150;
  double crossover = 0.5;  // offspring are created when r_c > crossover
  double mutation = 0.1;
  double time_limit = 3600;
  std::uint64_t seed = 1;
  bool audit = false;  // compute the exact value of pruned chromosomes too
  AllocLimits alloc{};

  void check() const {
    if (population < 2) throw Error("GA population must be >= 2");
    if (generations < 0) throw Error("GA generations must be >= 0");
    if (crossover < 0 || crossover > 1 || mutation < 0 || mutation > 1)
      throw Error("GA probabilities must lie in [0, 1]");
    if (time_limit <= 0) throw Error("GA time limit must be positive");
  }
};

struct PruneRecord {
  Cost cutoff = 0;
  Cost proxy = 0;
  Cost exact = 0;
};

struct GaResult {
  TimedSchedule schedule;
  Chromosome best;
  std::int64_t cp_calls = 0;
  std::int64_t pruned = 0;
  int generations_run = 0;
  std::vector<Cost> history;  // best fitness after initialisation and after each generation
  std::vector<PruneRecord> audit;
};

inline GaResult ga_run(const Instance& inst, const GaParams& params) {
  params.check();
  const auto start = std::chrono::steady_clock::now();
  const int n = inst.num_jobs;
  Rng rng(params.seed);
  GaResult res;

  struct Individual {
    Chromosome genes;
    Cost fitness;
    bool pruned;
  };
  auto decode = [&](const Chromosome& ch, std::optional<Cost> cutoff) {
    auto d = ga_decode(inst, ch, cutoff, params.alloc, params.audit);
    res.cp_calls += d.allocated ? 1 : 0;
    if (d.pruned) {
      ++res.pruned;
      if (d.audited_exact) res.audit.push_back({*cutoff, d.fitness, *d.audited_exact});
    }
    return Individual{ch, d.fitness, d.pruned};
  };
  auto ranked = [](const Individual& a, const Individual& b) {
    if (a.fitness != b.fitness) return a.fitness < b.fitness;
    return !a.pruned && b.pruned;
  };

  std::vector<Individual> pop;
  pop.reserve(params.population);
  Chromosome identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  for (int k = 0; k < params.population; ++k) {
    Chromosome ch = identity;
    rng.shuffle(ch);
    pop.push_back(decode(ch, std::nullopt));
  }
  std::stable_sort(pop.begin(), pop.end(), ranked);
  res.history.push_back(pop.front().fitness);

  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  for (int g = 0; g < params.generations && n >= 2; ++g) {
    if (elapsed() >= params.time_limit) break;
    Cost cutoff = std::numeric_limits<Cost>::min();
    for (const auto& ind : pop)
      if (!ind.pruned) cutoff = std::max(cutoff, ind.fitness);

    std::vector<int> pool(pop.size());
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<Individual> offspring;
    auto take = [&] {
      const auto i = rng.below(pool.size());
      const int v = pool[i];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
      return v;
    };
    while (pool.size() >= 2) {
      const int x = take();
      const int y = take();
      if (rng.uniform01() > params.crossover) {
        const auto k = static_cast<std::size_t>(rng.between(1, n - 1));
        auto [a, b] = ga_crossover(pop[x].genes, pop[y].genes, k);
        if (rng.uniform01() < params.mutation) {
          a = ga_mutate(std::move(a), rng);
          b = ga_mutate(std::move(b), rng);
        }
        offspring.push_back(decode(a, cutoff));
        offspring.push_back(decode(b, cutoff));
      }
    }
    for (auto& o : offspring) pop.push_back(std::move(o));
    std::stable_sort(pop.begin(), pop.end(), ranked);
    pop.resize(params.population);
    res.history.push_back(pop.front().fitness);
    ++res.generations_run;
  }
  res.best = pop.front().genes;
  res.schedule = mip_primal(inst, ga_assign(inst, res.best).first, params.alloc);
  return res;
}

// ---------------------------------------------------------------------------
// Simulated annealing
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<Cost> job_tardiness(const Instance& inst, const TimedSchedule& sched) {
  std::vector<Cost> out(inst.num_jobs);
  for (int j = 0; j < inst.num_jobs; ++j)
    out[j] = weighted_tardiness(sched.jobs[j].completion, inst.due[j], inst.weight[j]);
  return out;
}

// Position of the job on `seq` with the extreme weighted tardiness; ties go
// to the smallest job id, or the largest when `largest_id_on_tie`.
template <typename Better>
int extreme_job(const std::vector<JobId>& seq, const std::vector<Cost>& wt, Better better, bool largest_id_on_tie) {
  int pos = 0;
  for (int k = 1; k < static_cast<int>(seq.size()); ++k) {
    const Cost a = wt[seq[k]], b = wt[seq[pos]];
    if (better(a, b) || (a == b && (largest_id_on_tie ? seq[k] > seq[pos] : seq[k] < seq[pos]))) pos = k;
  }
  return pos;
}

}  // namespace detail

/// Moves the most weighted-tardy job of the worst machine to the front of the
/// best machine and the least weighted-tardy job of the best machine to the
/// end of the worst one. nullopt when the machines coincide or one is empty.
inline std::optional<SequencePlan> sa_external_swap(const Instance& inst, const SequencePlan& plan,
                                                    const TimedSchedule& sched) {
  const auto per_machine = machine_tardiness(inst, sched);
  const auto worst = static_cast<MachineId>(std::max_element(per_machine.begin(), per_machine.end()) - per_machine.begin());
  const auto best = static_cast<MachineId>(std::min_element(per_machine.begin(), per_machine.end()) - per_machine.begin());
  if (worst == best || plan.seq[worst].empty() || plan.seq[best].empty()) return std::nullopt;
  const auto wt = detail::job_tardiness(inst, sched);
  const int jp = detail::extreme_job(plan.seq[worst], wt, std::greater<>{}, false);
  const int ip = detail::extreme_job(plan.seq[best], wt, std::less<>{}, false);
  SequencePlan out = plan;
  const JobId j = out.seq[worst][jp], i = out.seq[best][ip];
  out.seq[worst].erase(out.seq[worst].begin() + jp);
  out.seq[best].erase(out.seq[best].begin() + ip);
  out.seq[best].insert(out.seq[best].begin(), j);
  out.seq[worst].push_back(i);
  return out;
}

/// On the machine with the largest weighted tardiness, swaps the job with
/// the largest weighted tardiness (smallest id on ties) and the job with the
/// smallest (largest id on ties). nullopt when that machine has < 2 jobs.
inline std::optional<SequencePlan> sa_internal_swap(const Instance& inst, const SequencePlan& plan,
                                                    const TimedSchedule& sched) {
  const auto per_machine = machine_tardiness(inst, sched);
  const auto hat = static_cast<MachineId>(std::max_element(per_machine.begin(), per_machine.end()) - per_machine.begin());
  if (plan.seq[hat].size() < 2) return std::nullopt;
  const auto wt = detail::job_tardiness(inst, sched);
  const int z = detail::extreme_job(plan.seq[hat], wt, std::greater<>{}, false);
  const int k = detail::extreme_job(plan.seq[hat], wt, std::less<>{}, true);
  if (z == k) return std::nullopt;
  SequencePlan out = plan;
  std::swap(out.seq[hat][z], out.seq[hat][k]);
  return out;
}

struct SaParams {
  double t0 = 500;
  double t_cry = 1;
  double q = 0.9;
  int iterations = 50;  // per temperature
  std::uint64_t seed = 1;
  double time_limit = 3600;
  AllocLimits alloc{};

  void check() const {
    if (t0 <= 0 || t_cry <= 0) throw Error("SA temperatures must be positive");
    if (q <= 0 || q >= 1) throw Error("SA cooling factor must lie in (0, 1)");
    if (iterations < 1) throw Error("SA iterations per temperature must be >= 1");
    if (time_limit <= 0) throw Error("SA time limit must be positive");
  }
};

/// Probability of moving to a candidate that is worse by `delta`.
inline double sa_acceptance(double delta, double temperature) { return std::exp(-delta / temperature); }

/// Number of temperature levels the cooling loop visits.
inline int sa_levels(const SaParams& p) {
  int levels = 0;
  for (double t = p.t0; p.t_cry < t; t *= p.q) ++levels;
  return levels;
}

struct SaResult {
  TimedSchedule schedule;
  SequencePlan plan;
  std::int64_t evaluations = 0;
  std::int64_t noops = 0;  // swaps that left the plan unchanged
  std::int64_t accepted = 0;
  std::vector<Cost> trace;  // best value after every evaluation
};

inline SaResult sa_run(const Instance& inst, const SequencePlan& initial, const SaParams& params) {
  params.check();
  const auto start = std::chrono::steady_clock::now();
  Rng rng(params.seed);
  SaResult res;
  SequencePlan cur_plan = initial;
  TimedSchedule cur = mip_primal(inst, cur_plan, params.alloc);
  res.plan = cur_plan;
  res.schedule = cur;
  bool external = true;
  for (double tc = params.t0; params.t_cry < tc; tc *= params.q) {
    if (std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() >= params.time_limit) break;
    for (int it = 0; it < params.iterations; ++it) {
      auto cand = external ? sa_external_swap(inst, cur_plan, cur) : sa_internal_swap(inst, cur_plan, cur);
      external = !external;
      if (!cand) ++res.noops;
      SequencePlan next_plan = cand ? std::move(*cand) : cur_plan;
      TimedSchedule next = cand ? mip_primal(inst, next_plan, params.alloc) : cur;
      ++res.evaluations;
      if (next.objective < res.schedule.objective) {
        res.schedule = next;
        res.plan = next_plan;
        cur = std::move(next);
        cur_plan = std::move(next_plan);
        ++res.accepted;
      } else {
        const double delta = static_cast<double>(next.objective - cur.objective);
        if (rng.uniform01() < sa_acceptance(delta, tc)) {
          cur = std::move(next);
          cur_plan = std::move(next_plan);
          ++res.accepted;
        }
      }
      res.trace.push_back(res.schedule.objective);
    }
  }
  return res;
}

}  // namespace wtsched
