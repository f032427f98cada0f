#pragma once

// Lower bounds from the slot-based relaxation.
//
// Setups are replaced by s_leq[j][m] (cheapest setup of j on m over all
// predecessors), the first job of each machine gets a zero setup, and the
// resource limit is dropped. Each machine has |J| slots; occupied slots form
// a suffix. Tardiness of a slot is picked from the integer grid 0..t_max.
//
// The model can be exported as MPS for an external MILP solver and its
// solution imported back. Tiny instances are solved in-process by
// enumeration, which yields the same optimum as the model.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wtsched/core.hpp"
#include "wtsched/mps.hpp"
#include "wtsched/resalloc.hpp"

namespace wtsched {

class MalformedSolution : public Error {
 public:
  using Error::Error;
};

/// s_leq[j * M + m] = min over i != j of s[i][j][m]; 0 with a single job.
inline std::vector<Time> compute_s_leq(const Instance& inst) {
  const int n = inst.num_jobs, M = inst.num_machines;
  std::vector<Time> out(static_cast<std::size_t>(n) * M, 0);
  if (n < 2) return out;
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < M; ++m) {
      Time best = std::numeric_limits<Time>::max();
      for (int i = 0; i < n; ++i)
        if (i != j) best = std::min(best, inst.s(i, j, m));
      out[j * M + m] = best;
    }
  return out;
}

/// Largest tardiness any job can have in a schedule of cost <= primal_ub.
inline Time compute_tmax(const Instance& inst, Cost primal_ub) {
  if (primal_ub < 0) throw Error("upper bound must be non-negative");
  Time out = 0;
  for (Cost w : inst.weight) out = std::max(out, primal_ub / w);
  return out;
}

struct RelaxedModel {
  int n = 0;
  int M = 0;
  Time t_max = 0;
  Time V = 0;
  std::vector<Time> s_leq;
  lp::LinearModel lp;

  // Column layout: x, y, f, W, P, S, D, C, T.
  int x(int i, int j, int m) const { return (i * n + j) * M + m; }
  int y(int j, int m) const { return n * n * M + j * M + m; }
  int f(int i, int m) const { return n * n * M + n * M + i * M + m; }
  int W(int i, int j, int m, Time t) const {
    return n * n * M + 2 * n * M + static_cast<int>(((i * n + j) * M + m) * (t_max + 1) + t);
  }
  int cont(int k, int i, int m) const {
    return n * n * M * static_cast<int>(t_max + 2) + 2 * n * M + k * n * M + i * M + m;
  }
  int P(int i, int m) const { return cont(0, i, m); }
  int S(int i, int m) const { return cont(1, i, m); }
  int D(int i, int m) const { return cont(2, i, m); }
  int C(int i, int m) const { return cont(3, i, m); }
  int T(int i, int m) const { return cont(4, i, m); }

  std::size_t num_cols() const { return lp.cols.size(); }
  std::size_t num_rows() const { return lp.rows.size(); }
};

inline RelaxedModel build_relaxation(const Instance& inst, Time t_max) {
  if (t_max < 0) throw Error("t_max must be non-negative");
  using lp::Sense;
  using lp::VarType;
  const auto str = [](auto v) { return std::to_string(v); };

  RelaxedModel rm;
  rm.n = inst.num_jobs;
  rm.M = inst.num_machines;
  rm.t_max = t_max;
  rm.s_leq = compute_s_leq(inst);
  rm.V = rm.s_leq.empty() ? 0 : *std::max_element(rm.s_leq.begin(), rm.s_leq.end());
  rm.lp.name = "wtsched_relaxation";
  const int n = rm.n, M = rm.M;
  auto& lp = rm.lp;

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < M; ++m) lp.add_col("x_" + str(i) + "_" + str(j) + "_" + str(m), VarType::Binary);
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < M; ++m) lp.add_col("y_" + str(j) + "_" + str(m), VarType::Binary);
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < M; ++m) lp.add_col("f_" + str(i) + "_" + str(m), VarType::Binary);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < M; ++m)
        for (Time t = 0; t <= t_max; ++t)
          lp.add_col("W_" + str(i) + "_" + str(j) + "_" + str(m) + "_" + str(t), VarType::Binary,
                     static_cast<double>(inst.weight[j] * t));
  for (const char* k : {"P", "S", "D", "C", "T"})
    for (int i = 0; i < n; ++i)
      for (int m = 0; m < M; ++m) lp.add_col(std::string(k) + "_" + str(i) + "_" + str(m), VarType::Continuous);

  const auto im = [&](int i, int m) { return str(i) + "_" + str(m); };

  for (int j = 0; j < n; ++j) {
    auto& r = lp.add_row("assign_" + str(j), Sense::EQ, 1);
    for (int m = 0; m < M; ++m) r.coefs.emplace_back(rm.y(j, m), 1);
  }
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < M; ++m) {
      auto& r = lp.add_row("slot_link_" + str(j) + "_" + str(m), Sense::EQ, 0);
      for (int i = 0; i < n; ++i) r.coefs.emplace_back(rm.x(i, j, m), 1);
      r.coefs.emplace_back(rm.y(j, m), -1);
    }
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < M; ++m) {
      auto& r = lp.add_row("slot_cap_" + im(i, m), Sense::LE, 1);
      for (int j = 0; j < n; ++j) r.coefs.emplace_back(rm.x(i, j, m), 1);
    }
  for (int m = 0; m < M; ++m) {
    auto& r = lp.add_row("first_" + str(m), Sense::EQ, 1);
    for (int i = 0; i < n; ++i) r.coefs.emplace_back(rm.f(i, m), 1);
  }
  for (int i = 1; i < n; ++i)
    for (int m = 0; m < M; ++m) {
      auto& r = lp.add_row("contig_" + im(i, m), Sense::GE, 0);
      for (int j = 0; j < n; ++j) {
        r.coefs.emplace_back(rm.x(i - 1, j, m), -1);
        r.coefs.emplace_back(rm.x(i, j, m), 1);
      }
    }
  for (int i = 1; i < n; ++i)
    for (int m = 0; m < M; ++m) {
      auto& r = lp.add_row("first_pos_" + im(i, m), Sense::LE, 1);
      for (int j = 0; j < n; ++j) r.coefs.emplace_back(rm.x(i - 1, j, m), 1);
      r.coefs.emplace_back(rm.f(i, m), 1);
    }
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < M; ++m) {
      auto& r = lp.add_row("compl_" + im(i, m), i == 0 ? Sense::GE : Sense::EQ, 0);
      r.coefs.emplace_back(rm.C(i, m), 1);
      if (i > 0) r.coefs.emplace_back(rm.C(i - 1, m), -1);
      r.coefs.emplace_back(rm.P(i, m), -1);
      r.coefs.emplace_back(rm.S(i, m), -1);
    }
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < M; ++m) {
      auto& r = lp.add_row("due_" + im(i, m), Sense::EQ, 0);
      r.coefs.emplace_back(rm.D(i, m), 1);
      for (int j = 0; j < n; ++j)
        if (inst.due[j] != 0) r.coefs.emplace_back(rm.x(i, j, m), -static_cast<double>(inst.due[j]));
    }
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < M; ++m) {
      auto& r = lp.add_row("tard_" + im(i, m), Sense::GE, 0);
      r.coefs.emplace_back(rm.T(i, m), 1);
      r.coefs.emplace_back(rm.C(i, m), -1);
      r.coefs.emplace_back(rm.D(i, m), 1);
    }
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < M; ++m) {
      auto& r = lp.add_row("proc_" + im(i, m), Sense::EQ, 0);
      r.coefs.emplace_back(rm.P(i, m), 1);
      for (int j = 0; j < n; ++j)
        if (inst.p(j, m) != 0) r.coefs.emplace_back(rm.x(i, j, m), -static_cast<double>(inst.p(j, m)));
    }
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < M; ++m) {
      auto& r = lp.add_row("setup_" + im(i, m), Sense::GE, 0);
      r.coefs.emplace_back(rm.S(i, m), 1);
      for (int j = 0; j < n; ++j) {
        const Time s = rm.s_leq[j * M + m];
        if (s != 0) r.coefs.emplace_back(rm.x(i, j, m), -static_cast<double>(s));
      }
      if (rm.V != 0) r.coefs.emplace_back(rm.f(i, m), static_cast<double>(rm.V));
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < M; ++m) {
        auto& r = lp.add_row("wlink_" + str(i) + "_" + str(j) + "_" + str(m), Sense::EQ, 0);
        for (Time t = 0; t <= t_max; ++t) r.coefs.emplace_back(rm.W(i, j, m, t), 1);
        r.coefs.emplace_back(rm.x(i, j, m), -1);
      }
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < M; ++m) {
      auto& r = lp.add_row("tpick_" + im(i, m), Sense::GE, 0);
      for (int j = 0; j < n; ++j)
        for (Time t = 1; t <= t_max; ++t) r.coefs.emplace_back(rm.W(i, j, m, t), static_cast<double>(t));
      r.coefs.emplace_back(rm.T(i, m), -1);
    }

  for (auto& r : lp.rows)
    std::sort(r.coefs.begin(), r.coefs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return rm;
}

inline std::string export_model(const RelaxedModel& model) { return lp::write_mps(model.lp); }

/// Column values that encode `plan` in the model: machine m with k jobs
/// uses slots n-k..n-1, the first of them carries f, empty machines put f
/// on slot 0. Throws when some slot tardiness exceeds t_max.
inline std::vector<double> relaxed_assignment(const RelaxedModel& model, const Instance& inst,
                                              const SequencePlan& plan) {
  check_plan(inst, plan);
  const int n = model.n, M = model.M;
  std::vector<double> v(model.num_cols(), 0.0);
  for (int m = 0; m < M; ++m) {
    const auto& seq = plan.seq[m];
    const int k = static_cast<int>(seq.size());
    const int first = n - k;
    v[model.f(k == 0 ? 0 : first, m)] = 1;
    Time c = 0;
    for (int pos = 0; pos < k; ++pos) {
      const int i = first + pos;
      const JobId j = seq[pos];
      const Time s = pos == 0 ? 0 : model.s_leq[j * M + m];
      c += s + inst.p(j, m);
      const Time t = std::max<Time>(0, c - inst.due[j]);
      if (t > model.t_max) throw Error("slot tardiness " + std::to_string(t) + " exceeds t_max");
      v[model.x(i, j, m)] = 1;
      v[model.y(j, m)] = 1;
      v[model.W(i, j, m, t)] = 1;
      v[model.P(i, m)] = static_cast<double>(inst.p(j, m));
      v[model.S(i, m)] = static_cast<double>(s);
      v[model.D(i, m)] = static_cast<double>(inst.due[j]);
      v[model.C(i, m)] = static_cast<double>(c);
      v[model.T(i, m)] = static_cast<double>(t);
    }
  }
  return v;
}

enum class BoundStatus { Optimal, BoundOnly, InfeasibleModel };

inline std::string to_string(BoundStatus s) {
  switch (s) {
    case BoundStatus::Optimal: return "optimal";
    case BoundStatus::BoundOnly: return "bound_only";
    case BoundStatus::InfeasibleModel: return "infeasible_model";
  }
  return "?";
}

struct LowerBoundResult {
  Cost bound = 0;
  BoundStatus status = BoundStatus::BoundOnly;
  std::optional<SequencePlan> plan;
  std::optional<double> objective;  // primal value reported with the bound
};

/// Solution text: `OBJ v`, `BOUND v`, optional `STATUS infeasible`, then
/// `NAME VALUE` for every nonzero column in column order.
inline std::string write_solution(const RelaxedModel& model, const std::vector<double>& values,
                                  double objective, double bound) {
  std::ostringstream os;
  os << "OBJ " << format_real(objective) << "\n";
  os << "BOUND " << format_real(bound) << "\n";
  for (std::size_t c = 0; c < values.size(); ++c)
    if (values[c] != 0) os << model.lp.cols[c].name << ' ' << format_real(values[c]) << "\n";
  return os.str();
}

inline LowerBoundResult import_solution(const RelaxedModel& model, std::string_view text) {
  std::unordered_map<std::string, int> index;
  index.reserve(model.num_cols());
  for (std::size_t c = 0; c < model.num_cols(); ++c) index.emplace(model.lp.cols[c].name, static_cast<int>(c));

  std::vector<double> v(model.num_cols(), 0.0);
  std::optional<double> obj, bound;
  bool infeasible = false, any_x = false;
  std::istringstream is{std::string(text)};
  std::string line;
  int no = 0;
  while (std::getline(is, line)) {
    ++no;
    std::istringstream ls(line);
    std::string name, value;
    if (!(ls >> name) || name[0] == '#') continue;
    if (!(ls >> value)) throw ParseError("solution line " + std::to_string(no) + ": missing value");
    if (name == "STATUS") {
      if (value != "infeasible") throw ParseError("solution line " + std::to_string(no) + ": unknown status");
      infeasible = true;
      continue;
    }
    double d = 0;
    try {
      std::size_t pos = 0;
      d = std::stod(value, &pos);
      if (pos != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw ParseError("solution line " + std::to_string(no) + ": bad number '" + value + "'");
    }
    if (name == "OBJ") {
      obj = d;
    } else if (name == "BOUND") {
      bound = d;
    } else {
      auto it = index.find(name);
      if (it == index.end()) throw ParseError("solution line " + std::to_string(no) + ": unknown variable '" + name + "'");
      v[it->second] = d;
      if (name[0] == 'x') any_x = true;
    }
  }

  LowerBoundResult res;
  if (infeasible) {
    res.status = BoundStatus::InfeasibleModel;
    return res;
  }
  if (!bound) throw ParseError("solution has no BOUND line");
  res.bound = static_cast<Cost>(std::ceil(*bound - 1e-6));
  res.objective = obj;
  res.status = obj && std::abs(*obj - *bound) <= 1e-6 ? BoundStatus::Optimal : BoundStatus::BoundOnly;
  if (!any_x) return res;

  const int n = model.n, M = model.M;
  auto binary = [&](int c) {
    const double d = v[c];
    const double r = std::round(d);
    if (std::abs(d - r) > 1e-6 || (r != 0 && r != 1))
      throw MalformedSolution("variable " + model.lp.cols[c].name + " is not binary");
    return static_cast<int>(r);
  };
  std::vector<int> occ(static_cast<std::size_t>(n) * M, 0);
  for (int j = 0; j < n; ++j) {
    int assigned = 0;
    for (int m = 0; m < M; ++m) {
      const int yjm = binary(model.y(j, m));
      int slots = 0;
      for (int i = 0; i < n; ++i) {
        const int xv = binary(model.x(i, j, m));
        slots += xv;
        occ[i * M + m] += xv;
      }
      if (slots != yjm) throw MalformedSolution("job " + std::to_string(j) + " slot count differs from y on machine " + std::to_string(m));
      assigned += yjm;
    }
    if (assigned != 1) throw MalformedSolution("job " + std::to_string(j) + " is not assigned to exactly one machine");
  }
  SequencePlan plan(M);
  for (int m = 0; m < M; ++m) {
    int firsts = 0;
    for (int i = 0; i < n; ++i) {
      if (occ[i * M + m] > 1) throw MalformedSolution("slot " + std::to_string(i) + " on machine " + std::to_string(m) + " holds several jobs");
      const int fv = binary(model.f(i, m));
      firsts += fv;
      if (i > 0) {
        if (occ[i * M + m] < occ[(i - 1) * M + m])
          throw MalformedSolution("occupied slots on machine " + std::to_string(m) + " are not a suffix");
        if (occ[(i - 1) * M + m] + fv > 1)
          throw MalformedSolution("first-slot marker on machine " + std::to_string(m) + " follows an occupied slot");
      }
    }
    if (firsts != 1) throw MalformedSolution("machine " + std::to_string(m) + " needs exactly one first-slot marker");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (v[model.x(i, j, m)] > 0.5) plan.seq[m].push_back(j);
  }
  res.plan = std::move(plan);
  return res;
}

struct TinyCaps {
  int jobs = 8;
  int machines = 3;
};

/// Optimum of the relaxation by enumeration. Per machine and job subset the
/// best order is found by a dynamic program over (subset, first job); then
/// all job-to-machine assignments are scanned in lexicographic order and a
/// later assignment replaces the incumbent only when strictly better.
/// With `t_max` set, orders with a job tardier than t_max are infeasible.
inline LowerBoundResult solve_tiny_exact(const Instance& inst, TinyCaps caps = {},
                                         std::optional<Time> t_max = std::nullopt) {
  const int n = inst.num_jobs, M = inst.num_machines;
  if (n > caps.jobs || M > caps.machines)
    throw SizeCapExceeded("relaxation solver handles at most " + std::to_string(caps.jobs) + " jobs and " +
                          std::to_string(caps.machines) + " machines (instance has " + std::to_string(n) +
                          " x " + std::to_string(M) + ")");
  const auto s_leq = compute_s_leq(inst);
  constexpr Cost kInf = std::numeric_limits<Cost>::max() / 4;
  const int subsets = 1 << n;

  // best[m][mask] and the order achieving it.
  std::vector<std::vector<Cost>> best(M, std::vector<Cost>(subsets, kInf));
  std::vector<std::vector<std::vector<JobId>>> order(M, std::vector<std::vector<JobId>>(subsets));
  for (int m = 0; m < M; ++m) {
    best[m][0] = 0;
    std::vector<Time> load(subsets, 0);  // sum of p + s_leq over mask
    for (int mask = 1; mask < subsets; ++mask) {
      const int low = __builtin_ctz(static_cast<unsigned>(mask));
      load[mask] = load[mask & (mask - 1)] + inst.p(low, m) + s_leq[low * M + m];
    }
    // g[mask * n + first]: best cost of sequencing mask starting with first.
    std::vector<Cost> g(static_cast<std::size_t>(subsets) * n, kInf);
    for (int j = 0; j < n; ++j) {
      const Time t = std::max<Time>(0, inst.p(j, m) - inst.due[j]);
      if (!t_max || t <= *t_max) g[(1 << j) * n + j] = inst.weight[j] * t;
    }
    for (int mask = 1; mask < subsets; ++mask)
      for (int first = 0; first < n; ++first) {
        const Cost base = g[mask * n + first];
        if (base >= kInf) continue;
        for (int j = 0; j < n; ++j) {
          if (mask & (1 << j)) continue;
          const int next = mask | (1 << j);
          const Time c = load[next] - s_leq[first * M + m];
          const Time t = std::max<Time>(0, c - inst.due[j]);
          if (t_max && t > *t_max) continue;
          const Cost val = base + inst.weight[j] * t;
          g[next * n + first] = std::min(g[next * n + first], val);
        }
      }
    for (int mask = 1; mask < subsets; ++mask) {
      int arg = -1;
      for (int first = 0; first < n; ++first)
        if (g[mask * n + first] < best[m][mask]) {
          best[m][mask] = g[mask * n + first];
          arg = first;
        }
      if (arg < 0) continue;
      // Walk back from the full mask, taking the smallest last job that
      // is consistent with the table.
      std::vector<JobId> rev;
      int cur = mask;
      Cost remaining = best[m][mask];
      while (cur != (1 << arg)) {
        int pick = -1;
        for (int j = 0; j < n && pick < 0; ++j) {
          if (j == arg || !(cur & (1 << j))) continue;
          const int before = cur & ~(1 << j);
          const Cost b = g[before * n + arg];
          if (b >= kInf) continue;
          const Time c = load[cur] - s_leq[arg * M + m];
          const Time t = std::max<Time>(0, c - inst.due[j]);
          if (t_max && t > *t_max) continue;
          if (b + inst.weight[j] * t == remaining) {
            pick = j;
            remaining = b;
            cur = before;
          }
        }
        rev.push_back(pick);
      }
      rev.push_back(arg);
      order[m][mask].assign(rev.rbegin(), rev.rend());
    }
  }

  LowerBoundResult res;
  res.status = BoundStatus::InfeasibleModel;
  Cost incumbent = kInf;
  std::vector<int> assign(n, 0), best_assign;
  while (true) {
    std::vector<int> masks(M, 0);
    for (int j = 0; j < n; ++j) masks[assign[j]] |= 1 << j;
    Cost total = 0;
    for (int m = 0; m < M && total < kInf; ++m) total += best[m][masks[m]] >= kInf ? kInf : best[m][masks[m]];
    if (total < incumbent) {
      incumbent = total;
      best_assign = assign;
    }
    int k = n - 1;
    while (k >= 0 && assign[k] == M - 1) assign[k--] = 0;
    if (k < 0) break;
    ++assign[k];
  }
  if (incumbent >= kInf) return res;
  std::vector<int> masks(M, 0);
  for (int j = 0; j < n; ++j) masks[best_assign[j]] |= 1 << j;
  SequencePlan plan(M);
  for (int m = 0; m < M; ++m) plan.seq[m] = order[m][masks[m]];
  res.bound = incumbent;
  res.objective = static_cast<double>(incumbent);
  res.status = BoundStatus::Optimal;
  res.plan = std::move(plan);
  return res;
}

/// Fixes the sequences of `plan`, restores the true setups and allocates
/// resources optimally.
inline TimedSchedule mip_primal(const Instance& inst, const SequencePlan& plan, const AllocLimits& limits = {},
                                AllocStats* stats = nullptr) {
  if (inst.unlimited_resources()) {
    if (stats) *stats = {};
    return evaluate_sequential(inst, plan);
  }
  return allocate_exact(inst, plan, limits, stats);
}

}  // namespace wtsched
