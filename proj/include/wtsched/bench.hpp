#pragma once

// Quality metrics, benchmark suites and what-if comparisons.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "wtsched/core.hpp"
#include "wtsched/instgen.hpp"
#include "wtsched/io.hpp"
#include "wtsched/relaxation.hpp"
#include "wtsched/rng.hpp"
#include "wtsched/solve.hpp"

namespace wtsched {

class BoundViolation : public Error {
 public:
  using Error::Error;
};

/// (alg - lb) / alg, 0 when alg = 0.
inline double gap(Cost alg_sol, Cost lower_bound) {
  if (lower_bound < 0) throw Error("lower bound must be non-negative");
  if (alg_sol < lower_bound)
    throw BoundViolation("solution " + std::to_string(alg_sol) + " is below lower bound " + std::to_string(lower_bound));
  if (alg_sol == 0) return 0.0;
  return static_cast<double>(alg_sol - lower_bound) / static_cast<double>(alg_sol);
}

/// (alg - best) / alg, 0 when alg = 0.
inline double err(Cost alg_sol, Cost best_sol) {
  if (best_sol < 0) throw Error("best solution must be non-negative");
  if (best_sol > alg_sol)
    throw BoundViolation("best solution " + std::to_string(best_sol) + " exceeds " + std::to_string(alg_sol));
  if (alg_sol == 0) return 0.0;
  return static_cast<double>(alg_sol - best_sol) / static_cast<double>(alg_sol);
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

enum class BoundSource { None, Tiny };

namespace detail {

// FNV-1a; stable across platforms, unlike std::hash.
inline std::uint64_t name_hash(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace detail

/// Cross-product of generator settings plus optional instance files.
struct Suite {
  std::vector<int> machines{2};
  std::vector<int> mults{5};
  std::vector<SetupMode> setups{SetupMode::AlphaLow};
  std::vector<double> taus{0.5};
  std::vector<double> ranges{0.8};
  std::vector<WrMode> wrs{WrMode::Half};
  int count = 1;  // instances per cell
  std::uint64_t seed = 1;
  std::vector<Algo> algos{Algo::Atcs};
  int reps = 1;
  BoundSource bound = BoundSource::None;
  std::vector<std::string> files;  // instance files, resolved against the suite directory
  SolveOptions options{};
};

inline Suite parse_suite(std::string_view text, const std::filesystem::path& base_dir = {}) {
  Suite s;
  std::istringstream is{std::string(text)};
  std::string line;
  int no = 0;
  auto fail = [&](const std::string& msg) { throw ParseError("suite line " + std::to_string(no) + ": " + msg); };
  auto num = [&](const std::string& tok) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size()) fail("bad number '" + tok + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("bad number '" + tok + "'");
    }
    return 0.0;
  };
  auto integer = [&](const std::string& tok) {
    const double v = num(tok);
    if (v != std::floor(v)) fail("expected an integer, got '" + tok + "'");
    return static_cast<long long>(v);
  };
  while (std::getline(is, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::vector<std::string> t{std::istream_iterator<std::string>(ls), {}};
    if (t.empty()) continue;
    const std::string key = t[0];
    t.erase(t.begin());
    if (t.empty()) fail("'" + key + "' needs a value");
    try {
      if (key == "machines") {
        s.machines.clear();
        for (const auto& v : t) s.machines.push_back(static_cast<int>(integer(v)));
      } else if (key == "mult") {
        s.mults.clear();
        for (const auto& v : t) s.mults.push_back(static_cast<int>(integer(v)));
      } else if (key == "setup") {
        s.setups.clear();
        for (const auto& v : t) s.setups.push_back(parse_setup_mode(v));
      } else if (key == "tau") {
        s.taus.clear();
        for (const auto& v : t) s.taus.push_back(num(v));
      } else if (key == "R") {
        s.ranges.clear();
        for (const auto& v : t) s.ranges.push_back(num(v));
      } else if (key == "wr") {
        s.wrs.clear();
        for (const auto& v : t) s.wrs.push_back(parse_wr_mode(v));
      } else if (key == "count") {
        s.count = static_cast<int>(integer(t[0]));
      } else if (key == "seed") {
        s.seed = std::stoull(t[0]);
      } else if (key == "algos") {
        s.algos.clear();
        for (const auto& v : t) s.algos.push_back(parse_algo(v));
      } else if (key == "reps") {
        s.reps = static_cast<int>(integer(t[0]));
      } else if (key == "lb") {
        if (t[0] == "none") s.bound = BoundSource::None;
        else if (t[0] == "tiny") s.bound = BoundSource::Tiny;
        else fail("lb must be none or tiny");
      } else if (key == "instance") {
        for (const auto& v : t) s.files.push_back((base_dir / v).string());
      } else if (key == "time-limit") {
        s.options.ga.time_limit = s.options.sa.time_limit = num(t[0]);
      } else if (key == "ga-pop") {
        s.options.ga.population = static_cast<int>(integer(t[0]));
      } else if (key == "ga-gens") {
        s.options.ga.generations = static_cast<int>(integer(t[0]));
      } else if (key == "ga-pc") {
        s.options.ga.crossover = num(t[0]);
      } else if (key == "ga-pm") {
        s.options.ga.mutation = num(t[0]);
      } else if (key == "sa-t0") {
        s.options.sa.t0 = num(t[0]);
      } else if (key == "sa-tcry") {
        s.options.sa.t_cry = num(t[0]);
      } else if (key == "sa-q") {
        s.options.sa.q = num(t[0]);
      } else if (key == "sa-it") {
        s.options.sa.iterations = static_cast<int>(integer(t[0]));
      } else {
        fail("unknown key '" + key + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(e.what());
    } catch (const std::logic_error&) {
      fail("bad value for '" + key + "'");
    }
  }
  if (s.count < 1 || s.reps < 1) throw ParseError("suite count and reps must be >= 1");
  if (s.algos.empty()) throw ParseError("suite lists no algorithms");
  return s;
}

struct SuiteInstance {
  std::string id;
  Instance instance;
  // Facet columns: jobs, machines, mult, setup, wr, tau.
  std::vector<std::string> facets;
};

inline const std::vector<std::string>& facet_names() {
  static const std::vector<std::string> names{"jobs", "machines", "mult", "setup", "wr", "tau"};
  return names;
}

/// Generated instances in cross-product order, then the listed files.
inline std::vector<SuiteInstance> suite_instances(const Suite& s) {
  std::vector<SuiteInstance> out;
  std::uint64_t index = 0;
  for (int m : s.machines)
    for (int mult : s.mults)
      for (SetupMode setup : s.setups)
        for (double tau : s.taus)
          for (double range : s.ranges)
            for (WrMode wr : s.wrs)
              for (int k = 0; k < s.count; ++k) {
                GenConfig cfg;
                cfg.machines = m;
                cfg.jobs_multiplier = mult;
                cfg.setup_mode = setup;
                cfg.tau = tau;
                cfg.due_range = range;
                cfg.wr_mode = wr;
                cfg.seed = derive_seed(s.seed, index++);
                SuiteInstance si;
                si.instance = generate(cfg);
                si.id = std::to_string(cfg.jobs()) + "x" + std::to_string(m) + "-" + to_string(setup) + "-" +
                        to_string(wr) + "-t" + format_real(tau) + "-R" + format_real(range) + "-" + std::to_string(k);
                si.facets = {std::to_string(cfg.jobs()), std::to_string(m), std::to_string(mult),
                             to_string(setup), to_string(wr), format_real(tau)};
                out.push_back(std::move(si));
              }
  for (const auto& f : s.files) {
    SuiteInstance si;
    si.instance = io::read_instance(io::read_file(f));
    si.id = std::filesystem::path(f).stem().string();
    const auto& inst = si.instance;
    const auto meta = [&](const char* key) {
      const auto it = inst.meta.find(key);
      return it == inst.meta.end() ? std::string("-") : it->second;
    };
    si.facets = {std::to_string(inst.num_jobs), std::to_string(inst.num_machines), meta("mult"), meta("setup"),
                 inst.meta.count("wr_mode") ? meta("wr_mode") : "WR" + std::to_string(inst.resources), meta("tau")};
    out.push_back(std::move(si));
  }
  return out;
}

struct RunRecord {
  std::string instance_id;
  std::vector<std::string> facets;
  Algo algo = Algo::Atcs;
  int rep = 0;
  std::uint64_t seed = 0;
  std::optional<Cost> objective;
  double time_s = 0;
  std::optional<Cost> lower_bound;
  std::optional<double> gap;
  std::optional<double> err;
  bool optimal_alloc = false;
  std::int64_t cp_calls = 0;
  std::int64_t pruned = 0;
  std::string status = "ok";
};

struct SuiteResult {
  std::vector<RunRecord> runs;
};

struct SuiteRunOptions {
  int workers = 1;
  bool timing = true;  // false leaves time_s empty in the CSV
};

/// Runs every (instance, algorithm, repetition) cell. Cells may run in
/// parallel; records keep cell order, so output does not depend on workers.
inline SuiteResult run_suite(const Suite& suite, const SuiteRunOptions& ro = {}) {
  const auto instances = suite_instances(suite);
  std::vector<std::optional<Cost>> bounds(instances.size());
  std::vector<std::string> bound_status(instances.size());
  if (suite.bound == BoundSource::Tiny)
    for (std::size_t i = 0; i < instances.size(); ++i) {
      try {
        const auto r = solve_tiny_exact(instances[i].instance, suite.options.tiny);
        if (r.status == BoundStatus::Optimal) bounds[i] = r.bound;
      } catch (const SizeCapExceeded&) {
        // no bound for this instance
      }
    }

  struct Cell {
    std::size_t inst;
    Algo algo;
    int rep;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < instances.size(); ++i)
    for (Algo a : suite.algos)
      for (int r = 0; r < suite.reps; ++r) cells.push_back({i, a, r});

  SuiteResult res;
  res.runs.resize(cells.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      const auto& cell = cells[c];
      const auto& si = instances[cell.inst];
      RunRecord rec;
      rec.instance_id = si.id;
      rec.facets = si.facets;
      rec.algo = cell.algo;
      rec.rep = cell.rep;
      rec.seed = derive_seed(detail::name_hash(si.id) ^ suite.seed, static_cast<std::uint64_t>(cell.rep));
      rec.lower_bound = bounds[cell.inst];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const auto out = solve(si.instance, cell.algo, suite.options, rec.seed);
        rec.objective = out.schedule.objective;
        rec.optimal_alloc = out.schedule.proven_optimal_allocation;
        rec.cp_calls = out.cp_calls;
        rec.pruned = out.pruned;
        if (!validate(si.instance, out.schedule).feasible) rec.status = "infeasible-schedule";
      } catch (const std::exception& e) {
        rec.status = e.what();
      }
      rec.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      res.runs[c] = std::move(rec);
    }
  };
  const int workers = std::max(1, ro.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  // Err against the best objective per instance; Gap against the bound.
  std::map<std::string, Cost> best;
  for (const auto& r : res.runs)
    if (r.objective) {
      auto [it, fresh] = best.emplace(r.instance_id, *r.objective);
      if (!fresh) it->second = std::min(it->second, *r.objective);
    }
  for (auto& r : res.runs) {
    if (!r.objective) continue;
    r.err = err(*r.objective, best.at(r.instance_id));
    if (r.lower_bound) {
      try {
        r.gap = gap(*r.objective, *r.lower_bound);
      } catch (const BoundViolation& e) {
        r.status = std::string("bound-violation: ") + e.what();
      }
    }
  }
  return res;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

inline std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace detail

inline std::string runs_csv(const SuiteResult& res, bool timing = true) {
  std::ostringstream os;
  os << "instance_id";
  for (const auto& f : facet_names()) os << ',' << f;
  os << ",algo,rep,seed,objective,time_s,lower_bound,gap,err,optimal_alloc,cp_calls,pruned,status\n";
  for (const auto& r : res.runs) {
    os << detail::csv_field(r.instance_id);
    for (const auto& f : r.facets) os << ',' << detail::csv_field(f);
    os << ',' << to_string(r.algo) << ',' << r.rep << ',' << r.seed << ',';
    if (r.objective) os << *r.objective;
    os << ',';
    if (timing) os << detail::fixed(r.time_s, 3);
    os << ',';
    if (r.lower_bound) os << *r.lower_bound;
    os << ',';
    if (r.gap) os << detail::fixed(*r.gap, 6);
    os << ',';
    if (r.err) os << detail::fixed(*r.err, 6);
    os << ',' << (r.optimal_alloc ? 1 : 0) << ',' << r.cp_calls << ',' << r.pruned << ','
       << detail::csv_field(r.status) << '\n';
  }
  return os.str();
}

struct SummaryRow {
  std::vector<std::string> facets;
  Algo algo = Algo::Atcs;
  int runs = 0;
  int failed = 0;
  std::optional<double> mean_gap;
  double mean_time = 0;
  std::optional<double> mean_err;
};

/// Arithmetic means per (facets, algorithm), in first-seen order.
inline std::vector<SummaryRow> summarize(const SuiteResult& res) {
  std::vector<SummaryRow> rows;
  std::map<std::pair<std::vector<std::string>, Algo>, std::size_t> index;
  std::vector<std::tuple<double, int, double, int>> sums;  // gap sum/count, err sum/count
  for (const auto& r : res.runs) {
    const auto key = std::make_pair(r.facets, r.algo);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, rows.size()).first;
      rows.push_back(SummaryRow{r.facets, r.algo, 0, 0, std::nullopt, 0, std::nullopt});
      sums.emplace_back(0, 0, 0, 0);
    }
    auto& row = rows[it->second];
    auto& [gs, gc, es, ec] = sums[it->second];
    ++row.runs;
    if (r.status != "ok") ++row.failed;
    row.mean_time += r.time_s;
    if (r.gap) {
      gs += *r.gap;
      ++gc;
    }
    if (r.err) {
      es += *r.err;
      ++ec;
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& [gs, gc, es, ec] = sums[i];
    rows[i].mean_time /= rows[i].runs;
    if (gc) rows[i].mean_gap = gs / gc;
    if (ec) rows[i].mean_err = es / ec;
  }
  return rows;
}

/// Percentages with two decimals; time in seconds.
inline std::string summary_csv(const std::vector<SummaryRow>& rows, bool timing = true) {
  std::ostringstream os;
  for (const auto& f : facet_names()) os << f << ',';
  os << "algo,runs,failed,gap_pct,time_s,err_pct\n";
  for (const auto& r : rows) {
    for (const auto& f : r.facets) os << detail::csv_field(f) << ',';
    os << to_string(r.algo) << ',' << r.runs << ',' << r.failed << ',';
    if (r.mean_gap) os << detail::fixed(100 * *r.mean_gap, 2);
    os << ',';
    if (timing) os << detail::fixed(r.mean_time, 3);
    os << ',';
    if (r.mean_err) os << detail::fixed(100 * *r.mean_err, 2);
    os << '\n';
  }
  return os.str();
}

inline std::string summary_text(const std::vector<SummaryRow>& rows, bool timing = true) {
  std::ostringstream os;
  os << std::left << std::setw(10) << "JxM" << std::setw(6) << "mult" << std::setw(7) << "setup" << std::setw(6)
     << "wr" << std::setw(6) << "tau" << std::setw(9) << "algo" << std::right << std::setw(6) << "runs"
     << std::setw(10) << "Gap%" << std::setw(10) << "Time" << std::setw(10) << "Err%" << '\n';
  for (const auto& r : rows) {
    os << std::left << std::setw(10) << (r.facets[0] + "x" + r.facets[1]) << std::setw(6) << r.facets[2]
       << std::setw(7) << r.facets[3] << std::setw(6) << r.facets[4] << std::setw(6) << r.facets[5] << std::setw(9)
       << to_string(r.algo) << std::right << std::setw(6) << r.runs << std::setw(10)
       << (r.mean_gap ? detail::fixed(100 * *r.mean_gap, 2) : std::string("-")) << std::setw(10)
       << (timing ? detail::fixed(r.mean_time, 3) : std::string("-")) << std::setw(10)
       << (r.mean_err ? detail::fixed(100 * *r.mean_err, 2) : std::string("-")) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// What-if
// ---------------------------------------------------------------------------

enum class MachineSource { Clone, Draw };

struct WhatIf {
  std::optional<int> resources;
  int extra_machines = 0;
  MachineSource source = MachineSource::Clone;
  MachineId donor = 0;  // for Clone
};

/// Instance with the overrides applied. Added machines either copy the p/s
/// columns of `donor` or are drawn with the generator rules from the seed
/// and setup mode stored in meta.
inline Instance apply_whatif(const Instance& base, const WhatIf& w) {
  base.check();
  if (w.extra_machines < 0) throw Error("cannot remove machines");
  const int n = base.num_jobs, M0 = base.num_machines, M = M0 + w.extra_machines;
  Instance inst(n, M);
  inst.initial_setup = base.initial_setup;
  inst.due = base.due;
  inst.weight = base.weight;
  inst.meta = base.meta;
  inst.resources = base.resources;
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < M0; ++m) inst.p(j, m) = base.p(j, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < M0 && i != j; ++m) inst.s(i, j, m) = base.s(i, j, m);

  if (w.extra_machines > 0) {
    if (w.source == MachineSource::Clone) {
      if (w.donor < 0 || w.donor >= M0) throw Error("donor machine " + std::to_string(w.donor) + " does not exist");
      for (int m = M0; m < M; ++m) {
        for (int j = 0; j < n; ++j) inst.p(j, m) = base.p(j, w.donor);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            if (i != j) inst.s(i, j, m) = base.s(i, j, w.donor);
      }
      inst.meta["whatif_machines"] = "clone:" + std::to_string(w.donor) + "+" + std::to_string(w.extra_machines);
    } else {
      const auto seed_it = base.meta.find("seed");
      const auto setup_it = base.meta.find("setup");
      if (seed_it == base.meta.end() || setup_it == base.meta.end())
        throw Error("drawing machines needs generator seed and setup mode in the instance meta");
      const std::uint64_t seed = std::stoull(seed_it->second);
      const SetupMode mode = parse_setup_mode(setup_it->second);
      const auto b = generator_job_factors(seed, n);
      for (int m = M0; m < M; ++m) {
        Rng rng(derive_seed(seed, 100 + static_cast<std::uint64_t>(m)));
        for (int j = 0; j < n; ++j) {
          const double a = rng.uniform(1, 10);
          inst.p(j, m) = std::llround(b[j] * a + rng.uniform(0, 10));
        }
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double p = static_cast<double>(inst.p(j, m));
            switch (mode) {
              case SetupMode::AlphaLow: inst.s(i, j, m) = std::llround(rng.uniform(0.1, 0.5) * p); break;
              case SetupMode::AlphaHigh: inst.s(i, j, m) = std::llround(rng.uniform(0.5, 1.0) * p); break;
              case SetupMode::Uniform: inst.s(i, j, m) = std::llround(rng.uniform(5, 25)); break;
            }
          }
      }
      inst.meta["whatif_machines"] = "draw+" + std::to_string(w.extra_machines);
    }
  }
  if (w.resources) {
    if (*w.resources < 1 || *w.resources > M)
      throw Error("WR override " + std::to_string(*w.resources) + " outside [1, " + std::to_string(M) + "]");
    inst.resources = *w.resources;
    inst.meta["whatif_wr"] = std::to_string(*w.resources);
  }
  inst.check();
  return inst;
}

struct WhatIfResult {
  Cost base = 0;
  Cost scenario = 0;
  Cost change = 0;
  std::optional<double> change_pct;  // undefined when the base objective is 0 and the scenario is not
};

inline WhatIfResult compare_objectives(Cost base, Cost scenario) {
  WhatIfResult r{base, scenario, scenario - base, std::nullopt};
  if (base != 0) r.change_pct = 100.0 * static_cast<double>(r.change) / static_cast<double>(base);
  else if (scenario == 0) r.change_pct = 0.0;
  return r;
}

/// Solves the base and the modified instance with the same solver.
inline WhatIfResult whatif(const Instance& base, const WhatIf& w,
                           const std::function<TimedSchedule(const Instance&)>& solver) {
  const auto scenario = apply_whatif(base, w);
  return compare_objectives(solver(base).objective, solver(scenario).objective);
}

}  // namespace wtsched
