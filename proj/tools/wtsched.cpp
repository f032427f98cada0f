// wtsched command-line front end.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "wtsched/bench.hpp"
#include "wtsched/core.hpp"
#include "wtsched/heuristics.hpp"
#include "wtsched/instgen.hpp"
#include "wtsched/io.hpp"
#include "wtsched/oracle.hpp"
#include "wtsched/relaxation.hpp"
#include "wtsched/resalloc.hpp"
#include "wtsched/solve.hpp"

#ifndef WTSCHED_VERSION
#define WTSCHED_VERSION "dev"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace wtsched;

namespace {

constexpr const char* kSolverEnv = "WTSCHED_MILP_SOLVER";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 1;
  std::optional<double> time_limit;
  std::string format = "text";
  std::string log_level = "warn";
  bool no_timing = false;
};

struct Context {
  Globals g;
  std::string command;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  json config = json::object();

  double elapsed() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); }

  // RunMeta: command line, seed, versions, wall time, config echo.
  std::vector<std::string> meta_lines() const {
    std::vector<std::string> out;
    out.push_back("command: " + command);
    out.push_back("seed: " + std::to_string(g.seed));
    out.push_back(std::string("version: wtsched ") + WTSCHED_VERSION + ", " + compiler());
    if (!g.no_timing) {
      std::ostringstream os;
      os << std::fixed << std::setprecision(3) << elapsed();
      out.push_back("wall_time_s: " + os.str());
    }
    for (const auto& [k, v] : config.items()) out.push_back("config " + k + ": " + cell(v));
    return out;
  }

  static std::string compiler() {
#if defined(__clang__)
    return "clang " __clang_version__;
#elif defined(__GNUC__)
    return "gcc " __VERSION__;
#else
    return "unknown compiler";
#endif
  }

  static std::string cell(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    return v.dump();
  }

  std::string stamped(const std::string& text, const std::string& prefix) const {
    std::string head;
    for (const auto& l : meta_lines()) head += prefix + l + "\n";
    return head + text;
  }

  void write(const std::string& path, const std::string& text, const std::string& comment = "# ") const {
    io::write_file(path, stamped(text, comment));
    spdlog::info("wrote {}", path);
  }

  void write_sidecar(const std::string& path) const {
    std::string text;
    for (const auto& l : meta_lines()) text += l + "\n";
    io::write_file(path, text);
  }

  // One object renders as key/value lines, several as a table.
  void emit(const std::vector<json>& rows, bool table = false) const {
    if (rows.empty()) return;
    if (g.format == "json") {
      json doc = table || rows.size() > 1 ? json(rows) : rows[0];
      std::cout << doc.dump(2) << "\n";
      return;
    }
    std::vector<std::string> keys;
    for (const auto& r : rows)
      for (const auto& [k, _] : r.items())
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    auto get = [](const json& r, const std::string& k) { return r.contains(k) ? cell(r.at(k)) : std::string(); };
    if (g.format == "csv") {
      for (std::size_t i = 0; i < keys.size(); ++i) std::cout << (i ? "," : "") << keys[i];
      std::cout << "\n";
      for (const auto& r : rows) {
        for (std::size_t i = 0; i < keys.size(); ++i) std::cout << (i ? "," : "") << get(r, keys[i]);
        std::cout << "\n";
      }
      return;
    }
    if (!table && rows.size() == 1) {
      std::size_t w = 0;
      for (const auto& k : keys) w = std::max(w, k.size());
      for (const auto& k : keys) std::cout << std::left << std::setw(static_cast<int>(w) + 2) << k << get(rows[0], k) << "\n";
      return;
    }
    std::vector<std::size_t> w(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
      w[i] = keys[i].size();
      for (const auto& r : rows) w[i] = std::max(w[i], get(r, keys[i]).size());
    }
    for (std::size_t i = 0; i < keys.size(); ++i) std::cout << std::left << std::setw(static_cast<int>(w[i]) + 2) << keys[i];
    std::cout << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < keys.size(); ++i)
        std::cout << std::left << std::setw(static_cast<int>(w[i]) + 2) << get(r, keys[i]);
      std::cout << "\n";
    }
  }
};

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

Instance load_instance(const std::string& path) { return io::read_instance(io::read_file(path)); }

std::string plan_text(const SequencePlan& plan) { return io::write_plan(plan); }

// GA/SA options shared by solve and whatif.
struct AlgoFlags {
  SolveOptions opt;

  void attach(CLI::App* sub) {
    sub->add_option("--ga-pop", opt.ga.population, "GA population size")->capture_default_str();
    sub->add_option("--ga-gens", opt.ga.generations, "GA generations")->capture_default_str();
    sub->add_option("--ga-pc", opt.ga.crossover, "GA crossover threshold")->capture_default_str();
    sub->add_option("--ga-pm", opt.ga.mutation, "GA mutation probability")->capture_default_str();
    sub->add_option("--sa-t0", opt.sa.t0, "SA initial temperature")->capture_default_str();
    sub->add_option("--sa-tcry", opt.sa.t_cry, "SA final temperature")->capture_default_str();
    sub->add_option("--sa-q", opt.sa.q, "SA cooling factor")->capture_default_str();
    sub->add_option("--sa-it", opt.sa.iterations, "SA iterations per temperature")->capture_default_str();
  }

  SolveOptions resolved(const Globals& g) const {
    SolveOptions o = opt;
    if (g.time_limit) o.ga.time_limit = o.sa.time_limit = *g.time_limit;
    o.ga.check();
    o.sa.check();
    return o;
  }

  void echo(json& cfg, Algo algo) const {
    if (algo == Algo::Ga || algo == Algo::SaGa) {
      cfg["ga_pop"] = opt.ga.population;
      cfg["ga_gens"] = opt.ga.generations;
      cfg["ga_pc"] = opt.ga.crossover;
      cfg["ga_pm"] = opt.ga.mutation;
    }
    if (algo == Algo::SaAtcs || algo == Algo::SaGa) {
      cfg["sa_t0"] = opt.sa.t0;
      cfg["sa_tcry"] = opt.sa.t_cry;
      cfg["sa_q"] = opt.sa.q;
      cfg["sa_it"] = opt.sa.iterations;
    }
  }
};

const std::vector<std::string> kAlgoNames{"atcs", "ga", "sa-atcs", "sa-ga", "mip"};

// ---------------------------------------------------------------------------

struct GenCmd {
  GenConfig cfg;
  std::string setup = "alo", wr = "half", out;

  void attach(CLI::App* sub) {
    sub->add_option("--machines", cfg.machines, "number of machines")->capture_default_str();
    sub->add_option("--mult", cfg.jobs_multiplier, "jobs per machine")->capture_default_str();
    sub->add_option("--setup", setup, "setup mode")->check(CLI::IsMember({"alo", "ahi", "u525"}))->capture_default_str();
    sub->add_option("--tau", cfg.tau, "tardiness factor")->capture_default_str();
    sub->add_option("--range,-R", cfg.due_range, "due-date range")->capture_default_str();
    sub->add_option("--wr", wr, "resource mode")->check(CLI::IsMember({"half", "full"}))->capture_default_str();
    sub->add_option("--out", out, "instance file (stdout if omitted)");
  }

  void run(Context& ctx) {
    cfg.setup_mode = parse_setup_mode(setup);
    cfg.wr_mode = parse_wr_mode(wr);
    cfg.seed = ctx.g.seed;
    ctx.config = {{"machines", cfg.machines}, {"mult", cfg.jobs_multiplier}, {"setup", setup},
                  {"tau", cfg.tau},           {"R", cfg.due_range},         {"wr", wr}};
    const auto inst = generate(cfg);
    const auto text = io::write_instance(inst);
    if (out.empty()) {
      std::cout << ctx.stamped(text, "# ");
    } else {
      ctx.write(out, text);
      ctx.emit({json{{"instance", out}, {"jobs", inst.num_jobs}, {"machines", inst.num_machines}, {"WR", inst.resources}}});
    }
  }
};

struct StatsCmd {
  std::string instance;

  void attach(CLI::App* sub) { sub->add_option("--instance", instance, "instance file")->required(); }

  void run(Context& ctx) {
    const auto inst = load_instance(instance);
    const auto st = stats(inst);
    ctx.emit({json{{"jobs", inst.num_jobs},
                   {"machines", inst.num_machines},
                   {"WR", inst.resources},
                   {"cmax_estimate", st.cmax_estimate},
                   {"tau", std::stod(fixed(st.tau_real, 6))},
                   {"R", std::stod(fixed(st.range_real, 6))},
                   {"mean_p", std::stod(fixed(st.mean_p, 6))},
                   {"mean_s", std::stod(fixed(st.mean_s, 6))}}});
  }
};

struct LbCmd {
  std::string instance, export_path, import_path, solver, solution, plan_out;
  std::optional<Cost> ub;
  bool tiny = false;

  void attach(CLI::App* sub) {
    sub->add_option("--instance", instance, "instance file")->required();
    sub->add_option("--ub", ub, "primal upper bound that sets the time horizon (default: ATCS)");
    auto* ex = sub->add_option("--export", export_path, "write the relaxation as an MPS file");
    auto* tn = sub->add_flag("--tiny", tiny, "solve the relaxation in-process (small instances only)");
    auto* im = sub->add_option("--import", import_path, "read a solver solution file");
    ex->excludes(tn);
    im->excludes(tn);
    sub->add_option("--solver", solver,
                    std::string("solver command template with {model} and {solution}; default $") + kSolverEnv);
    sub->add_option("--solution", solution, "solution file the solver writes (default: <export>.sol)");
    sub->add_option("--plan-out", plan_out, "write the relaxation's sequences as a plan file");
  }

  void run(Context& ctx) {
    if (!tiny && export_path.empty() && import_path.empty())
      throw UsageError("lb needs one of --export, --tiny or --import");
    if (solver.empty())
      if (const char* env = std::getenv(kSolverEnv)) solver = env;
    const auto inst = load_instance(instance);
    if (!ub) {
      const auto [tau, range] = due_factors(inst);
      ub = mip_primal(inst, atcs_sequence(inst, atcs_scaling(inst, tau, range))).objective;
      spdlog::info("upper bound from ATCS: {}", *ub);
    }
    const Time t_max = compute_tmax(inst, *ub);
    ctx.config = {{"instance", instance}, {"ub", *ub}, {"t_max", t_max}};
    json row{{"ub", *ub}, {"t_max", t_max}};

    std::optional<LowerBoundResult> res;
    if (tiny) {
      res = solve_tiny_exact(inst, TinyCaps{}, t_max);
    } else {
      const auto model = build_relaxation(inst, t_max);
      row["columns"] = model.num_cols();
      row["rows"] = model.num_rows();
      row["nonzeros"] = model.lp.nonzeros();
      if (!export_path.empty()) {
        ctx.write(export_path, export_model(model), "* ");
        if (!solver.empty()) {
          const std::string sol = solution.empty() ? export_path + ".sol" : solution;
          std::string cmd = solver;
          for (const auto& [key, val] : {std::pair{std::string("{model}"), export_path}, std::pair{std::string("{solution}"), sol}})
            for (auto p = cmd.find(key); p != std::string::npos; p = cmd.find(key, p + val.size())) cmd.replace(p, key.size(), val);
          spdlog::info("running solver: {}", cmd);
          if (const int rc = std::system(cmd.c_str()); rc != 0)
            throw Error("solver command exited with status " + std::to_string(rc));
          if (import_path.empty()) import_path = sol;
        }
      }
      if (!import_path.empty()) res = import_solution(model, io::read_file(import_path));
    }
    if (res) {
      row["bound"] = res->bound;
      row["status"] = to_string(res->status);
      if (res->objective) row["solver_objective"] = *res->objective;
      if (res->plan) {
        if (!plan_out.empty()) ctx.write(plan_out, plan_text(*res->plan));
        for (int m = 0; m < inst.num_machines; ++m) {
          std::string s;
          for (JobId j : res->plan->seq[m]) s += (s.empty() ? "" : " ") + std::to_string(j);
          row["machine_" + std::to_string(m)] = s;
        }
      }
    }
    ctx.emit({row});
  }
};

struct AllocCmd {
  std::string instance, plan, out;
  bool greedy = false;

  void attach(CLI::App* sub) {
    sub->add_option("--instance", instance, "instance file")->required();
    sub->add_option("--plan", plan, "plan file (per-machine job order)")->required();
    sub->add_flag("--greedy", greedy, "list-scheduling heuristic instead of the exact search");
    sub->add_option("--out", out, "schedule file");
  }

  void run(Context& ctx) {
    const auto inst = load_instance(instance);
    const auto p = io::read_plan(io::read_file(plan));
    ctx.config = {{"instance", instance}, {"plan", plan}, {"method", greedy ? "greedy" : "exact"}};
    AllocStats st;
    AllocLimits limits;
    if (ctx.g.time_limit) limits.time_cap = *ctx.g.time_limit;
    const auto sched = greedy ? allocate_greedy(inst, p) : allocate_exact(inst, p, limits, &st);
    if (!out.empty()) ctx.write(out, io::write_schedule(sched));
    json row{{"objective", sched.objective}, {"optimal_alloc", sched.proven_optimal_allocation}};
    if (!greedy) row["nodes"] = st.nodes;
    ctx.emit({row});
  }
};

struct SolveCmd {
  std::string instance, algo, out, relaxation_plan;
  int runs = 1;
  AlgoFlags flags;

  void attach(CLI::App* sub) {
    sub->add_option("--instance", instance, "instance file")->required();
    sub->add_option("--algo", algo, "algorithm")->required()->check(CLI::IsMember(kAlgoNames));
    flags.attach(sub);
    sub->add_option("--runs", runs, "independent runs; the best schedule is written")->capture_default_str();
    sub->add_option("--out", out, "schedule file")->required();
    sub->add_option("--relaxation-plan", relaxation_plan, "sequences for mip (default: in-process relaxation)");
  }

  void run(Context& ctx) {
    if (runs < 1) throw UsageError("--runs must be >= 1");
    const auto inst = load_instance(instance);
    const Algo a = parse_algo(algo);
    auto opt = flags.resolved(ctx.g);
    if (!relaxation_plan.empty()) opt.relaxation_plan = io::read_plan(io::read_file(relaxation_plan));
    ctx.config = {{"instance", instance}, {"algo", algo}, {"runs", runs}};
    flags.echo(ctx.config, a);
    std::vector<json> rows;
    std::optional<SolveOutcome> best;
    for (int r = 0; r < runs; ++r) {
      const std::uint64_t seed = ctx.g.seed + static_cast<std::uint64_t>(r);
      const auto t0 = std::chrono::steady_clock::now();
      auto res = solve(inst, a, opt, seed);
      const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      json row{{"run", r}, {"seed", seed}, {"objective", res.schedule.objective},
               {"optimal_alloc", res.schedule.proven_optimal_allocation}, {"cp_calls", res.cp_calls},
               {"pruned", res.pruned}};
      if (!ctx.g.no_timing) row["time_s"] = fixed(t, 3);
      rows.push_back(row);
      spdlog::info("run {} seed {} objective {}", r, seed, res.schedule.objective);
      if (!best || res.schedule.objective < best->schedule.objective) best = std::move(res);
    }
    ctx.write(out, io::write_schedule(best->schedule));
    ctx.emit(rows, true);
  }
};

struct OracleCmd {
  std::string instance, out;

  void attach(CLI::App* sub) {
    sub->add_option("--instance", instance, "instance file")->required();
    sub->add_option("--out", out, "schedule file")->required();
  }

  void run(Context& ctx) {
    const auto inst = load_instance(instance);
    ctx.config = {{"instance", instance}};
    const auto sched = solve_exact_tiny(inst);
    ctx.write(out, io::write_schedule(sched));
    ctx.emit({json{{"objective", sched.objective}, {"proven", true}}});
  }
};

struct BenchCmd {
  std::string suite_path, out;
  std::optional<int> reps;
  int workers = 1;

  void attach(CLI::App* sub) {
    sub->add_option("--suite", suite_path, "suite file")->required();
    sub->add_option("--reps", reps, "repetitions per (instance, algorithm); overrides the suite");
    sub->add_option("--workers", workers, "parallel cells")->capture_default_str();
    sub->add_option("--out", out, "output directory")->required();
  }

  void run(Context& ctx, bool seed_given) {
    if (workers < 1) throw UsageError("--workers must be >= 1");
    auto suite = parse_suite(io::read_file(suite_path), fs::path(suite_path).parent_path());
    if (reps) suite.reps = *reps;
    if (suite.reps < 1) throw UsageError("--reps must be >= 1");
    if (seed_given) suite.seed = ctx.g.seed;
    if (ctx.g.time_limit) suite.options.ga.time_limit = suite.options.sa.time_limit = *ctx.g.time_limit;
    ctx.g.seed = suite.seed;
    ctx.config = {{"suite", suite_path}, {"reps", suite.reps}, {"workers", workers}};
    const auto res = run_suite(suite, {workers, !ctx.g.no_timing});
    const auto rows = summarize(res);
    fs::create_directories(out);
    const bool timing = !ctx.g.no_timing;
    io::write_file((fs::path(out) / "runs.csv").string(), runs_csv(res, timing));
    io::write_file((fs::path(out) / "summary.csv").string(), summary_csv(rows, timing));
    io::write_file((fs::path(out) / "summary.txt").string(), summary_text(rows, timing));
    ctx.write_sidecar((fs::path(out) / "meta.txt").string());
    spdlog::info("wrote {} runs to {}", res.runs.size(), out);
    if (ctx.g.format == "text") {
      std::cout << summary_text(rows, timing);
    } else if (ctx.g.format == "csv") {
      std::cout << summary_csv(rows, timing);
    } else {
      std::vector<json> js;
      for (const auto& r : rows) {
        json j;
        for (std::size_t i = 0; i < r.facets.size(); ++i) j[facet_names()[i]] = r.facets[i];
        j["algo"] = to_string(r.algo);
        j["runs"] = r.runs;
        j["failed"] = r.failed;
        j["gap_pct"] = r.mean_gap ? json(fixed(100 * *r.mean_gap, 2)) : json();
        if (timing) j["time_s"] = fixed(r.mean_time, 3);
        j["err_pct"] = r.mean_err ? json(fixed(100 * *r.mean_err, 2)) : json();
        js.push_back(j);
      }
      ctx.emit(js, true);
    }
    for (const auto& r : res.runs)
      if (r.status != "ok") spdlog::warn("{} {} rep {}: {}", r.instance_id, to_string(r.algo), r.rep, r.status);
  }
};

struct WhatIfCmd {
  std::string instance, algo = "ga", scenario_out;
  std::optional<int> wr;
  int add_machines = 0;
  int donor = 0;
  bool draw = false;
  AlgoFlags flags;

  void attach(CLI::App* sub) {
    sub->add_option("--instance", instance, "instance file")->required();
    sub->add_option("--wr", wr, "new number of setup resources");
    sub->add_option("--add-machines", add_machines, "machines to add")->capture_default_str();
    auto* d = sub->add_option("--donor", donor, "machine whose data the new machines copy")->capture_default_str();
    sub->add_flag("--draw", draw, "draw new machines with the generator rules instead of copying")->excludes(d);
    sub->add_option("--algo", algo, "algorithm")->check(CLI::IsMember(kAlgoNames))->capture_default_str();
    flags.attach(sub);
    sub->add_option("--scenario-out", scenario_out, "write the modified instance");
  }

  void run(Context& ctx) {
    if (!wr && add_machines == 0) throw UsageError("whatif needs --wr or --add-machines");
    const auto base = load_instance(instance);
    WhatIf w;
    w.resources = wr;
    w.extra_machines = add_machines;
    w.source = draw ? MachineSource::Draw : MachineSource::Clone;
    w.donor = donor;
    const Algo a = parse_algo(algo);
    const auto opt = flags.resolved(ctx.g);
    ctx.config = {{"instance", instance}, {"algo", algo}};
    if (wr) ctx.config["wr"] = *wr;
    if (add_machines) ctx.config["add_machines"] = draw ? "draw:" + std::to_string(add_machines)
                                                       : "clone:" + std::to_string(donor) + "+" + std::to_string(add_machines);
    flags.echo(ctx.config, a);
    const auto scenario = apply_whatif(base, w);
    if (!scenario_out.empty()) ctx.write(scenario_out, io::write_instance(scenario));
    const auto solver = [&](const Instance& inst) { return solve(inst, a, opt, ctx.g.seed).schedule; };
    const auto r = whatif(base, w, solver);
    json row{{"base_objective", r.base}, {"scenario_objective", r.scenario}, {"change", r.change},
             {"change_pct", r.change_pct ? json(fixed(*r.change_pct, 2)) : json()},
             {"machines", std::to_string(base.num_machines) + "->" + std::to_string(scenario.num_machines)},
             {"WR", std::to_string(base.resources) + "->" + std::to_string(scenario.resources)}};
    ctx.emit({row});
  }
};

struct ValidateCmd {
  std::string instance, schedule;

  void attach(CLI::App* sub) {
    sub->add_option("--instance", instance, "instance file")->required();
    sub->add_option("--schedule", schedule, "schedule file")->required();
  }

  // Returns false when the schedule is infeasible.
  bool run(Context& ctx) {
    const auto inst = load_instance(instance);
    const auto sched = io::read_schedule(io::read_file(schedule));
    const auto rep = validate(inst, sched);
    std::vector<json> rows{json{{"feasible", rep.feasible},
                                {"objective", sched.objective},
                                {"violations", rep.violations.size()}}};
    ctx.emit(rows);
    for (const auto& v : rep.violations) std::cerr << "violation " << v.kind << ": " << v.detail << "\n";
    return rep.feasible;
  }
};

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    const std::string a = argv[i];
    s += a.find(' ') == std::string::npos ? a : "'" + a + "'";
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted-tardiness scheduling on unrelated parallel machines with a setup-resource limit", "wtsched"};
  app.set_version_flag("--version", WTSCHED_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  app.failure_message(CLI::FailureMessage::help);

  Context ctx;
  ctx.command = join_args(argc, argv);
  auto* seed_opt = app.add_option("--seed", ctx.g.seed, "master random seed")->capture_default_str();
  app.add_option("--time-limit", ctx.g.time_limit, "seconds per GA/SA run or exact allocation");
  app.add_option("--format", ctx.g.format, "report format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
  app.add_option("--log-level", ctx.g.log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}))
      ->capture_default_str();
  app.add_flag("--no-timing", ctx.g.no_timing, "leave wall-clock values out of every output");

  GenCmd gen;
  StatsCmd st;
  LbCmd lb;
  AllocCmd alloc;
  SolveCmd solve_cmd;
  OracleCmd oracle;
  BenchCmd bench;
  WhatIfCmd wi;
  ValidateCmd val;
  auto* s_gen = app.add_subcommand("gen", "generate a random instance");
  auto* s_stats = app.add_subcommand("stats", "instance statistics");
  auto* s_lb = app.add_subcommand("lb", "lower bound from the time-indexed relaxation");
  auto* s_alloc = app.add_subcommand("alloc", "time a fixed plan under the resource limit");
  auto* s_solve = app.add_subcommand("solve", "run a primal method");
  auto* s_oracle = app.add_subcommand("oracle", "exhaustive optimum for tiny instances");
  auto* s_bench = app.add_subcommand("bench", "run a benchmark suite");
  auto* s_whatif = app.add_subcommand("whatif", "compare the objective under changed resources or machines");
  auto* s_val = app.add_subcommand("validate", "check a schedule against an instance");
  gen.attach(s_gen);
  st.attach(s_stats);
  lb.attach(s_lb);
  alloc.attach(s_alloc);
  solve_cmd.attach(s_solve);
  oracle.attach(s_oracle);
  bench.attach(s_bench);
  wi.attach(s_whatif);
  val.attach(s_val);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  auto logger = spdlog::stderr_color_mt("wtsched");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::from_str(ctx.g.log_level));

  try {
    if (s_gen->parsed()) gen.run(ctx);
    else if (s_stats->parsed()) st.run(ctx);
    else if (s_lb->parsed()) lb.run(ctx);
    else if (s_alloc->parsed()) alloc.run(ctx);
    else if (s_solve->parsed()) solve_cmd.run(ctx);
    else if (s_oracle->parsed()) oracle.run(ctx);
    else if (s_bench->parsed()) bench.run(ctx, seed_opt->count() > 0);
    else if (s_whatif->parsed()) wi.run(ctx);
    else if (s_val->parsed()) return val.run(ctx) ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
