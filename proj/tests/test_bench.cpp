#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"
#include "wtsched/bench.hpp"

using namespace wtsched;
using wtsched::testing::contention_instance;
using wtsched::testing::contention_plan;

TEST(Metrics, Gap) {
  EXPECT_DOUBLE_EQ(gap(100, 80), 0.20);
  EXPECT_DOUBLE_EQ(gap(100, 0), 1.0);
  EXPECT_DOUBLE_EQ(gap(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(gap(50, 50), 0.0);
  EXPECT_THROW(gap(80, 100), BoundViolation);
  EXPECT_THROW(gap(10, -1), Error);
}

TEST(Metrics, Err) {
  EXPECT_DOUBLE_EQ(err(200, 100), 0.5);
  EXPECT_DOUBLE_EQ(err(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(err(7, 7), 0.0);
  EXPECT_THROW(err(100, 200), BoundViolation);
}

TEST(Suite, ParsesKeysAndComments) {
  const auto s = parse_suite(
      "# grid\n"
      "machines 2 3\n"
      "mult 2\n"
      "setup alo ahi u525   # all three\n"
      "tau 0.2 0.5\n"
      "wr half\n"
      "count 2\n"
      "algos atcs sa-atcs\n"
      "reps 3\n"
      "lb tiny\n"
      "ga-pop 20\n"
      "sa-it 7\n");
  EXPECT_EQ(s.machines, (std::vector<int>{2, 3}));
  EXPECT_EQ(s.setups.size(), 3u);
  EXPECT_EQ(s.count, 2);
  EXPECT_EQ(s.reps, 3);
  EXPECT_EQ(s.bound, BoundSource::Tiny);
  EXPECT_EQ(s.options.ga.population, 20);
  EXPECT_EQ(s.options.sa.iterations, 7);
  EXPECT_EQ(suite_instances(s).size(), 2u * 3 * 2 * 2);
}

TEST(Suite, RejectsBadInput) {
  EXPECT_THROW(parse_suite("machines two\n"), ParseError);
  EXPECT_THROW(parse_suite("colour red\n"), ParseError);
  EXPECT_THROW(parse_suite("algos tabu\n"), ParseError);
  EXPECT_THROW(parse_suite("reps 0\n"), ParseError);
  EXPECT_THROW(parse_suite("lb cplex\n"), ParseError);
  EXPECT_THROW(parse_suite("mult\n"), ParseError);
}

namespace {

Suite tiny_suite() {
  return parse_suite(
      "machines 2\nmult 2\nsetup alo\nwr half\ncount 3\nalgos atcs ga sa-atcs\nreps 2\nlb tiny\n"
      "ga-pop 10\nga-gens 4\nsa-it 3\n");
}

}  // namespace

TEST(RunSuite, CellOrderAndMetrics) {
  const auto s = tiny_suite();
  const auto res = run_suite(s);
  ASSERT_EQ(res.runs.size(), 3u * 3 * 2);
  for (const auto& r : res.runs) {
    EXPECT_EQ(r.status, "ok");
    ASSERT_TRUE(r.objective && r.lower_bound && r.gap && r.err);
    EXPECT_LE(*r.lower_bound, *r.objective);
    EXPECT_GE(*r.gap, 0.0);
    EXPECT_LE(*r.gap, 1.0);
    EXPECT_GE(*r.err, 0.0);
  }
  EXPECT_EQ(res.runs[0].algo, Algo::Atcs);
  EXPECT_EQ(res.runs[2].algo, Algo::Ga);
  EXPECT_EQ(res.runs[1].rep, 1);
}

TEST(RunSuite, WorkersDoNotChangeOutput) {
  const auto s = tiny_suite();
  const auto a = runs_csv(run_suite(s, {1, false}), false);
  const auto b = runs_csv(run_suite(s, {3, false}), false);
  EXPECT_EQ(a, b);
}

TEST(RunSuite, CsvShape) {
  const auto res = run_suite(tiny_suite(), {1, false});
  std::istringstream is(runs_csv(res, false));
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header,
            "instance_id,jobs,machines,mult,setup,wr,tau,algo,rep,seed,objective,time_s,lower_bound,gap,err,"
            "optimal_alloc,cp_calls,pruned,status");
  int lines = 0;
  for (std::string line; std::getline(is, line);) {
    ++lines;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 18) << line;
  }
  EXPECT_EQ(lines, 18);
}

TEST(Summary, MeansPerGroup) {
  SuiteResult res;
  RunRecord r;
  r.facets = {"4", "2", "2", "alo", "half", "0.5"};
  r.objective = 10;
  r.gap = 0.2;
  r.err = 0.0;
  res.runs.push_back(r);
  r.gap = 0.4;
  r.err = 0.5;
  res.runs.push_back(r);
  r.algo = Algo::Ga;
  res.runs.push_back(r);
  const auto rows = summarize(res);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].runs, 2);
  EXPECT_NEAR(*rows[0].mean_gap, 0.3, 1e-12);
  EXPECT_NEAR(*rows[0].mean_err, 0.25, 1e-12);
  const auto csv = summary_csv(rows, false);
  EXPECT_NE(csv.find("atcs,2,0,30.00,,25.00"), std::string::npos) << csv;
}

namespace {

TimedSchedule fixed_plan_solver(const Instance& inst) { return mip_primal(inst, contention_plan()); }

}  // namespace

TEST(WhatIf, NoOverridesNoChange) {
  const auto r = whatif(contention_instance(1), {}, fixed_plan_solver);
  EXPECT_EQ(r.change, 0);
  EXPECT_DOUBLE_EQ(*r.change_pct, 0.0);
}

TEST(WhatIf, MoreResourcesNeverHurtFixedPlan) {
  WhatIf w;
  w.resources = 2;
  const auto r = whatif(contention_instance(1), w, fixed_plan_solver);
  EXPECT_EQ(r.base, objective_of(contention_instance(1), allocate_exact(contention_instance(1), contention_plan()).jobs));
  EXPECT_LE(r.scenario, r.base);
  EXPECT_LT(r.scenario, r.base);
}

TEST(WhatIf, PercentChange) {
  EXPECT_DOUBLE_EQ(*compare_objectives(200, 150).change_pct, -25.0);
  EXPECT_FALSE(compare_objectives(0, 5).change_pct.has_value());
}

TEST(WhatIf, CloneCopiesDonorColumns) {
  const auto base = contention_instance(1);
  WhatIf w;
  w.extra_machines = 2;
  w.donor = 1;
  const auto inst = apply_whatif(base, w);
  ASSERT_EQ(inst.num_machines, 4);
  EXPECT_EQ(inst.resources, 1);
  for (int j = 0; j < 4; ++j) {
    EXPECT_EQ(inst.p(j, 3), base.p(j, 1));
    EXPECT_EQ(inst.p(j, 0), base.p(j, 0));
  }
  EXPECT_EQ(inst.s(0, 2, 2), base.s(0, 2, 1));
  w.donor = 5;
  EXPECT_THROW(apply_whatif(base, w), Error);
}

TEST(WhatIf, DrawNeedsGeneratorMeta) {
  WhatIf w;
  w.extra_machines = 1;
  w.source = MachineSource::Draw;
  EXPECT_THROW(apply_whatif(contention_instance(1), w), Error);
  GenConfig cfg;
  cfg.seed = 9;
  const auto base = generate(cfg);
  const auto a = apply_whatif(base, w);
  const auto b = apply_whatif(base, w);
  EXPECT_EQ(a.processing, b.processing);
  EXPECT_EQ(a.num_machines, 3);
  for (int j = 0; j < a.num_jobs; ++j) EXPECT_GE(a.p(j, 2), 1);
}

TEST(WhatIf, RejectsBadResources) {
  WhatIf w;
  w.resources = 3;
  EXPECT_THROW(apply_whatif(contention_instance(1), w), Error);
  w.resources = 0;
  EXPECT_THROW(apply_whatif(contention_instance(1), w), Error);
}
