#include <gtest/gtest.h>

#include "cli_runner.hpp"
#include "wtsched/io.hpp"
#include "wtsched/relaxation.hpp"

using namespace wtsched;
using wtsched::testing::Scratch;

TEST(Cli, GenSolveValidate) {
  Scratch s("cli_happy");
  ASSERT_EQ(s.run("gen --machines 2 --mult 5 --seed 7 --out i.txt").code, 0);
  const auto solved = s.run("solve --instance i.txt --algo atcs --out s.txt");
  ASSERT_EQ(solved.code, 0) << solved.output;
  const auto v = s.run("validate --instance i.txt --schedule s.txt");
  EXPECT_EQ(v.code, 0) << v.output;
  EXPECT_NE(v.output.find("feasible    true"), std::string::npos) << v.output;
}

TEST(Cli, UsageErrors) {
  Scratch s("cli_usage");
  EXPECT_EQ(s.run("solve --algo ga").code, 2);
  EXPECT_EQ(s.run("").code, 2);
  EXPECT_EQ(s.run("frobnicate").code, 2);
  EXPECT_EQ(s.run("gen --setup beta").code, 2);
  ASSERT_EQ(s.run("gen --out i.txt").code, 0);
  EXPECT_EQ(s.run("lb --instance i.txt").code, 2);
  EXPECT_EQ(s.run("lb --instance i.txt --tiny --export m.mps").code, 2);
  EXPECT_EQ(s.run("whatif --instance i.txt").code, 2);
  EXPECT_EQ(s.run("--help").code, 0);
}

TEST(Cli, DomainErrors) {
  Scratch s("cli_domain");
  ASSERT_EQ(s.run("gen --machines 2 --mult 6 --out big.txt").code, 0);  // 12 jobs
  const auto r = s.run("lb --instance big.txt --tiny");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("at most"), std::string::npos) << r.output;
  EXPECT_EQ(s.run("stats --instance missing.txt").code, 1);
  EXPECT_EQ(s.run("oracle --instance big.txt --out o.txt").code, 1);
}

TEST(Cli, InfeasibleScheduleFailsValidation) {
  Scratch s("cli_invalid");
  ASSERT_EQ(s.run("gen --machines 2 --mult 2 --out i.txt").code, 0);
  ASSERT_EQ(s.run("solve --instance i.txt --algo atcs --out s.txt").code, 0);
  auto sched = io::read_schedule(io::read_file(s.path("s.txt")));
  sched.jobs[0].completion -= 1;
  io::write_file(s.path("bad.txt"), io::write_schedule(sched));
  EXPECT_EQ(s.run("validate --instance i.txt --schedule bad.txt").code, 1);
}

TEST(Cli, OutputsAreReproducible) {
  Scratch s("cli_repro");
  ASSERT_EQ(s.run("--no-timing gen --seed 3 --out a.txt").code, 0);
  ASSERT_EQ(s.run("--no-timing gen --seed 3 --out b.txt").code, 0);
  EXPECT_EQ(io::read_file(s.path("a.txt")).substr(io::read_file(s.path("a.txt")).find("wtsched-instance")),
            io::read_file(s.path("b.txt")).substr(io::read_file(s.path("b.txt")).find("wtsched-instance")));
  ASSERT_EQ(s.run("--no-timing solve --instance a.txt --algo sa-atcs --sa-it 4 --seed 9 --out x.txt").code, 0);
  ASSERT_EQ(s.run("--no-timing solve --instance a.txt --algo sa-atcs --sa-it 4 --seed 9 --out y.txt").code, 0);
  const auto x = io::read_file(s.path("x.txt")), y = io::read_file(s.path("y.txt"));
  EXPECT_EQ(x.substr(x.find("objective")), y.substr(y.find("objective")));
}

TEST(Cli, FilesCarryRunMeta) {
  Scratch s("cli_meta");
  ASSERT_EQ(s.run("gen --mult 2 --seed 5 --out i.txt").code, 0);
  ASSERT_EQ(s.run("solve --instance i.txt --algo ga --ga-pop 6 --ga-gens 2 --out s.txt").code, 0);
  const auto text = io::read_file(s.path("s.txt"));
  EXPECT_NE(text.find("# command: "), std::string::npos);
  EXPECT_NE(text.find("# seed: "), std::string::npos);
  EXPECT_NE(text.find("# version: wtsched"), std::string::npos);
  EXPECT_NE(text.find("# wall_time_s: "), std::string::npos);
  EXPECT_NE(text.find("# config ga_pop: 6"), std::string::npos);
}

TEST(Cli, ExternalSolverRoundTrip) {
  Scratch s("cli_solver");
  ASSERT_EQ(s.run("gen --machines 2 --mult 2 --seed 4 --out i.txt").code, 0);
  const auto inst = io::read_instance(io::read_file(s.path("i.txt")));
  const Cost ub = 5000;
  const auto tiny = solve_tiny_exact(inst, {}, compute_tmax(inst, ub));
  ASSERT_TRUE(tiny.plan);
  const auto model = build_relaxation(inst, compute_tmax(inst, ub));
  const auto values = relaxed_assignment(model, inst, *tiny.plan);
  io::write_file(s.path("pre.sol"), write_solution(model, values, static_cast<double>(tiny.bound),
                                                   static_cast<double>(tiny.bound)));
  // A stand-in solver that copies a prepared solution.
  const auto r = s.run("lb --instance i.txt --ub 5000 --export m.mps --solver 'cp pre.sol {solution}' --plan-out p.txt");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("bound             " + std::to_string(tiny.bound)), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("optimal"), std::string::npos);
  EXPECT_EQ(io::read_plan(io::read_file(s.path("p.txt"))).seq, tiny.plan->seq);
  ASSERT_EQ(s.run("solve --instance i.txt --algo mip --relaxation-plan p.txt --out s.txt").code, 0);

  const auto imp = s.run("lb --instance i.txt --ub 5000 --import m.mps.sol");
  EXPECT_EQ(imp.code, 0) << imp.output;
  EXPECT_EQ(s.run("lb --instance i.txt --ub 5000 --export m2.mps --solver false").code, 1);
}

TEST(Cli, JsonAndCsvReports) {
  Scratch s("cli_formats");
  ASSERT_EQ(s.run("gen --mult 2 --out i.txt").code, 0);
  const auto j = s.run("--format json stats --instance i.txt");
  ASSERT_EQ(j.code, 0);
  EXPECT_EQ(j.output.front(), '{');
  EXPECT_NE(j.output.find("\"cmax_estimate\":"), std::string::npos);
  const auto c = s.run("stats --instance i.txt --format csv");
  ASSERT_EQ(c.code, 0);
  EXPECT_EQ(c.output.substr(0, 21), "jobs,machines,WR,cmax");
}

TEST(Cli, BenchIsByteIdentical) {
  Scratch s("cli_bench");
  io::write_file(s.path("suite.txt"),
                 "machines 2\nmult 2\nsetup alo\ncount 2\nalgos atcs ga sa-atcs sa-ga mip\nlb tiny\n"
                 "ga-pop 10\nga-gens 4\nsa-it 3\n");
  ASSERT_EQ(s.run("bench --suite suite.txt --reps 2 --workers 2 --out a --no-timing").code, 0);
  ASSERT_EQ(s.run("bench --suite suite.txt --reps 2 --out b --no-timing").code, 0);
  EXPECT_EQ(io::read_file(s.path("a/runs.csv")), io::read_file(s.path("b/runs.csv")));
  EXPECT_EQ(io::read_file(s.path("a/summary.csv")), io::read_file(s.path("b/summary.csv")));
  EXPECT_NE(io::read_file(s.path("a/meta.txt")).find("command: "), std::string::npos);
}

TEST(Cli, WhatIfMoreResources) {
  Scratch s("cli_whatif");
  ASSERT_EQ(s.run("gen --machines 5 --mult 2 --seed 2 --out i.txt").code, 0);  // WR 3
  const auto r = s.run("--format csv whatif --instance i.txt --wr 5 --algo atcs --scenario-out w.txt");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("3->5"), std::string::npos);
  const auto scenario = io::read_instance(io::read_file(s.path("w.txt")));
  EXPECT_EQ(scenario.resources, 5);
  EXPECT_EQ(scenario.meta.at("whatif_wr"), "5");
}
