#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "support.hpp"
#include "wtsched/heuristics.hpp"
#include "wtsched/instgen.hpp"

namespace wtsched {
namespace {

TEST(AtcsScaling, HandDerivedValues) {
  const auto sc = atcs_scaling(5.0, 0.25, 1.0, 0.25, 0.5, 0.8);
  EXPECT_DOUBLE_EQ(sc.A2, 1.8);
  EXPECT_NEAR(sc.k1, 1.2 * std::log(5.0) - 0.8, 1e-12);
  EXPECT_NEAR(sc.k1, 1.1313, 1e-4);
  EXPECT_NEAR(sc.k2, 0.5 / 0.9, 1e-12);
  EXPECT_NEAR(sc.k2, 0.5556, 1e-4);
}

TEST(AtcsScaling, A2SwitchesAtPointEight) {
  EXPECT_DOUBLE_EQ(atcs_scaling(5, 1, 1, 1, 0.8, 0.8).A2, 2.0);
  EXPECT_DOUBLE_EQ(atcs_scaling(5, 1, 1, 1, std::nextafter(0.8, 0.0), 0.8).A2, 1.8);
}

TEST(AtcsScaling, Subtractions) {
  EXPECT_NEAR(atcs_scaling(std::exp(1.0), 1, 1, 1, 0.4, 0.0).k1, 0.7, 1e-12);
  // eta < 0.5 and mu > 5 removes a further 0.5.
  EXPECT_NEAR(atcs_scaling(10, 0.4, 1, 1, 0.5, 0.8).k1, 1.2 * std::log(10.0) - 0.8 - 0.5, 1e-12);
  EXPECT_NEAR(atcs_scaling(10, 0.5, 1, 1, 0.5, 0.8).k1, 1.2 * std::log(10.0) - 0.8, 1e-12);
}

TEST(AtcsScaling, FloorsKeepFactorsPositive) {
  const auto sc = atcs_scaling(1.0, 1.0, 1, 1, -74.0, 3.0);
  EXPECT_DOUBLE_EQ(sc.k1, kAtcsFloor);
  EXPECT_DOUBLE_EQ(sc.k2, kAtcsFloor);
  // Positive tau never floors k2.
  EXPECT_LT(atcs_scaling(5, 100, 1, 1, 0.01, 0.8).k2, kAtcsFloor);
}

TEST(AtcsScaling, InstanceMeansExcludeInitialSetup) {
  Instance inst(2, 1);
  inst.resources = 1;
  inst.p(0, 0) = 2;
  inst.p(1, 0) = 6;
  inst.s(0, 1, 0) = 1;
  inst.s(1, 0, 0) = 3;
  inst.initial_setup = 50;
  const auto sc = atcs_scaling(inst, 0.5, 0.8);
  EXPECT_DOUBLE_EQ(sc.p_bar, 4.0);
  EXPECT_DOUBLE_EQ(sc.s_bar, 2.0);
  EXPECT_DOUBLE_EQ(sc.eta, 0.5);
  EXPECT_DOUBLE_EQ(sc.mu, 2.0);
}

TEST(AtcsPriority, ThreeFactors) {
  Instance inst(2, 1);
  inst.resources = 1;
  inst.p(0, 0) = 4;
  inst.due[0] = 10;
  inst.weight[0] = 2;
  inst.s(1, 0, 0) = 3;
  AtcsScaling sc;
  sc.k1 = 1;
  sc.p_bar = 12;
  sc.k2 = 1;
  sc.s_bar = 6;
  EXPECT_NEAR(atcs_priority(inst, 0, 0, 1, sc), 0.5 * std::exp(-1.0), 1e-12);
  EXPECT_NEAR(atcs_priority(inst, 0, 0, 1, sc), 0.1839, 1e-4);
  inst.due[0] = 3;  // already late: slack factor 1
  EXPECT_NEAR(atcs_priority(inst, 0, 0, 1, sc), 0.5 * std::exp(-0.5), 1e-12);
  inst.s(1, 0, 0) = 0;
  EXPECT_DOUBLE_EQ(atcs_priority(inst, 0, 0, 1, sc), 0.5);
  // Empty machine uses s0.
  inst.initial_setup = 0;
  EXPECT_DOUBLE_EQ(atcs_priority(inst, 0, 0, kNoJob, sc), 0.5);
}

TEST(AtcsRun, SingleJobGoesToFastestMachine) {
  Instance inst(1, 2);
  inst.resources = 1;
  inst.initial_setup = 2;
  inst.p(0, 0) = 7;
  inst.p(0, 1) = 5;
  inst.due[0] = 4;
  const auto sched = atcs_run(inst);
  EXPECT_EQ(sched.jobs[0].machine, 1);
  EXPECT_EQ(sched.objective, 3);
}

TEST(AtcsRun, HandTraceWithZeroDeadlines) {
  Instance inst(3, 2);
  inst.resources = 2;
  const Time p0[3] = {2, 3, 4}, p1[3] = {5, 1, 6};
  for (int j = 0; j < 3; ++j) {
    inst.p(j, 0) = p0[j];
    inst.p(j, 1) = p1[j];
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int m = 0; m < 2; ++m)
        if (i != j) inst.s(i, j, m) = 2;
  const auto sc = atcs_scaling(inst, 0.5, 0.8);
  EXPECT_EQ(atcs_sequence(inst, sc), SequencePlan({{0, 2}, {1}}));
  const auto sched = atcs_run(inst);
  EXPECT_EQ(sched.objective, 2 + 8 + 1);
  EXPECT_TRUE(validate(inst, sched).feasible);
}

TEST(AtcsRun, WeightScalingKeepsChoices) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = testing::random_instance(seed, {.jobs = 12, .machines = 3, .resources = 2});
    const auto sc = atcs_scaling(inst, 0.5, 0.8);
    const auto plan = atcs_sequence(inst, sc);
    for (auto& w : inst.weight) w *= 3;
    EXPECT_EQ(atcs_sequence(inst, sc), plan) << "seed " << seed;
  }
}

TEST(AtcsRun, UsesGeneratorFactorsFromMeta) {
  GenConfig cfg;
  cfg.machines = 2;
  cfg.tau = 0.8;
  cfg.seed = 3;
  const auto inst = generate(cfg);
  const auto [tau, range] = due_factors(inst);
  EXPECT_DOUBLE_EQ(tau, 0.8);
  EXPECT_DOUBLE_EQ(range, 0.8);
  auto bare = inst;
  bare.meta.clear();
  const auto st = stats(bare);
  EXPECT_DOUBLE_EQ(due_factors(bare).first, st.tau_real);
  EXPECT_EQ(atcs_run(inst), atcs_run(inst));
}

TEST(GaDecode, SingleMachineKeepsChromosomeOrder) {
  const auto inst = testing::random_instance(4, {.jobs = 5, .machines = 1, .resources = 1, .s0 = 2});
  const Chromosome ch{3, 1, 4, 0, 2};
  const auto d = ga_decode(inst, ch);
  EXPECT_EQ(d.plan, SequencePlan({{3, 1, 4, 0, 2}}));
  EXPECT_EQ(d.fitness, evaluate_sequential(inst, d.plan).objective);
  EXPECT_FALSE(d.pruned);
}

TEST(GaDecode, FullResourcesGiveSequentialValue) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = testing::random_instance(seed, {.jobs = 6, .machines = 3, .resources = 3, .s0 = 1});
    Chromosome ch(6);
    std::iota(ch.begin(), ch.end(), 0);
    Rng rng(seed);
    rng.shuffle(ch);
    const auto d = ga_decode(inst, ch, Cost{0});
    EXPECT_FALSE(d.pruned);
    EXPECT_EQ(d.fitness, evaluate_sequential(inst, d.plan).objective);
  }
}

TEST(GaDecode, ContentionExampleAllocatesOrPrunes) {
  const auto inst = testing::contention_instance(1);
  const Chromosome ch{0, 1, 2, 3};
  auto d = ga_decode(inst, ch, Cost{10});
  EXPECT_EQ(d.plan, testing::contention_plan());
  EXPECT_FALSE(d.pruned);
  EXPECT_TRUE(d.allocated);
  EXPECT_EQ(d.fitness, 5);
  d = ga_decode(inst, ch, Cost{0}, {}, true);
  EXPECT_TRUE(d.pruned);
  EXPECT_EQ(d.fitness, 0);
  EXPECT_EQ(d.audited_exact, 5);
  EXPECT_EQ(ga_decode(inst, ch).fitness, 5);
}

TEST(GaDecode, RejectsNonPermutation) {
  const auto inst = testing::contention_instance();
  EXPECT_THROW(ga_decode(inst, {0, 1, 1, 3}), InvalidPlan);
  EXPECT_THROW(ga_decode(inst, {0, 1, 2}), InvalidPlan);
}

TEST(GaCrossover, RepairExample) {
  const auto [o1, o2] = ga_crossover({1, 2, 3, 4, 5, 0}, {3, 1, 5, 2, 4, 0}, 2);
  EXPECT_EQ(o1, (Chromosome{1, 3, 5, 2, 4, 0}));
  EXPECT_EQ(o2, (Chromosome{1, 2, 3, 4, 5, 0}));
  const auto [a, b] = ga_crossover({0, 1, 2, 3, 4}, {2, 0, 4, 1, 3}, 2);
  EXPECT_EQ(a, (Chromosome{0, 2, 4, 1, 3}));
}

TEST(GaCrossover, IdenticalParentsAndLastSplit) {
  const Chromosome p{4, 2, 0, 3, 1};
  const auto [a, b] = ga_crossover(p, p, 3);
  EXPECT_EQ(a, p);
  EXPECT_EQ(b, p);
  const Chromosome q{1, 0, 2, 4, 3};
  const auto [c, d] = ga_crossover(p, q, 4);
  EXPECT_EQ(c, (Chromosome{4, 2, 0, 1, 3}));
  EXPECT_EQ(d, (Chromosome{0, 2, 4, 3, 1}));
  EXPECT_THROW(ga_crossover(p, q, 0), Error);
  EXPECT_THROW(ga_crossover(p, q, 5), Error);
}

// All parent pairs of all permutations of up to five genes, every split.
TEST(GaCrossoverProperties, OutputsArePermutations) {
  for (int n = 2; n <= 5; ++n) {
    std::vector<Chromosome> perms;
    Chromosome c(n);
    std::iota(c.begin(), c.end(), 0);
    do perms.push_back(c);
    while (std::next_permutation(c.begin(), c.end()));
    for (const auto& p1 : perms)
      for (const auto& p2 : perms)
        for (int k = 1; k < n; ++k) {
          const auto [a, b] = ga_crossover(p1, p2, k);
          ASSERT_TRUE(is_permutation_of_jobs(a, n));
          ASSERT_TRUE(is_permutation_of_jobs(b, n));
          // The right part of the other parent is kept as is.
          ASSERT_TRUE(std::equal(p2.begin() + k, p2.end(), a.end() - (n - k)));
        }
  }
}

TEST(GaMutate, PairIsReversed) {
  Rng rng(1);
  EXPECT_EQ(ga_mutate({5, 9}, rng), (Chromosome{9, 5}));
}

TEST(GaMutateProperties, AlwaysChangesAndPreservesGenes) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(seed);
    Chromosome c(2 + static_cast<int>(seed % 7));
    std::iota(c.begin(), c.end(), 0);
    const auto m = ga_mutate(c, rng);
    EXPECT_NE(m, c);
    EXPECT_TRUE(std::is_permutation(m.begin(), m.end(), c.begin()));
    int moved = 0;
    for (std::size_t i = 0; i < c.size(); ++i) moved += m[i] != c[i];
    EXPECT_EQ(moved, 2);
  }
}

GaParams small_ga(std::uint64_t seed) {
  GaParams p;
  p.population = 20;
  p.generations = 15;
  p.seed = seed;
  return p;
}

TEST(GaRun, ZeroGenerationsReturnsInitialBest) {
  const auto inst = testing::random_instance(2, {.jobs = 8, .machines = 3, .resources = 1, .s0 = 1});
  auto params = small_ga(5);
  params.generations = 0;
  const auto r = ga_run(inst, params);
  ASSERT_EQ(r.history.size(), 1u);
  EXPECT_EQ(r.schedule.objective, r.history[0]);
  EXPECT_EQ(r.generations_run, 0);
}

TEST(GaRun, DeterministicAndValid) {
  const auto inst = testing::random_instance(9, {.jobs = 10, .machines = 3, .resources = 1, .s0 = 2});
  const auto a = ga_run(inst, small_ga(11));
  const auto b = ga_run(inst, small_ga(11));
  EXPECT_EQ(a.schedule, b.schedule);
  EXPECT_EQ(a.best, b.best);
  EXPECT_EQ(a.history, b.history);
  EXPECT_TRUE(validate(inst, a.schedule).feasible);
  EXPECT_EQ(a.schedule.objective, a.history.back());
}

TEST(GaRunProperties, ElitistHistoryAndSoundPruning) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto inst = testing::random_instance(
        seed, {.jobs = 10, .machines = 3, .resources = 1, .s0 = 1, .p_max = 12, .s_max = 10, .d_max = 40});
    auto params = small_ga(seed);
    params.audit = true;
    const auto r = ga_run(inst, params);
    EXPECT_TRUE(std::is_sorted(r.history.rbegin(), r.history.rend())) << "seed " << seed;
    for (const auto& rec : r.audit) {
      EXPECT_GE(rec.exact, rec.cutoff);
      EXPECT_GE(rec.proxy, rec.cutoff);
    }
    EXPECT_EQ(static_cast<std::int64_t>(r.audit.size()), r.pruned);
    EXPECT_TRUE(validate(inst, r.schedule).feasible);
  }
}

Instance swap_instance() {
  Instance inst(4, 2);
  inst.resources = 2;
  for (int j = 0; j < 4; ++j)
    for (int m = 0; m < 2; ++m) inst.p(j, m) = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int m = 0; m < 2; ++m)
        if (i != j) inst.s(i, j, m) = 1;
  inst.due = {100, 100, 100, 0};
  return inst;
}

TEST(SaExternalSwap, NoTardinessIsNoop) {
  auto inst = swap_instance();
  inst.due[3] = 100;
  const SequencePlan plan({{0, 1}, {2, 3}});
  EXPECT_FALSE(sa_external_swap(inst, plan, evaluate_sequential(inst, plan)));
}

TEST(SaExternalSwap, TardyJobMovesToFrontOfBestMachine) {
  const auto inst = swap_instance();
  const SequencePlan plan({{0, 1}, {2, 3}});
  const auto out = sa_external_swap(inst, plan, evaluate_sequential(inst, plan));
  ASSERT_TRUE(out);
  EXPECT_EQ(*out, SequencePlan({{3, 1}, {2, 0}}));
  EXPECT_NO_THROW(check_plan(inst, *out));
}

TEST(SaExternalSwap, EmptyMachineIsNoop) {
  const auto inst = swap_instance();
  const SequencePlan plan({{}, {0, 1, 2, 3}});
  EXPECT_FALSE(sa_external_swap(inst, plan, evaluate_sequential(inst, plan)));
}

TEST(SaInternalSwap, TwoJobsAreReversed) {
  const auto inst = swap_instance();
  const SequencePlan plan({{0, 1}, {2, 3}});
  const auto out = sa_internal_swap(inst, plan, evaluate_sequential(inst, plan));
  ASSERT_TRUE(out);
  EXPECT_EQ(*out, SequencePlan({{0, 1}, {3, 2}}));
}

TEST(SaInternalSwap, EqualValuesSwapSmallestAndLargestId) {
  auto inst = swap_instance();
  inst.due = {100, 100, 100, 100};
  const SequencePlan plan({{2, 0, 3, 1}, {}});
  const auto out = sa_internal_swap(inst, plan, evaluate_sequential(inst, plan));
  ASSERT_TRUE(out);
  EXPECT_EQ(*out, SequencePlan({{2, 3, 0, 1}, {}}));
  const SequencePlan single({{0}, {1, 2, 3}});
  inst.due = {0, 100, 100, 100};
  EXPECT_FALSE(sa_internal_swap(inst, single, evaluate_sequential(inst, single)));
}

TEST(SaAcceptance, Formula) {
  EXPECT_NEAR(sa_acceptance(10, 500), std::exp(-0.02), 1e-15);
  EXPECT_NEAR(sa_acceptance(10, 500), 0.9802, 1e-4);
  EXPECT_GT(sa_acceptance(-3, 10), 1.0);
}

TEST(SaRun, EvaluationCountFollowsCoolingSchedule) {
  const auto inst = testing::random_instance(1, {.jobs = 8, .machines = 2, .resources = 1, .s0 = 1});
  SaParams params;
  const int levels = static_cast<int>(std::ceil(std::log(params.t_cry / params.t0) / std::log(params.q)));
  EXPECT_EQ(levels, 59);
  EXPECT_EQ(sa_levels(params), levels);
  const auto r = sa_run(inst, atcs_sequence(inst, atcs_scaling(inst, 0.5, 0.8)), params);
  EXPECT_EQ(r.evaluations, 50 * 59);
  EXPECT_EQ(r.trace.size(), 2950u);
}

TEST(SaRun, ZeroObjectiveStaysZeroAndColdStartIsIdentity) {
  auto inst = testing::random_instance(2, {.jobs = 6, .machines = 2, .resources = 1});
  for (auto& d : inst.due) d = 10'000;
  const SequencePlan plan({{0, 1, 2}, {3, 4, 5}});
  EXPECT_EQ(sa_run(inst, plan, {}).schedule.objective, 0);
  SaParams cold;
  cold.t0 = cold.t_cry;
  const auto r = sa_run(inst, plan, cold);
  EXPECT_EQ(r.evaluations, 0);
  EXPECT_EQ(r.plan, plan);
}

TEST(SaRunProperties, BestIsMonotoneAndValid) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = testing::random_instance(
        seed, {.jobs = 9, .machines = 3, .resources = 1 + static_cast<int>(seed % 3), .s0 = 1, .d_max = 25});
    SaParams params;
    params.seed = seed;
    params.iterations = 10;
    const auto start = ga_assign(inst, [&] {
                         Chromosome c(9);
                         std::iota(c.begin(), c.end(), 0);
                         return c;
                       }()).first;
    const auto r = sa_run(inst, start, params);
    EXPECT_TRUE(std::is_sorted(r.trace.rbegin(), r.trace.rend()));
    EXPECT_LE(r.schedule.objective, mip_primal(inst, start).objective);
    EXPECT_TRUE(validate(inst, r.schedule).feasible);
    EXPECT_EQ(r.schedule, mip_primal(inst, r.plan));
  }
}

}  // namespace
}  // namespace wtsched
