#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "wtsched/io.hpp"
#include "wtsched/oracle.hpp"
#include "wtsched/resalloc.hpp"

using namespace wtsched;

namespace {

std::string golden(const std::string& name) { return io::read_file(std::string(WTSCHED_DOCS_DIR "/formats/") + name); }

std::string without_comments(const std::string& text) {
  std::string out, line;
  std::istringstream is(text);
  while (std::getline(is, line))
    if (line.empty() || line[0] != '#') out += line + "\n";
  return out;
}

}  // namespace

TEST(GoldenFiles, RoundTripByteIdentical) {
  const auto inst_text = golden("golden_instance.txt");
  EXPECT_EQ(io::write_instance(io::read_instance(inst_text)), without_comments(inst_text));
  const auto sched_text = golden("golden_schedule.txt");
  EXPECT_EQ(io::write_schedule(io::read_schedule(sched_text)), without_comments(sched_text));
  const auto plan_text = golden("golden_plan.txt");
  EXPECT_EQ(io::write_plan(io::read_plan(plan_text)), without_comments(plan_text));
}

TEST(GoldenFiles, ScheduleMatchesHandComputation) {
  const auto inst = io::read_instance(golden("golden_instance.txt"));
  const auto sched = io::read_schedule(golden("golden_schedule.txt"));
  EXPECT_TRUE(validate(inst, sched).feasible);
  // Machine 0 runs 3, 2, 1; machine 1 runs 0.
  // job 3: 0 + 45 = 45 vs d 8, w 10 -> 370
  // job 2: 45 + s(3,2)=1 + 9 = 55 vs d 59 -> 0
  // job 1: 55 + s(2,1)=14 + 48 = 117 vs d 42, w 4 -> 300
  // job 0: 59 vs d 42, w 7 -> 119
  EXPECT_EQ(sched.objective, 370 + 0 + 300 + 119);
  EXPECT_EQ(objective_of(inst, sched.jobs), sched.objective);
}

TEST(GoldenFiles, PlanReproducesScheduleAndIsOptimal) {
  const auto inst = io::read_instance(golden("golden_instance.txt"));
  const auto sched = io::read_schedule(golden("golden_schedule.txt"));
  const auto plan = io::read_plan(golden("golden_plan.txt"));
  EXPECT_EQ(allocate_exact(inst, plan).jobs, sched.jobs);
  EXPECT_EQ(plan_of(inst, sched).seq, plan.seq);
  EXPECT_EQ(solve_exact_tiny(inst).objective, sched.objective);
}
