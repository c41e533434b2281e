#include "pdstsp/rng.hpp"
#include "pdstsp/sched.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace pdstsp;

namespace {

JobSet make(std::vector<double> times, int m) {
  JobSet set{{}, m};
  for (std::size_t i = 0; i < times.size(); ++i) {
    set.jobs.push_back({static_cast<int>(i + 1), times[i]});
  }
  return set;
}

std::vector<double> times_of(const JobSet& set) {
  std::vector<double> t;
  for (const auto& j : set.jobs) t.push_back(j.time);
  return t;
}

double recompute(const JobSet& set, const Schedule& s) {
  std::vector<double> load(set.machines, 0.0);
  for (std::size_t j = 0; j < set.jobs.size(); ++j) load[s.machine[j]] += set.jobs[j].time;
  return set.jobs.empty() ? 0.0 : *std::max_element(load.begin(), load.end());
}

}  // namespace

TEST(Lpt, TextbookInstance) {
  const JobSet set = make({5, 4, 3, 3, 3}, 2);
  EXPECT_EQ(lpt(set).makespan, 10.0);
  EXPECT_EQ(oracles::enumerate_pcmax(times_of(set), 2), 9.0);
}

TEST(Lpt, SingleMachineAndEmpty) {
  EXPECT_EQ(lpt(make({1, 2, 3.5}, 1)).makespan, 6.5);
  EXPECT_EQ(lpt(make({}, 3)).makespan, 0.0);
}

TEST(Lpt, RejectsBadInput) {
  EXPECT_THROW(lpt(make({1}, 0)), std::invalid_argument);
  EXPECT_THROW(lpt(make({-1}, 1)), std::invalid_argument);
}

TEST(Lpt, TieBreaking) {
  // Equal times: lower id first, onto the lowest-index least-loaded machine.
  const JobSet set = make({2, 2, 2}, 2);
  const Schedule s = lpt(set);
  EXPECT_EQ(s.machine, (std::vector<int>{0, 1, 0}));
}

TEST(ExactPcmax, TextbookInstanceIsProven) {
  const Schedule s = exact_pcmax(make({5, 4, 3, 3, 3}, 2));
  EXPECT_EQ(s.makespan, 9.0);
  EXPECT_TRUE(s.proven);
}

TEST(ExactPcmax, MoreMachinesThanJobs) {
  const Schedule s = exact_pcmax(make({4, 7, 1}, 5));
  EXPECT_EQ(s.makespan, 7.0);
  EXPECT_TRUE(s.proven);
}

TEST(ExactPcmax, EqualsEnumerationAndRespectsGraham) {
  Rng rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 1 + static_cast<int>(rng.below(12));
    const int m = 1 + static_cast<int>(rng.below(4));
    std::vector<double> t;
    for (int j = 0; j < n; ++j) t.push_back(rng.uniform(1.0, 50.0));
    const JobSet set = make(t, m);
    const double brute = oracles::enumerate_pcmax(t, m);
    const Schedule exact = exact_pcmax(set);
    EXPECT_TRUE(exact.proven);
    EXPECT_NEAR(exact.makespan, brute, 1e-9);
    EXPECT_NEAR(recompute(set, exact), exact.makespan, 1e-9);
    const Schedule greedy = lpt(set);
    EXPECT_LE(greedy.makespan, (4.0 / 3.0 - 1.0 / (3.0 * m)) * brute + 1e-9);
    EXPECT_LE(exact.makespan, greedy.makespan + 1e-9);
  }
}

TEST(ExactPcmax, NodeLimitFallsBackToLpt) {
  Rng rng(2);
  std::vector<double> t;
  for (int j = 0; j < 25; ++j) t.push_back(rng.uniform(1.0, 100.0));
  PcmaxLimits limits;
  limits.node_limit = 1;
  const JobSet set = make(t, 3);
  const Schedule s = exact_pcmax(set, limits);
  EXPECT_LE(s.makespan, lpt(set).makespan);
  EXPECT_GE(s.makespan, pcmax_lower_bound(set) - 1e-9);
}

TEST(ExactPcmax, InvariantUnderJobPermutation) {
  Rng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> t;
    for (int j = 0; j < 9; ++j) t.push_back(std::round(rng.uniform(1.0, 20.0)));
    const double a = exact_pcmax(make(t, 3)).makespan;
    rng.shuffle(t);
    EXPECT_EQ(exact_pcmax(make(t, 3)).makespan, a);
  }
}

TEST(ExactPcmax, SubsetDpAgreesWithEnumeration) {
  Rng rng(4);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<double> t;
    const int n = 1 + static_cast<int>(rng.below(8));
    for (int j = 0; j < n; ++j) t.push_back(rng.uniform(1.0, 30.0));
    const int m = 1 + static_cast<int>(rng.below(3));
    EXPECT_NEAR(oracles::subset_dp_pcmax(t, m), oracles::enumerate_pcmax(t, m), 1e-9);
  }
}
