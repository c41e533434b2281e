#include "pdstsp/rng.hpp"
#include "pdstsp/tsp.hpp"

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

using namespace pdstsp;

TEST(Rng, SplitmixReferenceValue) {
  std::uint64_t state = 0;
  EXPECT_EQ(splitmix64(state), 0xe220a8397b1dcdafULL);
}

TEST(Rng, ReplaysAndStaysInRange) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs = differs || x != c.next();
    const double u = a.uniform01();
    b.uniform01();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(a.below(7), 7u);
    b.below(7);
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, BelowIsRoughlyUniform) {
  Rng rng(1);
  std::vector<int> count(5, 0);
  for (int i = 0; i < 50000; ++i) ++count[rng.below(5)];
  for (int c : count) EXPECT_NEAR(c, 10000, 500);
}

TEST(NearestNeighbor, Singleton) {
  Rng rng(1);
  const TimeMatrix t = fixtures::random_matrix(rng, 4);
  const std::vector<int> one{2};
  EXPECT_EQ(nearest_neighbor(t, one).order, std::vector<int>{2});
}

TEST(NearestNeighbor, PointsOnALine) {
  const Instance inst = Instance::from_coordinates(
      "line", {{0, 0}, {4, 0}, {1, 0}, {3, 0}, {2, 0}}, {false, false, false, false, false},
      1.0, 1.0, 0);
  const auto c = inst.customers();
  EXPECT_EQ(nearest_neighbor(inst.truck_time(), c).order, (std::vector<int>{2, 4, 3, 1}));
}

TEST(NearestNeighbor, TiesGoToLowerId) {
  TimeMatrix t = TimeMatrix::Constant(4, 4, 5.0);
  t.diagonal().setZero();
  const std::vector<int> all{3, 1, 2};
  EXPECT_EQ(nearest_neighbor(t, all).order, (std::vector<int>{1, 2, 3}));
}

TEST(LocalSearch, TwoOptUncrossesSquare) {
  // Unit square corners; depot at (0,0).
  const Instance inst = Instance::from_coordinates(
      "sq", {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {false, false, false, false}, 1.0, 1.0, 0);
  const Sequence crossed{{2, 1, 3}};
  const Sequence fixed = local_search(inst.truck_time(), crossed, {Move::two_opt});
  EXPECT_DOUBLE_EQ(closed_tour_time(inst.truck_time(), fixed.order), 4.0);
  EXPECT_DOUBLE_EQ(closed_tour_time(inst.truck_time(), crossed.order), 6.0);
}

TEST(LocalSearch, FixedPointIsReturnedUnchanged) {
  Rng rng(7);
  const TimeMatrix t = fixtures::random_matrix(rng, 10);
  std::vector<int> c(9);
  std::iota(c.begin(), c.end(), 1);
  const Sequence opt = local_search(t, Sequence{c});
  EXPECT_EQ(local_search(t, opt), opt);
}

TEST(LocalSearch, PreservesCustomersAndNeverIncreasesCost) {
  Rng rng(8);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 3 + rep % 12;
    const TimeMatrix t = fixtures::random_matrix(rng, n + 1);
    std::vector<int> c(n);
    std::iota(c.begin(), c.end(), 1);
    rng.shuffle(c);
    for (MoveSet moves : {MoveSet(Move::two_opt), Move::two_opt | Move::three_opt,
                          MoveSet(Move::or_opt), MoveSet::all()}) {
      const Sequence out = local_search(t, Sequence{c}, {moves});
      std::vector<int> a = out.order, b = c;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      EXPECT_EQ(a, b);
      EXPECT_LE(closed_tour_time(t, out.order), closed_tour_time(t, c));
    }
  }
}

TEST(LocalSearch, BudgetCapsMoves) {
  Rng rng(2);
  const TimeMatrix t = fixtures::random_matrix(rng, 13);
  std::vector<int> c(12);
  std::iota(c.begin(), c.end(), 1);
  const Sequence none = local_search(t, Sequence{c}, {MoveSet::all(), 0});
  EXPECT_EQ(none.order, c);
}

TEST(HeldKarp, SmallCases) {
  Rng rng(3);
  const TimeMatrix t = fixtures::random_matrix(rng, 5);
  EXPECT_EQ(held_karp(t, std::vector<int>{}).cost, 0.0);
  const std::vector<int> one{3};
  EXPECT_EQ(held_karp(t, one).cost, t(0, 3) + t(3, 0));
  std::vector<int> big(19);
  std::iota(big.begin(), big.end(), 1);
  const TimeMatrix t20 = fixtures::random_matrix(rng, 20);
  EXPECT_THROW(held_karp(t20, big), std::invalid_argument);
}

TEST(HeldKarp, EqualsFactorialBruteForce) {
  Rng rng(4);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 1 + rep % 9;
    const TimeMatrix t = fixtures::random_matrix(rng, n + 1);
    std::vector<int> c(n);
    std::iota(c.begin(), c.end(), 1);
    const HeldKarpResult hk = held_karp(t, c);
    EXPECT_EQ(hk.cost, oracles::factorial_tsp(t, c));
    EXPECT_EQ(closed_tour_time(t, hk.tour.order), hk.cost);
    EXPECT_LE(hk.cost, closed_tour_time(t, local_search(t, Sequence{c}).order));
  }
}

TEST(HeldKarp, AllSubsetsTableMatchesSingleSolves) {
  Rng rng(5);
  const TimeMatrix t = fixtures::random_matrix(rng, 8);
  std::vector<int> c{1, 2, 3, 4, 5, 6, 7};
  const auto table = held_karp_all_subsets(t, c);
  for (std::uint32_t mask = 0; mask < table.size(); ++mask) {
    std::vector<int> subset;
    for (int j = 0; j < 7; ++j) {
      if (mask >> j & 1u) subset.push_back(c[j]);
    }
    EXPECT_EQ(table[mask], held_karp(t, subset).cost);
    EXPECT_EQ(closed_tour_time(t, held_karp_tour(t, c, mask).order), table[mask]);
  }
}

TEST(PerturbMatrix, BoundsAndDeterminism) {
  Rng rng(6);
  const TimeMatrix t = fixtures::random_matrix(rng, 12);
  Rng a(9), b(9), z(9);
  const TimeMatrix p = perturb_matrix(t, 80.0, a);
  EXPECT_EQ(p, perturb_matrix(t, 80.0, b));
  EXPECT_EQ(perturb_matrix(t, 0.0, z), t);
  EXPECT_TRUE((p.array() >= t.array()).all());
  EXPECT_TRUE((p.array() <= 1.8 * t.array()).all());
  EXPECT_TRUE((p.diagonal().array() == 0.0).all());
  EXPECT_THROW(perturb_matrix(t, -1.0, a), std::invalid_argument);
}

namespace {

bool is_permutation_of(const std::vector<int>& a, std::vector<int> b) {
  std::vector<int> s = a;
  std::sort(s.begin(), s.end());
  std::sort(b.begin(), b.end());
  return s == b;
}

}  // namespace

TEST(Neighbourhoods, TwoOptMovesAreReversals) {
  const std::vector<int> base{1, 2, 3, 4, 5, 6};
  const auto moves = two_opt_moves(6);
  std::set<std::vector<int>> seen;
  for (const auto& m : moves) {
    const auto out = apply_move(base, m);
    EXPECT_TRUE(is_permutation_of(out, base));
    EXPECT_NE(out, base);
    EXPECT_TRUE(seen.insert(out).second);
  }
  EXPECT_EQ(moves.size(), 15u);  // segments of length >= 2 in 6 positions
}

TEST(Neighbourhoods, ThreeOptIsDuplicateFreeSupersetOfTwoOpt) {
  for (int m = 2; m <= 8; ++m) {
    std::vector<int> base(m);
    std::iota(base.begin(), base.end(), 1);
    std::set<std::vector<int>> two, three;
    for (const auto& mv : two_opt_moves(m)) two.insert(apply_move(base, mv));
    for (const auto& mv : three_opt_moves(m)) {
      const auto out = apply_move(base, mv);
      EXPECT_TRUE(is_permutation_of(out, base));
      EXPECT_NE(out, base);
      EXPECT_TRUE(three.insert(out).second) << "duplicate neighbour, m=" << m;
    }
    for (const auto& s : two) EXPECT_TRUE(three.count(s));
  }
}
