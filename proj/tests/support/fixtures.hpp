#ifndef PDSTSP_TESTS_FIXTURES_HPP
#define PDSTSP_TESTS_FIXTURES_HPP

#include "pdstsp/core.hpp"
#include "pdstsp/instances.hpp"
#include "pdstsp/rng.hpp"

#include <string>
#include <vector>

namespace fixtures {

using pdstsp::Instance;
using pdstsp::Rng;
using pdstsp::TimeMatrix;

// Asymmetric, no triangle inequality, zero diagonal.
inline TimeMatrix random_matrix(Rng& rng, int nodes, double lo = 1.0, double hi = 100.0) {
  TimeMatrix t(nodes, nodes);
  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j < nodes; ++j) t(i, j) = i == j ? 0.0 : rng.uniform(lo, hi);
  }
  return t;
}

inline Instance random_instance(Rng& rng, int n, double eligible_prob, int drones) {
  std::map<int, double> drone;
  for (int c = 1; c <= n; ++c) {
    if (rng.uniform01() < eligible_prob) drone[c] = rng.uniform(5.0, 120.0);
  }
  return Instance("random-" + std::to_string(n), random_matrix(rng, n + 1), drone, drones);
}

// Murray-Chu style: n in [n_lo, n_hi], 1..max_drones drones, random depot and
// range share.
inline Instance random_murray(Rng& rng, int n_lo, int n_hi, int max_drones,
                              std::uint64_t seed) {
  pdstsp::GenSpecMurrayChu spec;
  spec.n_customers = n_lo + static_cast<int>(rng.below(n_hi - n_lo + 1));
  const pdstsp::MurrayDepot depots[] = {pdstsp::MurrayDepot::center,
                                        pdstsp::MurrayDepot::edge,
                                        pdstsp::MurrayDepot::origin};
  spec.depot = depots[rng.below(3)];
  const int pcts[] = {20, 40, 60, 80};
  spec.pct_in_drone_range = pcts[rng.below(4)];
  spec.pct_weight_ineligible = rng.uniform(0.10, 0.20);
  spec.n_drones = 1 + static_cast<int>(rng.below(max_drones));
  spec.seed = seed;
  return pdstsp::gen_murray_chu(spec);
}

// Random partition respecting eligibility and drone count.
inline pdstsp::Solution random_solution(const Instance& inst, Rng& rng) {
  pdstsp::Solution s;
  s.drones.assign(inst.n_drones(), {});
  for (int c : inst.customers()) {
    if (inst.n_drones() > 0 && inst.is_eligible(c) && rng.uniform01() < 0.5) {
      s.drones[rng.below(inst.n_drones())].push_back(c);
    } else {
      s.truck_tour.push_back(c);
    }
  }
  rng.shuffle(s.truck_tour);
  return s;
}

}  // namespace fixtures

#endif  // PDSTSP_TESTS_FIXTURES_HPP
