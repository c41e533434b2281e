#include "pdstsp/oracle.hpp"

#include "pdstsp/sched.hpp"
#include "pdstsp/tsp.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

namespace pdstsp {

namespace {

// Loads summed in list order, as evaluate() does.
double makespan_of(const Instance& inst,
                   const std::vector<std::vector<int>>& lists) {
  double worst = 0.0;
  for (const auto& list : lists) {
    double load = 0.0;
    for (int c : list) load += inst.drone(c);
    worst = std::max(worst, load);
  }
  return worst;
}

}  // namespace

OracleResult brute_force(const Instance& inst, const OracleLimits& limits) {
  const int n = inst.num_customers();
  const int drones = inst.n_drones();
  const auto& eligible = inst.eligible();
  if (n > limits.max_customers) {
    throw OracleLimitExceeded("oracle: " + std::to_string(n) +
                              " customers exceed the limit of " +
                              std::to_string(limits.max_customers));
  }
  if (static_cast<int>(eligible.size()) > limits.max_eligible) {
    throw OracleLimitExceeded("oracle: " + std::to_string(eligible.size()) +
                              " eligible customers exceed the limit of " +
                              std::to_string(limits.max_eligible));
  }

  const std::vector<int> customers = inst.customers();  // customer j has bit j-1
  const std::vector<double> truck = held_karp_all_subsets(inst.truck_time(), customers);
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;

  // Without drones only the empty drone set is feasible.
  const int k = drones == 0 ? 0 : static_cast<int>(eligible.size());
  PcmaxLimits pcmax_limits;
  pcmax_limits.time_cap_s = std::numeric_limits<double>::infinity();

  double best = truck[full];
  std::uint32_t best_mask = 0;
  std::vector<std::vector<int>> best_drones(drones);

  std::uint32_t drone_mask = 0;  // over customer bits
  double sum = 0.0;
  for (std::uint32_t i = 1; i < (std::uint32_t{1} << k); ++i) {
    // Gray code step: exactly one eligible customer changes side.
    const int flip = __builtin_ctz(i);
    const int c = eligible[flip];
    drone_mask ^= std::uint32_t{1} << (c - 1);
    if (drone_mask & (std::uint32_t{1} << (c - 1))) {
      sum += inst.drone(c);
    } else {
      sum -= inst.drone(c);
    }
    const double truck_cost = truck[full ^ drone_mask];
    double longest = 0.0;
    JobSet set{{}, drones};
    for (int e : eligible) {
      if (drone_mask & (std::uint32_t{1} << (e - 1))) {
        longest = std::max(longest, inst.drone(e));
        set.jobs.push_back({e, inst.drone(e)});
      }
    }
    // The running sum drifts by rounding; the bound keeps a margin for it.
    const double bound = std::max({truck_cost, longest, sum / drones});
    if (bound > best + 1e-9) continue;
    if (truck_cost >= best) continue;
    const Schedule schedule = exact_pcmax(set, pcmax_limits);
    auto lists = schedule.by_machine(set);
    const double alpha = std::max(truck_cost, makespan_of(inst, lists));
    if (alpha < best) {
      best = alpha;
      best_mask = drone_mask;
      best_drones = std::move(lists);
    }
  }

  OracleResult out;
  out.solution.truck_tour =
      held_karp_tour(inst.truck_time(), customers, full ^ best_mask).order;
  out.solution.drones = std::move(best_drones);
  out.alpha = evaluate(inst, out.solution).alpha;
  out.proven = true;
  return out;
}

}  // namespace pdstsp
