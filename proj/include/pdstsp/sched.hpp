#ifndef PDSTSP_SCHED_HPP
#define PDSTSP_SCHED_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace pdstsp {

// Identical parallel machine scheduling, P||Cmax: the drone side of the
// problem, where machines are drones and jobs are round trips.

struct Job {
  int id = 0;
  double time = 0.0;
};

struct JobSet {
  std::vector<Job> jobs;
  int machines = 1;
};

struct Schedule {
  /// machine[j] is the machine running jobs[j] (input order).
  std::vector<int> machine;
  double makespan = 0.0;
  bool proven = false;

  /// Job ids per machine, each list in input order.
  std::vector<std::vector<int>> by_machine(const JobSet& set) const;
};

/// Longest processing time first. Ties: lower id first, then the lowest
/// machine index among the least loaded. Throws std::invalid_argument for
/// machines < 1 or negative times.
Schedule lpt(const JobSet& set);

struct PcmaxLimits {
  double time_cap_s = 10.0;
  /// Deterministic alternative to the wall-clock cap.
  std::optional<std::uint64_t> node_limit;
};

/// Branch and bound over jobs in LPT order. Loads are kept canonical (a job
/// never goes to a machine whose load equals an earlier machine's), which
/// also means machine k+1 is never opened while machine k is empty. Returns
/// the LPT schedule with proven = false when a cap is hit first.
Schedule exact_pcmax(const JobSet& set, const PcmaxLimits& limits = {});

/// Lower bound max(sum / m, longest job).
double pcmax_lower_bound(const JobSet& set);

}  // namespace pdstsp

#endif  // PDSTSP_SCHED_HPP
