#include "pdstsp/sched.hpp"

#include "pdstsp/core.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

namespace pdstsp {

namespace {

void check(const JobSet& set) {
  if (set.machines < 1) {
    throw std::invalid_argument("job set needs at least one machine");
  }
  for (const Job& job : set.jobs) {
    if (!(job.time >= 0.0)) {
      throw std::invalid_argument("job " + std::to_string(job.id) +
                                  " has a negative processing time");
    }
  }
}

std::vector<int> lpt_order(const JobSet& set) {
  std::vector<int> order(set.jobs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const Job& ja = set.jobs[a];
    const Job& jb = set.jobs[b];
    if (ja.time != jb.time) return ja.time > jb.time;
    return ja.id < jb.id;
  });
  return order;
}

class PcmaxSearch {
 public:
  PcmaxSearch(const JobSet& set, const PcmaxLimits& limits, Schedule incumbent,
              double lower_bound)
      : set_(set),
        limits_(limits),
        order_(lpt_order(set)),
        loads_(set.machines, 0.0),
        current_(set.jobs.size(), 0),
        best_(std::move(incumbent)),
        lower_bound_(lower_bound),
        start_(std::chrono::steady_clock::now()) {}

  Schedule run() {
    if (best_.makespan > lower_bound_ + kTimeTolerance) dfs(0, 0.0);
    best_.proven = !aborted_;
    return best_;
  }

 private:
  bool out_of_budget() {
    ++nodes_;
    if (limits_.node_limit) return nodes_ > *limits_.node_limit;
    if ((nodes_ & 1023u) == 0) {
      const std::chrono::duration<double> spent =
          std::chrono::steady_clock::now() - start_;
      if (spent.count() > limits_.time_cap_s) return true;
    }
    return false;
  }

  // Returns true when the search should stop (optimum reached or budget).
  bool dfs(std::size_t depth, double current_max) {
    if (depth == order_.size()) {
      if (current_max < best_.makespan - kTimeTolerance) {
        best_.makespan = current_max;
        best_.machine = current_;
        if (best_.makespan <= lower_bound_ + kTimeTolerance) return true;
      }
      return false;
    }
    if (out_of_budget()) {
      aborted_ = true;
      return true;
    }
    const int job = order_[depth];
    const double time = set_.jobs[job].time;
    for (int k = 0; k < set_.machines; ++k) {
      bool repeat = false;
      for (int prev = 0; prev < k && !repeat; ++prev) {
        repeat = loads_[prev] == loads_[k];
      }
      if (repeat) continue;
      const double load = loads_[k] + time;
      if (load >= best_.makespan - kTimeTolerance) continue;
      loads_[k] = load;
      current_[job] = k;
      const bool stop = dfs(depth + 1, std::max(current_max, load));
      loads_[k] -= time;
      if (stop) return true;
    }
    return false;
  }

  const JobSet& set_;
  const PcmaxLimits& limits_;
  std::vector<int> order_;
  std::vector<double> loads_;
  std::vector<int> current_;
  Schedule best_;
  double lower_bound_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
};

}  // namespace

std::vector<std::vector<int>> Schedule::by_machine(const JobSet& set) const {
  std::vector<std::vector<int>> out(set.machines);
  for (std::size_t j = 0; j < set.jobs.size(); ++j) {
    out[machine[j]].push_back(set.jobs[j].id);
  }
  return out;
}

Schedule lpt(const JobSet& set) {
  check(set);
  Schedule s;
  s.machine.assign(set.jobs.size(), 0);
  std::vector<double> loads(set.machines, 0.0);
  for (int job : lpt_order(set)) {
    const auto least = std::min_element(loads.begin(), loads.end());
    const int k = static_cast<int>(least - loads.begin());
    loads[k] += set.jobs[job].time;
    s.machine[job] = k;
  }
  s.makespan = set.jobs.empty() ? 0.0
                                : *std::max_element(loads.begin(), loads.end());
  s.proven = set.jobs.empty();
  return s;
}

double pcmax_lower_bound(const JobSet& set) {
  double sum = 0.0;
  double longest = 0.0;
  for (const Job& job : set.jobs) {
    sum += job.time;
    longest = std::max(longest, job.time);
  }
  return std::max(sum / set.machines, longest);
}

Schedule exact_pcmax(const JobSet& set, const PcmaxLimits& limits) {
  check(set);
  Schedule incumbent = lpt(set);
  const double m = set.machines;
  const double graham = 4.0 / 3.0 - 1.0 / (3.0 * m);
  const double lb = std::max(pcmax_lower_bound(set), incumbent.makespan / graham);
  if (set.machines == 1 || set.jobs.size() <= 1 ||
      static_cast<int>(set.jobs.size()) <= set.machines) {
    // LPT is optimal: one machine, or at most one job per machine.
    incumbent.proven = true;
    return incumbent;
  }
  return PcmaxSearch(set, limits, std::move(incumbent), lb).run();
}

}  // namespace pdstsp
