#include "pdstsp/split.hpp"

#include "pdstsp/sched.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <limits>
#include <unordered_map>

namespace pdstsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::array<double, 5> kLambdas = {0.2, 0.4, 0.6, 0.8, 1.0};
constexpr std::uint64_t kPcmaxNodeLimit = 200000;

struct BitsetHash {
  std::size_t operator()(const std::vector<std::uint64_t>& words) const {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (auto w : words) h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

// Exact drone-side makespans, memoised on the job set.
class DroneScheduler {
 public:
  explicit DroneScheduler(const Instance& inst) : inst_(inst) {}

  struct Result {
    double makespan = 0.0;
    bool proven = true;
    std::vector<std::vector<int>> by_machine;
  };

  Result solve(std::vector<int> jobs) {
    std::sort(jobs.begin(), jobs.end());
    JobSet set{{}, inst_.n_drones()};
    for (int c : jobs) set.jobs.push_back({c, inst_.drone(c)});
    if (inst_.n_drones() == 1 || jobs.size() <= 1) {
      const Schedule s = lpt(set);
      return {s.makespan, true, s.by_machine(set)};
    }
    auto key = encode(jobs);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    PcmaxLimits limits;
    limits.node_limit = kPcmaxNodeLimit;
    const Schedule s = exact_pcmax(set, limits);
    Result r{s.makespan, s.proven, s.by_machine(set)};
    if (memo_.size() > 200000) memo_.clear();
    memo_.emplace(std::move(key), r);
    return r;
  }

 private:
  std::vector<std::uint64_t> encode(const std::vector<int>& jobs) const {
    std::vector<std::uint64_t> words(inst_.num_nodes() / 64 + 1, 0);
    for (int c : jobs) words[c / 64] |= std::uint64_t{1} << (c % 64);
    return words;
  }

  const Instance& inst_;
  std::unordered_map<std::vector<std::uint64_t>, Result, BitsetHash> memo_;
};

double drone_time_sum(const Instance& inst, const std::vector<int>& jobs) {
  double sum = 0.0;
  for (int c : jobs) sum += inst.drone(c);
  return sum;
}

// Cheapest insertion of `c` into `route`; returns the added time.
double cheapest_insert(const TimeMatrix& t, std::vector<int>& route, int c) {
  double best = kInf;
  std::size_t where = 0;
  for (std::size_t pos = 0; pos <= route.size(); ++pos) {
    const int a = pos == 0 ? 0 : route[pos - 1];
    const int b = pos == route.size() ? 0 : route[pos];
    const double extra = t(a, c) + t(c, b) - t(a, b);
    if (extra < best) {
      best = extra;
      where = pos;
    }
  }
  route.insert(route.begin() + static_cast<std::ptrdiff_t>(where), c);
  return best;
}

class OffloadSearch {
 public:
  explicit OffloadSearch(const OrderConstrainedProblem& problem)
      : problem_(problem),
        inst_(*problem.instance),
        t_(inst_.truck_time()),
        s_(problem.s.order),
        m_(static_cast<int>(s_.size())),
        drones_(inst_.n_drones()),
        scheduler_(inst_),
        start_(std::chrono::steady_clock::now()) {}

  OffloadResult run() {
    prepare();
    seed_incumbent();
    if (drones_ > 0) {
      build_bounds();
      flying_.assign(m_, 0);
      used_out_.assign(outside_.size(), 0);
      rem_out_bound_.fill(0.0);
      for (std::size_t o = 0; o < outside_.size(); ++o) {
        for (std::size_t l = 0; l < kLambdas.size(); ++l) {
          rem_out_bound_[l] += out_bound_[l][o];
        }
      }
      dfs(0);
    }
    OffloadResult result;
    result.solution = best_solution_;
    result.alpha = best_;
    result.nodes = nodes_;
    result.proven = !aborted_ && schedules_proven_;
    if (drones_ > 0 && outside_.size() > kMaxExactSlotInsertions) {
      repair_by_insertion(result);
      result.proven = false;
    }
    if (drones_ == 0 && !outside_.empty()) result.proven = false;
    // Report the cost exactly as evaluate() sums it.
    result.alpha = evaluate(inst_, result.solution).alpha;
    return result;
  }

 private:
  void prepare() {
    const int n = inst_.num_customers();
    std::vector<char> in_s(n + 1, 0);
    for (int c : s_) {
      if (c < 1 || c > n) {
        throw std::invalid_argument("sequence references unknown customer " +
                                    std::to_string(c));
      }
      if (in_s[c]) {
        throw std::invalid_argument("sequence repeats customer " +
                                    std::to_string(c));
      }
      in_s[c] = 1;
    }
    for (int c = 1; c <= n; ++c) {
      if (in_s[c]) continue;
      if (problem_.mode == OffloadMode::order_only) {
        throw InfeasibleProblem("order-only problem: customer " +
                                std::to_string(c) + " is not in the sequence");
      }
      if (!inst_.is_eligible(c)) {
        throw InfeasibleProblem("customer " + std::to_string(c) +
                                " is outside the sequence but not eligible");
      }
      outside_.push_back(c);
    }
  }

  void seed_incumbent() {
    if (problem_.incumbent) {
      const Evaluation e = evaluate(inst_, *problem_.incumbent);
      best_ = e.alpha;
      best_solution_ = *problem_.incumbent;
    }
    // Everything from s on the truck, everything else on drones.
    Solution base;
    base.truck_tour = s_;
    if (drones_ == 0) {
      for (int c : outside_) cheapest_insert(t_, base.truck_tour, c);
      base.drones.clear();
    } else {
      const auto sched = scheduler_.solve(outside_);
      base.drones = sched.by_machine;
      if (!sched.proven) schedules_proven_ = false;
    }
    if (base.drones.size() < static_cast<std::size_t>(drones_)) {
      base.drones.resize(drones_);
    }
    const double alpha = evaluate(inst_, base).alpha;
    if (alpha < best_ - kTimeTolerance) {
      best_ = alpha;
      best_solution_ = std::move(base);
    }
  }

  // --- bounds -------------------------------------------------------------

  double w(int a, int b) const {
    return insertion() ? (*closure_)(a, b) : t_(a, b);
  }
  bool insertion() const {
    return problem_.mode == OffloadMode::order_plus_insertion;
  }
  int node_at(int pos) const { return pos == m_ ? 0 : s_[pos]; }
  bool skippable(int pos) const {
    return pos < m_ && inst_.is_eligible(s_[pos]);
  }

  void build_bounds() {
    if (insertion()) {
      closure_ = problem_.closure
                     ? problem_.closure
                     : std::make_shared<const TimeMatrix>(
                           shortest_path_closure(t_));
    }
    const int nodes = inst_.num_nodes();
    // Least extra truck time any outside customer can cost when inserted.
    std::vector<double> insert_extra(outside_.size(), kInf);
    for (std::size_t o = 0; o < outside_.size(); ++o) {
      const int j = outside_[o];
      for (int a = 0; a < nodes; ++a) {
        if (a == j) continue;
        for (int b = 0; b < nodes; ++b) {
          if (b == j) continue;
          insert_extra[o] =
              std::min(insert_extra[o], w(a, j) + w(j, b) - w(a, b));
        }
      }
      insert_extra[o] = std::max(0.0, insert_extra[o]);
    }
    for (std::size_t l = 0; l < kLambdas.size(); ++l) {
      const double lam = kLambdas[l];
      const double pen = (1.0 - lam) / drones_;
      auto& g = completion_[l];
      g.assign(m_ + 1, 0.0);
      for (int r = m_ - 1; r >= 0; --r) {
        double best = kInf;
        double skipped = 0.0;
        for (int nxt = r + 1; nxt <= m_; ++nxt) {
          best = std::min(best, lam * w(s_[r], node_at(nxt)) + skipped + g[nxt]);
          if (!skippable(nxt)) break;
          skipped += pen * inst_.drone(s_[nxt]);
        }
        g[r] = best;
      }
      out_bound_[l].assign(outside_.size(), 0.0);
      for (std::size_t o = 0; o < outside_.size(); ++o) {
        out_bound_[l][o] = std::min(lam * insert_extra[o],
                                    pen * inst_.drone(outside_[o]));
      }
    }
  }

  double lower_bound() const {
    double lb = std::max(drone_max_, drone_sum_ / drones_);
    for (std::size_t l = 0; l < kLambdas.size(); ++l) {
      const double lam = kLambdas[l];
      const double pen = (1.0 - lam) / drones_;
      double best = kInf;
      double skipped = 0.0;
      for (int nxt = p_; nxt <= m_; ++nxt) {
        best = std::min(best, lam * w(u_, node_at(nxt)) + skipped +
                                  completion_[l][nxt]);
        if (!skippable(nxt)) break;
        skipped += pen * inst_.drone(s_[nxt]);
      }
      lb = std::max(lb, lam * truck_ + pen * drone_sum_ + best +
                            rem_out_bound_[l]);
    }
    return lb;
  }

  bool prune() const { return lower_bound() >= best_ - kTimeTolerance; }

  bool tick() {
    ++nodes_;
    if (problem_.limits.node_limit) {
      if (nodes_ > *problem_.limits.node_limit) aborted_ = true;
    } else if ((nodes_ & 255u) == 0) {
      const std::chrono::duration<double> spent =
          std::chrono::steady_clock::now() - start_;
      if (spent.count() > problem_.limits.time_limit_s) aborted_ = true;
    }
    return aborted_;
  }

  // --- search -------------------------------------------------------------

  void dfs(int p) {
    if (tick() || prune()) return;
    if (p == m_) {
      keep_with_run(0);
      return;
    }
    const int x = s_[p];
    if (!inst_.is_eligible(x)) {
      keep_with_run(0);
      return;
    }
    const int next = node_at(p + 1);
    const double saving = t_(u_, x) + t_(x, next) - t_(u_, next);
    if (saving < inst_.drone(x)) {
      keep_with_run(0);
      if (aborted_) return;
      offload(p);
    } else {
      offload(p);
      if (aborted_) return;
      keep_with_run(0);
    }
  }

  void offload(int p) {
    const int x = s_[p];
    const double saved_max = drone_max_;
    drone_jobs_.push_back(x);
    drone_sum_ += inst_.drone(x);
    drone_max_ = std::max(drone_max_, inst_.drone(x));
    flying_[p] = 1;
    ++p_;
    dfs(p_);
    --p_;
    flying_[p] = 0;
    drone_max_ = saved_max;
    drone_sum_ -= inst_.drone(x);
    drone_jobs_.pop_back();
  }

  // Truck moves to s[p_] (or home when p_ == m_), optionally through a run of
  // outside customers first.
  void keep_with_run(int run) {
    move_to_next_kept(run);
    if (aborted_ || !insertion() || run >= kMaxExactSlotInsertions) return;
    for (std::size_t o = 0; o < outside_.size(); ++o) {
      if (used_out_[o]) continue;
      const int j = outside_[o];
      const int saved_u = u_;
      const double saved_truck = truck_;
      used_out_[o] = 1;
      for (std::size_t l = 0; l < kLambdas.size(); ++l) {
        rem_out_bound_[l] -= out_bound_[l][o];
      }
      truck_ += t_(u_, j);
      u_ = j;
      route_.push_back(j);
      if (!tick() && !prune()) keep_with_run(run + 1);
      route_.pop_back();
      u_ = saved_u;
      truck_ = saved_truck;
      for (std::size_t l = 0; l < kLambdas.size(); ++l) {
        rem_out_bound_[l] += out_bound_[l][o];
      }
      used_out_[o] = 0;
      if (aborted_) return;
    }
  }

  void move_to_next_kept(int run) {
    if (p_ == m_) {
      leaf(truck_ + t_(u_, 0));
      return;
    }
    if (problem_.window_rules && run == 0 && violates_window_rule()) return;
    const int x = s_[p_];
    const int saved_u = u_;
    const int saved_q = q_;
    const double saved_truck = truck_;
    truck_ += t_(u_, x);
    u_ = x;
    q_ = p_;
    route_.push_back(x);
    ++p_;
    dfs(p_);
    --p_;
    route_.pop_back();
    q_ = saved_q;
    u_ = saved_u;
    truck_ = saved_truck;
  }

  // Direct arc s[q_] -> s[p_] needs every customer strictly between on a
  // drone when the pair lies inside the window.
  bool violates_window_rule() const {
    if (q_ < 0) return false;
    const int gap = p_ - q_;
    if (gap < 2 || gap >= problem_.delta) return false;
    for (int k = q_ + 1; k < p_; ++k) {
      if (!flying_[k]) return true;
    }
    return false;
  }

  void leaf(double truck_total) {
    if (truck_total >= best_ - kTimeTolerance) return;
    std::vector<int> jobs = drone_jobs_;
    double max_job = drone_max_;
    for (std::size_t o = 0; o < outside_.size(); ++o) {
      if (used_out_[o]) continue;
      jobs.push_back(outside_[o]);
      max_job = std::max(max_job, inst_.drone(outside_[o]));
    }
    const double sum = drone_time_sum(inst_, jobs);
    if (std::max({truck_total, max_job, sum / drones_}) >=
        best_ - kTimeTolerance) {
      return;
    }
    JobSet set{{}, drones_};
    std::sort(jobs.begin(), jobs.end());
    for (int c : jobs) set.jobs.push_back({c, inst_.drone(c)});
    Schedule quick = lpt(set);
    std::vector<std::vector<int>> assignment;
    double makespan = quick.makespan;
    if (makespan <= truck_total) {
      assignment = quick.by_machine(set);
    } else {
      auto exact = scheduler_.solve(jobs);
      if (!exact.proven) schedules_proven_ = false;
      makespan = exact.makespan;
      assignment = std::move(exact.by_machine);
    }
    const double alpha = std::max(truck_total, makespan);
    if (alpha < best_ - kTimeTolerance) {
      best_ = alpha;
      best_solution_.truck_tour = route_;
      best_solution_.drones = std::move(assignment);
    }
  }

  // Outside customers left on drones may still profit from a truck slot that
  // the bounded enumeration did not consider.
  void repair_by_insertion(OffloadResult& result) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int c : outside_) {
        Solution cand = result.solution;
        bool on_drone = false;
        for (auto& list : cand.drones) {
          auto it = std::find(list.begin(), list.end(), c);
          if (it != list.end()) {
            list.erase(it);
            on_drone = true;
          }
        }
        if (!on_drone) continue;
        cheapest_insert(t_, cand.truck_tour, c);
        std::vector<int> jobs;
        for (const auto& list : cand.drones) {
          jobs.insert(jobs.end(), list.begin(), list.end());
        }
        auto sched = scheduler_.solve(jobs);
        cand.drones = sched.by_machine;
        const double alpha = evaluate(inst_, cand).alpha;
        if (alpha < result.alpha - kTimeTolerance) {
          result.solution = std::move(cand);
          result.alpha = alpha;
          improved = true;
        }
      }
    }
  }

  const OrderConstrainedProblem& problem_;
  const Instance& inst_;
  const TimeMatrix& t_;
  const std::vector<int>& s_;
  const int m_;
  const int drones_;
  DroneScheduler scheduler_;
  std::chrono::steady_clock::time_point start_;

  std::vector<int> outside_;
  std::shared_ptr<const TimeMatrix> closure_;
  std::array<std::vector<double>, kLambdas.size()> completion_;
  std::array<std::vector<double>, kLambdas.size()> out_bound_;
  std::array<double, kLambdas.size()> rem_out_bound_{};

  // search state
  std::vector<int> route_;
  std::vector<int> drone_jobs_;
  std::vector<char> flying_;
  std::vector<char> used_out_;
  double truck_ = 0.0;
  double drone_sum_ = 0.0;
  double drone_max_ = 0.0;
  int u_ = 0;
  int q_ = -1;
  int p_ = 0;

  double best_ = kInf;
  Solution best_solution_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  bool schedules_proven_ = true;
};

}  // namespace

OffloadResult solve_offload(const OrderConstrainedProblem& problem) {
  if (problem.instance == nullptr) {
    throw std::invalid_argument("solve_offload: problem has no instance");
  }
  return OffloadSearch(problem).run();
}

std::vector<WindowRule> window_dominance_filter(
    const OrderConstrainedProblem& problem) {
  std::vector<WindowRule> rules;
  const auto& s = problem.s.order;
  const int m = static_cast<int>(s.size());
  for (int from = 0; from < m; ++from) {
    for (int to = from + 2; to < m && to - from < problem.delta; ++to) {
      WindowRule rule{from, to, {}};
      rule.must_fly.assign(s.begin() + from + 1, s.begin() + to);
      rules.push_back(std::move(rule));
    }
  }
  return rules;
}

TimeMatrix shortest_path_closure(const TimeMatrix& t) {
  TimeMatrix d = t;
  const Eigen::Index n = d.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double dik = d(i, k);
      for (Eigen::Index j = 0; j < n; ++j) {
        d(i, j) = std::min(d(i, j), dik + d(k, j));
      }
    }
  }
  return d;
}

}  // namespace pdstsp
