#include "pdstsp/heuristics.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

namespace pdstsp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

const TourOptimizer& engine(const TourOptimizer* optimizer) {
  return optimizer != nullptr ? *optimizer : default_tour_optimizer();
}

bool degenerate(const Instance& inst) {
  return inst.eligible().empty() || inst.n_drones() == 0;
}

// Tracks the incumbent and enforces that it never gets worse.
class Incumbent {
 public:
  explicit Incumbent(const Instance& inst) : inst_(inst) {}

  // Returns true on strict improvement.
  bool offer(const Solution& candidate) {
    const double alpha = evaluate(inst_, candidate).alpha;  // validates
    if (has_ && alpha >= alpha_ - kTimeTolerance) return false;
    solution_ = candidate;
    alpha_ = alpha;
    has_ = true;
    return true;
  }

  const Solution& solution() const { return solution_; }
  double alpha() const { return alpha_; }

 private:
  const Instance& inst_;
  Solution solution_;
  double alpha_ = 0.0;
  bool has_ = false;
};

Sequence giant_tour(const Instance& inst, const TourOptimizer& optimizer) {
  const auto customers = inst.customers();
  if (customers.empty()) return {};
  return optimizer.optimize(inst.truck_time(), customers);
}

bool deterministic(const FastOptions& o) { return o.max_evaluations.has_value(); }

SolveLimits offload_limits(const FastOptions& o) {
  SolveLimits limits = o.offload;
  if (deterministic(o) && !limits.node_limit) {
    limits.node_limit = kDeterministicOffloadNodes;
  }
  return limits;
}

nlohmann::ordered_json fast_params(const FastOptions& o) {
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  if (o.max_evaluations) p["max_evaluations"] = *o.max_evaluations;
  if (o.time_limit_s) p["time_limit_s"] = *o.time_limit_s;
  p["tour_improving_only"] = o.tour_improving_only;
  const SolveLimits limits = offload_limits(o);
  if (limits.node_limit) {
    p["offload_node_limit"] = *limits.node_limit;
  } else {
    p["offload_time_limit_s"] = limits.time_limit_s;
  }
  return p;
}

struct FastState {
  Sequence s;
  OffloadResult result;
};

FastState run_fast(const Instance& inst, const FastOptions& o) {
  FastState st;
  st.s = giant_tour(inst, engine(o.optimizer));
  OrderConstrainedProblem problem;
  problem.instance = &inst;
  problem.s = st.s;
  problem.mode = OffloadMode::order_only;
  problem.limits = offload_limits(o);
  st.result = solve_offload(problem);
  return st;
}

HeuristicResult finish(const Instance& inst, const char* algorithm,
                       const Incumbent& best, nlohmann::ordered_json params,
                       bool replayable, Clock::time_point start,
                       std::uint64_t iterations, std::uint64_t evaluations,
                       std::uint64_t seed = 0) {
  HeuristicResult out;
  out.solution = best.solution();
  out.alpha = best.alpha();
  out.seconds = seconds_since(start);
  RunReport& r = out.report;
  r.instance_name = inst.name();
  r.algorithm = algorithm;
  r.seed = seed;
  r.params = std::move(params);
  r.cost = best.alpha();
  if (!replayable) r.elapsed_s = out.seconds;
  r.iterations = iterations;
  r.evaluations = evaluations;
  r.proven = false;
  return out;
}

HeuristicResult neighbourhood_descent(const Instance& inst,
                                      const FastOptions& o,
                                      const char* algorithm, bool three_opt) {
  const auto start = Clock::now();
  FastState st = run_fast(inst, o);
  Incumbent best(inst);
  best.offer(st.result.solution);
  std::uint64_t evaluations = 1;
  std::uint64_t improvements = 0;
  const bool replayable = deterministic(o);
  auto params = fast_params(o);

  if (degenerate(inst) || st.s.size() < 3) {
    return finish(inst, algorithm, best, std::move(params), replayable, start,
                  improvements, evaluations);
  }

  const int m = static_cast<int>(st.s.size());
  const std::vector<SequenceMove> moves =
      three_opt ? three_opt_moves(m) : two_opt_moves(m);
  const TimeMatrix& t = inst.truck_time();
  const SolveLimits limits = offload_limits(o);

  OrderConstrainedProblem problem;
  problem.instance = &inst;
  problem.mode = OffloadMode::order_only;
  problem.limits = limits;

  auto out_of_budget = [&] {
    if (o.max_evaluations && evaluations >= *o.max_evaluations) return true;
    return o.time_limit_s && seconds_since(start) >= *o.time_limit_s;
  };

  Sequence current = st.s;
  double current_tour = closed_tour_time(t, current.order);
  std::size_t since_improvement = 0;
  std::size_t next = 0;
  while (since_improvement < moves.size() && !out_of_budget()) {
    const SequenceMove& move = moves[next];
    next = (next + 1) % moves.size();
    ++since_improvement;
    std::vector<int> candidate = apply_move(current.order, move);
    const double tour = closed_tour_time(t, candidate);
    if (o.tour_improving_only && tour >= current_tour - kTimeTolerance) {
      continue;
    }
    problem.s.order = std::move(candidate);
    problem.incumbent = best.solution();
    const OffloadResult r = solve_offload(problem);
    ++evaluations;
    if (best.offer(r.solution)) {
      current = problem.s;
      current_tour = tour;
      since_improvement = 0;
      ++improvements;
    }
  }
  return finish(inst, algorithm, best, std::move(params), replayable, start,
                improvements, evaluations);
}

}  // namespace

HeuristicResult fast(const Instance& inst, const FastOptions& o) {
  const auto start = Clock::now();
  FastState st = run_fast(inst, o);
  Incumbent best(inst);
  best.offer(st.result.solution);
  return finish(inst, "fast", best, fast_params(o), deterministic(o), start, 1,
                1);
}

HeuristicResult fast2(const Instance& inst, const FastOptions& o) {
  return neighbourhood_descent(inst, o, "fast2", false);
}

HeuristicResult fast3(const Instance& inst, const FastOptions& o) {
  return neighbourhood_descent(inst, o, "fast3", true);
}

HeuristicResult rrls(const Instance& inst, const RRLSParams& p) {
  if (!(p.beta_s > 0.0) || p.delta < 1 || p.gamma_pct < 0.0 ||
      p.large_threshold < 0 ||
      (!p.deterministic_budget && !(p.time_limit_s > 0.0))) {
    throw std::invalid_argument("rrls: parameters must be positive");
  }
  const auto start = Clock::now();
  const bool replayable = p.deterministic_budget.has_value();
  const bool large = inst.num_customers() > p.large_threshold;
  const TourOptimizer& optimizer = engine(p.optimizer);
  const TimeMatrix& t = inst.truck_time();

  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  if (replayable) {
    params["deterministic_budget"] = *p.deterministic_budget;
  } else {
    params["time_limit_s"] = p.time_limit_s;
  }
  params["beta_s"] = p.beta_s;
  params["delta"] = p.delta;
  params["gamma_pct"] = p.gamma_pct;
  params["large_threshold"] = p.large_threshold;
  params["variant"] = large ? "large" : "base";

  // Steps 1-2.
  Incumbent best(inst);
  Sequence s = giant_tour(inst, optimizer);

  SolveLimits limits;
  limits.time_limit_s = p.beta_s;
  if (replayable) limits.node_limit = kDeterministicOffloadNodes;

  if (degenerate(inst)) {
    OrderConstrainedProblem problem;
    problem.instance = &inst;
    problem.s = s;
    problem.limits = limits;
    best.offer(solve_offload(problem).solution);
    return finish(inst, "rrls", best, std::move(params), replayable, start, 0,
                  1, p.seed);
  }

  auto closure = std::make_shared<const TimeMatrix>(shortest_path_closure(t));
  Rng rng(p.seed);
  std::vector<int> ineligible;
  std::vector<int> eligible = inst.eligible();
  for (int c : inst.customers()) {
    if (!inst.is_eligible(c)) ineligible.push_back(c);
  }

  std::uint64_t iterations = 0;
  auto keep_going = [&] {
    if (replayable) return iterations < *p.deterministic_budget;
    return iterations == 0 || seconds_since(start) < p.time_limit_s;
  };

  while (keep_going()) {
    // Step 3: offload solve on s.
    OrderConstrainedProblem problem;
    problem.instance = &inst;
    problem.s = s;
    problem.mode = OffloadMode::order_plus_insertion;
    problem.delta = p.delta;
    problem.window_rules = large;
    problem.limits = limits;
    problem.closure = closure;
    const OffloadResult r = solve_offload(problem);
    // Step 4.
    best.offer(r.solution);
    // Step 5.
    const Sequence z{r.solution.truck_tour};
    s = z.empty() ? z : optimizer.improve(t, z);
    // Step 6.
    if (s == z) {
      if (!large) {
        std::vector<int> pool = eligible;
        rng.shuffle(pool);
        std::vector<int> subset = ineligible;
        const std::size_t want = std::max(z.size(), ineligible.size());
        subset.insert(subset.end(), pool.begin(),
                      pool.begin() + static_cast<std::ptrdiff_t>(
                                         want - ineligible.size()));
        std::sort(subset.begin(), subset.end());
        s = subset.empty() ? Sequence{} : optimizer.optimize(t, subset);
      } else {
        Sequence random{inst.customers()};
        rng.shuffle(random.order);
        const TimeMatrix perturbed = perturb_matrix(t, p.gamma_pct, rng);
        s = optimizer.improve(perturbed, std::move(random));
      }
    }
    ++iterations;
  }
  return finish(inst, "rrls", best, std::move(params), replayable, start,
                iterations, iterations, p.seed);
}

}  // namespace pdstsp
