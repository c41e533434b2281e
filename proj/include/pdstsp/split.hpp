#ifndef PDSTSP_SPLIT_HPP
#define PDSTSP_SPLIT_HPP

#include "pdstsp/core.hpp"
#include "pdstsp/tsp.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace pdstsp {

enum class OffloadMode {
  /// `s` holds every customer; the truck keeps a subsequence of `s` and the
  /// dropped customers fly.
  order_only,
  /// Customers outside `s` (all eligible) fly or are inserted between kept
  /// customers of `s`, whose relative order never inverts.
  order_plus_insertion,
};

struct SolveLimits {
  double time_limit_s = 10.0;
  /// Deterministic node budget; when set the wall clock is ignored.
  std::optional<std::uint64_t> node_limit;
};

/// Largest number of outside customers placed in one slot by exact
/// enumeration of their order.
inline constexpr int kMaxExactSlotInsertions = 4;

struct OrderConstrainedProblem {
  const Instance* instance = nullptr;
  Sequence s;
  OffloadMode mode = OffloadMode::order_only;
  /// Window width for the skip-arc rules.
  int delta = 20;
  bool window_rules = false;
  SolveLimits limits;
  /// Starting upper bound; returned unchanged if nothing strictly better
  /// exists.
  std::optional<Solution> incumbent;
  /// Shortest-path closure of the truck matrix, used for bounds in insertion
  /// mode. Computed on demand when absent.
  std::shared_ptr<const TimeMatrix> closure;
};

struct OffloadResult {
  Solution solution;
  double alpha = 0.0;
  bool proven = false;
  std::uint64_t nodes = 0;
};

/// Thrown when the problem admits no solution (an ineligible customer outside
/// `s`, or `s` missing customers in order-only mode).
class InfeasibleProblem : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Minimises the makespan over the order-constrained restriction by branch
/// and bound. The drone side is solved as exact P||Cmax.
OffloadResult solve_offload(const OrderConstrainedProblem& problem);

/// Skip-arc rule: the truck may run straight from s[from] to s[to] only if
/// every s[p] with from < p < to is on a drone.
struct WindowRule {
  int from = 0;
  int to = 0;
  std::vector<int> must_fly;  // customer ids
};

/// Rules for every pair with 2 <= to - from < delta.
std::vector<WindowRule> window_dominance_filter(
    const OrderConstrainedProblem& problem);

/// Floyd-Warshall closure of a time matrix.
TimeMatrix shortest_path_closure(const TimeMatrix& t);

}  // namespace pdstsp

#endif  // PDSTSP_SPLIT_HPP
