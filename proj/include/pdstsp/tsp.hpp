#ifndef PDSTSP_TSP_HPP
#define PDSTSP_TSP_HPP

#include "pdstsp/core.hpp"
#include "pdstsp/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace pdstsp {

/// Ordered list of distinct customers; the depot is implicit at both ends.
struct Sequence {
  std::vector<int> order;

  std::size_t size() const { return order.size(); }
  bool empty() const { return order.empty(); }
  bool operator==(const Sequence&) const = default;
};

/// Greedy tour over `subset` starting at the depot. Ties go to the lower id.
Sequence nearest_neighbor(const TimeMatrix& t, std::span<const int> subset);

enum class Move : unsigned {
  two_opt = 1u << 0,
  three_opt = 1u << 1,
  or_opt = 1u << 2,
};

class MoveSet {
 public:
  constexpr MoveSet() = default;
  constexpr MoveSet(Move m) : bits_(static_cast<unsigned>(m)) {}
  static constexpr MoveSet all() {
    MoveSet s;
    s.bits_ = 7u;
    return s;
  }
  constexpr MoveSet operator|(MoveSet other) const {
    MoveSet s;
    s.bits_ = bits_ | other.bits_;
    return s;
  }
  constexpr bool has(Move m) const {
    return (bits_ & static_cast<unsigned>(m)) != 0;
  }
  constexpr bool empty() const { return bits_ == 0; }

 private:
  unsigned bits_ = 0;
};

constexpr MoveSet operator|(Move a, Move b) { return MoveSet(a) | MoveSet(b); }

struct LocalSearchOptions {
  MoveSet moves = MoveSet::all();
  /// Maximum number of improving moves applied.
  std::size_t budget = std::numeric_limits<std::size_t>::max();
};

/// First-improvement local search with don't-look bits, finished by a full
/// verification pass so the result is a true local optimum unless the budget
/// ran out. Every applied move lowers the tour time by more than
/// kTimeTolerance.
Sequence local_search(const TimeMatrix& t, Sequence seq,
                      const LocalSearchOptions& options = {});

struct HeldKarpResult {
  Sequence tour;
  double cost = 0.0;
};

inline constexpr int kHeldKarpMaxCustomers = 18;

/// Optimal closed tour through the depot and `subset`. Throws
/// std::invalid_argument for more than kHeldKarpMaxCustomers customers.
HeldKarpResult held_karp(const TimeMatrix& t, std::span<const int> subset);

/// Optimal closed tour time for every subset of `customers`: entry `mask`
/// covers the customers whose bit is set in `mask`.
std::vector<double> held_karp_all_subsets(const TimeMatrix& t,
                                          std::span<const int> customers);

/// Optimal tour for one mask out of a table produced by
/// held_karp_all_subsets (recomputed, not stored).
Sequence held_karp_tour(const TimeMatrix& t, std::span<const int> customers,
                        std::uint32_t mask);

/// Scales every off-diagonal arc by an independent uniform factor in
/// [1, 1 + gamma_pct / 100].
TimeMatrix perturb_matrix(const TimeMatrix& t, double gamma_pct, Rng& rng);

/// Port for the truck-tour engine.
class TourOptimizer {
 public:
  virtual ~TourOptimizer() = default;
  /// Builds and optimizes a tour over `customers`.
  virtual Sequence optimize(const TimeMatrix& t,
                            std::span<const int> customers) const = 0;
  /// Improves a given tour.
  virtual Sequence improve(const TimeMatrix& t, Sequence start) const = 0;
};

/// Nearest neighbour followed by local_search.
class LocalSearchOptimizer final : public TourOptimizer {
 public:
  explicit LocalSearchOptimizer(LocalSearchOptions options = {})
      : options_(options) {}

  Sequence optimize(const TimeMatrix& t,
                    std::span<const int> customers) const override;
  Sequence improve(const TimeMatrix& t, Sequence start) const override;

 private:
  LocalSearchOptions options_;
};

const TourOptimizer& default_tour_optimizer();

// Sequence neighbourhoods. A reconnection cuts the sequence into
// A = [0, i), B = [i, j), C = [j, k), D = [k, m) and reassembles it.
enum class Reconnect : std::uint8_t {
  reverse_b,      // A B' D, C empty (2-opt)
  swap,           // A C B D
  swap_rev_b,     // A C B' D
  swap_rev_c,     // A C' B D
  reverse_both,   // A B' C' D
};

struct SequenceMove {
  int i = 0;
  int j = 0;
  int k = 0;
  Reconnect kind = Reconnect::reverse_b;
};

/// All 2-opt moves on a sequence of length m, lexicographic in (i, j).
std::vector<SequenceMove> two_opt_moves(int m);

/// 3-opt moves on a sequence of length m, lexicographic in (i, j, k, kind).
/// Includes the 2-opt moves (C empty) and the pure reconnections; moves that
/// would duplicate another one are not listed.
std::vector<SequenceMove> three_opt_moves(int m);

std::vector<int> apply_move(const std::vector<int>& order,
                            const SequenceMove& move);

}  // namespace pdstsp

#endif  // PDSTSP_TSP_HPP
