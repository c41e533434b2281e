#ifndef PDSTSP_MILP_HPP
#define PDSTSP_MILP_HPP

#include "pdstsp/core.hpp"
#include "pdstsp/tsp.hpp"

#include <string>
#include <vector>

namespace pdstsp {

enum class VarType { binary, continuous };

struct Variable {
  std::string name;
  VarType type = VarType::continuous;
  double lower = 0.0;
  double upper = 0.0;  // +inf for unbounded
  double objective = 0.0;
};

enum class Sense { le, ge, eq };

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Row {
  std::string name;
  Sense sense = Sense::le;
  std::vector<Term> terms;
  double rhs = 0.0;
};

/// Minimisation model over x (truck arcs), y (drone assignments) and alpha.
/// Connectivity rows are never materialised here; they come from separation.
struct ModelIR {
  std::string name;
  int num_nodes = 0;
  int n_drones = 0;
  std::vector<int> eligible;  // customer id of each y row block
  std::vector<Variable> variables;
  std::vector<Row> rows;

  int x(int i, int j) const { return i * num_nodes + j; }
  /// `slot` is the position of the customer in `eligible`.
  int y(int slot, int k) const {
    return num_nodes * num_nodes + slot * n_drones + k;
  }
  int alpha() const { return static_cast<int>(variables.size()) - 1; }
};

ModelIR build_model(const Instance& instance);

/// Fixed-format MPS. Names longer than eight characters switch the whole
/// model to compact base-36 names; throws std::length_error if even those
/// overflow.
std::string export_mps(const ModelIR& model);

/// A point of the continuous relaxation. x is (n+1) x (n+1); y is
/// (n+1) x |U| with rows of ineligible customers (and the depot) zero.
struct FractionalSolution {
  TimeMatrix x;
  TimeMatrix y;
};

/// The (x, y) image of an integral solution.
FractionalSolution to_fractional(const Instance& instance,
                                 const Solution& solution);

struct CutSet {
  std::vector<int> s_side;  // sorted, contains the depot
  double capacity = 0.0;
};

struct MaxFlowResult {
  double value = 0.0;
  std::vector<int> source_side;  // sorted
};

/// Edmonds-Karp on a dense capacity matrix, arcs scanned by increasing node
/// index. The cut is the residual reachability set of the source. Throws
/// std::invalid_argument when source == sink.
MaxFlowResult max_flow(const TimeMatrix& capacity, int source, int sink);

inline constexpr double kCutEpsilon = 1e-6;

/// Mass leaving S: x over arcs from S to V\S plus y of the customers in V\S.
double cut_mass(const FractionalSolution& frac, const std::vector<int>& s_side);

/// Connectivity cuts violated by more than eps, one max flow per customer.
/// Customers already cut off by an emitted set are not re-solved.
std::vector<CutSet> separate_connectivity(const Instance& instance,
                                          const FractionalSolution& frac,
                                          double eps = kCutEpsilon);

/// All-truck tour from the tour engine.
Solution warm_start(const Instance& instance,
                    const TourOptimizer& optimizer = default_tour_optimizer());

/// Port for an LP engine driving a branch-and-cut over ModelIR. No
/// implementation ships with the library.
class RelaxationOracle {
 public:
  virtual ~RelaxationOracle() = default;
  virtual FractionalSolution solve_relaxation(
      const ModelIR& model, const std::vector<CutSet>& cut_pool) = 0;
};

}  // namespace pdstsp

#endif  // PDSTSP_MILP_HPP
