#ifndef PDSTSP_INSTANCES_HPP
#define PDSTSP_INSTANCES_HPP

#include "pdstsp/core.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pdstsp {

/// Malformed input document. The message names the line or JSON field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- JSON documents ---------------------------------------------------------

Instance parse_instance(std::string_view text);
std::string write_instance(const Instance& instance);

struct SolutionDocument {
  std::string instance;
  Solution solution;
  double alpha = 0.0;
};

SolutionDocument parse_solution(std::string_view text);
std::string write_solution(const Instance& instance, const Solution& solution);

// --- TSPLIB -----------------------------------------------------------------

struct TsplibNode {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
};

struct TsplibData {
  std::string name;
  /// Recorded as found; metrics are always computed on raw coordinates.
  std::string edge_weight_type;
  std::vector<TsplibNode> nodes;
  /// Largest number of fractional digits among the coordinates.
  int decimals = 0;
};

TsplibData parse_tsplib(std::string_view text);

// --- generators -------------------------------------------------------------

enum class TsplibDepot { center, corner };

struct GenSpecTsplib {
  TsplibData source;
  int eligible_pct = 80;
  double drone_speed_factor = 2.0;
  int n_drones = 1;
  TsplibDepot depot = TsplibDepot::center;
  std::uint64_t seed = 0;
};

/// Every TSPLIB node becomes a customer and a new depot is placed at the
/// rounded centroid or at the bounding-box minimum corner. Truck: Manhattan
/// distance; drone: twice the Euclidean depot distance over the speed factor.
/// floor(pct * n / 100) eligible customers are drawn uniformly without
/// replacement.
Instance derive_pdstsp(const GenSpecTsplib& spec);

enum class MurrayDepot { center, edge, origin };

struct GenSpecMurrayChu {
  int n_customers = 10;
  MurrayDepot depot = MurrayDepot::center;
  int pct_in_drone_range = 80;
  double endurance = 30.0;     // minutes
  double speed = 25.0;         // miles per hour, truck and drones
  double pct_weight_ineligible = 0.15;  // fraction of in-range customers
  double region = 20.0;        // side of the square customer region, miles
  int n_drones = 1;
  std::uint64_t seed = 0;
};

/// Square region [0, region]^2, times in minutes. floor(pct * n / 100)
/// customers are drawn inside drone range (round trip within endurance), the
/// rest outside it; a rounded share pct_weight_ineligible of the in-range
/// customers is excluded for parcel weight. Throws std::invalid_argument on an
/// infeasible combination of settings.
Instance gen_murray_chu(const GenSpecMurrayChu& spec);

const char* to_string(TsplibDepot depot);
const char* to_string(MurrayDepot depot);
TsplibDepot parse_tsplib_depot(std::string_view text);
MurrayDepot parse_murray_depot(std::string_view text);

}  // namespace pdstsp

#endif  // PDSTSP_INSTANCES_HPP
