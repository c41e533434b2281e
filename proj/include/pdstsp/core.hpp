#ifndef PDSTSP_CORE_HPP
#define PDSTSP_CORE_HPP

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdstsp {

/// Absolute tolerance used by every solver when comparing time values.
inline constexpr double kTimeTolerance = 1e-9;

using TimeMatrix = Eigen::MatrixXd;

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

enum class TruckMetric { manhattan, matrix };
enum class DroneMetric { euclidean, map };

/// How the time data of an instance was produced. Kept so that serialization
/// can reproduce the source document field by field.
struct Geometry {
  std::vector<Point> coords;  // index 0 is the depot
  TruckMetric truck_metric = TruckMetric::matrix;
  DroneMetric drone_metric = DroneMetric::map;
  double truck_speed = 1.0;
  double drone_speed_factor = 1.0;

  bool operator==(const Geometry&) const = default;
};

/// A PDSTSP instance on nodes 0..n, node 0 being the depot.
///
/// The truck time matrix may be asymmetric and need not satisfy the triangle
/// inequality. Drone round-trip times exist exactly for the eligible
/// customers. Instances are immutable once built.
class Instance {
 public:
  Instance() = default;

  /// Builds an instance from explicit data. Throws std::invalid_argument when
  /// an invariant is broken.
  Instance(std::string name, TimeMatrix truck_time,
           std::map<int, double> drone_time, int n_drones,
           std::optional<Geometry> geometry = std::nullopt);

  /// Computes truck times as Manhattan distance over truck speed and drone
  /// times as twice the Euclidean depot distance over drone speed.
  static Instance from_coordinates(std::string name, std::vector<Point> coords,
                                   const std::vector<bool>& eligible,
                                   double truck_speed,
                                   double drone_speed_factor, int n_drones);

  const std::string& name() const { return name_; }
  int num_customers() const { return static_cast<int>(truck_time_.rows()) - 1; }
  int num_nodes() const { return static_cast<int>(truck_time_.rows()); }
  int n_drones() const { return n_drones_; }

  const TimeMatrix& truck_time() const { return truck_time_; }
  double truck(int from, int to) const { return truck_time_(from, to); }

  bool is_eligible(int customer) const { return eligible_flag_[customer]; }
  /// Drone round-trip time; zero for ineligible customers.
  double drone(int customer) const { return drone_time_[customer]; }
  const std::map<int, double>& drone_times() const { return drone_map_; }
  const std::vector<int>& eligible() const { return eligible_; }
  std::vector<int> customers() const;

  const std::optional<Geometry>& geometry() const { return geometry_; }

  /// Same instance with the truck matrix replaced; geometry is dropped.
  Instance with_truck_time(TimeMatrix truck_time) const;
  Instance with_drones(int n_drones) const;
  Instance with_name(std::string name) const;

 private:
  std::string name_;
  TimeMatrix truck_time_;
  std::map<int, double> drone_map_;
  std::vector<double> drone_time_;
  std::vector<bool> eligible_flag_;
  std::vector<int> eligible_;
  int n_drones_ = 0;
  std::optional<Geometry> geometry_;
};

/// Truck tour (depot implicit at both ends) plus one job list per drone.
struct Solution {
  std::vector<int> truck_tour;
  std::vector<std::vector<int>> drones;

  bool operator==(const Solution&) const = default;
};

struct Evaluation {
  double truck_time_total = 0.0;
  std::vector<double> drone_loads;
  double alpha = 0.0;
};

enum class Rule {
  unknown_customer,
  duplicate_service,
  missing_customer,
  not_drone_eligible,
  drone_index_out_of_range,
};

struct Violation {
  Rule rule;
  int customer;  // -1 when the violation is not tied to a customer
  std::string message;
};

const char* to_string(Rule rule);

class InvalidSolution : public std::invalid_argument {
 public:
  explicit InvalidSolution(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

std::vector<Violation> validate(const Instance& instance,
                                const Solution& solution);

/// Throws InvalidSolution when validate reports anything.
Evaluation evaluate(const Instance& instance, const Solution& solution);

/// Closed walk depot -> tour -> depot.
template <typename Derived>
typename Derived::Scalar closed_tour_time(const Eigen::MatrixBase<Derived>& t,
                                          const std::vector<int>& tour) {
  typename Derived::Scalar total = 0;
  int prev = 0;
  for (int c : tour) {
    total += t(prev, c);
    prev = c;
  }
  return total + t(prev, 0);
}

}  // namespace pdstsp

#endif  // PDSTSP_CORE_HPP
