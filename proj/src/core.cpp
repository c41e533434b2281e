#include "pdstsp/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pdstsp {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

std::string summarize(const std::vector<Violation>& violations) {
  std::ostringstream out;
  out << "invalid solution:";
  for (const auto& v : violations) out << " [" << v.message << "]";
  return out.str();
}

}  // namespace

Instance::Instance(std::string name, TimeMatrix truck_time,
                   std::map<int, double> drone_time, int n_drones,
                   std::optional<Geometry> geometry)
    : name_(std::move(name)),
      truck_time_(std::move(truck_time)),
      drone_map_(std::move(drone_time)),
      n_drones_(n_drones),
      geometry_(std::move(geometry)) {
  require(truck_time_.rows() >= 1 && truck_time_.rows() == truck_time_.cols(),
          "truck_time must be a non-empty square matrix");
  require(n_drones_ >= 0, "n_drones must be non-negative");
  const int nodes = num_nodes();
  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j < nodes; ++j) {
      const double v = truck_time_(i, j);
      require(std::isfinite(v) && v >= 0.0,
              "truck_time[" + std::to_string(i) + "][" + std::to_string(j) +
                  "] must be finite and non-negative");
    }
    require(truck_time_(i, i) == 0.0,
            "truck_time[" + std::to_string(i) + "][" + std::to_string(i) +
                "] must be zero");
  }
  drone_time_.assign(nodes, 0.0);
  eligible_flag_.assign(nodes, false);
  for (const auto& [customer, time] : drone_map_) {
    require(customer >= 1 && customer < nodes,
            "drone_time references unknown customer " +
                std::to_string(customer));
    require(std::isfinite(time) && time >= 0.0,
            "drone_time for customer " + std::to_string(customer) +
                " must be finite and non-negative");
    drone_time_[customer] = time;
    eligible_flag_[customer] = true;
    eligible_.push_back(customer);
  }
  if (geometry_) {
    require(static_cast<int>(geometry_->coords.size()) == nodes,
            "coordinate count must equal node count");
  }
}

Instance Instance::from_coordinates(std::string name, std::vector<Point> coords,
                                    const std::vector<bool>& eligible,
                                    double truck_speed,
                                    double drone_speed_factor, int n_drones) {
  require(!coords.empty(), "at least the depot coordinate is required");
  require(eligible.size() == coords.size(),
          "eligibility flags must cover every node");
  require(truck_speed > 0.0, "truck_speed must be positive");
  require(drone_speed_factor > 0.0, "drone_speed_factor must be positive");
  const int nodes = static_cast<int>(coords.size());
  TimeMatrix t(nodes, nodes);
  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j < nodes; ++j) {
      t(i, j) = i == j ? 0.0
                       : (std::abs(coords[i].x - coords[j].x) +
                          std::abs(coords[i].y - coords[j].y)) /
                             truck_speed;
    }
  }
  const double drone_speed = truck_speed * drone_speed_factor;
  std::map<int, double> drone;
  for (int i = 1; i < nodes; ++i) {
    if (!eligible[i]) continue;
    const double dx = coords[i].x - coords[0].x;
    const double dy = coords[i].y - coords[0].y;
    drone[i] = 2.0 * std::sqrt(dx * dx + dy * dy) / drone_speed;
  }
  Geometry geometry{std::move(coords), TruckMetric::manhattan,
                    DroneMetric::euclidean, truck_speed, drone_speed_factor};
  return Instance(std::move(name), std::move(t), std::move(drone), n_drones,
                  std::move(geometry));
}

std::vector<int> Instance::customers() const {
  std::vector<int> ids(num_customers());
  for (int i = 0; i < num_customers(); ++i) ids[i] = i + 1;
  return ids;
}

Instance Instance::with_truck_time(TimeMatrix truck_time) const {
  return Instance(name_, std::move(truck_time), drone_map_, n_drones_);
}

Instance Instance::with_drones(int n_drones) const {
  return Instance(name_, truck_time_, drone_map_, n_drones, geometry_);
}

Instance Instance::with_name(std::string name) const {
  return Instance(std::move(name), truck_time_, drone_map_, n_drones_,
                  geometry_);
}

const char* to_string(Rule rule) {
  switch (rule) {
    case Rule::unknown_customer: return "unknown customer";
    case Rule::duplicate_service: return "duplicate service";
    case Rule::missing_customer: return "missing customer";
    case Rule::not_drone_eligible: return "not drone-eligible";
    case Rule::drone_index_out_of_range: return "drone index out of range";
  }
  return "?";
}

InvalidSolution::InvalidSolution(std::vector<Violation> violations)
    : std::invalid_argument(summarize(violations)),
      violations_(std::move(violations)) {}

std::vector<Violation> validate(const Instance& instance,
                                const Solution& solution) {
  std::vector<Violation> out;
  const int n = instance.num_customers();
  std::vector<int> served(n + 1, 0);

  auto note = [&](Rule rule, int customer, const std::string& where) {
    std::string msg = std::string(to_string(rule));
    if (customer >= 0) msg += ": customer " + std::to_string(customer);
    if (!where.empty()) msg += " (" + where + ")";
    out.push_back({rule, customer, std::move(msg)});
  };

  auto serve = [&](int c, const std::string& where) {
    if (c < 1 || c > n) {
      note(Rule::unknown_customer, c, where);
      return false;
    }
    if (++served[c] == 2) note(Rule::duplicate_service, c, where);
    return true;
  };

  for (int c : solution.truck_tour) serve(c, "truck");

  const int drones = static_cast<int>(solution.drones.size());
  for (int k = 0; k < drones; ++k) {
    const std::string where = "drone " + std::to_string(k);
    if (k >= instance.n_drones() && !solution.drones[k].empty()) {
      note(Rule::drone_index_out_of_range, -1,
           where + " but instance has " +
               std::to_string(instance.n_drones()));
    }
    for (int c : solution.drones[k]) {
      if (serve(c, where) && !instance.is_eligible(c)) {
        note(Rule::not_drone_eligible, c, where);
      }
    }
  }
  for (int c = 1; c <= n; ++c) {
    if (served[c] == 0) note(Rule::missing_customer, c, "");
  }
  return out;
}

Evaluation evaluate(const Instance& instance, const Solution& solution) {
  auto violations = validate(instance, solution);
  if (!violations.empty()) throw InvalidSolution(std::move(violations));

  Evaluation e;
  e.truck_time_total = closed_tour_time(instance.truck_time(),
                                        solution.truck_tour);
  e.drone_loads.assign(instance.n_drones(), 0.0);
  for (std::size_t k = 0; k < solution.drones.size(); ++k) {
    for (int c : solution.drones[k]) e.drone_loads[k] += instance.drone(c);
  }
  e.alpha = std::max(0.0, e.truck_time_total);
  for (double load : e.drone_loads) e.alpha = std::max(e.alpha, load);
  return e;
}

}  // namespace pdstsp
