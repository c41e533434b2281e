#include "pdstsp/instances.hpp"

#include "pdstsp/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace pdstsp {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw ParseError("field " + path + ": " + what);
}

const json& need(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) {
    field_error(path + "/" + key, "missing");
  }
  return obj.at(key);
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) field_error(path, "expected a number");
  return v.get<double>();
}

double non_negative(const json& v, const std::string& path) {
  const double x = number(v, path);
  if (!std::isfinite(x) || x < 0.0) field_error(path, "negative time");
  return x;
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) field_error(path, "expected an integer");
  return v.get<int>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) field_error(path, "expected a string");
  return v.get<std::string>();
}

json parse_json(std::string_view doc) {
  try {
    return json::parse(doc.begin(), doc.end());
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line number.
    const std::size_t upto = std::min<std::size_t>(e.byte, doc.size());
    const auto line = 1 + std::count(doc.begin(), doc.begin() + upto, '\n');
    throw ParseError("line " + std::to_string(line) + ": " + e.what());
  }
}

Point read_point(const json& obj, const std::string& path) {
  return {number(need(obj, "x", path), path + "/x"),
          number(need(obj, "y", path), path + "/y")};
}

}  // namespace

Instance parse_instance(std::string_view doc) {
  const json root = parse_json(doc);
  if (!root.is_object()) field_error("/", "expected an object");

  const std::string name = text(need(root, "name", ""), "/name");
  const std::string truck_metric =
      text(need(root, "truck_metric", ""), "/truck_metric");
  const std::string drone_metric =
      text(need(root, "drone_metric", ""), "/drone_metric");
  if (truck_metric != "manhattan" && truck_metric != "matrix") {
    field_error("/truck_metric", "expected \"manhattan\" or \"matrix\"");
  }
  if (drone_metric != "euclidean" && drone_metric != "map") {
    field_error("/drone_metric", "expected \"euclidean\" or \"map\"");
  }
  const int n_drones = integer(need(root, "n_drones", ""), "/n_drones");
  if (n_drones < 0) field_error("/n_drones", "must be non-negative");
  const double truck_speed =
      root.contains("truck_speed") ? number(root["truck_speed"], "/truck_speed")
                                   : 1.0;
  const double speed_factor =
      root.contains("drone_speed_factor")
          ? number(root["drone_speed_factor"], "/drone_speed_factor")
          : 1.0;
  if (truck_speed <= 0.0) field_error("/truck_speed", "must be positive");
  if (speed_factor <= 0.0) {
    field_error("/drone_speed_factor", "must be positive");
  }

  const json& customers = need(root, "customers", "");
  if (!customers.is_array()) field_error("/customers", "expected an array");
  const int n = static_cast<int>(customers.size());
  const int nodes = n + 1;

  std::vector<bool> eligible(nodes, false);
  std::vector<Point> coords(nodes);
  std::vector<bool> seen(nodes, false);
  bool have_coords = root.contains("depot");
  if (have_coords) coords[0] = read_point(root["depot"], "/depot");
  for (int k = 0; k < n; ++k) {
    const std::string path = "/customers/" + std::to_string(k);
    const json& c = customers[k];
    const int id = integer(need(c, "id", path), path + "/id");
    if (id < 1 || id > n) {
      field_error(path + "/id", "customer ids must be 1.." + std::to_string(n));
    }
    if (seen[id]) field_error(path + "/id", "duplicate customer id");
    seen[id] = true;
    if (c.contains("eligible")) {
      if (!c["eligible"].is_boolean()) {
        field_error(path + "/eligible", "expected a boolean");
      }
      eligible[id] = c["eligible"].get<bool>();
    }
    // Coordinates are all-or-nothing, keyed on the depot.
    if (have_coords) coords[id] = read_point(c, path);
  }

  const bool need_coords =
      truck_metric == "manhattan" || drone_metric == "euclidean";
  if (need_coords && !have_coords) {
    field_error("/depot", "coordinates are required by the chosen metrics");
  }

  TimeMatrix t(nodes, nodes);
  if (truck_metric == "matrix") {
    const json& rows = need(root, "truck_time", "");
    if (!rows.is_array() || static_cast<int>(rows.size()) != nodes) {
      field_error("/truck_time", "expected " + std::to_string(nodes) + " rows");
    }
    for (int i = 0; i < nodes; ++i) {
      const std::string rp = "/truck_time/" + std::to_string(i);
      if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != nodes) {
        field_error(rp, "expected " + std::to_string(nodes) + " entries");
      }
      for (int j = 0; j < nodes; ++j) {
        t(i, j) = non_negative(rows[i][j], rp + "/" + std::to_string(j));
      }
    }
  } else {
    for (int i = 0; i < nodes; ++i) {
      for (int j = 0; j < nodes; ++j) {
        t(i, j) = i == j ? 0.0
                         : (std::abs(coords[i].x - coords[j].x) +
                            std::abs(coords[i].y - coords[j].y)) /
                               truck_speed;
      }
    }
  }

  std::map<int, double> drone;
  if (drone_metric == "map") {
    const json& times = need(root, "drone_time", "");
    if (!times.is_object()) field_error("/drone_time", "expected an object");
    for (const auto& [key, value] : times.items()) {
      const std::string path = "/drone_time/" + key;
      int id = 0;
      try {
        std::size_t used = 0;
        id = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        field_error(path, "key is not a customer id");
      }
      if (id < 1 || id > n) field_error(path, "unknown customer");
      if (!eligible[id]) {
        field_error(path, "customer is not marked eligible");
      }
      drone[id] = non_negative(value, path);
    }
    for (int id = 1; id <= n; ++id) {
      if (eligible[id] && !drone.count(id)) {
        field_error("/drone_time/" + std::to_string(id),
                    "missing for an eligible customer");
      }
    }
  } else {
    const double drone_speed = truck_speed * speed_factor;
    for (int id = 1; id <= n; ++id) {
      if (!eligible[id]) continue;
      const double dx = coords[id].x - coords[0].x;
      const double dy = coords[id].y - coords[0].y;
      drone[id] = 2.0 * std::sqrt(dx * dx + dy * dy) / drone_speed;
    }
  }

  std::optional<Geometry> geometry;
  if (have_coords) {
    geometry = Geometry{
        std::move(coords),
        truck_metric == "manhattan" ? TruckMetric::manhattan
                                    : TruckMetric::matrix,
        drone_metric == "euclidean" ? DroneMetric::euclidean : DroneMetric::map,
        truck_speed, speed_factor};
  }
  try {
    return Instance(name, std::move(t), std::move(drone), n_drones,
                    std::move(geometry));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

std::string write_instance(const Instance& inst) {
  json root;
  root["name"] = inst.name();
  const auto& geo = inst.geometry();
  const int nodes = inst.num_nodes();
  if (geo) {
    root["depot"] = {{"x", geo->coords[0].x}, {"y", geo->coords[0].y}};
  }
  json customers = json::array();
  for (int id = 1; id < nodes; ++id) {
    json c = {{"id", id}, {"eligible", inst.is_eligible(id)}};
    if (geo) {
      c["x"] = geo->coords[id].x;
      c["y"] = geo->coords[id].y;
    }
    customers.push_back(std::move(c));
  }
  root["customers"] = std::move(customers);
  const bool manhattan = geo && geo->truck_metric == TruckMetric::manhattan;
  const bool euclidean = geo && geo->drone_metric == DroneMetric::euclidean;
  root["truck_metric"] = manhattan ? "manhattan" : "matrix";
  root["drone_metric"] = euclidean ? "euclidean" : "map";
  root["truck_speed"] = geo ? geo->truck_speed : 1.0;
  root["drone_speed_factor"] = geo ? geo->drone_speed_factor : 1.0;
  root["n_drones"] = inst.n_drones();
  if (!manhattan) {
    json rows = json::array();
    for (int i = 0; i < nodes; ++i) {
      json row = json::array();
      for (int j = 0; j < nodes; ++j) row.push_back(inst.truck(i, j));
      rows.push_back(std::move(row));
    }
    root["truck_time"] = std::move(rows);
  }
  if (!euclidean) {
    json times = json::object();
    for (const auto& [id, time] : inst.drone_times()) {
      times[std::to_string(id)] = time;
    }
    root["drone_time"] = std::move(times);
  }
  return root.dump(2) + "\n";
}

SolutionDocument parse_solution(std::string_view doc) {
  const json root = parse_json(doc);
  SolutionDocument out;
  out.instance = text(need(root, "instance", ""), "/instance");
  const json& tour = need(root, "truck_tour", "");
  if (!tour.is_array()) field_error("/truck_tour", "expected an array");
  for (std::size_t k = 0; k < tour.size(); ++k) {
    out.solution.truck_tour.push_back(
        integer(tour[k], "/truck_tour/" + std::to_string(k)));
  }
  const json& drones = need(root, "drones", "");
  if (!drones.is_array()) field_error("/drones", "expected an array");
  for (std::size_t k = 0; k < drones.size(); ++k) {
    const std::string path = "/drones/" + std::to_string(k);
    if (!drones[k].is_array()) field_error(path, "expected an array");
    std::vector<int> jobs;
    for (std::size_t q = 0; q < drones[k].size(); ++q) {
      jobs.push_back(integer(drones[k][q], path + "/" + std::to_string(q)));
    }
    out.solution.drones.push_back(std::move(jobs));
  }
  out.alpha = number(need(root, "alpha", ""), "/alpha");
  return out;
}

std::string write_solution(const Instance& instance, const Solution& solution) {
  const Evaluation e = evaluate(instance, solution);
  json root;
  root["instance"] = instance.name();
  root["truck_tour"] = solution.truck_tour;
  json drones = json::array();
  for (const auto& jobs : solution.drones) drones.push_back(jobs);
  root["drones"] = std::move(drones);
  root["alpha"] = e.alpha;
  return root.dump(2) + "\n";
}

// --- TSPLIB -----------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

int fraction_digits(const std::string& token) {
  const auto dot = token.find('.');
  if (dot == std::string::npos) return 0;
  std::size_t end = token.find_first_of("eE", dot);
  if (end == std::string::npos) end = token.size();
  return static_cast<int>(end - dot - 1);
}

}  // namespace

TsplibData parse_tsplib(std::string_view doc) {
  TsplibData data;
  std::istringstream in{std::string(doc)};
  std::string line;
  int line_no = 0;
  int dimension = -1;
  bool in_section = false;
  bool saw_section = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty()) continue;
    if (body == "EOF") break;
    if (!in_section) {
      if (body.rfind("NODE_COORD_SECTION", 0) == 0) {
        in_section = saw_section = true;
        continue;
      }
      const auto colon = body.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = trim(body.substr(0, colon));
      const std::string value = trim(body.substr(colon + 1));
      if (key == "NAME") data.name = value;
      if (key == "EDGE_WEIGHT_TYPE") data.edge_weight_type = value;
      if (key == "DIMENSION") {
        try {
          dimension = std::stoi(value);
        } catch (const std::exception&) {
          throw ParseError("line " + std::to_string(line_no) +
                           ": unparsable DIMENSION '" + value + "'");
        }
      }
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(body[0]))) {
      in_section = false;  // next section starts
      continue;
    }
    std::istringstream rec(body);
    std::string sid, sx, sy, extra;
    TsplibNode node;
    try {
      if (!(rec >> sid >> sx >> sy) || (rec >> extra)) {
        throw std::invalid_argument(body);
      }
      std::size_t used = 0;
      node.id = std::stoi(sid, &used);
      if (used != sid.size()) throw std::invalid_argument(sid);
      node.x = std::stod(sx, &used);
      if (used != sx.size()) throw std::invalid_argument(sx);
      node.y = std::stod(sy, &used);
      if (used != sy.size()) throw std::invalid_argument(sy);
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": unparsable coordinate record '" + body + "'");
    }
    data.decimals =
        std::max({data.decimals, fraction_digits(sx), fraction_digits(sy)});
    data.nodes.push_back(node);
  }
  if (!saw_section) throw ParseError("missing NODE_COORD_SECTION");
  if (dimension >= 0 && dimension != static_cast<int>(data.nodes.size())) {
    throw ParseError("DIMENSION " + std::to_string(dimension) + " but " +
                     std::to_string(data.nodes.size()) +
                     " coordinate records");
  }
  if (dimension < 0) throw ParseError("missing DIMENSION header");
  return data;
}

// --- generators -------------------------------------------------------------

namespace {

double round_to(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(v * scale) / scale;
}

// First k entries of a uniform partial Fisher-Yates shuffle of `items`.
std::vector<int> draw_without_replacement(std::vector<int> items, int k,
                                          Rng& rng) {
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(rng.below(items.size() - i));
    std::swap(items[i], items[j]);
  }
  items.resize(k);
  return items;
}

std::string format_number(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

Instance derive_pdstsp(const GenSpecTsplib& spec) {
  if (spec.eligible_pct < 0 || spec.eligible_pct > 100) {
    throw std::invalid_argument("eligible_pct must lie in [0, 100]");
  }
  if (spec.drone_speed_factor <= 0.0) {
    throw std::invalid_argument("drone_speed_factor must be positive");
  }
  const auto& src = spec.source.nodes;
  const int n = static_cast<int>(src.size());
  std::vector<Point> coords(n + 1);
  for (int i = 0; i < n; ++i) coords[i + 1] = {src[i].x, src[i].y};
  if (n > 0) {
    if (spec.depot == TsplibDepot::center) {
      double sx = 0.0, sy = 0.0;
      for (const auto& node : src) {
        sx += node.x;
        sy += node.y;
      }
      coords[0] = {round_to(sx / n, spec.source.decimals),
                   round_to(sy / n, spec.source.decimals)};
    } else {
      double mx = src[0].x, my = src[0].y;
      for (const auto& node : src) {
        mx = std::min(mx, node.x);
        my = std::min(my, node.y);
      }
      coords[0] = {mx, my};
    }
  }
  Rng rng(spec.seed);
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 1);
  const int k = spec.eligible_pct * n / 100;
  std::vector<bool> eligible(n + 1, false);
  for (int id : draw_without_replacement(ids, k, rng)) eligible[id] = true;

  const std::string base =
      spec.source.name.empty() ? std::string("tsplib") : spec.source.name;
  const std::string name = base + "-el" + std::to_string(spec.eligible_pct) +
                           "-sp" + format_number(spec.drone_speed_factor) +
                           "-d" + std::to_string(spec.n_drones) + "-" +
                           to_string(spec.depot) + "-s" +
                           std::to_string(spec.seed);
  return Instance::from_coordinates(name, std::move(coords), eligible, 1.0,
                                    spec.drone_speed_factor, spec.n_drones);
}

Instance gen_murray_chu(const GenSpecMurrayChu& spec) {
  if (spec.n_customers < 1) {
    throw std::invalid_argument("n_customers must be positive");
  }
  if (spec.pct_in_drone_range < 0 || spec.pct_in_drone_range > 100) {
    throw std::invalid_argument("pct_in_drone_range must lie in [0, 100]");
  }
  if (spec.pct_weight_ineligible < 0.0 || spec.pct_weight_ineligible > 1.0) {
    throw std::invalid_argument("pct_weight_ineligible must lie in [0, 1]");
  }
  if (spec.speed <= 0.0 || spec.region <= 0.0 || spec.endurance < 0.0) {
    throw std::invalid_argument("speed and region must be positive");
  }
  const int n = spec.n_customers;
  const int in_range = spec.pct_in_drone_range * n / 100;
  const double speed_per_min = spec.speed / 60.0;
  // A round trip of 2 d / speed stays within the endurance.
  const double radius = spec.endurance * speed_per_min / 2.0;
  if (in_range > 0 && radius <= 0.0) {
    throw std::invalid_argument(
        "infeasible generator settings: customers in drone range with zero "
        "endurance");
  }

  Point depot;
  switch (spec.depot) {
    case MurrayDepot::center: depot = {spec.region / 2, spec.region / 2}; break;
    case MurrayDepot::edge: depot = {0.0, spec.region / 2}; break;
    case MurrayDepot::origin: depot = {0.0, 0.0}; break;
  }

  Rng rng(spec.seed);
  auto draw = [&](bool inside) {
    for (int attempt = 0; attempt < 1000000; ++attempt) {
      Point p{rng.uniform(0.0, spec.region), rng.uniform(0.0, spec.region)};
      const double d = std::hypot(p.x - depot.x, p.y - depot.y);
      if (inside == (d < radius)) return p;
    }
    throw std::invalid_argument(
        "infeasible generator settings: no room for the requested customers "
        "inside/outside drone range");
  };

  std::vector<Point> placed;
  for (int i = 0; i < in_range; ++i) placed.push_back(draw(true));
  for (int i = in_range; i < n; ++i) placed.push_back(draw(false));
  // Random ids so that in-range customers are not the first ones.
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 1);
  rng.shuffle(ids);

  std::vector<Point> coords(n + 1);
  coords[0] = depot;
  std::vector<int> in_range_ids;
  for (int i = 0; i < n; ++i) {
    coords[ids[i]] = placed[i];
    if (i < in_range) in_range_ids.push_back(ids[i]);
  }
  std::sort(in_range_ids.begin(), in_range_ids.end());
  std::vector<bool> eligible(n + 1, false);
  for (int id : in_range_ids) eligible[id] = true;
  const int heavy = static_cast<int>(
      std::lround(spec.pct_weight_ineligible * in_range));
  for (int id : draw_without_replacement(in_range_ids, heavy, rng)) {
    eligible[id] = false;
  }

  const std::string name = "murray-n" + std::to_string(n) + "-" +
                           to_string(spec.depot) + "-r" +
                           std::to_string(spec.pct_in_drone_range) + "-d" +
                           std::to_string(spec.n_drones) + "-s" +
                           std::to_string(spec.seed);
  return Instance::from_coordinates(name, std::move(coords), eligible,
                                    speed_per_min, 1.0, spec.n_drones);
}

const char* to_string(TsplibDepot depot) {
  return depot == TsplibDepot::center ? "center" : "corner";
}

const char* to_string(MurrayDepot depot) {
  switch (depot) {
    case MurrayDepot::center: return "center";
    case MurrayDepot::edge: return "edge";
    case MurrayDepot::origin: return "origin";
  }
  return "?";
}

TsplibDepot parse_tsplib_depot(std::string_view text) {
  if (text == "center" || text == "1") return TsplibDepot::center;
  if (text == "corner" || text == "2") return TsplibDepot::corner;
  throw std::invalid_argument("depot must be center or corner");
}

MurrayDepot parse_murray_depot(std::string_view text) {
  if (text == "center") return MurrayDepot::center;
  if (text == "edge") return MurrayDepot::edge;
  if (text == "origin") return MurrayDepot::origin;
  throw std::invalid_argument("depot must be center, edge or origin");
}

}  // namespace pdstsp
