#include "pdstsp/milp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <deque>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pdstsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string xname(int i, int j) {
  return "X_" + std::to_string(i) + "_" + std::to_string(j);
}

}  // namespace

ModelIR build_model(const Instance& instance) {
  ModelIR m;
  m.name = instance.name();
  m.num_nodes = instance.num_nodes();
  m.n_drones = instance.n_drones();
  m.eligible = instance.eligible();
  const int nodes = m.num_nodes;
  const int drones = m.n_drones;

  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j < nodes; ++j) {
      // Loops stay in the variable set for a square x but are fixed to 0.
      m.variables.push_back({xname(i, j), VarType::binary, 0.0,
                             i == j ? 0.0 : 1.0, 0.0});
    }
  }
  for (int c : m.eligible) {
    for (int k = 0; k < drones; ++k) {
      m.variables.push_back({"Y_" + std::to_string(c) + "_" + std::to_string(k),
                             VarType::binary, 0.0, 1.0, 0.0});
    }
  }
  m.variables.push_back({"ALPHA", VarType::continuous, 0.0, kInf, 1.0});
  const int alpha = m.alpha();

  std::vector<int> slot(nodes, -1);
  for (std::size_t s = 0; s < m.eligible.size(); ++s) {
    slot[m.eligible[s]] = static_cast<int>(s);
  }

  Row truck{"R2", Sense::le, {}, 0.0};
  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j < nodes; ++j) {
      if (i != j) truck.terms.push_back({m.x(i, j), instance.truck(i, j)});
    }
  }
  truck.terms.push_back({alpha, -1.0});
  m.rows.push_back(std::move(truck));

  for (int k = 0; k < drones; ++k) {
    Row drone{"R3_" + std::to_string(k), Sense::le, {}, 0.0};
    for (int c : m.eligible) {
      drone.terms.push_back({m.y(slot[c], k), instance.drone(c)});
    }
    drone.terms.push_back({alpha, -1.0});
    m.rows.push_back(std::move(drone));
  }

  for (int j = 1; j < nodes; ++j) {
    Row in{"R4_" + std::to_string(j), Sense::eq, {}, 1.0};
    for (int i = 0; i < nodes; ++i) {
      if (i != j) in.terms.push_back({m.x(i, j), 1.0});
    }
    if (slot[j] >= 0) {
      for (int k = 0; k < drones; ++k) in.terms.push_back({m.y(slot[j], k), 1.0});
    }
    m.rows.push_back(std::move(in));
  }
  for (int i = 1; i < nodes; ++i) {
    Row out{"R5_" + std::to_string(i), Sense::eq, {}, 1.0};
    for (int j = 0; j < nodes; ++j) {
      if (i != j) out.terms.push_back({m.x(i, j), 1.0});
    }
    if (slot[i] >= 0) {
      for (int k = 0; k < drones; ++k) {
        out.terms.push_back({m.y(slot[i], k), 1.0});
      }
    }
    m.rows.push_back(std::move(out));
  }
  for (int i = 0; i < nodes; ++i) {
    Row flow{"R6_" + std::to_string(i), Sense::eq, {}, 0.0};
    for (int j = 0; j < nodes; ++j) {
      if (j != i) flow.terms.push_back({m.x(j, i), 1.0});
    }
    for (int h = 0; h < nodes; ++h) {
      if (h != i) flow.terms.push_back({m.x(i, h), -1.0});
    }
    m.rows.push_back(std::move(flow));
  }
  return m;
}

// --- MPS --------------------------------------------------------------------

namespace {

std::string base36(std::size_t v) {
  static const char digits[] = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";
  std::string out;
  do {
    out.insert(out.begin(), digits[v % 36]);
    v /= 36;
  } while (v != 0);
  return out;
}

// Shortest %g rendering at the highest precision that fits a 12-column field.
std::string mps_number(double v) {
  char buf[64];
  for (int precision = 17; precision >= 1; --precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strlen(buf) <= 12) return buf;
  }
  throw std::length_error("value does not fit an MPS field");
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string rpad12(const std::string& s) {
  return std::string(12 - s.size(), ' ') + s;
}

// Field layout: columns 2-3, 5-12, 15-22, 25-36.
std::string line(const std::string& code, const std::string& a,
                 const std::string& b = {}, const std::string& value = {}) {
  std::string out = " " + pad(code, 2) + " " + pad(a, 8);
  if (!b.empty() || !value.empty()) out += "  " + pad(b, 8);
  if (!value.empty()) out += "  " + rpad12(value);
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out + "\n";
}

// Integer section delimiter; the keyword sits in field 5 (columns 40-47).
std::string marker_line(int index, bool open) {
  std::string out = "    " + pad("MARKER" + std::to_string(index), 8) + "  " +
                    pad("'MARKER'", 8);
  out += std::string(39 - out.size(), ' ');
  return out + (open ? "'INTORG'" : "'INTEND'") + "\n";
}

}  // namespace

std::string export_mps(const ModelIR& model) {
  std::vector<std::string> col(model.variables.size());
  std::vector<std::string> row(model.rows.size());
  bool fits = true;
  for (std::size_t v = 0; v < col.size(); ++v) {
    col[v] = model.variables[v].name;
    fits = fits && col[v].size() <= 8;
  }
  for (std::size_t r = 0; r < row.size(); ++r) {
    row[r] = model.rows[r].name;
    fits = fits && row[r].size() <= 8;
  }
  if (!fits) {
    for (std::size_t v = 0; v < col.size(); ++v) col[v] = "C" + base36(v);
    for (std::size_t r = 0; r < row.size(); ++r) row[r] = "R" + base36(r);
    if (col.back().size() > 8 || (!row.empty() && row.back().size() > 8)) {
      throw std::length_error("model too large for eight-character MPS names");
    }
  }
  const std::string objective = "OBJ";

  // Column-major view of the rows.
  std::vector<std::vector<std::pair<int, double>>> by_col(col.size());
  for (std::size_t r = 0; r < model.rows.size(); ++r) {
    for (const Term& t : model.rows[r].terms) {
      by_col.at(t.var).push_back({static_cast<int>(r), t.coef});
    }
  }

  std::string name = model.name.empty() ? std::string("PDSTSP") : model.name;
  std::replace(name.begin(), name.end(), ' ', '_');
  std::ostringstream out;
  out << "NAME          " << name << "\n";
  out << "ROWS\n";
  out << line("N", objective);
  for (std::size_t r = 0; r < model.rows.size(); ++r) {
    const Sense s = model.rows[r].sense;
    out << line(s == Sense::le ? "L" : s == Sense::ge ? "G" : "E", row[r]);
  }
  out << "COLUMNS\n";
  bool in_integer = false;
  int marker = 0;
  for (std::size_t v = 0; v < col.size(); ++v) {
    const Variable& var = model.variables[v];
    const bool integer = var.type == VarType::binary;
    if (integer != in_integer) {
      out << marker_line(marker++, integer);
      in_integer = integer;
    }
    if (var.objective != 0.0) {
      out << line("", col[v], objective, mps_number(var.objective));
    }
    for (const auto& [r, coef] : by_col[v]) {
      out << line("", col[v], row[r], mps_number(coef));
    }
    if (var.objective == 0.0 && by_col[v].empty()) {
      // Keep the column declared even when it appears nowhere.
      out << line("", col[v], objective, "0");
    }
  }
  if (in_integer) out << marker_line(marker, false);
  out << "RHS\n";
  for (std::size_t r = 0; r < model.rows.size(); ++r) {
    if (model.rows[r].rhs != 0.0) {
      out << line("", "RHS", row[r], mps_number(model.rows[r].rhs));
    }
  }
  out << "BOUNDS\n";
  for (std::size_t v = 0; v < col.size(); ++v) {
    const Variable& var = model.variables[v];
    if (var.type == VarType::binary) {
      if (var.upper == 0.0) {
        out << line("FX", "BND", col[v], "0");
      } else {
        out << line("BV", "BND", col[v]);
      }
    } else {
      if (var.lower != 0.0) {
        out << line("LO", "BND", col[v], mps_number(var.lower));
      }
      if (std::isfinite(var.upper)) {
        out << line("UP", "BND", col[v], mps_number(var.upper));
      }
    }
  }
  out << "ENDATA\n";
  return out.str();
}

// --- separation -------------------------------------------------------------

FractionalSolution to_fractional(const Instance& instance,
                                 const Solution& solution) {
  const auto violations = validate(instance, solution);
  if (!violations.empty()) throw InvalidSolution(violations);
  const int nodes = instance.num_nodes();
  FractionalSolution f{TimeMatrix::Zero(nodes, nodes),
                       TimeMatrix::Zero(nodes, instance.n_drones())};
  if (!solution.truck_tour.empty()) {
    int prev = 0;
    for (int c : solution.truck_tour) {
      f.x(prev, c) = 1.0;
      prev = c;
    }
    f.x(prev, 0) = 1.0;
  }
  for (std::size_t k = 0; k < solution.drones.size(); ++k) {
    for (int c : solution.drones[k]) f.y(c, static_cast<Eigen::Index>(k)) = 1.0;
  }
  return f;
}

MaxFlowResult max_flow(const TimeMatrix& capacity, int source, int sink) {
  const int n = static_cast<int>(capacity.rows());
  if (capacity.cols() != n) {
    throw std::invalid_argument("capacity matrix must be square");
  }
  if (source == sink) throw std::invalid_argument("source equals sink");
  if (source < 0 || source >= n || sink < 0 || sink >= n) {
    throw std::invalid_argument("terminal out of range");
  }
  if ((capacity.array() < 0.0).any() || !capacity.allFinite()) {
    throw std::invalid_argument("capacities must be finite and non-negative");
  }
  TimeMatrix residual = capacity;
  double value = 0.0;
  std::vector<int> parent(n);
  auto bfs = [&]() {
    std::fill(parent.begin(), parent.end(), -1);
    parent[source] = source;
    std::deque<int> queue{source};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v = 0; v < n; ++v) {
        if (parent[v] == -1 && residual(u, v) > 0.0) {
          parent[v] = u;
          queue.push_back(v);
        }
      }
    }
    return parent[sink] != -1;
  };
  while (bfs()) {
    double push = kInf;
    for (int v = sink; v != source; v = parent[v]) {
      push = std::min(push, residual(parent[v], v));
    }
    for (int v = sink; v != source; v = parent[v]) {
      residual(parent[v], v) -= push;
      residual(v, parent[v]) += push;
    }
    value += push;
  }
  MaxFlowResult out;
  out.value = value;
  for (int v = 0; v < n; ++v) {
    if (parent[v] != -1) out.source_side.push_back(v);
  }
  return out;
}

double cut_mass(const FractionalSolution& frac, const std::vector<int>& s_side) {
  const int n = static_cast<int>(frac.x.rows());
  std::vector<bool> in_s(n, false);
  for (int v : s_side) in_s[v] = true;
  double mass = 0.0;
  for (int a = 0; a < n; ++a) {
    if (in_s[a]) {
      for (int b = 0; b < n; ++b) {
        if (!in_s[b]) mass += frac.x(a, b);
      }
    } else {
      mass += frac.y.row(a).sum();
    }
  }
  return mass;
}

std::vector<CutSet> separate_connectivity(const Instance& instance,
                                          const FractionalSolution& frac,
                                          double eps) {
  const int nodes = instance.num_nodes();
  if (frac.x.rows() != nodes || frac.x.cols() != nodes ||
      frac.y.rows() != nodes || frac.y.cols() != instance.n_drones()) {
    throw std::invalid_argument("fractional point has the wrong shape");
  }
  constexpr double kBound = 1e-9;
  auto in_range = [](const TimeMatrix& m) {
    return m.size() == 0 ||
           (m.allFinite() && m.minCoeff() >= -kBound && m.maxCoeff() <= 1 + kBound);
  };
  if (!in_range(frac.x) || !in_range(frac.y)) {
    throw std::invalid_argument("fractional values outside [0, 1]");
  }
  for (int i = 0; i < nodes; ++i) {
    if (!(i > 0 && instance.is_eligible(i)) && frac.y.cols() > 0 &&
        frac.y.row(i).cwiseAbs().maxCoeff() > kBound) {
      throw std::invalid_argument("y set for a node that is not drone-eligible");
    }
  }

  TimeMatrix capacity = frac.x.cwiseMax(0.0);
  capacity.diagonal().setZero();
  for (int i = 1; i < nodes; ++i) {
    capacity(0, i) += std::max(0.0, frac.y.row(i).sum());
  }

  std::vector<CutSet> cuts;
  std::set<std::vector<int>> seen;
  std::vector<bool> covered(nodes, false);
  for (int i = 1; i < nodes; ++i) {
    if (covered[i]) continue;
    MaxFlowResult flow = max_flow(capacity, 0, i);
    if (flow.value >= 1.0 - eps) continue;
    // Recompute by summation; the flow value only selects candidates.
    const double mass = cut_mass(frac, flow.source_side);
    if (mass >= 1.0 - eps) continue;
    std::vector<bool> in_s(nodes, false);
    for (int v : flow.source_side) in_s[v] = true;
    for (int v = 1; v < nodes; ++v) {
      if (!in_s[v]) covered[v] = true;
    }
    if (seen.insert(flow.source_side).second) {
      cuts.push_back({std::move(flow.source_side), mass});
    }
  }
  return cuts;
}

Solution warm_start(const Instance& instance, const TourOptimizer& optimizer) {
  Solution s;
  const auto customers = instance.customers();
  if (!customers.empty()) {
    s.truck_tour = optimizer.optimize(instance.truck_time(), customers).order;
  }
  s.drones.assign(instance.n_drones(), {});
  return s;
}

}  // namespace pdstsp
