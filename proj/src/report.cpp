#include "pdstsp/report.hpp"

#include "pdstsp/instances.hpp"

#include <cmath>
#include <stdexcept>

namespace pdstsp {

using nlohmann::ordered_json;

double gap_pct(double cost, double reference) {
  if (reference == 0.0) {
    if (cost == 0.0) return 0.0;
    throw std::invalid_argument("gap against a zero reference");
  }
  return 100.0 * (cost - reference) / reference;
}

void attach_reference(RunReport& report, double reference) {
  report.reference_cost = reference;
  report.gap_pct = gap_pct(report.cost, reference);
}

std::string to_json_line(const RunReport& r) {
  ordered_json j;
  j["instance"] = r.instance_name;
  j["algorithm"] = r.algorithm;
  j["seed"] = r.seed;
  j["params"] = r.params;
  j["cost"] = r.cost;
  if (r.reference_cost) j["reference_cost"] = *r.reference_cost;
  if (r.gap_pct) j["gap_pct"] = *r.gap_pct;
  if (r.elapsed_s) j["elapsed_s"] = *r.elapsed_s;
  j["iterations"] = r.iterations;
  j["evaluations"] = r.evaluations;
  j["proven"] = r.proven;
  return j.dump();
}

RunReport parse_report(std::string_view line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line.begin(), line.end());
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  RunReport r;
  try {
    r.instance_name = j.at("instance").get<std::string>();
    r.algorithm = j.at("algorithm").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.params = j.at("params");
    r.cost = j.at("cost").get<double>();
    if (j.contains("reference_cost")) {
      r.reference_cost = j["reference_cost"].get<double>();
    }
    if (j.contains("gap_pct")) r.gap_pct = j["gap_pct"].get<double>();
    if (j.contains("elapsed_s")) r.elapsed_s = j["elapsed_s"].get<double>();
    r.iterations = j.at("iterations").get<std::uint64_t>();
    r.evaluations = j.at("evaluations").get<std::uint64_t>();
    r.proven = j.at("proven").get<bool>();
  } catch (const ordered_json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  if (r.gap_pct.has_value() != r.reference_cost.has_value()) {
    throw ParseError("report: gap_pct present without reference_cost");
  }
  if (r.cost < 0.0) throw ParseError("report: negative cost");
  return r;
}

}  // namespace pdstsp
