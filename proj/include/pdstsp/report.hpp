#ifndef PDSTSP_REPORT_HPP
#define PDSTSP_REPORT_HPP

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pdstsp {

/// Outcome of one solver run, serialised as one JSON line.
struct RunReport {
  std::string instance_name;
  std::string algorithm;
  std::uint64_t seed = 0;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  double cost = 0.0;
  std::optional<double> reference_cost;
  std::optional<double> gap_pct;
  /// Absent for deterministic-budget runs so that replays compare equal.
  std::optional<double> elapsed_s;
  std::uint64_t iterations = 0;
  std::uint64_t evaluations = 0;
  bool proven = false;

  bool operator==(const RunReport&) const = default;
};

/// 100 * (cost - reference) / reference. A zero reference gives 0 when the
/// cost is zero too and is rejected otherwise.
double gap_pct(double cost, double reference);

/// Sets reference_cost and gap_pct together.
void attach_reference(RunReport& report, double reference);

std::string to_json_line(const RunReport& report);
RunReport parse_report(std::string_view line);

}  // namespace pdstsp

#endif  // PDSTSP_REPORT_HPP
