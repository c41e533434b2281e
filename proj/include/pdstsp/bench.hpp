#ifndef PDSTSP_BENCH_HPP
#define PDSTSP_BENCH_HPP

#include "pdstsp/heuristics.hpp"
#include "pdstsp/instances.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pdstsp {

// --- running one algorithm --------------------------------------------------

inline constexpr const char* kAlgorithms[] = {"fast", "fast2", "fast3", "rrls",
                                              "oracle"};

struct SolveRequest {
  std::string algorithm;
  std::uint64_t seed = 0;
  /// Deterministic budget: evaluations for fast2/fast3, outer iterations for
  /// rrls. Also removes wall-clock time from the report.
  std::optional<std::uint64_t> budget_iters;
  std::optional<double> time_limit_s;
  double beta_s = 10.0;
  int delta = 20;
  double gamma_pct = 80.0;
  int large_threshold = 20;
  bool tour_improving_only = false;
};

/// Dispatches to the named solver; throws std::invalid_argument for an
/// unknown name. The returned solution has been validated.
HeuristicResult run_algorithm(const Instance& instance,
                              const SolveRequest& request);

// --- suites and reference data ----------------------------------------------

struct SuiteEntry {
  std::string path;  // relative paths resolve against the manifest
  std::string source;
  std::optional<int> el;
  std::optional<double> sp;
  std::optional<int> drones;
  std::string depot;
};

struct Suite {
  std::vector<SuiteEntry> entries;
};

Suite parse_manifest(std::string_view text);
std::string write_manifest(const Suite& suite);

struct ReferenceRow {
  std::string source;
  int el = 0;
  double sp = 0.0;
  int drones = 0;
  std::string depot;
  double best_known = 0.0;
};

class ReferenceTable {
 public:
  ReferenceTable() = default;
  explicit ReferenceTable(std::vector<ReferenceRow> rows) : rows_(std::move(rows)) {}

  std::optional<double> lookup(const SuiteEntry& entry) const;
  const std::vector<ReferenceRow>& rows() const { return rows_; }

 private:
  std::vector<ReferenceRow> rows_;
};

/// Reads a CSV whose header names at least source, el, sp, drones, depot and
/// best_known; other columns are ignored.
ReferenceTable parse_reference_csv(std::string_view text);

// --- tables -----------------------------------------------------------------

struct BenchRow {
  SuiteEntry entry;
  std::string instance;
  std::optional<double> best_known;
  std::string algo;
  double cost = 0.0;
  std::optional<double> gap_pct;
  double seconds = 0.0;
  bool proven = false;
};

inline constexpr const char* kBenchCsvHeader =
    "instance,el,sp,drones,depot,best_known,algo,cost,gap_pct,seconds,proven";

std::string bench_csv(const std::vector<BenchRow>& rows);

struct ColumnSummary {
  double max = 0.0;
  double min = 0.0;
  double avg = 0.0;
};

/// Summary of the present values; nullopt when there are none.
std::optional<ColumnSummary> summarize(const std::vector<std::optional<double>>& values);

/// One line per instance with cost / gap / seconds per algorithm (averaged
/// over seeds), followed by Max, Min and Avg rows over the gap and seconds
/// columns.
std::string bench_markdown(const std::vector<BenchRow>& rows);

/// Rows of a CSV produced by bench_csv.
std::vector<BenchRow> parse_bench_csv(std::string_view text);

// --- parallel harness -------------------------------------------------------

/// Worker count from PDSTSP_WORKERS, else the hardware concurrency (>= 1).
unsigned worker_count();

/// Runs `job` for every index on a pool of `workers` threads. Results are
/// stored by index so the output order never depends on scheduling.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& job);

}  // namespace pdstsp

#endif  // PDSTSP_BENCH_HPP
