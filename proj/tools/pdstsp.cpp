// Command-line harness: gen, solve, bench, report.

#include "pdstsp/bench.hpp"
#include "pdstsp/heuristics.hpp"
#include "pdstsp/instances.hpp"
#include "pdstsp/milp.hpp"
#include "pdstsp/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

namespace fs = std::filesystem;
using namespace pdstsp;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

// One flushed line per call, so an interrupted run keeps earlier lines.
void append_line(const fs::path& path, const std::string& line) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot append to " + path.string());
  out << line << '\n';
  out.flush();
}

// --- gen --------------------------------------------------------------------

struct TsplibArgs {
  std::string source;
  int eligible = 80;
  double speed = 2.0;
  int drones = 1;
  std::string depot = "center";
  std::uint64_t seed = 0;
  std::string out;
  std::string out_dir = ".";
  bool grid = false;
};

struct GridSetting {
  int el;
  double sp;
  int drones;
  const char* depot;
};

// Reference setting first, then one parameter varied at a time.
constexpr GridSetting kGrid[] = {
    {80, 2, 1, "center"}, {80, 2, 1, "corner"}, {0, 2, 1, "center"},
    {20, 2, 1, "center"}, {40, 2, 1, "center"}, {60, 2, 1, "center"},
    {100, 2, 1, "center"}, {80, 1, 1, "center"}, {80, 3, 1, "center"},
    {80, 4, 1, "center"}, {80, 5, 1, "center"}, {80, 2, 2, "center"},
    {80, 2, 3, "center"}, {80, 2, 4, "center"}, {80, 2, 5, "center"},
};

int run_gen_tsplib(const TsplibArgs& a) {
  TsplibData data = parse_tsplib(read_file(a.source));
  if (data.name.empty()) data.name = fs::path(a.source).stem().string();
  auto make = [&](int el, double sp, int drones, const std::string& depot) {
    GenSpecTsplib spec;
    spec.source = data;
    spec.eligible_pct = el;
    spec.drone_speed_factor = sp;
    spec.n_drones = drones;
    spec.depot = parse_tsplib_depot(depot);
    spec.seed = a.seed;
    return derive_pdstsp(spec);
  };
  if (!a.grid) {
    const Instance inst = make(a.eligible, a.speed, a.drones, a.depot);
    const fs::path out =
        a.out.empty() ? fs::path(a.out_dir) / (inst.name() + ".json") : fs::path(a.out);
    write_file(out, write_instance(inst));
    std::cout << out.string() << "\n";
    return 0;
  }
  Suite suite;
  for (const auto& g : kGrid) {
    const Instance inst = make(g.el, g.sp, g.drones, g.depot);
    const std::string file = inst.name() + ".json";
    write_file(fs::path(a.out_dir) / file, write_instance(inst));
    suite.entries.push_back({file, data.name, g.el, g.sp, g.drones, g.depot});
  }
  const fs::path manifest = fs::path(a.out_dir) / (data.name + "-manifest.json");
  write_file(manifest, write_manifest(suite));
  std::cout << manifest.string() << "\n";
  return 0;
}

struct MurrayArgs {
  GenSpecMurrayChu spec;
  std::string depot = "center";
  int count = 1;
  std::string out;
  std::string out_dir = ".";
};

int run_gen_murray(MurrayArgs a) {
  a.spec.depot = parse_murray_depot(a.depot);
  if (a.count < 1) throw std::invalid_argument("--count must be positive");
  if (a.count == 1) {
    const Instance inst = gen_murray_chu(a.spec);
    const fs::path out =
        a.out.empty() ? fs::path(a.out_dir) / (inst.name() + ".json") : fs::path(a.out);
    write_file(out, write_instance(inst));
    std::cout << out.string() << "\n";
    return 0;
  }
  if (!a.out.empty()) throw std::invalid_argument("--out needs --count 1");
  Suite suite;
  const std::uint64_t first = a.spec.seed;
  for (int k = 0; k < a.count; ++k) {
    a.spec.seed = first + static_cast<std::uint64_t>(k);
    const Instance inst = gen_murray_chu(a.spec);
    const std::string file = inst.name() + ".json";
    write_file(fs::path(a.out_dir) / file, write_instance(inst));
    suite.entries.push_back({file, "murray", std::nullopt, std::nullopt,
                             a.spec.n_drones, a.depot});
  }
  const fs::path manifest = fs::path(a.out_dir) / "murray-manifest.json";
  write_file(manifest, write_manifest(suite));
  std::cout << manifest.string() << "\n";
  return 0;
}

// --- solve ------------------------------------------------------------------

struct SolveArgs {
  std::string instance;
  SolveRequest request;
  std::optional<double> reference;
  std::string solution;
  std::string report;
  std::string export_mps;
};

int run_solve(const SolveArgs& a) {
  const Instance inst = parse_instance(read_file(a.instance));
  if (!a.export_mps.empty()) write_file(a.export_mps, export_mps(build_model(inst)));
  HeuristicResult r = run_algorithm(inst, a.request);
  if (a.reference) attach_reference(r.report, *a.reference);
  const fs::path solution =
      a.solution.empty()
          ? fs::path(fs::path(a.instance).stem().string() + "." +
                     a.request.algorithm + ".solution.json")
          : fs::path(a.solution);
  write_file(solution, write_solution(inst, r.solution));
  const std::string line = to_json_line(r.report);
  if (!a.report.empty()) append_line(a.report, line);
  std::cout << line << "\n";
  return 0;
}

// --- bench ------------------------------------------------------------------

struct BenchArgs {
  std::string manifest;
  std::vector<std::string> algos{"fast", "rrls"};
  std::vector<std::uint64_t> seeds{0};
  SolveRequest request;
  std::string reference;
  std::string csv = "bench.csv";
  std::string markdown;
  std::string reports;
};

int run_bench(const BenchArgs& a) {
  const Suite suite = parse_manifest(read_file(a.manifest));
  const fs::path base = fs::path(a.manifest).parent_path();
  ReferenceTable reference;
  if (!a.reference.empty()) reference = parse_reference_csv(read_file(a.reference));
  for (const auto& algo : a.algos) {
    if (std::find(std::begin(kAlgorithms), std::end(kAlgorithms), algo) ==
        std::end(kAlgorithms)) {
      throw std::invalid_argument("unknown algorithm '" + algo + "'");
    }
  }
  std::vector<Instance> instances;
  for (const auto& e : suite.entries) {
    const fs::path p = fs::path(e.path).is_absolute() ? fs::path(e.path) : base / e.path;
    instances.push_back(parse_instance(read_file(p)));
  }

  struct Cell {
    std::size_t entry;
    std::string algo;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t e = 0; e < suite.entries.size(); ++e) {
    for (const auto& algo : a.algos) {
      for (auto seed : a.seeds) cells.push_back({e, algo, seed});
    }
  }
  std::vector<BenchRow> rows(cells.size());
  std::mutex out_mutex;
  parallel_for(cells.size(), worker_count(), [&](std::size_t i) {
    const Cell& c = cells[i];
    SolveRequest req = a.request;
    req.algorithm = c.algo;
    req.seed = c.seed;
    HeuristicResult r = run_algorithm(instances[c.entry], req);
    const auto best = reference.lookup(suite.entries[c.entry]);
    if (best) attach_reference(r.report, *best);
    BenchRow row;
    row.entry = suite.entries[c.entry];
    row.instance = instances[c.entry].name();
    row.best_known = best;
    row.algo = c.algo;
    row.cost = r.alpha;
    row.gap_pct = r.report.gap_pct;
    row.seconds = r.seconds;
    row.proven = r.report.proven;
    rows[i] = std::move(row);
    std::lock_guard lock(out_mutex);
    if (!a.reports.empty()) append_line(a.reports, to_json_line(r.report));
    std::cerr << row.instance << " " << c.algo << " seed " << c.seed << ": "
              << r.alpha << "\n";
  });
  write_file(a.csv, bench_csv(rows));
  const std::string md = bench_markdown(rows);
  if (!a.markdown.empty()) {
    write_file(a.markdown, md);
  } else {
    std::cout << md;
  }
  return 0;
}

// --- report -----------------------------------------------------------------

struct ReportArgs {
  std::string input;
  std::string out;
  std::string csv;
};

int run_report(const ReportArgs& a) {
  const std::string text = read_file(a.input);
  std::vector<BenchRow> rows;
  if (fs::path(a.input).extension() == ".jsonl") {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const RunReport r = parse_report(line);
      BenchRow row;
      row.instance = r.instance_name;
      row.best_known = r.reference_cost;
      row.algo = r.algorithm;
      row.cost = r.cost;
      row.gap_pct = r.gap_pct;
      row.seconds = r.elapsed_s.value_or(0.0);
      row.proven = r.proven;
      rows.push_back(std::move(row));
    }
  } else {
    rows = parse_bench_csv(text);
  }
  if (!a.csv.empty()) write_file(a.csv, bench_csv(rows));
  const std::string md = bench_markdown(rows);
  if (a.out.empty()) {
    std::cout << md;
  } else {
    write_file(a.out, md);
  }
  return 0;
}

void add_solver_flags(CLI::App* cmd, SolveRequest& r) {
  cmd->add_option("--budget-iters", r.budget_iters,
                  "deterministic budget (evaluations or outer iterations)");
  cmd->add_option("--time-limit", r.time_limit_s, "wall-clock limit in seconds");
  cmd->add_option("--beta", r.beta_s, "time cap per offload solve, seconds")
      ->capture_default_str();
  cmd->add_option("--delta", r.delta, "window width for skip-arc rules")
      ->capture_default_str();
  cmd->add_option("--gamma", r.gamma_pct, "restart perturbation, percent")
      ->capture_default_str();
  cmd->add_option("--large-threshold", r.large_threshold,
                  "customer count above which RRLS uses its large variant")
      ->capture_default_str();
  cmd->add_flag("--tour-improving-only", r.tour_improving_only,
                "fast2/fast3: skip neighbours with a longer plain tour");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PDSTSP solvers and benchmark harness"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "generate instances");
  gen->require_subcommand(1);

  TsplibArgs tsp;
  auto* gen_tsp = gen->add_subcommand("tsplib", "derive from a TSPLIB file");
  gen_tsp->add_option("--source", tsp.source, "TSPLIB file")->required();
  gen_tsp->add_option("--eligible", tsp.eligible, "percent drone-eligible")
      ->check(CLI::Range(0, 100))
      ->capture_default_str();
  gen_tsp->add_option("--speed", tsp.speed, "drone speed factor")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_tsp->add_option("--drones", tsp.drones, "number of drones")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  gen_tsp->add_option("--depot", tsp.depot, "center or corner")
      ->check(CLI::IsMember({"center", "corner"}))
      ->capture_default_str();
  gen_tsp->add_option("--seed", tsp.seed, "seed")->capture_default_str();
  auto* tsp_out = gen_tsp->add_option("--out", tsp.out, "output file");
  gen_tsp->add_option("--out-dir", tsp.out_dir, "output directory")
      ->capture_default_str();
  gen_tsp->add_flag("--benchmark-grid", tsp.grid,
                    "write the 15-setting grid and a manifest")
      ->excludes(tsp_out);

  MurrayArgs mc;
  auto* gen_mc = gen->add_subcommand("murray", "random square-region instances");
  gen_mc->add_option("--n", mc.spec.n_customers, "customers")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_mc->add_option("--range-pct", mc.spec.pct_in_drone_range,
                     "percent of customers within drone range")
      ->check(CLI::Range(0, 100))
      ->capture_default_str();
  gen_mc->add_option("--depot", mc.depot, "center, edge or origin")
      ->check(CLI::IsMember({"center", "edge", "origin"}))
      ->capture_default_str();
  gen_mc->add_option("--endurance", mc.spec.endurance, "minutes")
      ->capture_default_str();
  gen_mc->add_option("--speed", mc.spec.speed, "miles per hour")
      ->capture_default_str();
  gen_mc->add_option("--weight-ineligible", mc.spec.pct_weight_ineligible,
                     "fraction of in-range customers too heavy to fly")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen_mc->add_option("--region", mc.spec.region, "side of the square, miles")
      ->capture_default_str();
  gen_mc->add_option("--drones", mc.spec.n_drones, "number of drones")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  gen_mc->add_option("--seed", mc.spec.seed, "seed (first seed with --count)")
      ->capture_default_str();
  gen_mc->add_option("--count", mc.count, "number of consecutive seeds")
      ->capture_default_str();
  gen_mc->add_option("--out", mc.out, "output file");
  gen_mc->add_option("--out-dir", mc.out_dir, "output directory")
      ->capture_default_str();

  SolveArgs sv;
  sv.request.algorithm = "fast";
  auto* solve = app.add_subcommand("solve", "run one solver on one instance");
  solve->add_option("instance", sv.instance, "instance JSON")->required();
  solve->add_option("--algo", sv.request.algorithm, "solver")
      ->check(CLI::IsMember({"fast", "fast2", "fast3", "rrls", "oracle"}))
      ->capture_default_str();
  solve->add_option("--seed", sv.request.seed, "seed")->capture_default_str();
  add_solver_flags(solve, sv.request);
  solve->add_option("--reference", sv.reference, "reference cost for the gap");
  solve->add_option("--solution", sv.solution, "solution JSON output");
  solve->add_option("--report", sv.report, "append the report line here");
  solve->add_option("--export-mps", sv.export_mps, "write the MILP model here");

  BenchArgs bn;
  auto* bench = app.add_subcommand("bench", "run a suite");
  bench->add_option("manifest", bn.manifest, "suite manifest JSON")->required();
  bench->add_option("--algos", bn.algos, "solvers")
      ->delimiter(',')
      ->check(CLI::IsMember({"fast", "fast2", "fast3", "rrls", "oracle"}));
  bench->add_option("--seeds", bn.seeds, "seeds")->delimiter(',');
  add_solver_flags(bench, bn.request);
  bench->add_option("--reference", bn.reference, "reference CSV");
  bench->add_option("--csv", bn.csv, "CSV output")->capture_default_str();
  bench->add_option("--markdown", bn.markdown, "Markdown output (default stdout)");
  bench->add_option("--reports", bn.reports, "append report lines here");

  ReportArgs rp;
  auto* report = app.add_subcommand("report", "tabulate bench CSV or report lines");
  report->add_option("input", rp.input, "bench CSV or .jsonl reports")->required();
  report->add_option("--out", rp.out, "Markdown output (default stdout)");
  report->add_option("--csv", rp.csv, "also write a bench CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_tsp->parsed()) return run_gen_tsplib(tsp);
    if (gen_mc->parsed()) return run_gen_murray(mc);
    if (solve->parsed()) return run_solve(sv);
    if (bench->parsed()) return run_bench(bn);
    if (report->parsed()) return run_report(rp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
