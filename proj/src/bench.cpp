#include "pdstsp/bench.hpp"

#include "pdstsp/oracle.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace pdstsp {

using nlohmann::json;

HeuristicResult run_algorithm(const Instance& inst, const SolveRequest& req) {
  HeuristicResult out;
  if (req.algorithm == "fast" || req.algorithm == "fast2" ||
      req.algorithm == "fast3") {
    FastOptions o;
    o.max_evaluations = req.budget_iters;
    o.time_limit_s = req.time_limit_s;
    o.tour_improving_only = req.tour_improving_only;
    o.offload.time_limit_s = req.beta_s;
    out = req.algorithm == "fast"    ? fast(inst, o)
          : req.algorithm == "fast2" ? fast2(inst, o)
                                     : fast3(inst, o);
  } else if (req.algorithm == "rrls") {
    RRLSParams p;
    if (req.time_limit_s) p.time_limit_s = *req.time_limit_s;
    p.beta_s = req.beta_s;
    p.delta = req.delta;
    p.gamma_pct = req.gamma_pct;
    p.large_threshold = req.large_threshold;
    p.seed = req.seed;
    p.deterministic_budget = req.budget_iters;
    out = rrls(inst, p);
  } else if (req.algorithm == "oracle") {
    const auto start = std::chrono::steady_clock::now();
    const OracleLimits limits;
    const OracleResult r = brute_force(inst, limits);
    out.solution = r.solution;
    out.alpha = r.alpha;
    out.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    RunReport& rep = out.report;
    rep.instance_name = inst.name();
    rep.algorithm = "oracle";
    rep.params["max_customers"] = limits.max_customers;
    rep.params["max_eligible"] = limits.max_eligible;
    rep.cost = r.alpha;
    if (!req.budget_iters) rep.elapsed_s = out.seconds;
    rep.iterations = 1;
    rep.evaluations = 1;
    rep.proven = r.proven;
  } else {
    throw std::invalid_argument("unknown algorithm '" + req.algorithm + "'");
  }
  out.report.seed = req.seed;
  const Evaluation e = evaluate(inst, out.solution);
  if (e.alpha != out.alpha) {
    throw std::logic_error("reported cost differs from the evaluated cost");
  }
  return out;
}

// --- manifest ---------------------------------------------------------------

Suite parse_manifest(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  Suite suite;
  try {
    for (const auto& e : root.at("entries")) {
      SuiteEntry entry;
      entry.path = e.at("path").get<std::string>();
      entry.source = e.value("source", "");
      if (e.contains("el")) entry.el = e["el"].get<int>();
      if (e.contains("sp")) entry.sp = e["sp"].get<double>();
      if (e.contains("drones")) entry.drones = e["drones"].get<int>();
      entry.depot = e.value("depot", "");
      suite.entries.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  return suite;
}

std::string write_manifest(const Suite& suite) {
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const auto& e : suite.entries) {
    nlohmann::ordered_json j;
    j["path"] = e.path;
    if (!e.source.empty()) j["source"] = e.source;
    if (e.el) j["el"] = *e.el;
    if (e.sp) j["sp"] = *e.sp;
    if (e.drones) j["drones"] = *e.drones;
    if (!e.depot.empty()) j["depot"] = e.depot;
    entries.push_back(std::move(j));
  }
  nlohmann::ordered_json root;
  root["entries"] = std::move(entries);
  return root.dump(2) + "\n";
}

// --- CSV --------------------------------------------------------------------

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  for (auto& c : out) {
    if (!c.empty() && c.back() == '\r') c.pop_back();
  }
  return out;
}

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("csv: bad number '" + s + "' in column " + what);
  }
}

std::string fmt(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string fmt_sp(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

bool same_sp(double a, double b) { return std::abs(a - b) < 1e-9; }

}  // namespace

std::optional<double> ReferenceTable::lookup(const SuiteEntry& e) const {
  if (e.source.empty() || !e.el || !e.sp || !e.drones || e.depot.empty()) {
    return std::nullopt;
  }
  for (const auto& r : rows_) {
    if (r.source == e.source && r.el == *e.el && same_sp(r.sp, *e.sp) &&
        r.drones == *e.drones && r.depot == e.depot) {
      return r.best_known;
    }
  }
  return std::nullopt;
}

ReferenceTable parse_reference_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) return {};
  const auto header = split_csv(lines[0]);
  auto column = [&](const char* name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw ParseError(std::string("reference csv: missing column ") + name);
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_source = column("source"), c_el = column("el"),
                    c_sp = column("sp"), c_drones = column("drones"),
                    c_depot = column("depot"), c_best = column("best_known");
  std::vector<ReferenceRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split_csv(lines[i]);
    if (cells.size() != header.size()) {
      throw ParseError("reference csv: line " + std::to_string(i + 1) +
                       " has " + std::to_string(cells.size()) + " cells");
    }
    ReferenceRow r;
    r.source = cells[c_source];
    r.el = static_cast<int>(to_double(cells[c_el], "el"));
    r.sp = to_double(cells[c_sp], "sp");
    r.drones = static_cast<int>(to_double(cells[c_drones], "drones"));
    r.depot = cells[c_depot];
    r.best_known = to_double(cells[c_best], "best_known");
    rows.push_back(std::move(r));
  }
  return ReferenceTable(std::move(rows));
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = std::string(kBenchCsvHeader) + "\n";
  for (const auto& r : rows) {
    if (r.instance.find(',') != std::string::npos) {
      throw std::invalid_argument("instance names must not contain commas");
    }
    out += r.instance + ",";
    out += (r.entry.el ? std::to_string(*r.entry.el) : "") + ",";
    out += (r.entry.sp ? fmt_sp(*r.entry.sp) : "") + ",";
    out += (r.entry.drones ? std::to_string(*r.entry.drones) : "") + ",";
    out += r.entry.depot + ",";
    out += (r.best_known ? fmt(*r.best_known, 6) : "") + ",";
    out += r.algo + ",";
    out += fmt(r.cost, 6) + ",";
    out += (r.gap_pct ? fmt(*r.gap_pct, 6) : "") + ",";
    out += fmt(r.seconds, 3) + ",";
    out += r.proven ? "true" : "false";
    out += "\n";
  }
  return out;
}

std::vector<BenchRow> parse_bench_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines[0] != kBenchCsvHeader) {
    throw ParseError("bench csv: unexpected header");
  }
  std::vector<BenchRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto c = split_csv(lines[i]);
    if (c.size() != 11) {
      throw ParseError("bench csv: line " + std::to_string(i + 1) +
                       " does not have 11 cells");
    }
    BenchRow r;
    r.instance = c[0];
    if (!c[1].empty()) r.entry.el = static_cast<int>(to_double(c[1], "el"));
    if (!c[2].empty()) r.entry.sp = to_double(c[2], "sp");
    if (!c[3].empty()) r.entry.drones = static_cast<int>(to_double(c[3], "drones"));
    r.entry.depot = c[4];
    if (!c[5].empty()) r.best_known = to_double(c[5], "best_known");
    r.algo = c[6];
    r.cost = to_double(c[7], "cost");
    if (!c[8].empty()) r.gap_pct = to_double(c[8], "gap_pct");
    r.seconds = to_double(c[9], "seconds");
    r.proven = c[10] == "true";
    rows.push_back(std::move(r));
  }
  return rows;
}

std::optional<ColumnSummary> summarize(
    const std::vector<std::optional<double>>& values) {
  std::optional<ColumnSummary> s;
  double sum = 0.0;
  int count = 0;
  for (const auto& v : values) {
    if (!v) continue;
    if (!s) s = ColumnSummary{*v, *v, 0.0};
    s->max = std::max(s->max, *v);
    s->min = std::min(s->min, *v);
    sum += *v;
    ++count;
  }
  if (s) s->avg = sum / count;
  return s;
}

std::string bench_markdown(const std::vector<BenchRow>& rows) {
  std::vector<std::string> instances;
  std::vector<std::string> algos;
  struct Cell {
    double cost = 0.0, seconds = 0.0, gap = 0.0;
    int runs = 0, gaps = 0;
  };
  std::map<std::pair<std::string, std::string>, Cell> cells;
  std::map<std::string, const BenchRow*> first;
  for (const auto& r : rows) {
    if (!first.count(r.instance)) {
      first[r.instance] = &r;
      instances.push_back(r.instance);
    }
    if (std::find(algos.begin(), algos.end(), r.algo) == algos.end()) {
      algos.push_back(r.algo);
    }
    Cell& c = cells[{r.instance, r.algo}];
    c.cost += r.cost;
    c.seconds += r.seconds;
    ++c.runs;
    if (r.gap_pct) {
      c.gap += *r.gap_pct;
      ++c.gaps;
    }
  }

  std::ostringstream out;
  out << "| instance | el | sp | # | dp | best known |";
  for (const auto& a : algos) out << " " << a << " cost | gap % | sec |";
  out << "\n|---|---:|---:|---:|---|---:|";
  for (std::size_t a = 0; a < algos.size(); ++a) out << "---:|---:|---:|";
  out << "\n";

  std::vector<std::vector<std::optional<double>>> gaps(algos.size());
  std::vector<std::vector<std::optional<double>>> secs(algos.size());
  for (const auto& name : instances) {
    const BenchRow& r = *first[name];
    out << "| " << name << " | " << (r.entry.el ? std::to_string(*r.entry.el) : "")
        << " | " << (r.entry.sp ? fmt_sp(*r.entry.sp) : "") << " | "
        << (r.entry.drones ? std::to_string(*r.entry.drones) : "") << " | "
        << r.entry.depot << " | " << (r.best_known ? fmt(*r.best_known, 2) : "")
        << " |";
    for (std::size_t a = 0; a < algos.size(); ++a) {
      const auto it = cells.find({name, algos[a]});
      if (it == cells.end()) {
        out << "  |  |  |";
        gaps[a].push_back(std::nullopt);
        secs[a].push_back(std::nullopt);
        continue;
      }
      const Cell& c = it->second;
      std::optional<double> gap;
      if (c.gaps == c.runs) gap = c.gap / c.gaps;
      const double sec = c.seconds / c.runs;
      out << " " << fmt(c.cost / c.runs, 2) << " | "
          << (gap ? fmt(*gap, 2) : "") << " | " << fmt(sec, 2) << " |";
      gaps[a].push_back(gap);
      secs[a].push_back(sec);
    }
    out << "\n";
  }
  for (const char* label : {"Max", "Min", "Avg"}) {
    out << "| | | | | | |";
    for (std::size_t a = 0; a < algos.size(); ++a) {
      const auto g = summarize(gaps[a]);
      const auto s = summarize(secs[a]);
      auto pick = [&](const std::optional<ColumnSummary>& v) -> std::string {
        if (!v) return "";
        const double x = label[1] == 'a' ? v->max : label[1] == 'i' ? v->min : v->avg;
        return fmt(x, 2);
      };
      out << " " << label << " | " << pick(g) << " | " << pick(s) << " |";
    }
    out << "\n";
  }
  return out.str();
}

// --- parallel harness -------------------------------------------------------

unsigned worker_count() {
  if (const char* env = std::getenv("PDSTSP_WORKERS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("PDSTSP_WORKERS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& job) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(
                                                         std::max<std::size_t>(count, 1))));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace pdstsp
