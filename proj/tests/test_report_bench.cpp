#include "pdstsp/bench.hpp"
#include "pdstsp/report.hpp"

#include "support/fixtures.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace pdstsp;

namespace {

BenchRow row(std::string instance, std::string algo, double cost, std::optional<double> best,
             double seconds) {
  BenchRow r;
  r.instance = std::move(instance);
  r.entry.el = 80;
  r.entry.sp = 2.0;
  r.entry.drones = 1;
  r.entry.depot = "center";
  r.best_known = best;
  r.algo = std::move(algo);
  r.cost = cost;
  if (best) r.gap_pct = gap_pct(cost, *best);
  r.seconds = seconds;
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// Cells of a markdown table line, trimmed.
std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line.substr(1));
  for (std::string c; std::getline(in, c, '|');) {
    const auto b = c.find_first_not_of(' ');
    const auto e = c.find_last_not_of(' ');
    out.push_back(b == std::string::npos ? "" : c.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

TEST(Gap, Formula) {
  EXPECT_DOUBLE_EQ(gap_pct(110.0, 100.0), 10.0);
  EXPECT_DOUBLE_EQ(gap_pct(31340.0, 29954.0), 100.0 * 1386.0 / 29954.0);
  EXPECT_EQ(gap_pct(0.0, 0.0), 0.0);
  EXPECT_THROW(gap_pct(1.0, 0.0), std::invalid_argument);
}

TEST(Report, JsonRoundTrip) {
  RunReport r;
  r.instance_name = "x";
  r.algorithm = "rrls";
  r.seed = 9;
  r.params["delta"] = 20;
  r.cost = 12.5;
  attach_reference(r, 10.0);
  r.iterations = 3;
  r.evaluations = 17;
  const std::string line = to_json_line(r);
  EXPECT_EQ(parse_report(line), r);
  EXPECT_EQ(to_json_line(parse_report(line)), line);
  EXPECT_EQ(line.find("elapsed_s"), std::string::npos);
  r.elapsed_s = 0.25;
  EXPECT_EQ(parse_report(to_json_line(r)), r);
  EXPECT_THROW(parse_report("{\"instance\": 1}"), ParseError);
  EXPECT_THROW(parse_report("not json"), ParseError);
}

TEST(BenchCsv, EmptySuiteIsHeaderOnly) {
  EXPECT_EQ(bench_csv({}), std::string(kBenchCsvHeader) + "\n");
  EXPECT_TRUE(parse_bench_csv(bench_csv({})).empty());
}

TEST(BenchCsv, RoundTripAndBlankGap) {
  const std::vector<BenchRow> rows = {row("a", "fast", 105.0, 100.0, 0.5),
                                      row("b", "fast", 42.0, std::nullopt, 0.25)};
  const std::string csv = bench_csv(rows);
  const auto l = lines(csv);
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l[1], "a,80,2,1,center,100.000000,fast,105.000000,5.000000,0.500,false");
  EXPECT_EQ(l[2], "b,80,2,1,center,,fast,42.000000,,0.250,false");
  const auto back = parse_bench_csv(csv);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_FALSE(back[1].gap_pct.has_value());
  EXPECT_DOUBLE_EQ(*back[0].gap_pct, 5.0);
  EXPECT_EQ(bench_csv(back), csv);
}

TEST(BenchMarkdown, FooterMatchesRecomputation) {
  std::vector<BenchRow> rows;
  Rng rng(71);
  std::vector<double> gaps;
  for (int i = 0; i < 6; ++i) {
    const double best = 100.0 + i;
    // Two seeds per instance; the table averages them.
    const double c1 = best * (1.0 + rng.uniform(0.0, 0.1));
    const double c2 = best * (1.0 + rng.uniform(0.0, 0.1));
    rows.push_back(row("i" + std::to_string(i), "rrls", c1, best, 1.0));
    rows.push_back(row("i" + std::to_string(i), "rrls", c2, best, 3.0));
    gaps.push_back((gap_pct(c1, best) + gap_pct(c2, best)) / 2.0);
  }
  const auto l = lines(bench_markdown(rows));
  ASSERT_EQ(l.size(), 2u + 6u + 3u);
  double sum = 0.0, mx = gaps[0], mn = gaps[0];
  for (double g : gaps) {
    sum += g;
    mx = std::max(mx, g);
    mn = std::min(mn, g);
  }
  char buf[32];
  auto two = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  const auto max_row = cells(l[8]), min_row = cells(l[9]), avg_row = cells(l[10]);
  EXPECT_EQ(max_row[6], "Max");
  EXPECT_EQ(max_row[7], two(mx));
  EXPECT_EQ(min_row[7], two(mn));
  EXPECT_EQ(avg_row[6], "Avg");
  EXPECT_EQ(avg_row[7], two(sum / 6.0));
  EXPECT_EQ(avg_row[8], "2.00");
  EXPECT_EQ(cells(l[2])[6], two((rows[0].cost + rows[1].cost) / 2.0));
}

TEST(Summarize, SkipsMissingValues) {
  EXPECT_FALSE(summarize({std::nullopt}).has_value());
  const auto s = summarize({1.0, std::nullopt, 3.0});
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->max, 3.0);
  EXPECT_EQ(s->min, 1.0);
  EXPECT_EQ(s->avg, 2.0);
}

TEST(Reference, ShippedTableLoadsAndLooksUp) {
  std::ifstream in(PDSTSP_SOURCE_DIR "/data/reference/best_known.csv");
  ASSERT_TRUE(in) << "reference table missing";
  std::stringstream buf;
  buf << in.rdbuf();
  const ReferenceTable table = parse_reference_csv(buf.str());
  EXPECT_EQ(table.rows().size(), 90u);
  SuiteEntry e;
  e.source = "att48";
  e.el = 80;
  e.sp = 2.0;
  e.drones = 1;
  e.depot = "center";
  ASSERT_TRUE(table.lookup(e).has_value());
  EXPECT_EQ(*table.lookup(e), 29954.0);
  e.depot = "nowhere";
  EXPECT_FALSE(table.lookup(e).has_value());
}

TEST(Manifest, RoundTrip) {
  Suite suite;
  SuiteEntry e;
  e.path = "a.json";
  e.source = "att48";
  e.el = 20;
  e.sp = 3.0;
  e.drones = 2;
  e.depot = "corner";
  suite.entries.push_back(e);
  suite.entries.push_back(SuiteEntry{"b.json", "", std::nullopt, std::nullopt, std::nullopt, ""});
  const Suite back = parse_manifest(write_manifest(suite));
  ASSERT_EQ(back.entries.size(), 2u);
  EXPECT_EQ(back.entries[0].el, 20);
  EXPECT_EQ(back.entries[0].depot, "corner");
  EXPECT_FALSE(back.entries[1].el.has_value());
  EXPECT_EQ(write_manifest(back), write_manifest(suite));
}

TEST(RunAlgorithm, DispatchesAndRejectsUnknownNames) {
  Rng rng(72);
  const Instance inst = fixtures::random_murray(rng, 8, 8, 2, 1);
  for (const char* name : kAlgorithms) {
    SolveRequest req;
    req.algorithm = name;
    req.seed = 4;
    req.budget_iters = 50;
    const HeuristicResult r = run_algorithm(inst, req);
    EXPECT_EQ(r.report.algorithm, name);
    EXPECT_EQ(r.report.seed, 4u);
    EXPECT_TRUE(validate(inst, r.solution).empty());
  }
  SolveRequest bad;
  bad.algorithm = "simplex";
  EXPECT_THROW(run_algorithm(inst, bad), std::invalid_argument);
}

TEST(Workers, EnvironmentVariable) {
  setenv("PDSTSP_WORKERS", "3", 1);
  EXPECT_EQ(worker_count(), 3u);
  setenv("PDSTSP_WORKERS", "zero", 1);
  EXPECT_THROW(worker_count(), std::invalid_argument);
  unsetenv("PDSTSP_WORKERS");
  EXPECT_GE(worker_count(), 1u);
}

TEST(ParallelFor, VisitsEveryIndexOnceAndRethrows) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 7) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}
