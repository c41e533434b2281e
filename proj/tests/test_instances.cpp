#include "pdstsp/instances.hpp"

#include "support/fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <string>

using namespace pdstsp;

namespace {

const char* kSmallDoc = R"({
  "name": "small",
  "depot": {"x": 0, "y": 0},
  "customers": [
    {"id": 1, "x": 3, "y": 4, "eligible": true},
    {"id": 2, "x": -1, "y": 2, "eligible": false},
    {"id": 3, "x": 0, "y": -6, "eligible": true}
  ],
  "truck_metric": "manhattan",
  "drone_metric": "euclidean",
  "truck_speed": 1.0,
  "drone_speed_factor": 2.0,
  "n_drones": 2
})";

std::string error_of(const std::string& doc) {
  try {
    parse_instance(doc);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

const char* kTsplib3 =
    "NAME : tiny3\n"
    "COMMENT : three nodes\n"
    "TYPE : TSP\n"
    "DIMENSION : 3\n"
    "EDGE_WEIGHT_TYPE : EUC_2D\n"
    "NODE_COORD_SECTION\n"
    "1 0.0 0.0\n"
    "2 10.5 0\n"
    "3 4 8.25\n"
    "EOF\n";

}  // namespace

TEST(InstanceJson, HandComputedEntries) {
  const Instance inst = parse_instance(kSmallDoc);
  EXPECT_EQ(inst.name(), "small");
  EXPECT_EQ(inst.num_customers(), 3);
  EXPECT_EQ(inst.n_drones(), 2);
  EXPECT_DOUBLE_EQ(inst.truck(0, 1), 7.0);
  EXPECT_DOUBLE_EQ(inst.truck(1, 2), 6.0);
  EXPECT_DOUBLE_EQ(inst.truck(2, 3), 9.0);
  EXPECT_DOUBLE_EQ(inst.drone(1), 5.0);   // 2 * 5 / 2
  EXPECT_DOUBLE_EQ(inst.drone(3), 6.0);   // 2 * 6 / 2
  EXPECT_EQ(inst.eligible(), (std::vector<int>{1, 3}));
}

TEST(InstanceJson, RoundTripIsIdentical) {
  const Instance inst = parse_instance(kSmallDoc);
  const std::string once = write_instance(inst);
  const Instance back = parse_instance(once);
  EXPECT_EQ(write_instance(back), once);
  EXPECT_EQ(back.truck_time(), inst.truck_time());
  EXPECT_EQ(back.drone_times(), inst.drone_times());
  EXPECT_EQ(back.geometry(), inst.geometry());
}

TEST(InstanceJson, MatrixInstancesRoundTrip) {
  Rng rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const Instance inst = fixtures::random_instance(rng, 1 + rep % 7, 0.5, rep % 3);
    const Instance back = parse_instance(write_instance(inst));
    EXPECT_EQ(back.truck_time(), inst.truck_time());
    EXPECT_EQ(back.drone_times(), inst.drone_times());
    EXPECT_EQ(back.n_drones(), inst.n_drones());
  }
}

TEST(InstanceJson, GeneratedInstancesRoundTrip) {
  Rng rng(2);
  for (int rep = 0; rep < 10; ++rep) {
    const Instance inst = fixtures::random_murray(rng, 5, 12, 3, rep);
    const Instance back = parse_instance(write_instance(inst));
    EXPECT_EQ(back.truck_time(), inst.truck_time());
    EXPECT_EQ(back.drone_times(), inst.drone_times());
  }
}

TEST(InstanceJson, DiagnosticsNameTheField) {
  std::string doc = kSmallDoc;
  EXPECT_NE(error_of(R"({"name": "x"})").find("/truck_metric"), std::string::npos);
  EXPECT_NE(error_of(std::string(doc).replace(doc.find("\"x\": 3"), 6, "\"x\": \"a\""))
                .find("/customers/0/x"),
            std::string::npos);
  EXPECT_NE(error_of(std::string(doc).replace(doc.find("\"id\": 3"), 7, "\"id\": 9"))
                .find("/customers/2/id"),
            std::string::npos);
  EXPECT_NE(error_of(std::string(doc).replace(doc.find("\"n_drones\": 2"), 13,
                                              "\"n_drones\": -1"))
                .find("/n_drones"),
            std::string::npos);
}

TEST(InstanceJson, DroneMapIsChecked) {
  const std::string base = R"({"name": "m", "truck_metric": "matrix", "drone_metric": "map",
    "n_drones": 1, "truck_time": [[0, 1, 2], [1, 0, 3], [2, 3, 0]],
    "customers": [{"id": 1, "eligible": true}, {"id": 2}], "drone_time": )";
  EXPECT_NO_THROW(parse_instance(base + R"({"1": 4.5}})"));
  EXPECT_NE(error_of(base + R"({"2": 4.5, "1": 1}})").find("/drone_time/2"), std::string::npos);
  EXPECT_NE(error_of(base + R"({}})").find("/drone_time/1"), std::string::npos);
  EXPECT_NE(error_of(base + R"({"1": -4}})").find("negative"), std::string::npos);
  EXPECT_NE(error_of(base + R"({"7": 1, "1": 1}})").find("unknown"), std::string::npos);
}

TEST(InstanceJson, SyntaxErrorsCarryALine) {
  EXPECT_NE(error_of("{\n  \"name\": \"x\",\n  oops\n}").find("line 3"), std::string::npos);
}

TEST(SolutionJson, RoundTrip) {
  const Instance inst = parse_instance(kSmallDoc);
  const Solution sol{{2, 3}, {{1}, {}}};
  const SolutionDocument doc = parse_solution(write_solution(inst, sol));
  EXPECT_EQ(doc.instance, "small");
  EXPECT_EQ(doc.solution, sol);
  EXPECT_DOUBLE_EQ(doc.alpha, evaluate(inst, sol).alpha);
}

TEST(Tsplib, ParsesThreeNodes) {
  const TsplibData data = parse_tsplib(kTsplib3);
  EXPECT_EQ(data.name, "tiny3");
  EXPECT_EQ(data.edge_weight_type, "EUC_2D");
  ASSERT_EQ(data.nodes.size(), 3u);
  EXPECT_EQ(data.nodes[1].x, 10.5);
  EXPECT_EQ(data.nodes[2].y, 8.25);
  EXPECT_EQ(data.decimals, 2);
}

TEST(Tsplib, ErrorsAreLineNumbered) {
  std::string bad = kTsplib3;
  bad.replace(bad.find("3 4 8.25"), 8, "3 4 x.y");
  try {
    parse_tsplib(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 9"), std::string::npos);
  }
  std::string short_dim = kTsplib3;
  short_dim.replace(short_dim.find("DIMENSION : 3"), 13, "DIMENSION : 4");
  EXPECT_THROW(parse_tsplib(short_dim), ParseError);
  EXPECT_THROW(parse_tsplib("NAME : x\nDIMENSION : 1\n"), ParseError);
}

TEST(DerivePdstsp, CenterDepotAndEligibleCount) {
  GenSpecTsplib spec;
  spec.source = parse_tsplib(kTsplib3);
  spec.eligible_pct = 80;
  spec.drone_speed_factor = 2.0;
  spec.n_drones = 2;
  spec.seed = 5;
  const Instance inst = derive_pdstsp(spec);
  EXPECT_EQ(inst.num_customers(), 3);
  EXPECT_EQ(inst.eligible().size(), 2u);  // floor(0.8 * 3)
  const Point depot = inst.geometry()->coords[0];
  EXPECT_DOUBLE_EQ(depot.x, 4.83);  // 14.5 / 3 rounded to two decimals
  EXPECT_DOUBLE_EQ(depot.y, 2.75);
  EXPECT_EQ(inst.name(), "tiny3-el80-sp2-d2-center-s5");
  EXPECT_EQ(write_instance(derive_pdstsp(spec)), write_instance(inst));
}

TEST(DerivePdstsp, CornerDepotAndBoundaries) {
  GenSpecTsplib spec;
  spec.source = parse_tsplib(kTsplib3);
  spec.depot = TsplibDepot::corner;
  spec.eligible_pct = 0;
  Instance inst = derive_pdstsp(spec);
  EXPECT_EQ(inst.geometry()->coords[0], (Point{0.0, 0.0}));
  EXPECT_TRUE(inst.eligible().empty());
  spec.eligible_pct = 100;
  EXPECT_EQ(derive_pdstsp(spec).eligible().size(), 3u);
  spec.eligible_pct = 101;
  EXPECT_THROW(derive_pdstsp(spec), std::invalid_argument);
}

TEST(MurrayChu, InRangeCountAndEndurance) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GenSpecMurrayChu spec;
    spec.n_customers = 25;
    spec.pct_in_drone_range = 60;
    spec.pct_weight_ineligible = 0.0;
    spec.seed = seed;
    const Instance inst = gen_murray_chu(spec);
    EXPECT_EQ(inst.eligible().size(), 15u);
    for (int c : inst.eligible()) EXPECT_LT(inst.drone(c), spec.endurance);
    // Out-of-range customers would exceed the endurance.
    const auto& geo = *inst.geometry();
    int outside = 0;
    for (int c = 1; c <= 25; ++c) {
      const double d = std::hypot(geo.coords[c].x - geo.coords[0].x,
                                  geo.coords[c].y - geo.coords[0].y);
      if (2.0 * d / (spec.speed / 60.0) >= spec.endurance) ++outside;
    }
    EXPECT_EQ(outside, 10);
  }
}

TEST(MurrayChu, WeightExclusionAndDeterminism) {
  GenSpecMurrayChu spec;
  spec.n_customers = 20;
  spec.pct_in_drone_range = 80;
  spec.pct_weight_ineligible = 0.25;
  spec.seed = 3;
  const Instance inst = gen_murray_chu(spec);
  EXPECT_EQ(inst.eligible().size(), 12u);  // 16 in range, 4 too heavy
  EXPECT_EQ(write_instance(gen_murray_chu(spec)), write_instance(inst));
  spec.seed = 4;
  EXPECT_NE(write_instance(gen_murray_chu(spec)), write_instance(inst));
}

TEST(MurrayChu, ZeroEndurance) {
  GenSpecMurrayChu spec;
  spec.endurance = 0.0;
  spec.pct_in_drone_range = 0;
  EXPECT_TRUE(gen_murray_chu(spec).eligible().empty());
  spec.pct_in_drone_range = 40;
  EXPECT_THROW(gen_murray_chu(spec), std::invalid_argument);
}

TEST(DepotNames, ParseBothSpellings) {
  EXPECT_EQ(parse_tsplib_depot("1"), TsplibDepot::center);
  EXPECT_EQ(parse_tsplib_depot("corner"), TsplibDepot::corner);
  EXPECT_EQ(parse_murray_depot("edge"), MurrayDepot::edge);
  EXPECT_THROW(parse_tsplib_depot("middle"), std::invalid_argument);
}
