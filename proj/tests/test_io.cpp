#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "amvrp/io.hpp"
#include "amvrp/synthetic.hpp"
#include "support/generators.hpp"

using namespace amvrp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "amvrp-tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

const char* kMinimal = R"({
  "schema": "amvrp-rich/1",
  "objective": "travel_time",
  "locations": [
    {"id": 0, "x": 0, "y": 0},
    {"id": 1, "x": 3, "y": 4, "packages": [{"mass": 2, "volume": 0.5}, {"mass": 3}]}
  ],
  "vehicles": [{"id": 0, "capacity_mass": 10}],
  "matrices": {"distance": "d.txt", "travel_time": "t.txt"}
})";

void write_minimal_matrices(const fs::path& dir) {
  write_tensor(TravelTimeTensor({{0, 5}, {5, 0}}), dir / "d.txt");
  write_tensor(TravelTimeTensor({{0, 300}, {300, 0}}), dir / "t.txt");
}

}  // namespace

TEST(Cmt, Cmt1Counts) {
  const Instance in = parse_cmt(AMVRP_DATA_DIR "/cmt/vrpnc1.txt");
  EXPECT_EQ(in.customer_count(), 50);
  EXPECT_EQ(in.vehicles.size(), 50u);
  EXPECT_EQ(in.vehicles[0].capacity_mass, 160.0);
  EXPECT_EQ(in.vehicles[0].hard_window.end, kOpenEnd);
  EXPECT_EQ(in.locations[1].service_duration, 0.0);
  EXPECT_EQ(in.travel_time.section_count(), 1u);
  EXPECT_EQ(in.travel_time.at(0, 3, 7), in.distance[3][7]);
  EXPECT_EQ(in.name, "vrpnc1");
}

TEST(Cmt, Cmt6HasServiceAndRouteLimit) {
  const Instance in = parse_cmt(AMVRP_DATA_DIR "/cmt/vrpnc6.txt");
  EXPECT_EQ(in.customer_count(), 50);
  EXPECT_EQ(in.vehicles[0].hard_window, (TimeWindow{0.0, 200.0}));
  EXPECT_EQ(in.locations[7].service_duration, 10.0);
  EXPECT_EQ(in.locations[0].service_duration, 0.0);
}

TEST(Cmt, AllFourteenParseAndValidate) {
  const int sizes[] = {50, 75, 100, 150, 199, 50, 75, 100, 150, 199, 120, 100, 120, 100};
  for (int k = 1; k <= 14; ++k) {
    const Instance in = parse_cmt(std::string(AMVRP_DATA_DIR) + "/cmt/vrpnc" + std::to_string(k) + ".txt");
    EXPECT_EQ(in.customer_count(), sizes[k - 1]) << k;
    EXPECT_TRUE(validate_instance(in).empty()) << k;
  }
}

TEST(Cmt, TruncatedFileReportsLine) {
  try {
    parse_cmt_text("3 10 999999 0\n0 0\n1 1 2\n2 2 3\n", "trunc");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.location, "trunc:5");
    EXPECT_NE(std::string(e.what()).find("customer 3"), std::string::npos);
  }
}

TEST(Cmt, GarbageReportsLine) {
  try {
    parse_cmt_text("2 10\n0 0\n1 x 2\n2 2 3\n", "bad");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.location, "bad:3");
  }
}

TEST(Tensor, TextRoundTripIsExact) {
  Rng rng(4);
  const auto t = amvrp::testing::random_tensor(rng, 5, 4);
  const auto dir = scratch("tensor");
  write_tensor(t, dir / "t.txt");
  EXPECT_EQ(read_tensor(dir / "t.txt"), t);
}

TEST(Rich, MinimalDocument) {
  const auto dir = scratch("minimal");
  write(dir / "m.json", kMinimal);
  write_minimal_matrices(dir);
  const Instance in = parse_rich(dir / "m.json");
  EXPECT_EQ(in.size(), 2);
  EXPECT_EQ(in.locations[1].demand_mass, 5.0);
  EXPECT_EQ(in.locations[1].demand_volume, 0.5);
  EXPECT_EQ(in.distance[0][1], 5.0);
  EXPECT_EQ(in.name, "m");
}

TEST(Rich, UnknownFieldHasPath) {
  const auto dir = scratch("unknown");
  std::string doc = kMinimal;
  doc.replace(doc.find("\"x\": 3"), 6, "\"x\": 3, \"colour\": 1");
  write(dir / "m.json", doc);
  write_minimal_matrices(dir);
  try {
    parse_rich(dir / "m.json");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.location, "$.locations[1].colour");
  }
}

TEST(Rich, WrongSchemaRejected) {
  const auto dir = scratch("schema");
  std::string doc = kMinimal;
  doc.replace(doc.find("rich/1"), 6, "rich/9");
  write(dir / "m.json", doc);
  write_minimal_matrices(dir);
  EXPECT_THROW(parse_rich(dir / "m.json"), ParseError);
}

TEST(Rich, SpeedFactorTooLargeIsValidationError) {
  const auto dir = scratch("speed");
  std::string doc = kMinimal;
  doc.replace(doc.find("\"travel_time\","), 14, "\"monetary\",");
  doc.replace(doc.find("\"capacity_mass\": 10"), 19,
              "\"capacity_mass\": 10, \"fuel\": {\"base_rate\": 0.1, \"speed_factor\": 0.02}");
  write(dir / "m.json", doc);
  write_minimal_matrices(dir);  // 5 km in 300 s = 60 km/h
  try {
    parse_rich(dir / "m.json");
    FAIL();
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.violations.size(), 1u);
    EXPECT_NE(e.violations[0].rule.find("speed_factor"), std::string::npos);
  }
}

TEST(Rich, RoundTripReproducesInstance) {
  Rng rng(8);
  for (int rep = 0; rep < 10; ++rep) {
    amvrp::testing::TinyOptions o;
    o.customers = 2 + static_cast<int>(rng.below(6));
    o.monetary = rep % 2 == 1;
    Instance in = amvrp::testing::random_tiny(rng, o);
    in.name = "rt" + std::to_string(rep);
    in.locations[1].cluster_id = 3;
    const auto dir = scratch("roundtrip");
    emit_rich(in, dir / "rt.json");
    const Instance back = parse_rich(dir / "rt.json");
    EXPECT_TRUE(back.same_problem(in)) << rep;
  }
}

TEST(Rich, SyntheticShapeParsesAndValidates) {
  const auto data = generate_synthetic();
  EXPECT_EQ(data.instance.size(), 118);
  EXPECT_EQ(data.instance.travel_time.section_count(), 96u);
  std::set<int> clusters(data.cluster_of.begin(), data.cluster_of.end());
  EXPECT_EQ(clusters.size(), 15u);
  const auto dir = scratch("synthetic");
  emit_rich(data.instance, dir / "s.json");
  const Instance back = parse_rich(dir / "s.json");
  EXPECT_TRUE(validate_instance(back).empty());
  EXPECT_TRUE(back.same_problem(data.instance));
}

TEST(Rich, LoadInstanceDispatchesOnExtension) {
  const auto dir = scratch("dispatch");
  write(dir / "m.json", kMinimal);
  write_minimal_matrices(dir);
  EXPECT_EQ(load_instance(dir / "m.json").size(), 2);
  write(dir / "c.txt", "1 10\n0 0\n1 1 2\n");
  EXPECT_EQ(load_instance(dir / "c.txt").size(), 2);
}

TEST(Profiles, SpecRoundTripRebuildsTensor) {
  SyntheticSpec spec;
  spec.locations = 20;
  spec.clusters = 4;
  spec.city_clusters = 2;
  const auto data = generate_synthetic(spec);
  ProfileSpec ps;
  ps.static_time = data.static_time;
  ps.cluster_of = data.cluster_of;
  ps.profiles = data.profiles;
  ps.step = spec.step;
  const auto dir = scratch("profiles");
  emit_profile_spec(ps, dir / "p.json");
  EXPECT_EQ(build_tensor(parse_profile_spec(dir / "p.json")), data.instance.travel_time);
}

TEST(Report, TenRunsBestAverageSubopt) {
  RunSet r;
  r.instance = "vrpnc1";
  r.customers = 50;
  r.variants = "CVRP";
  for (int k = 0; k < 10; ++k) r.costs.push_back(530.0 + k);
  std::map<std::string, BestKnown> best{{"vrpnc1", {50, "CVRP", 524.61}}};
  const auto text = format_report({r}, best);
  const double sub = 530.0 / 524.61 - 1.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * sub);
  EXPECT_NE(text.find("\t530.00\t534.50\t"), std::string::npos) << text;
  EXPECT_NE(text.find(buf), std::string::npos);
  EXPECT_NE(text.find("average"), std::string::npos);
  EXPECT_EQ(text, format_report({r}, best));
}

TEST(Report, EmptyRunListHasHeaderOnly) {
  const auto text = format_report({}, {});
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
}

TEST(Report, BestKnownTable) {
  const auto best = read_best_known(AMVRP_DATA_DIR "/cmt/best_known.csv");
  EXPECT_EQ(best.size(), 14u);
  EXPECT_EQ(best.at("vrpnc1").cost, 524.61);
  EXPECT_EQ(best.at("vrpnc14").variants, "CVRP+VRPTW");
}

TEST(PlotData, OneRowPerCell) {
  StudyCell c{"vrpnc1", 1.0, 0.3, 15, 600.0, 560.0, 2.5, 3.1};
  const auto text = format_plotdata({c, c});
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_NE(text.find("vrpnc1\t1.000\t0.300\t15\t"), std::string::npos);
}
