#include <gtest/gtest.h>

#include <set>

#include "amvrp/evaluator.hpp"
#include "amvrp/preprocess.hpp"
#include "support/builders.hpp"
#include "support/generators.hpp"

using namespace amvrp;

namespace {

Instance with_demands(std::vector<double> mass, std::vector<double> volume, double cap_mass, double cap_volume) {
  Instance in = amvrp::testing::uniform_instance(static_cast<int>(mass.size()) + 1, 10.0);
  in.vehicles[0].capacity_mass = cap_mass;
  in.vehicles[0].capacity_volume = cap_volume;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    in.locations[i + 1].demand_mass = mass[i];
    in.locations[i + 1].demand_volume = volume[i];
  }
  return in;
}

}  // namespace

TEST(Split, NothingToSplitIsIdentity) {
  const Instance in = with_demands({5, 10}, {1, 1}, 10, 5);
  const auto r = split_demands(in);
  EXPECT_TRUE(r.map.identity());
  EXPECT_TRUE(r.instance.same_problem(in));
}

TEST(Split, GreedyFillTwoAndAHalf) {
  const Instance in = with_demands({25}, {0}, 10, 0);
  const auto r = split_demands(in);
  ASSERT_EQ(r.instance.size(), 4);
  EXPECT_EQ(r.map.original_of, (std::vector<int>{0, 1, 1, 1}));
  EXPECT_EQ(r.instance.locations[1].demand_mass, 10.0);
  EXPECT_EQ(r.instance.locations[2].demand_mass, 10.0);
  EXPECT_EQ(r.instance.locations[3].demand_mass, 5.0);
  EXPECT_TRUE(validate_instance(r.instance).empty());
}

TEST(Split, VolumeBindingDimension) {
  const Instance in = with_demands({3}, {6}, 10, 5);
  const auto r = split_demands(in);
  ASSERT_EQ(r.instance.size(), 3);
  EXPECT_EQ(r.instance.locations[1].demand_volume, 5.0);
  EXPECT_EQ(r.instance.locations[1].demand_volume + r.instance.locations[2].demand_volume, 6.0);
  EXPECT_EQ(r.instance.locations[1].demand_mass + r.instance.locations[2].demand_mass, 3.0);
}

TEST(Split, PartsCopyAttributesAndAreCoLocated) {
  Instance in = with_demands({4, 17}, {0, 0}, 8, 0);
  in.locations[2].hard_window = {100, 900};
  in.locations[2].soft_window = {200, 800};
  in.locations[2].service_duration = 30;
  in.locations[2].required_skills = {"x"};
  in.vehicles[0].skills = {"x"};
  const auto r = split_demands(in);
  ASSERT_EQ(r.instance.size(), 5);
  for (int e = 3; e < 5; ++e) {
    const auto& p = r.instance.locations[e];
    EXPECT_EQ(p.id, e);
    EXPECT_EQ(p.hard_window, in.locations[2].hard_window);
    EXPECT_EQ(p.soft_window, in.locations[2].soft_window);
    EXPECT_EQ(p.service_duration, 30);
    EXPECT_EQ(p.required_skills, in.locations[2].required_skills);
    EXPECT_EQ(r.instance.distance[2][e], 0.0);
    EXPECT_EQ(r.instance.travel_time.at(0, e, 2), 0.0);
    EXPECT_EQ(r.instance.distance[1][e], in.distance[1][2]);
  }
}

TEST(Split, ZeroCapacityFleetFails) {
  Instance in = with_demands({5}, {0}, 10, 0);
  in.vehicles[0].capacity_mass = 0;
  EXPECT_THROW(split_demands(in), PreprocessError);
}

// Property: conservation is exact per original location in both dimensions
// and every part satisfies the capacity bound.
TEST(Split, ConservationIsExact) {
  Rng rng(99);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = 1 + static_cast<int>(rng.below(6));
    std::vector<double> mass, volume;
    for (int i = 0; i < n; ++i) {
      mass.push_back(rng.uniform(0.0, 50.0));
      volume.push_back(rng.uniform(0.0, 7.0));
    }
    const double cm = rng.uniform(3.0, 20.0), cv = rng.uniform(0.5, 3.0);
    const Instance in = with_demands(mass, volume, cm, cv);
    const auto r = split_demands(in);
    EXPECT_TRUE(validate_instance(r.instance).empty());
    for (int o = 1; o <= n; ++o) {
      double sm = 0.0, sv = 0.0;
      for (int e = 0; e < r.instance.size(); ++e)
        if (r.map.original_of[e] == o) {
          sm += r.instance.locations[e].demand_mass;
          sv += r.instance.locations[e].demand_volume;
        }
      EXPECT_EQ(sm, in.locations[o].demand_mass);
      EXPECT_EQ(sv, in.locations[o].demand_volume);
    }
    for (const auto& l : r.instance.locations) {
      EXPECT_LE(l.demand_mass, cm * (1 + 1e-12));
      EXPECT_LE(l.demand_volume, cv * (1 + 1e-12));
    }
  }
}

TEST(Merge, IdentityMapGivesSameSolution) {
  const Instance in = with_demands({1, 2, 3}, {0, 0, 0}, 10, 0);
  const auto r = split_demands(in);
  Solution s;
  s.drives.push_back(make_drive(0, {3, 1, 2}));
  EXPECT_EQ(merge_back(r.instance, s, r.map).solution, s);
}

TEST(Merge, ThreeWaySplitOnTwoVehicles) {
  Instance in = with_demands({25}, {0}, 10, 0);
  in.vehicles.push_back(in.vehicles[0]);
  in.vehicles[1].id = 1;
  const auto r = split_demands(in);
  Solution s;
  s.drives.push_back(make_drive(0, {1}));
  s.drives.push_back(make_drive(0, {3}));
  s.drives.push_back(make_drive(1, {2}));
  ASSERT_TRUE(evaluate(r.instance, s).feasible());
  const auto m = merge_back(r.instance, s, r.map);
  ASSERT_EQ(m.deliveries[1].size(), 3u);
  double total = 0.0;
  std::set<int> vehicles;
  for (const auto& p : m.deliveries[1]) {
    total += p.mass;
    vehicles.insert(p.vehicle_id);
  }
  EXPECT_EQ(total, 25.0);
  EXPECT_EQ(vehicles.size(), 2u);
  EXPECT_EQ(m.solution.drives[0].stops, (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(m.solution.drives[1].stops, (std::vector<int>{0, 1, 0}));
}
