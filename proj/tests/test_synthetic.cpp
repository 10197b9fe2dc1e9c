#include <gtest/gtest.h>

#include <set>

#include "amvrp/evaluator.hpp"
#include "amvrp/preprocess.hpp"
#include "amvrp/synthetic.hpp"

using namespace amvrp;

TEST(Synthetic, ShapeOfDefaultDay) {
  const auto d = generate_synthetic();
  const Instance& in = d.instance;
  EXPECT_EQ(in.size(), 118);
  EXPECT_TRUE(validate_instance(in).empty());
  EXPECT_EQ(in.objective, ObjectiveKind::Monetary);
  EXPECT_EQ(count_passing_violations(in.travel_time), 0u);
  std::set<int> classes;
  std::set<std::string> skills;
  for (const auto& v : in.vehicles) {
    classes.insert(static_cast<int>(v.capacity_mass));
    skills.insert(v.skills.begin(), v.skills.end());
  }
  EXPECT_EQ(classes.size(), 3u);
  EXPECT_EQ(skills, (std::set<std::string>{"cooling", "tail-lift"}));
  EXPECT_EQ(split_demands(in).instance.size(), 119);
}

TEST(Synthetic, PeakRatioIsExact) {
  const auto d = generate_synthetic();
  const auto& t = d.instance.travel_time;
  double worst = 0.0;
  for (int i = 0; i < d.instance.size(); ++i)
    for (int j = 0; j < d.instance.size(); ++j) {
      if (i == j) continue;
      double lo = 1e300, hi = 0.0;
      for (std::size_t k = 0; k < t.section_count(); ++k) {
        lo = std::min(lo, t.at(k, i, j));
        hi = std::max(hi, t.at(k, i, j));
      }
      worst = std::max(worst, hi / lo);
    }
  EXPECT_NEAR(worst, 2.54, 1e-9);
}

TEST(Synthetic, SeedControlsOutput) {
  SyntheticSpec a;
  a.locations = 30;
  a.clusters = 5;
  a.city_clusters = 2;
  SyntheticSpec b = a;
  b.seed = 2;
  EXPECT_TRUE(generate_synthetic(a).instance.same_problem(generate_synthetic(a).instance));
  EXPECT_FALSE(generate_synthetic(a).instance.same_problem(generate_synthetic(b).instance));
}
