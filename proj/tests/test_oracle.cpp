#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "amvrp/evaluator.hpp"
#include "amvrp/oracle.hpp"
#include "support/builders.hpp"
#include "support/generators.hpp"

using namespace amvrp;

namespace {

/// Same problem with customer ids permuted: new id perm[i] holds old i.
Instance relabel(const Instance& in, const std::vector<int>& perm) {
  Instance out = in;
  const int n = in.size();
  for (int i = 0; i < n; ++i) {
    out.locations[perm[i]] = in.locations[i];
    out.locations[perm[i]].id = perm[i];
  }
  std::vector<std::vector<std::vector<double>>> sec(in.travel_time.section_count());
  for (std::size_t k = 0; k < sec.size(); ++k) {
    sec[k].assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        out.distance[perm[i]][perm[j]] = in.distance[i][j];
        sec[k][perm[i]][perm[j]] = in.travel_time.at(k, i, j);
      }
  }
  std::vector<std::vector<double>> flat;
  for (auto& s : sec) {
    std::vector<double> f;
    for (auto& row : s) f.insert(f.end(), row.begin(), row.end());
    flat.push_back(std::move(f));
  }
  out.travel_time = TravelTimeTensor(in.travel_time.boundaries(), static_cast<std::size_t>(n), std::move(flat));
  return out;
}

double best_single_tour(const std::vector<std::vector<double>>& d) {
  std::vector<int> order(d.size() - 1);
  std::iota(order.begin(), order.end(), 1);
  double best = 1e300;
  do {
    double c = d[0][order.front()] + d[order.back()][0];
    for (std::size_t k = 0; k + 1 < order.size(); ++k) c += d[order[k]][order[k + 1]];
    best = std::min(best, c);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace

TEST(Oracle, NoCustomers) {
  const auto r = solve_exact(amvrp::testing::uniform_instance(1, 1.0));
  EXPECT_EQ(r.status, OracleStatus::Optimal);
  EXPECT_EQ(r.cost, 0.0);
}

TEST(Oracle, OneCustomer) {
  const auto r = solve_exact(amvrp::testing::uniform_instance(2, 10.0));
  ASSERT_EQ(r.status, OracleStatus::Optimal);
  EXPECT_EQ(r.cost, 20.0);
  ASSERT_EQ(r.solution.drives.size(), 1u);
  EXPECT_EQ(r.solution.drives[0].stops, (std::vector<int>{0, 1, 0}));
}

TEST(Oracle, SquareTour) {
  const auto d = amvrp::testing::euclid({{0, 0}, {0, 10}, {10, 10}, {10, 0}});
  const auto r = solve_exact(amvrp::testing::matrix_instance(d, d));
  ASSERT_EQ(r.status, OracleStatus::Optimal);
  EXPECT_DOUBLE_EQ(r.cost, 40.0);
  // Both directions cost the same; the smaller encoding wins.
  EXPECT_EQ(r.solution.drives[0].stops, (std::vector<int>{0, 1, 2, 3, 0}));
}

TEST(Oracle, MatchesPermutationSearchOnOneVehicle) {
  Rng rng(12);
  for (int rep = 0; rep < 6; ++rep) {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 6; ++i) pts.emplace_back(rng.uniform(0, 50), rng.uniform(0, 50));
    const auto d = amvrp::testing::euclid(pts);
    const auto r = solve_exact(amvrp::testing::matrix_instance(d, d));
    ASSERT_EQ(r.status, OracleStatus::Optimal);
    EXPECT_NEAR(r.cost, best_single_tour(d), 1e-9);
  }
}

TEST(Oracle, CapacityForcesTwoDrives) {
  Instance in = amvrp::testing::uniform_instance(5, 10.0);
  for (int i = 1; i < 5; ++i) in.locations[i].demand_mass = 6.0;
  in.vehicles[0].capacity_mass = 12.0;
  const auto r = solve_exact(in);
  ASSERT_EQ(r.status, OracleStatus::Optimal);
  EXPECT_EQ(r.solution.drives.size(), 2u);
  EXPECT_EQ(r.cost, 60.0);
  EXPECT_TRUE(evaluate(in, r.solution).feasible());
}

TEST(Oracle, RefusesLargeInstances) {
  const auto r = solve_exact(amvrp::testing::uniform_instance(11, 1.0));
  EXPECT_EQ(r.status, OracleStatus::Refused);
  EXPECT_FALSE(r.message.empty());
  EXPECT_EQ(solve_exact(amvrp::testing::uniform_instance(6, 1.0), {4, 1}).status, OracleStatus::Refused);
}

TEST(Oracle, ReportsInfeasible) {
  Instance in = amvrp::testing::uniform_instance(3, 10.0);
  in.locations[2].hard_window = {0.0, 5.0};
  EXPECT_EQ(solve_exact(in).status, OracleStatus::Infeasible);
}

TEST(Oracle, RelabelInvariant) {
  Rng rng(5);
  for (int rep = 0; rep < 5; ++rep) {
    const Instance in = amvrp::testing::random_tiny(rng, {5, false, rep % 2 == 0});
    std::vector<int> perm(in.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin() + 1, perm.end(), rng.engine());
    const auto a = solve_exact(in);
    const auto b = solve_exact(relabel(in, perm));
    ASSERT_EQ(a.status, b.status);
    if (a.status == OracleStatus::Optimal) {
      EXPECT_NEAR(a.cost, b.cost, 1e-9 * std::max(1.0, a.cost));
    }
  }
}

TEST(Oracle, WorkerCountDoesNotChangeResult) {
  Rng rng(8);
  const Instance in = amvrp::testing::random_tiny(rng, {6, false, true});
  const auto a = solve_exact(in, {9, 1});
  const auto b = solve_exact(in, {9, 3});
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.cost, b.cost);
  EXPECT_EQ(a.solution, b.solution);
}

TEST(Oracle, SolutionCostMatchesEvaluator) {
  Rng rng(15);
  for (int rep = 0; rep < 5; ++rep) {
    const Instance in = amvrp::testing::random_tiny(rng, {5, false, rep % 2 == 1});
    const auto r = solve_exact(in);
    if (r.status != OracleStatus::Optimal) continue;
    const auto b = evaluate(in, r.solution);
    EXPECT_TRUE(b.feasible());
    EXPECT_EQ(b.total, r.cost);
  }
}
