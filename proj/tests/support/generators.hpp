#pragma once

// Hand-rolled random instance and solution generators for tests.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "amvrp/io.hpp"
#include "amvrp/model.hpp"
#include "amvrp/random.hpp"
#include "amvrp/timedep.hpp"

namespace amvrp::testing {

inline std::vector<std::vector<double>> euclid(const std::vector<std::pair<double, double>>& pts) {
  const std::size_t n = pts.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) d[i][j] = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
  return d;
}

/// Symmetric capacity-only instance in CMT text form, parsed by the real parser.
inline Instance random_cvrp(Rng& rng, int customers, double capacity = 100.0) {
  std::string text = std::to_string(customers) + " " + std::to_string(capacity) + " 999999 0\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.3f %.3f\n", rng.uniform(0, 100), rng.uniform(0, 100));
  text += buf;
  for (int i = 0; i < customers; ++i) {
    std::snprintf(buf, sizeof buf, "%.3f %.3f %d\n", rng.uniform(0, 100), rng.uniform(0, 100),
                  1 + static_cast<int>(rng.below(30)));
    text += buf;
  }
  return parse_cmt_text(text, "random-cvrp");
}

/// Random tensor with K sections on [0, horizon), passed through enforce_non_passing.
inline TravelTimeTensor random_tensor(Rng& rng, std::size_t n, std::size_t k, double horizon = 86400.0) {
  std::vector<double> cuts;
  for (std::size_t s = 1; s < k; ++s) cuts.push_back(rng.uniform(1.0, horizon - 1.0));
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> b{0.0};
  for (double c : cuts)
    if (c > b.back()) b.push_back(c);
  b.push_back(horizon);
  std::vector<std::vector<double>> sections(b.size() - 1, std::vector<double>(n * n, 0.0));
  for (auto& s : sections)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s[i * n + j] = rng.uniform(0.0, 5000.0);
  return enforce_non_passing(TravelTimeTensor(std::move(b), n, std::move(sections)));
}

struct TinyOptions {
  int customers = 6;
  bool split = false;        // one order larger than any vehicle
  bool monetary = false;
};

/// Every variant at once: two heterogeneous vehicles, capacities in mass and
/// volume, hard and soft windows, skills, a 3-section asymmetric tensor and
/// optionally a split order.
inline Instance random_tiny(Rng& rng, const TinyOptions& opt) {
  const int n = opt.customers + 1;
  Instance in;
  in.name = "tiny";
  in.objective = opt.monetary ? ObjectiveKind::Monetary : ObjectiveKind::TravelTime;
  in.location_penalties = {0.2, 0.001, 0.0005, 1.5, 0.001, 0.0007};
  in.vehicle_penalties = {0.0, 0.0, 0.0, 1.0, 0.002, 0.0};
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < n; ++i) pts.emplace_back(rng.uniform(0, 30), rng.uniform(0, 30));
  in.distance = euclid(pts);
  const double hour = 3600.0;

  in.locations.resize(n);
  for (int i = 0; i < n; ++i) {
    auto& l = in.locations[i];
    l.id = i;
    l.x = pts[i].first;
    l.y = pts[i].second;
    if (i == 0) {
      l.hard_window = {0.0, 86400.0};
      l.soft_window = l.hard_window;
      continue;
    }
    l.demand_mass = rng.uniform(5.0, 30.0);
    l.demand_volume = rng.uniform(0.2, 2.0);
    l.service_duration = rng.uniform(60.0, 600.0);
    const double begin = rng.uniform(0.0, 3.0 * hour);
    const double len = rng.uniform(2.5 * hour, 5.0 * hour);
    l.hard_window = {begin, begin + len};
    l.soft_window = {begin + rng.uniform(0.0, 0.3) * len, begin + len - rng.uniform(0.0, 0.3) * len};
    if (rng.below(4) == 0) l.required_skills.insert("cold");
  }

  Vehicle a;
  a.id = 0;
  a.capacity_mass = rng.uniform(40.0, 70.0);
  a.capacity_volume = rng.uniform(3.0, 6.0);
  a.hard_window = {0.0, 9.0 * hour};
  a.soft_window = {0.0, 6.0 * hour};
  a.cost_model = {0.1, 1e-4, 0.002, 1.6};
  Vehicle b;
  b.id = 1;
  b.capacity_mass = rng.uniform(60.0, 100.0);
  b.capacity_volume = rng.uniform(4.0, 8.0);
  b.hard_window = {0.5 * hour, 9.0 * hour};
  b.soft_window = {0.5 * hour, 7.0 * hour};
  b.skills = {"cold"};
  b.cost_model = {0.15, 1e-4, 0.002, 1.6};
  in.vehicles = {a, b};
  if (opt.split) {
    auto& l = in.locations[1 + rng.below(static_cast<std::size_t>(opt.customers))];
    l.demand_mass = b.capacity_mass * rng.uniform(1.2, 1.8);
  }

  // Base speed 40 km/h, per-pair section scalers in [1, 1.8].
  const std::vector<double> bounds{0.0, 2.0 * hour, 4.0 * hour, 86400.0};
  std::vector<std::vector<double>> sections(3, std::vector<double>(static_cast<std::size_t>(n * n), 0.0));
  for (auto& s : sections)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) s[static_cast<std::size_t>(i * n + j)] = in.distance[i][j] * 90.0 * rng.uniform(1.0, 1.8);
  in.travel_time = enforce_non_passing(TravelTimeTensor(bounds, static_cast<std::size_t>(n), std::move(sections)));
  return in;
}

/// Random structurally valid solution: customers shuffled and cut into drives
/// on random vehicles.
inline Solution random_solution(Rng& rng, const Instance& in) {
  std::vector<int> ids;
  for (int i = 1; i < in.size(); ++i) ids.push_back(i);
  std::shuffle(ids.begin(), ids.end(), rng.engine());
  Solution s;
  std::size_t p = 0;
  while (p < ids.size()) {
    const std::size_t len = 1 + rng.below(std::min<std::size_t>(4, ids.size() - p));
    std::vector<int> part(ids.begin() + static_cast<std::ptrdiff_t>(p), ids.begin() + static_cast<std::ptrdiff_t>(p + len));
    s.drives.push_back(make_drive(static_cast<int>(rng.below(in.vehicles.size())), part));
    p += len;
  }
  return s;
}

}  // namespace amvrp::testing
