#include "amvrp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "amvrp/random.hpp"

namespace amvrp {

namespace {

constexpr double kHour = 3600.0;

// Smooth two-peak day: morning around 08:00, afternoon around 16:30.
TimeProfile day_profile(double step, double morning, double afternoon) {
  TimeProfile p;
  for (double t = 0.0; t < 86400.0 - 1e-9; t += step) {
    const double am = std::exp(-std::pow((t - 8.0 * kHour) / (0.9 * kHour), 2));
    const double pm = std::exp(-std::pow((t - 16.5 * kHour) / (1.1 * kHour), 2));
    p.samples.emplace_back(t, 1.0 + morning * am + afternoon * pm);
  }
  return p;
}

Vehicle make_vehicle(int id, double mass, double volume, SkillSet skills, double base_rate) {
  Vehicle v;
  v.id = id;
  v.capacity_mass = mass;
  v.capacity_volume = volume;
  v.hard_window = {6.0 * kHour, 20.0 * kHour};
  v.soft_window = {6.0 * kHour, 18.0 * kHour};
  v.skills = std::move(skills);
  v.cost_model = {base_rate, 2.0e-5, 0.002, 1.5};
  return v;
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  if (spec.locations < 2 || spec.clusters < 1 || spec.city_clusters > spec.clusters ||
      !(spec.step > 0.0))
    throw std::invalid_argument("synthetic spec out of range");
  Rng rng = Rng::stream(spec.seed, "synthetic");
  const int n = spec.locations;

  std::vector<std::pair<double, double>> centre(spec.clusters);
  for (int c = 0; c < spec.clusters; ++c) {
    const bool city = c < spec.city_clusters;
    const double r = city ? rng.uniform(1.0, 7.0) : rng.uniform(15.0, 32.0);
    const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
    centre[c] = {r * std::cos(a), r * std::sin(a)};
  }
  if (spec.city_clusters > 0) centre[0] = {0.5, 0.5};

  SyntheticData out;
  Instance& in = out.instance;
  in.name = "synthetic-" + std::to_string(n);
  in.objective = ObjectiveKind::Monetary;
  in.location_penalties = {0.5, 0.0005, 0.0, 1.5, 0.001, 0.0007};
  in.vehicle_penalties = {0.0, 0.0, 0.0, 1.5, 0.001, 0.0007};
  out.cluster_of.assign(n, 0);

  in.locations.resize(n);
  in.locations[0].hard_window = {5.0 * kHour, 22.0 * kHour};
  in.locations[0].soft_window = in.locations[0].hard_window;
  in.locations[0].cluster_id = 0;
  for (int i = 1; i < n; ++i) {
    auto& loc = in.locations[i];
    loc.id = i;
    const int c = (i - 1) % spec.clusters;
    out.cluster_of[i] = c;
    loc.cluster_id = c;
    std::normal_distribution<double> spread(0.0, c < spec.city_clusters ? 1.2 : 0.8);
    loc.x = centre[c].first + spread(rng.engine());
    loc.y = centre[c].second + spread(rng.engine());
    const int packages = 1 + static_cast<int>(rng.below(4));
    for (int p = 0; p < packages; ++p) {
      loc.demand_mass += rng.uniform(10.0, 90.0);
      loc.demand_volume += rng.uniform(0.05, 0.4);
    }
    loc.service_duration = rng.uniform(300.0, 900.0);
    switch (rng.below(6)) {
      case 0:
        loc.hard_window = {8.0 * kHour, 12.0 * kHour};
        break;
      case 1:
        loc.hard_window = {12.0 * kHour, 17.0 * kHour};
        break;
      default:
        loc.hard_window = {7.0 * kHour, 18.0 * kHour};
    }
    loc.soft_window = {loc.hard_window.begin + 1800.0, loc.hard_window.end - 1800.0};
    if (rng.below(10) == 0) loc.required_skills.insert("cooling");
    else if (rng.below(12) == 0) loc.required_skills.insert("tail-lift");
  }
  // One bulk order larger than any vehicle, delivered in parts.
  if (n > 2) {
    in.locations[n - 1].demand_mass = 4200.0;
    in.locations[n - 1].demand_volume = 14.0;
    in.locations[n - 1].required_skills.clear();
  }

  int id = 0;
  for (int k = 0; k < 4; ++k) in.vehicles.push_back(make_vehicle(id++, 1000.0, 8.0, {}, 0.08));
  for (int k = 0; k < 3; ++k)
    in.vehicles.push_back(make_vehicle(id++, 3500.0, 20.0, {"tail-lift"}, 0.15));
  for (int k = 0; k < 2; ++k)
    in.vehicles.push_back(make_vehicle(id++, 1500.0, 10.0, {"cooling"}, 0.11));

  in.distance.assign(n, std::vector<double>(n, 0.0));
  out.static_time.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& a = in.locations[i];
      const auto& b = in.locations[j];
      const double d = 1.3 * std::hypot(a.x - b.x, a.y - b.y) + 0.2;  // road detour
      in.distance[i][j] = d;
      const bool local = out.cluster_of[i] == out.cluster_of[j] && out.cluster_of[i] < spec.city_clusters;
      out.static_time[i][j] = d / (local ? 30.0 : 50.0) * kHour;
    }

  // Between-cluster profiles; the most congested pair reaches the peak scaler.
  double worst = 0.0;
  std::pair<int, int> worst_pair{0, 0};
  for (int a = 0; a < spec.clusters; ++a)
    for (int b = 0; b < spec.clusters; ++b) {
      const bool city = a < spec.city_clusters && b < spec.city_clusters;
      const double amp = rng.uniform(spec.min_peak_scaler - 1.0, (city ? 1.0 : 0.6) * (spec.peak_scaler - 1.0));
      const double ratio = rng.uniform(0.6, 1.0);
      const bool morning = rng.below(2) == 0;
      out.profiles.between_clusters[{a, b}] =
          day_profile(spec.step, morning ? amp : amp * ratio, morning ? amp * ratio : amp);
      if (amp > worst) worst = amp, worst_pair = {a, b};
    }
  out.profiles.between_clusters[worst_pair] = day_profile(spec.step, spec.peak_scaler - 1.0, 0.6);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && out.cluster_of[i] == out.cluster_of[j]) {
        const double amp = rng.uniform(spec.min_peak_scaler - 1.0, 0.5);
        out.profiles.per_pair[{i, j}] = day_profile(spec.step, amp, amp * rng.uniform(0.5, 1.0));
      }

  in.travel_time = build_from_profiles(out.static_time, out.cluster_of, out.profiles, spec.step);
  return out;
}

}  // namespace amvrp
