#include "amvrp/preprocess.hpp"

#include <algorithm>
#include <cmath>

namespace amvrp {

namespace {

// Splits `total` into `parts` with every part but the last equal to `chunk`,
// and nudges the last part so the left-to-right sum reproduces `total`.
std::vector<double> exact_parts(double total, double chunk, std::size_t parts) {
  std::vector<double> out(parts, chunk);
  double sum = 0.0;
  for (std::size_t p = 0; p + 1 < parts; ++p) sum += out[p];
  double last = total - sum;
  for (int guard = 0; guard < 8 && sum + last != total; ++guard)
    last = std::nextafter(last, sum + last < total ? kOpenEnd : -kOpenEnd);
  out.back() = last;
  return out;
}

std::vector<double> proportional_parts(double total, const std::vector<double>& binding,
                                       double binding_total) {
  std::vector<double> out(binding.size());
  double sum = 0.0;
  for (std::size_t p = 0; p + 1 < binding.size(); ++p) {
    out[p] = binding_total > 0.0 ? total * (binding[p] / binding_total) : 0.0;
    sum += out[p];
  }
  double last = total - sum;
  for (int guard = 0; guard < 8 && sum + last != total; ++guard)
    last = std::nextafter(last, sum + last < total ? kOpenEnd : -kOpenEnd);
  out.back() = std::max(last, 0.0);
  return out;
}

}  // namespace

SplitResult split_demands(const Instance& in) {
  double max_mass = 0.0;
  double max_volume = 0.0;
  for (const auto& v : in.vehicles) {
    max_mass = std::max(max_mass, v.capacity_mass);
    max_volume = std::max(max_volume, v.capacity_volume);
  }
  if (!(max_mass > 0.0)) throw PreprocessError("fleet has zero capacity");

  SplitResult res;
  res.instance = in;
  auto& out = res.instance;
  const int n0 = in.size();
  res.map.original_of.resize(n0);
  for (int i = 0; i < n0; ++i) res.map.original_of[i] = i;

  struct Extra {
    int origin;
    double mass;
    double volume;
  };
  std::vector<Extra> extras;
  for (int i = 1; i < n0; ++i) {
    const auto& loc = in.locations[i];
    const double mass_ratio = loc.demand_mass / max_mass;
    const double volume_ratio = max_volume > 0.0 ? loc.demand_volume / max_volume : 0.0;
    if (mass_ratio <= 1.0 && volume_ratio <= 1.0) continue;

    std::vector<double> masses;
    std::vector<double> volumes;
    if (mass_ratio >= volume_ratio) {
      const auto parts = static_cast<std::size_t>(std::ceil(mass_ratio));
      masses = exact_parts(loc.demand_mass, max_mass, parts);
      volumes = proportional_parts(loc.demand_volume, masses, loc.demand_mass);
    } else {
      const auto parts = static_cast<std::size_t>(std::ceil(volume_ratio));
      volumes = exact_parts(loc.demand_volume, max_volume, parts);
      masses = proportional_parts(loc.demand_mass, volumes, loc.demand_volume);
    }
    out.locations[i].demand_mass = masses[0];
    out.locations[i].demand_volume = volumes[0];
    for (std::size_t p = 1; p < masses.size(); ++p) extras.push_back({i, masses[p], volumes[p]});
  }
  if (extras.empty()) return res;

  const int n = n0 + static_cast<int>(extras.size());
  for (std::size_t e = 0; e < extras.size(); ++e) {
    Location loc = in.locations[extras[e].origin];
    loc.id = n0 + static_cast<int>(e);
    loc.demand_mass = extras[e].mass;
    loc.demand_volume = extras[e].volume;
    out.locations.push_back(loc);
    res.map.original_of.push_back(extras[e].origin);
  }
  const auto& orig = res.map.original_of;
  out.distance.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.distance[i][j] = orig[i] == orig[j] ? 0.0 : in.distance[orig[i]][orig[j]];

  const auto& tt = in.travel_time;
  std::vector<std::vector<double>> sections(tt.section_count(),
                                            std::vector<double>(static_cast<std::size_t>(n) * n));
  for (std::size_t k = 0; k < tt.section_count(); ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        sections[k][static_cast<std::size_t>(i) * n + j] =
            orig[i] == orig[j] ? 0.0 : tt.at(k, orig[i], orig[j]);
  out.travel_time = TravelTimeTensor(tt.boundaries(), static_cast<std::size_t>(n), std::move(sections));
  return res;
}

MergedReport merge_back(const Instance& expanded, const Solution& solution, const SplitMap& map) {
  MergedReport rep;
  rep.solution = solution;
  int originals = 0;
  for (int o : map.original_of) originals = std::max(originals, o + 1);
  rep.deliveries.resize(originals);
  for (std::size_t d = 0; d < rep.solution.drives.size(); ++d) {
    auto& drive = rep.solution.drives[d];
    for (std::size_t p = 1; p + 1 < drive.stops.size(); ++p) {
      const int e = drive.stops[p];
      const int o = map.original_of[e];
      drive.stops[p] = o;
      rep.deliveries[o].push_back({drive.vehicle_id, static_cast<int>(d), e,
                                   expanded.locations[e].demand_mass,
                                   expanded.locations[e].demand_volume});
    }
  }
  return rep;
}

}  // namespace amvrp
