#include "amvrp/model.hpp"

#include <cmath>
#include <sstream>

namespace amvrp {

Drive make_drive(int vehicle_id, const std::vector<int>& customers) {
  Drive d;
  d.vehicle_id = vehicle_id;
  d.stops.reserve(customers.size() + 2);
  d.stops.push_back(0);
  d.stops.insert(d.stops.end(), customers.begin(), customers.end());
  d.stops.push_back(0);
  return d;
}

namespace {

void check_windows(std::vector<Violation>& out, const std::string& who, const TimeWindow& hard,
                   const TimeWindow& soft) {
  if (!hard.valid()) out.push_back({who, "hard window must satisfy begin < end"});
  if (!soft.valid()) out.push_back({who, "soft window must satisfy begin < end"});
  if (!hard.contains(soft))
    out.push_back({who, "soft window outside hard window (need b_hard <= b_soft < e_soft <= e_hard)"});
}

void check_penalties(std::vector<Violation>& out, const std::string& who, const PenaltyParams& p) {
  for (double v : {p.early_fixed, p.early_per_second, p.early_duration_per_second, p.late_fixed,
                   p.late_per_second, p.late_duration_per_second}) {
    if (!(v >= 0.0)) {
      out.push_back({who, "penalty coefficients must be nonnegative"});
      return;
    }
  }
}

}  // namespace

std::vector<Violation> validate_instance(const Instance& in) {
  std::vector<Violation> out;
  const auto n = in.locations.size();
  if (n == 0) {
    out.push_back({"instance", "no depot"});
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& loc = in.locations[i];
    const std::string who = "location " + std::to_string(i);
    if (loc.id != static_cast<int>(i)) out.push_back({who, "id does not match index"});
    if (!(loc.demand_mass >= 0.0) || !(loc.demand_volume >= 0.0))
      out.push_back({who, "negative demand"});
    if (!(loc.service_duration >= 0.0)) out.push_back({who, "negative service duration"});
    check_windows(out, who, loc.hard_window, loc.soft_window);
  }
  if (in.locations[0].demand_mass != 0.0 || in.locations[0].demand_volume != 0.0)
    out.push_back({"location 0", "depot demand nonzero"});

  if (in.vehicles.empty()) out.push_back({"fleet", "no vehicles"});
  for (std::size_t v = 0; v < in.vehicles.size(); ++v) {
    const auto& veh = in.vehicles[v];
    const std::string who = "vehicle " + std::to_string(v);
    if (veh.id != static_cast<int>(v)) out.push_back({who, "id does not match index"});
    if (!(veh.capacity_mass > 0.0)) out.push_back({who, "mass capacity must be positive"});
    if (!(veh.capacity_volume >= 0.0)) out.push_back({who, "volume capacity must be nonnegative"});
    check_windows(out, who, veh.hard_window, veh.soft_window);
    const auto& fm = veh.cost_model;
    if (!(fm.base_rate > 0.0) || !(fm.fuel_price > 0.0) || !(fm.mass_factor >= 0.0) ||
        !(fm.speed_factor >= 0.0))
      out.push_back({who, "fuel cost model: base rate and price must be positive, factors nonnegative"});
  }
  check_penalties(out, "location penalties", in.location_penalties);
  check_penalties(out, "vehicle penalties", in.vehicle_penalties);

  bool matrix_ok = in.distance.size() == n;
  for (std::size_t i = 0; matrix_ok && i < n; ++i) {
    if (in.distance[i].size() != n) {
      matrix_ok = false;
      break;
    }
    if (in.distance[i][i] != 0.0)
      out.push_back({"distance matrix", "nonzero diagonal at " + std::to_string(i)});
    for (double d : in.distance[i])
      if (!(d >= 0.0)) {
        out.push_back({"distance matrix", "negative entry in row " + std::to_string(i)});
        break;
      }
  }
  if (!matrix_ok) out.push_back({"distance matrix", "must be square with one row per location"});

  const auto& tt = in.travel_time;
  if (tt.size() != n || tt.section_count() == 0) {
    out.push_back({"travel time", "dimensions do not match location count"});
    return out;
  }
  const auto& b = tt.boundaries();
  for (std::size_t k = 0; k + 1 < b.size(); ++k)
    if (!(b[k] < b[k + 1])) out.push_back({"travel time", "section boundaries not increasing"});

  double max_speed = 0.0;
  for (std::size_t k = 0; k < tt.section_count(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (tt.at(k, i, i) != 0.0)
        out.push_back({"travel time", "nonzero diagonal in section " + std::to_string(k)});
      for (std::size_t j = 0; j < n; ++j) {
        const double t = tt.at(k, i, j);
        if (!(t >= 0.0)) {
          out.push_back({"travel time", "negative entry in section " + std::to_string(k)});
          continue;
        }
        if (matrix_ok && i != j && in.distance[i][j] > 0.0) {
          const double v = t > 0.0 ? in.distance[i][j] / (t / 3600.0) : kOpenEnd;
          max_speed = std::max(max_speed, v);
        }
      }
    }
  }
  if (count_passing_violations(tt) > 0)
    out.push_back({"travel time", "non-passing property violated between sections"});
  if (in.objective == ObjectiveKind::Monetary) {
    for (std::size_t v = 0; v < in.vehicles.size(); ++v) {
      if (in.vehicles[v].cost_model.speed_factor * max_speed >= 1.0)
        out.push_back({"vehicle " + std::to_string(v),
                       "fuel cost model: speed_factor * max speed must stay below 1"});
    }
  }
  if (in.is_reduced() && in.composites.size() != n)
    out.push_back({"instance", "reduced instance without composite table"});
  return out;
}

std::vector<Violation> validate_structure(const Instance& in, const Solution& sol) {
  std::vector<Violation> out;
  const int n = in.size();
  std::vector<int> seen(n, 0);
  for (std::size_t d = 0; d < sol.drives.size(); ++d) {
    const auto& drive = sol.drives[d];
    const std::string who = "drive " + std::to_string(d);
    if (drive.vehicle_id < 0 || drive.vehicle_id >= static_cast<int>(in.vehicles.size()))
      out.push_back({who, "unknown vehicle"});
    if (drive.stops.size() < 3) out.push_back({who, "needs at least one customer"});
    if (drive.stops.empty() || drive.stops.front() != 0 || drive.stops.back() != 0)
      out.push_back({who, "must start and end at the depot"});
    for (std::size_t p = 1; p + 1 < drive.stops.size(); ++p) {
      const int c = drive.stops[p];
      if (c <= 0 || c >= n) {
        out.push_back({who, "interior stop is not a customer"});
        continue;
      }
      ++seen[c];
    }
  }
  for (int c = 1; c < n; ++c) {
    if (seen[c] != 1)
      out.push_back({"location " + std::to_string(c),
                     "visited " + std::to_string(seen[c]) + " times (must be exactly once)"});
  }
  return out;
}

std::string describe(const std::vector<Violation>& violations) {
  std::ostringstream os;
  for (const auto& v : violations) os << v.entity << ": " << v.rule << '\n';
  return os.str();
}

}  // namespace amvrp
