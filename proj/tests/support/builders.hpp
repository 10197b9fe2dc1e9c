#pragma once

#include <vector>

#include "amvrp/model.hpp"

namespace amvrp::testing {

/// Instance with the given matrices (distance in km, time in s), open
/// windows, zero demands and `vehicles` identical unconstrained vehicles.
inline Instance matrix_instance(const std::vector<std::vector<double>>& distance,
                                const std::vector<std::vector<double>>& time, int vehicles = 1) {
  Instance in;
  in.name = "toy";
  const int n = static_cast<int>(distance.size());
  in.locations.resize(n);
  for (int i = 0; i < n; ++i) in.locations[i].id = i;
  for (int v = 0; v < vehicles; ++v) {
    Vehicle veh;
    veh.id = v;
    veh.capacity_mass = 1e9;
    in.vehicles.push_back(veh);
  }
  in.distance = distance;
  in.travel_time = TravelTimeTensor(time);
  return in;
}

inline Instance uniform_instance(int n, double leg, int vehicles = 1) {
  std::vector<std::vector<double>> m(n, std::vector<double>(n, leg));
  for (int i = 0; i < n; ++i) m[i][i] = 0.0;
  return matrix_instance(m, m, vehicles);
}

}  // namespace amvrp::testing
