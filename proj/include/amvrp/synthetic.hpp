#pragma once

#include <cstdint>
#include <vector>

#include "amvrp/model.hpp"
#include "amvrp/timedep.hpp"

namespace amvrp {

/// Shape of a generated urban delivery day: a depot plus customers grouped
/// into city and town clusters, a heterogeneous fleet with skills, and a
/// travel-time tensor built from cluster profiles.
struct SyntheticSpec {
  int locations = 118;  // including the depot
  int clusters = 15;
  int city_clusters = 8;
  double step = 900.0;         // profile sampling step (s)
  double peak_scaler = 2.54;   // worst rush-hour multiplier
  double min_peak_scaler = 1.03;
  std::uint64_t seed = 1;
};

struct SyntheticData {
  Instance instance;
  std::vector<std::vector<double>> static_time;  // s
  std::vector<int> cluster_of;
  ProfileSet profiles;
};

SyntheticData generate_synthetic(const SyntheticSpec& spec = {});

}  // namespace amvrp
