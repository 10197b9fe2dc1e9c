#pragma once

#include <stdexcept>
#include <vector>

#include "amvrp/model.hpp"

namespace amvrp {

/// expanded id -> original id. Original ids keep their index; extra parts are
/// appended after the last original location.
struct SplitMap {
  std::vector<int> original_of;

  bool identity() const {
    for (std::size_t i = 0; i < original_of.size(); ++i)
      if (original_of[i] != static_cast<int>(i)) return false;
    return true;
  }
};

class PreprocessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SplitResult {
  Instance instance;
  SplitMap map;
};

/// Cuts every demand that exceeds the largest vehicle capacity (per
/// dimension) into full-capacity parts plus a remainder. Parts copy the
/// original's coordinates, windows, skills and service time; travel between
/// co-located parts is zero.
SplitResult split_demands(const Instance& instance);

/// One delivery of an original location in the merged report.
struct DeliveryPart {
  int vehicle_id = 0;
  int drive_index = 0;  // index into the solution's drive list
  int expanded_id = 0;
  double mass = 0.0;
  double volume = 0.0;
};

struct MergedReport {
  // Drives re-labelled with original ids (a location may appear in several).
  Solution solution;
  // Per original location, every part delivered and by whom.
  std::vector<std::vector<DeliveryPart>> deliveries;
};

MergedReport merge_back(const Instance& expanded, const Solution& solution, const SplitMap& map);

}  // namespace amvrp
