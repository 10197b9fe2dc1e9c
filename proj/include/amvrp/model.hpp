#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "amvrp/timedep.hpp"

namespace amvrp {

inline constexpr double kOpenEnd = std::numeric_limits<double>::infinity();

/// Closed interval of seconds since the start of the planning day.
struct TimeWindow {
  double begin = 0.0;
  double end = kOpenEnd;

  bool valid() const { return begin < end; }
  bool contains(const TimeWindow& inner) const {
    return begin <= inner.begin && inner.end <= end;
  }
  bool operator==(const TimeWindow&) const = default;
};

using SkillSet = std::set<std::string>;

struct Location {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
  double demand_mass = 0.0;    // kg
  double demand_volume = 0.0;  // m^3
  double service_duration = 0.0;
  TimeWindow hard_window;
  TimeWindow soft_window;
  SkillSet required_skills;
  std::optional<int> cluster_id;

  bool operator==(const Location&) const = default;
};

/// Fuel consumption per km is (base_rate + mass_factor * m) * (1 - speed_factor * v),
/// with m the load in kg and v the mean speed in km/h; fuel_price converts to money.
struct FuelCostModel {
  double base_rate = 1.0;
  double mass_factor = 0.0;
  double speed_factor = 0.0;
  double fuel_price = 1.0;

  bool operator==(const FuelCostModel&) const = default;
};

struct Vehicle {
  int id = 0;
  double capacity_mass = 0.0;
  double capacity_volume = 0.0;  // 0 disables the volume dimension
  TimeWindow hard_window;
  TimeWindow soft_window;
  SkillSet skills;
  FuelCostModel cost_model;

  bool can_serve(const Location& loc) const {
    for (const auto& s : loc.required_skills)
      if (!skills.contains(s)) return false;
    return true;
  }
  bool operator==(const Vehicle&) const = default;
};

/// Soft-window penalty coefficients: fixed charge, per second outside the
/// window, and per second of the stay spent outside the window.
struct PenaltyParams {
  double early_fixed = 0.0;
  double early_per_second = 0.0;
  double early_duration_per_second = 0.0;
  double late_fixed = 0.0;
  double late_per_second = 0.0;
  double late_duration_per_second = 0.0;

  bool operator==(const PenaltyParams&) const = default;
};

enum class ObjectiveKind { TravelTime, Monetary };

class Instance;

/// A reduced vertex's constituents, both at the parent level and flattened
/// down to the root instance.
struct CompositeInfo {
  std::vector<int> parent_members;
  std::vector<int> root_members;
};

class Instance {
 public:
  std::string name;
  std::vector<Location> locations;  // index == id, 0 is the depot
  std::vector<Vehicle> vehicles;    // index == id
  std::vector<std::vector<double>> distance;  // km
  TravelTimeTensor travel_time;
  PenaltyParams location_penalties;
  PenaltyParams vehicle_penalties;
  ObjectiveKind objective = ObjectiveKind::TravelTime;

  // Set only on instances produced by segment freezing. Evaluation always
  // happens on `root` after expanding every vertex into its root members.
  std::shared_ptr<const Instance> root;
  std::vector<CompositeInfo> composites;  // indexed by location id

  int size() const { return static_cast<int>(locations.size()); }
  int customer_count() const { return size() - 1; }
  bool is_reduced() const { return root != nullptr; }

  bool same_problem(const Instance& o) const {
    return name == o.name && locations == o.locations && vehicles == o.vehicles &&
           distance == o.distance && travel_time == o.travel_time &&
           location_penalties == o.location_penalties &&
           vehicle_penalties == o.vehicle_penalties && objective == o.objective;
  }
};

/// Arrival b_i (before any waiting) and departure e_i (after service).
struct VisitTime {
  double arrival = 0.0;
  double departure = 0.0;
  bool operator==(const VisitTime&) const = default;
};

/// One depot-to-depot excursion. `stops` holds the full sequence including
/// the depot at both ends.
struct Drive {
  int vehicle_id = 0;
  std::vector<int> stops;
  std::vector<VisitTime> schedule;  // parallel to stops once propagated

  std::vector<int> customers() const {
    if (stops.size() < 2) return {};
    return {stops.begin() + 1, stops.end() - 1};
  }
  bool operator==(const Drive&) const = default;
};

/// Drives of one vehicle are performed in the order they appear in `drives`.
struct Solution {
  std::vector<Drive> drives;

  bool operator==(const Solution&) const = default;
};

Drive make_drive(int vehicle_id, const std::vector<int>& customers);

struct Violation {
  std::string entity;  // e.g. "location 3", "vehicle 1", "drive 2"
  std::string rule;
  bool operator==(const Violation&) const = default;
};

/// Checks every structural invariant of the instance. Never throws.
std::vector<Violation> validate_instance(const Instance& instance);

/// Checks drive shape and the visit-once rule against the instance.
std::vector<Violation> validate_structure(const Instance& instance, const Solution& solution);

class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& what, std::vector<Violation> v)
      : std::runtime_error(what), violations(std::move(v)) {}
  std::vector<Violation> violations;
};

std::string describe(const std::vector<Violation>& violations);

}  // namespace amvrp
