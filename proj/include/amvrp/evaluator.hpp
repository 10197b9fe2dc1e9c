#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "amvrp/model.hpp"

namespace amvrp {

/// Objective terms of one evaluation. `total` is travel cost plus the four
/// penalty sums; a non-empty `hard_violations` marks the solution infeasible.
struct CostBreakdown {
  double travel_cost = 0.0;
  double location_early_penalty = 0.0;
  double location_late_penalty = 0.0;
  double vehicle_early_penalty = 0.0;
  double vehicle_late_penalty = 0.0;
  double total = 0.0;
  std::vector<Violation> hard_violations;
  double exceeded_soft_seconds = 0.0;
  int horizon_clamps = 0;  // departures looked up outside the tensor horizon

  bool feasible() const { return hard_violations.empty(); }
  bool operator==(const CostBreakdown&) const = default;
};

struct WindowPenalty {
  double early = 0.0;
  double late = 0.0;
};

/// Early/late soft-window charges for a stay that starts at `arrival` and
/// ends at `departure`.
WindowPenalty soft_window_penalty(const PenaltyParams& params, const TimeWindow& soft,
                                  double arrival, double departure);

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Money spent on fuel for one arc: price * d * (c0 + mu_m * m) * (1 - mu_v * v).
double fuel_cost(const FuelCostModel& model, double distance_km, double travel_seconds,
                 double load_mass);

/// Cost of traversing i -> j with `vehicle` departing at `departure` and
/// carrying `load_mass`. Travel time in TravelTime mode, fuel money otherwise.
double arc_cost(const Instance& instance, const Vehicle& vehicle, int i, int j,
                double departure, double load_mass);

/// Fills every drive's schedule. Drives of a vehicle run back to back in
/// list order; early arrivals wait for the hard window to open.
Solution propagate_schedule(const Instance& instance, const Solution& solution);

/// Full objective plus hard-constraint check. Pure: the input schedule is
/// recomputed, never trusted.
CostBreakdown evaluate(const Instance& instance, const Solution& solution);

/// Aggregated outcome for one vehicle's sequence of drives.
struct VehicleResult {
  double travel = 0.0;
  double location_early = 0.0;
  double location_late = 0.0;
  double vehicle_early = 0.0;
  double vehicle_late = 0.0;
  double exceeded_soft = 0.0;
  double infeasibility = 0.0;  // 0 iff every hard constraint holds
  int clamps = 0;
  double end_time = 0.0;

  double cost() const {
    return travel + location_early + location_late + vehicle_early + vehicle_late;
  }
};

/// Lexicographic (infeasibility, cost) ordering used by every improvement step.
struct Score {
  double infeasibility = 0.0;
  double cost = 0.0;

  bool better_than(const Score& o, double eps = 1e-9) const {
    if (infeasibility < o.infeasibility - eps) return true;
    if (infeasibility > o.infeasibility + eps) return false;
    return cost < o.cost - eps * std::max(1.0, std::abs(o.cost));
  }
  Score operator+(const Score& o) const { return {infeasibility + o.infeasibility, cost + o.cost}; }
  Score operator-(const Score& o) const { return {infeasibility - o.infeasibility, cost - o.cost}; }
};

inline Score score_of(const VehicleResult& r) { return {r.infeasibility, r.cost()}; }

/// Per-visit timing produced by Evaluator::evaluate_vehicle when asked.
struct DriveTrace {
  double start = 0.0;   // depot departure
  double finish = 0.0;  // depot return
  std::vector<VisitTime> visits;  // one per token
};

/// Precomputed view of an instance used by the search components. Drives are
/// passed as token sequences without depots; on reduced instances each token
/// is expanded into its root members and simulated on the root instance.
class Evaluator {
 public:
  explicit Evaluator(const Instance& instance);

  const Instance& instance() const { return *instance_; }
  const Instance& root() const { return *root_; }
  int token_count() const { return instance_->size(); }
  int vehicle_count() const { return static_cast<int>(instance_->vehicles.size()); }

  std::span<const int> members(int token) const { return members_[token]; }
  double token_mass(int token) const { return mass_[token]; }
  double token_volume(int token) const { return volume_[token]; }
  bool compatible(int vehicle, int token) const {
    return compat_[static_cast<std::size_t>(vehicle) * members_.size() + token] != 0;
  }
  bool fits(int vehicle, double mass, double volume) const;

  /// Vehicles with identical attributes share a class; searches only need to
  /// try one idle vehicle per class.
  int vehicle_class(int vehicle) const { return class_of_[vehicle]; }
  int class_count() const { return static_cast<int>(class_members_.size()); }
  const std::vector<int>& class_members(int cls) const { return class_members_[cls]; }

  VehicleResult evaluate_vehicle(int vehicle, std::span<const std::span<const int>> drives,
                                 std::vector<DriveTrace>* traces = nullptr,
                                 std::vector<Violation>* violations = nullptr) const;

  VehicleResult evaluate_vehicle(int vehicle, const std::vector<std::vector<int>>& drives,
                                 std::vector<DriveTrace>* traces = nullptr,
                                 std::vector<Violation>* violations = nullptr) const;

  /// Single-drive feasibility on the best-suited vehicle class; returns the
  /// class index or -1.
  int feasible_class_for(std::span<const int> drive) const;

 private:
  const Instance* instance_;
  const Instance* root_;
  std::vector<std::vector<int>> members_;
  std::vector<double> mass_;
  std::vector<double> volume_;
  std::vector<char> compat_;  // vehicle-major
  std::vector<int> class_of_;
  std::vector<std::vector<int>> class_members_;
};

/// plan[v][d] is the token sequence of vehicle v's d-th drive, depots omitted.
using Plan = std::vector<std::vector<std::vector<int>>>;

/// Groups a solution's drives into per-vehicle token lists, preserving order.
Plan drives_by_vehicle(const Instance& instance, const Solution& solution);

/// Inverse of drives_by_vehicle; schedules are left empty.
Solution solution_from_plan(const Plan& plan);

/// Lexicographic score of a whole plan.
Score plan_score(const Evaluator& ev, const Plan& plan);

}  // namespace amvrp
