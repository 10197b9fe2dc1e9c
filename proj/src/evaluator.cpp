#include "amvrp/evaluator.hpp"

namespace amvrp {

WindowPenalty soft_window_penalty(const PenaltyParams& p, const TimeWindow& soft, double arrival,
                                  double departure) {
  WindowPenalty w;
  if (arrival < soft.begin) {
    w.early = p.early_fixed + p.early_per_second * (soft.begin - arrival) +
              p.early_duration_per_second * (std::min(departure, soft.begin) - arrival);
  }
  if (departure > soft.end) {
    w.late = p.late_fixed + p.late_per_second * (departure - soft.end) +
             p.late_duration_per_second * (departure - std::max(arrival, soft.end));
  }
  return w;
}

double fuel_cost(const FuelCostModel& m, double distance_km, double travel_seconds,
                 double load_mass) {
  if (distance_km == 0.0) return 0.0;
  if (!(travel_seconds > 0.0)) throw EvaluationError("positive distance with zero travel time");
  const double speed = distance_km / (travel_seconds / 3600.0);
  const double speed_term = 1.0 - m.speed_factor * speed;
  if (!(speed_term > 0.0)) throw EvaluationError("speed factor makes fuel consumption nonpositive");
  return m.fuel_price * distance_km * (m.base_rate + m.mass_factor * load_mass) * speed_term;
}

namespace {

double checked_fuel_cost(const FuelCostModel& m, double d, double t, double load, int i, int j) {
  try {
    return fuel_cost(m, d, t, load);
  } catch (const EvaluationError& e) {
    throw EvaluationError(std::string(e.what()) + " on arc (" + std::to_string(i) + ", " +
                          std::to_string(j) + ")");
  }
}

}  // namespace

double arc_cost(const Instance& in, const Vehicle& vehicle, int i, int j, double departure,
                double load_mass) {
  const double t = lookup(in.travel_time, i, j, departure);
  if (in.objective == ObjectiveKind::TravelTime) return t;
  return checked_fuel_cost(vehicle.cost_model, in.distance[i][j], t, load_mass, i, j);
}

Evaluator::Evaluator(const Instance& instance)
    : instance_(&instance), root_(instance.is_reduced() ? instance.root.get() : &instance) {
  const int n = instance.size();
  members_.resize(n);
  mass_.assign(n, 0.0);
  volume_.assign(n, 0.0);
  for (int t = 0; t < n; ++t) {
    if (instance.is_reduced())
      members_[t] = instance.composites[t].root_members;
    else
      members_[t] = {t};
    for (int m : members_[t]) {
      mass_[t] += root_->locations[m].demand_mass;
      volume_[t] += root_->locations[m].demand_volume;
    }
  }
  const int nv = vehicle_count();
  compat_.assign(static_cast<std::size_t>(nv) * n, 1);
  for (int v = 0; v < nv; ++v) {
    const auto& veh = instance.vehicles[v];
    for (int t = 1; t < n; ++t)
      for (int m : members_[t])
        if (!veh.can_serve(root_->locations[m])) compat_[static_cast<std::size_t>(v) * n + t] = 0;
  }
  class_of_.assign(nv, -1);
  for (int v = 0; v < nv; ++v) {
    const auto& a = instance.vehicles[v];
    for (int c = 0; c < class_count(); ++c) {
      const auto& b = instance.vehicles[class_members_[c].front()];
      if (a.capacity_mass == b.capacity_mass && a.capacity_volume == b.capacity_volume &&
          a.hard_window == b.hard_window && a.soft_window == b.soft_window &&
          a.skills == b.skills && a.cost_model == b.cost_model) {
        class_of_[v] = c;
        class_members_[c].push_back(v);
        break;
      }
    }
    if (class_of_[v] < 0) {
      class_of_[v] = class_count();
      class_members_.push_back({v});
    }
  }
}

bool Evaluator::fits(int vehicle, double mass, double volume) const {
  const auto& veh = instance_->vehicles[vehicle];
  if (mass > veh.capacity_mass * (1.0 + 1e-12) + 1e-12) return false;
  if (veh.capacity_volume > 0.0 && volume > veh.capacity_volume * (1.0 + 1e-12) + 1e-12) return false;
  return true;
}

VehicleResult Evaluator::evaluate_vehicle(int v, std::span<const std::span<const int>> drives,
                                          std::vector<DriveTrace>* traces,
                                          std::vector<Violation>* violations) const {
  const Instance& R = *root_;
  const Vehicle& veh = instance_->vehicles[v];
  const Location& depot = R.locations[0];
  const bool monetary = R.objective == ObjectiveKind::Monetary;
  const auto& dist = R.distance;
  const auto& tt = R.travel_time;
  const std::size_t stride = members_.size();

  VehicleResult r;
  double clock = std::max(veh.hard_window.begin, depot.hard_window.begin);
  double first_departure = clock;
  bool used = false;
  if (traces) traces->clear();

  for (std::size_t d = 0; d < drives.size(); ++d) {
    const auto tokens = drives[d];
    if (tokens.empty()) {
      if (traces) traces->push_back({clock, clock, {}});
      continue;
    }
    double mass = 0.0;
    double volume = 0.0;
    for (int tok : tokens) {
      mass += mass_[tok];
      volume += volume_[tok];
      if (!compat_[static_cast<std::size_t>(v) * stride + tok]) {
        r.infeasibility += 1.0;
        if (violations)
          violations->push_back({"location " + std::to_string(tok),
                                 "requires skills vehicle " + std::to_string(v) + " lacks"});
      }
    }
    if (!fits(v, mass, volume)) {
      double excess = std::max(0.0, mass - veh.capacity_mass);
      if (veh.capacity_volume > 0.0) excess += std::max(0.0, volume - veh.capacity_volume);
      r.infeasibility += std::max(excess, 1e-9);
      if (violations)
        violations->push_back({"vehicle " + std::to_string(v),
                               "drive " + std::to_string(d) + " exceeds capacity"});
    }

    if (!used) {
      first_departure = clock;
      used = true;
    }
    DriveTrace* trace = nullptr;
    if (traces) {
      traces->push_back({clock, clock, {}});
      trace = &traces->back();
      trace->visits.reserve(tokens.size());
    }
    double depart = clock;
    double load = mass;
    int prev = 0;
    for (int tok : tokens) {
      const auto& ms = members_[tok];
      double token_arrival = 0.0;
      for (std::size_t k = 0; k < ms.size(); ++k) {
        const int m = ms[k];
        bool clamped = false;
        const double travel = tt.time(prev, m, depart, &clamped);
        r.clamps += clamped;
        r.travel += monetary ? checked_fuel_cost(veh.cost_model, dist[prev][m], travel,
                                                 std::max(load, 0.0), prev, m)
                             : travel;
        const Location& loc = R.locations[m];
        const double arrival = depart + travel;
        const double leave = std::max(arrival, loc.hard_window.begin) + loc.service_duration;
        if (leave > loc.hard_window.end) {
          r.infeasibility += leave - loc.hard_window.end;
          if (violations)
            violations->push_back({"location " + std::to_string(m), "hard time window missed"});
        }
        const auto pen = soft_window_penalty(R.location_penalties, loc.soft_window, arrival, leave);
        r.location_early += pen.early;
        r.location_late += pen.late;
        if (leave > loc.soft_window.end) r.exceeded_soft += leave - loc.soft_window.end;
        load -= loc.demand_mass;
        depart = leave;
        prev = m;
        if (k == 0) token_arrival = arrival;
      }
      if (trace) trace->visits.push_back({token_arrival, depart});
    }
    bool clamped = false;
    const double back = tt.time(prev, 0, depart, &clamped);
    r.clamps += clamped;
    r.travel += monetary ? checked_fuel_cost(veh.cost_model, dist[prev][0], back,
                                             std::max(load, 0.0), prev, 0)
                         : back;
    clock = depart + back;
    if (trace) trace->finish = clock;
  }

  r.end_time = clock;
  if (used) {
    const double limit = std::min(veh.hard_window.end, depot.hard_window.end);
    if (clock > limit) {
      r.infeasibility += clock - limit;
      if (violations)
        violations->push_back({"vehicle " + std::to_string(v), "returns after its hard window"});
    }
    const auto pen = soft_window_penalty(R.vehicle_penalties, veh.soft_window, first_departure, clock);
    r.vehicle_early = pen.early;
    r.vehicle_late = pen.late;
    if (clock > veh.soft_window.end) r.exceeded_soft += clock - veh.soft_window.end;
  }
  return r;
}

VehicleResult Evaluator::evaluate_vehicle(int vehicle, const std::vector<std::vector<int>>& drives,
                                          std::vector<DriveTrace>* traces,
                                          std::vector<Violation>* violations) const {
  std::vector<std::span<const int>> spans(drives.begin(), drives.end());
  return evaluate_vehicle(vehicle, spans, traces, violations);
}

int Evaluator::feasible_class_for(std::span<const int> drive) const {
  int best = -1;
  double best_cost = 0.0;
  const std::span<const int> one[1] = {drive};
  for (int c = 0; c < class_count(); ++c) {
    const int rep = class_members_[c].front();
    bool ok = true;
    double mass = 0.0;
    double volume = 0.0;
    for (int tok : drive) {
      if (!compatible(rep, tok)) {
        ok = false;
        break;
      }
      mass += mass_[tok];
      volume += volume_[tok];
    }
    if (!ok || !fits(rep, mass, volume)) continue;
    const auto res = evaluate_vehicle(rep, one);
    if (res.infeasibility > 0.0) continue;
    if (best < 0 || res.cost() < best_cost) {
      best = c;
      best_cost = res.cost();
    }
  }
  return best;
}

Plan drives_by_vehicle(const Instance& instance, const Solution& solution) {
  Plan plan(instance.vehicles.size());
  for (const auto& d : solution.drives) {
    if (d.vehicle_id < 0 || d.vehicle_id >= static_cast<int>(plan.size())) continue;
    plan[d.vehicle_id].push_back(d.customers());
  }
  return plan;
}

Score plan_score(const Evaluator& ev, const Plan& plan) {
  Score s;
  for (std::size_t v = 0; v < plan.size(); ++v)
    if (!plan[v].empty()) s = s + score_of(ev.evaluate_vehicle(static_cast<int>(v), plan[v]));
  return s;
}

Solution solution_from_plan(const Plan& plan) {
  Solution s;
  for (std::size_t v = 0; v < plan.size(); ++v)
    for (const auto& drive : plan[v])
      if (!drive.empty()) s.drives.push_back(make_drive(static_cast<int>(v), drive));
  return s;
}

Solution propagate_schedule(const Instance& instance, const Solution& solution) {
  Solution out = solution;
  const Evaluator ev(instance);
  std::vector<std::vector<std::size_t>> index(instance.vehicles.size());
  for (std::size_t d = 0; d < out.drives.size(); ++d) {
    const int v = out.drives[d].vehicle_id;
    if (v >= 0 && v < static_cast<int>(index.size())) index[v].push_back(d);
  }
  std::vector<DriveTrace> traces;
  for (std::size_t v = 0; v < index.size(); ++v) {
    if (index[v].empty()) continue;
    std::vector<std::vector<int>> drives;
    for (auto d : index[v]) drives.push_back(out.drives[d].customers());
    ev.evaluate_vehicle(static_cast<int>(v), drives, &traces);
    for (std::size_t k = 0; k < index[v].size(); ++k) {
      auto& drive = out.drives[index[v][k]];
      const auto& tr = traces[k];
      drive.schedule.clear();
      drive.schedule.push_back({tr.start, tr.start});
      drive.schedule.insert(drive.schedule.end(), tr.visits.begin(), tr.visits.end());
      drive.schedule.push_back({tr.finish, tr.finish});
    }
  }
  return out;
}

CostBreakdown evaluate(const Instance& instance, const Solution& solution) {
  CostBreakdown cb;
  cb.hard_violations = validate_structure(instance, solution);
  const Evaluator ev(instance);
  const int n = instance.size();

  Plan plan(instance.vehicles.size());
  std::vector<std::vector<const Drive*>> given(instance.vehicles.size());
  for (const auto& d : solution.drives) {
    if (d.vehicle_id < 0 || d.vehicle_id >= static_cast<int>(plan.size())) continue;
    std::vector<int> tokens;
    for (int c : d.customers())
      if (c > 0 && c < n) tokens.push_back(c);
    plan[d.vehicle_id].push_back(std::move(tokens));
    given[d.vehicle_id].push_back(&d);
  }
  for (std::size_t v = 0; v < plan.size(); ++v) {
    if (plan[v].empty()) continue;
    const auto r = ev.evaluate_vehicle(static_cast<int>(v), plan[v], nullptr, &cb.hard_violations);
    cb.travel_cost += r.travel;
    cb.location_early_penalty += r.location_early;
    cb.location_late_penalty += r.location_late;
    cb.vehicle_early_penalty += r.vehicle_early;
    cb.vehicle_late_penalty += r.vehicle_late;
    cb.exceeded_soft_seconds += r.exceeded_soft;
    cb.horizon_clamps += r.clamps;
    // A supplied schedule must not let two drives of one vehicle overlap.
    const auto& ds = given[v];
    for (std::size_t k = 1; k < ds.size(); ++k) {
      const auto& a = ds[k - 1]->schedule;
      const auto& b = ds[k]->schedule;
      if (!a.empty() && !b.empty() && b.front().departure < a.back().arrival)
        cb.hard_violations.push_back({"vehicle " + std::to_string(v), "overlapping drives"});
    }
  }
  cb.total = cb.travel_cost + cb.location_early_penalty + cb.location_late_penalty +
             cb.vehicle_early_penalty + cb.vehicle_late_penalty;
  return cb;
}

}  // namespace amvrp
