#include "amvrp/rccw.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace amvrp {

double reference_cost(const Instance& in, int i, int j) {
  const double t = in.travel_time.at(0, i, j);
  if (in.objective == ObjectiveKind::TravelTime) return t;
  if (in.distance[i][j] == 0.0) return 0.0;
  return fuel_cost(in.vehicles.front().cost_model, in.distance[i][j], t, 0.0);
}

std::vector<SavingsEntry> compute_savings(const Instance& in, double lambda) {
  const int n = in.size();
  std::vector<double> to_depot(n), from_depot(n);
  for (int i = 1; i < n; ++i) {
    to_depot[i] = reference_cost(in, i, 0);
    from_depot[i] = reference_cost(in, 0, i);
  }
  std::vector<SavingsEntry> out;
  out.reserve(static_cast<std::size_t>(n - 1) * (n > 1 ? n - 2 : 0));
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j)
      if (i != j) out.push_back({i, j, to_depot[i] + from_depot[j] - lambda * reference_cost(in, i, j)});
  std::sort(out.begin(), out.end(), [](const SavingsEntry& a, const SavingsEntry& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  return out;
}

std::vector<SavingsEntry> apply_dropout(std::vector<SavingsEntry> entries, double dropout, Rng& rng) {
  const auto drop = static_cast<std::size_t>(std::floor(dropout * static_cast<double>(entries.size())));
  if (drop == 0) return entries;
  std::vector<std::size_t> idx(entries.size());
  std::iota(idx.begin(), idx.end(), 0);
  // partial Fisher-Yates: the first `drop` indices are the discarded ones
  for (std::size_t k = 0; k < drop; ++k) std::swap(idx[k], idx[k + rng.below(idx.size() - k)]);
  std::vector<char> gone(entries.size(), 0);
  for (std::size_t k = 0; k < drop; ++k) gone[idx[k]] = 1;
  std::vector<SavingsEntry> out;
  out.reserve(entries.size() - drop);
  for (std::size_t k = 0; k < entries.size(); ++k)
    if (!gone[k]) out.push_back(entries[k]);
  return out;
}

namespace {

double route_mass(const Evaluator& ev, const std::vector<int>& r) {
  double m = 0.0;
  for (int t : r) m += ev.token_mass(t);
  return m;
}

double route_start(const Evaluator& ev, const std::vector<int>& r) {
  return ev.root().locations[ev.members(r.front()).front()].hard_window.begin;
}

}  // namespace

Plan compress(const Evaluator& ev, std::vector<std::vector<int>> routes) {
  const int nv = ev.vehicle_count();
  Plan plan(nv);
  std::vector<Score> score(nv);

  std::stable_sort(routes.begin(), routes.end(), [&](const auto& a, const auto& b) {
    const double ma = route_mass(ev, a), mb = route_mass(ev, b);
    if (ma != mb) return ma > mb;
    return route_start(ev, a) < route_start(ev, b);
  });

  std::deque<std::vector<int>> work(routes.begin(), routes.end());
  std::vector<std::vector<int>> drives(1);
  while (!work.empty()) {
    auto route = std::move(work.front());
    work.pop_front();
    drives[0] = route;

    // idle vehicle, cheapest class first
    int best_v = -1;
    Score best_s;
    for (int c = 0; c < ev.class_count(); ++c) {
      int idle = -1;
      for (int v : ev.class_members(c))
        if (plan[v].empty()) {
          idle = v;
          break;
        }
      if (idle < 0) continue;
      const auto s = score_of(ev.evaluate_vehicle(idle, drives));
      if (s.infeasibility > 0.0) continue;
      if (best_v < 0 || s.better_than(best_s)) {
        best_v = idle;
        best_s = s;
      }
    }
    if (best_v >= 0) {
      plan[best_v].push_back(std::move(route));
      score[best_v] = best_s;
      continue;
    }

    // extra drive on a used vehicle
    int slot_v = -1;
    std::size_t slot_p = 0;
    Score slot_delta;
    for (int v = 0; v < nv; ++v) {
      if (plan[v].empty()) continue;
      for (std::size_t p = 0; p <= plan[v].size(); ++p) {
        auto trial = plan[v];
        trial.insert(trial.begin() + static_cast<std::ptrdiff_t>(p), route);
        const auto s = score_of(ev.evaluate_vehicle(v, trial));
        if (s.infeasibility > 0.0) continue;
        const auto d = s - score[v];
        if (slot_v < 0 || d.better_than(slot_delta)) {
          slot_v = v;
          slot_p = p;
          slot_delta = d;
        }
      }
    }
    if (slot_v >= 0) {
      plan[slot_v].insert(plan[slot_v].begin() + static_cast<std::ptrdiff_t>(slot_p), std::move(route));
      score[slot_v] = score[slot_v] + slot_delta;
      continue;
    }

    if (route.size() > 1) {
      std::size_t k = 0;
      double nearest = kOpenEnd;
      for (std::size_t p = 0; p < route.size(); ++p) {
        const double c = reference_cost(ev.instance(), 0, route[p]) +
                         reference_cost(ev.instance(), route[p], 0);
        if (c < nearest) {
          nearest = c;
          k = p;
        }
      }
      if (k == 0) k = 1;
      work.emplace_front(route.begin() + static_cast<std::ptrdiff_t>(k), route.end());
      work.emplace_front(route.begin(), route.begin() + static_cast<std::ptrdiff_t>(k));
      continue;
    }

    // Nothing is feasible: least-infeasible placement, reported by evaluate.
    int fb_v = -1;
    std::size_t fb_p = 0;
    Score fb_delta;
    for (int v = 0; v < nv; ++v) {
      for (std::size_t p = 0; p <= plan[v].size(); ++p) {
        auto trial = plan[v];
        trial.insert(trial.begin() + static_cast<std::ptrdiff_t>(p), route);
        const auto d = score_of(ev.evaluate_vehicle(v, trial)) - score[v];
        if (fb_v < 0 || d.better_than(fb_delta)) {
          fb_v = v;
          fb_p = p;
          fb_delta = d;
        }
      }
    }
    plan[fb_v].insert(plan[fb_v].begin() + static_cast<std::ptrdiff_t>(fb_p), std::move(route));
    score[fb_v] = score[fb_v] + fb_delta;
  }
  return plan;
}

Plan construct_plan(const Evaluator& ev, const RccwConfig& cfg) {
  if (!(cfg.lambda > 0.0)) throw ConstructionError("lambda must be positive");
  if (!(cfg.dropout >= 0.0 && cfg.dropout < 1.0)) throw ConstructionError("dropout must lie in [0, 1)");
  const Instance& in = ev.instance();
  const int n = in.size();
  for (int t = 1; t < n; ++t) {
    bool any = false;
    for (int v = 0; v < ev.vehicle_count() && !any; ++v) any = ev.compatible(v, t);
    if (!any) throw ConstructionError("no vehicle has the skills to serve location " + std::to_string(t));
  }
  double max_mass = 0.0;
  for (const auto& v : in.vehicles) max_mass = std::max(max_mass, v.capacity_mass);

  Rng rng(cfg.rng_seed);
  const auto savings = apply_dropout(compute_savings(in, cfg.lambda), cfg.dropout, rng);

  std::vector<std::vector<int>> routes(n);
  std::vector<int> route_of(n, -1);
  std::vector<double> mass(n, 0.0);
  for (int t = 1; t < n; ++t) {
    routes[t] = {t};
    route_of[t] = t;
    mass[t] = ev.token_mass(t);
  }

  std::vector<int> merged;
  for (const auto& s : savings) {
    const int a = route_of[s.i];
    const int b = route_of[s.j];
    if (a == b) continue;
    auto& ra = routes[a];
    auto& rb = routes[b];
    // i must end up as the tail of a and j as the head of b; reversing a
    // whole route is allowed when that puts them there.
    const bool i_tail = ra.back() == s.i, i_head = ra.front() == s.i;
    const bool j_head = rb.front() == s.j, j_tail = rb.back() == s.j;
    if (!(i_tail || i_head) || !(j_head || j_tail)) continue;
    if (mass[a] + mass[b] > max_mass * (1.0 + 1e-12)) continue;

    merged.clear();
    if (i_tail)
      merged.insert(merged.end(), ra.begin(), ra.end());
    else
      merged.insert(merged.end(), ra.rbegin(), ra.rend());
    if (j_head)
      merged.insert(merged.end(), rb.begin(), rb.end());
    else
      merged.insert(merged.end(), rb.rbegin(), rb.rend());
    if (ev.feasible_class_for(merged) < 0) continue;

    ra = merged;
    mass[a] += mass[b];
    for (int t : rb) route_of[t] = a;
    rb.clear();
  }

  std::vector<std::vector<int>> live;
  for (auto& r : routes)
    if (!r.empty()) live.push_back(std::move(r));
  return compress(ev, std::move(live));
}

Solution construct(const Instance& instance, const RccwConfig& config) {
  const Evaluator ev(instance);
  return solution_from_plan(construct_plan(ev, config));
}

}  // namespace amvrp
