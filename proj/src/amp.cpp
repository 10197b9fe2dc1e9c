#include "amvrp/amp.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

namespace amvrp {

RccwConfig ParameterBand::draw(Rng& rng) const {
  RccwConfig c;
  c.lambda = lambda_max > lambda_min ? rng.uniform(lambda_min, lambda_max) : lambda_min;
  if (!dropout_choices.empty())
    c.dropout = dropout_choices[rng.below(dropout_choices.size())];
  else
    c.dropout = dropout_max > dropout_min ? rng.uniform(dropout_min, dropout_max) : dropout_min;
  c.rng_seed = rng.engine()();
  return c;
}

ParameterBand diversification_band() { return {0.1, 1.7, {0.3, 0.8}, 0.0, 0.0}; }
ParameterBand intensification_band() { return {0.6, 1.2, {0.1, 0.15}, 0.0, 0.0}; }
ParameterBand standalone_band() { return {0.4, 1.6, {}, 0.2, 0.4}; }

void MemoryPool::retain() {
  std::stable_sort(solutions.begin(), solutions.end(),
                   [](const PoolEntry& a, const PoolEntry& b) { return a.score.better_than(b.score, 0.0); });
  const auto keep = static_cast<std::size_t>(
      std::ceil(retention * static_cast<double>(solutions.size()) - 1e-9));
  if (solutions.size() > keep) solutions.resize(std::max<std::size_t>(keep, 1));
}

std::vector<std::vector<int>> select_segments(const MemoryPool& pool) {
  if (pool.solutions.size() < 2) return {};
  int n = 0;
  for (const auto& e : pool.solutions)
    for (const auto& drives : e.plan)
      for (const auto& d : drives)
        for (int t : d) n = std::max(n, t + 1);
  // common[t] = successor shared by every solution, or -1
  std::vector<int> common(n, -2);
  std::vector<int> succ(n);
  for (const auto& e : pool.solutions) {
    std::fill(succ.begin(), succ.end(), -1);
    for (const auto& drives : e.plan)
      for (const auto& d : drives)
        for (std::size_t k = 0; k + 1 < d.size(); ++k) succ[d[k]] = d[k + 1];
    for (int t = 0; t < n; ++t) {
      if (common[t] == -2)
        common[t] = succ[t];
      else if (common[t] != succ[t])
        common[t] = -1;
    }
  }
  std::vector<char> has_pred(n, 0);
  for (int t = 0; t < n; ++t)
    if (common[t] > 0) has_pred[common[t]] = 1;
  std::vector<std::vector<int>> out;
  for (int t = 1; t < n; ++t) {
    if (has_pred[t] || common[t] <= 0) continue;
    std::vector<int> seq{t};
    for (int u = common[t]; u > 0; u = common[u]) seq.push_back(u);
    out.push_back(std::move(seq));
  }
  return out;
}

namespace {

std::vector<int> root_members_of(const Instance& in, int id) {
  if (in.is_reduced()) return in.composites[id].root_members;
  return {id};
}

std::string list(const std::vector<int>& v) {
  std::string s = "[";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? " " : "") + std::to_string(v[k]);
  return s + "]";
}

}  // namespace

Reduction reduce(const std::shared_ptr<const Instance>& parent_ptr,
                 const std::vector<std::vector<int>>& segments) {
  const Instance& parent = *parent_ptr;
  const std::shared_ptr<const Instance> root = parent.is_reduced() ? parent.root : parent_ptr;
  const Instance& R = *root;
  const int n = parent.size();

  Reduction red;
  std::vector<int> segment_of(n, -1);
  std::vector<char> accepted(segments.size(), 0);
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto& seg = segments[s];
    TimeWindow hard{-kOpenEnd, kOpenEnd}, soft{-kOpenEnd, kOpenEnd};
    SkillSet skills;
    bool disjoint = seg.size() >= 2;
    for (int m : seg) {
      if (m <= 0 || m >= n || segment_of[m] >= 0) disjoint = false;
      if (!disjoint) break;
      const auto& loc = parent.locations[m];
      hard = {std::max(hard.begin, loc.hard_window.begin), std::min(hard.end, loc.hard_window.end)};
      soft = {std::max(soft.begin, loc.soft_window.begin), std::min(soft.end, loc.soft_window.end)};
      skills.insert(loc.required_skills.begin(), loc.required_skills.end());
    }
    if (!disjoint) {
      red.skipped.push_back(list(seg) + ": not a disjoint customer sequence");
      continue;
    }
    if (!hard.valid() || !soft.valid()) {
      red.skipped.push_back(list(seg) + ": empty window intersection");
      continue;
    }
    Location probe;
    probe.required_skills = skills;
    bool servable = false;
    for (const auto& v : parent.vehicles) servable = servable || v.can_serve(probe);
    if (!servable) {
      red.skipped.push_back(list(seg) + ": no vehicle has every required skill");
      continue;
    }
    accepted[s] = 1;
    for (int m : seg) segment_of[m] = static_cast<int>(s);
  }

  auto out = std::make_shared<Instance>();
  out->name = parent.name;
  out->vehicles = parent.vehicles;
  out->location_penalties = parent.location_penalties;
  out->vehicle_penalties = parent.vehicle_penalties;
  out->objective = parent.objective;
  out->root = root;

  auto& map = red.map;
  map.image.assign(n, -1);
  map.image[0] = 0;
  map.members.push_back({0});
  out->locations.push_back(parent.locations[0]);
  out->composites.push_back({{0}, {0}});
  for (int id = 1; id < n; ++id) {
    const int s = segment_of[id];
    if (s >= 0 && segments[s].front() != id) continue;
    const int rid = static_cast<int>(map.members.size());
    std::vector<int> members = s >= 0 ? segments[s] : std::vector<int>{id};
    Location loc = parent.locations[members.front()];
    loc.id = rid;
    CompositeInfo info;
    info.parent_members = members;
    for (std::size_t k = 0; k < members.size(); ++k) {
      const int m = members[k];
      map.image[m] = rid;
      const auto rm = root_members_of(parent, m);
      info.root_members.insert(info.root_members.end(), rm.begin(), rm.end());
      if (k == 0) continue;
      const auto& o = parent.locations[m];
      loc.demand_mass += o.demand_mass;
      loc.demand_volume += o.demand_volume;
      loc.service_duration += o.service_duration;
      loc.hard_window = {std::max(loc.hard_window.begin, o.hard_window.begin),
                         std::min(loc.hard_window.end, o.hard_window.end)};
      loc.soft_window = {std::max(loc.soft_window.begin, o.soft_window.begin),
                         std::min(loc.soft_window.end, o.soft_window.end)};
      loc.required_skills.insert(o.required_skills.begin(), o.required_skills.end());
    }
    map.members.push_back(std::move(members));
    out->locations.push_back(std::move(loc));
    out->composites.push_back(std::move(info));
  }

  const int m = static_cast<int>(out->locations.size());
  const auto& tt = R.travel_time;
  const std::size_t K = tt.section_count();
  map.internal_time.assign(m, std::vector<double>(K, 0.0));
  for (int a = 0; a < m; ++a) {
    const auto& rm = out->composites[a].root_members;
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t x = 0; x + 1 < rm.size(); ++x) map.internal_time[a][k] += tt.at(k, rm[x], rm[x + 1]);
  }
  out->distance.assign(m, std::vector<double>(m, 0.0));
  std::vector<std::vector<double>> sections(K, std::vector<double>(static_cast<std::size_t>(m) * m, 0.0));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (a == b) continue;
      const int last = out->composites[a].root_members.back();
      const int first = out->composites[b].root_members.front();
      out->distance[a][b] = R.distance[last][first];
      for (std::size_t k = 0; k < K; ++k) sections[k][static_cast<std::size_t>(a) * m + b] = tt.at(k, last, first);
    }
  out->travel_time = TravelTimeTensor(tt.boundaries(), static_cast<std::size_t>(m), std::move(sections));
  red.instance = std::move(out);
  return red;
}

Plan map_to_reduced(const Plan& plan, const SegmentMap& map) {
  Plan out(plan.size());
  for (std::size_t v = 0; v < plan.size(); ++v)
    for (const auto& d : plan[v]) {
      std::vector<int> r;
      for (std::size_t k = 0; k < d.size();) {
        const int rid = map.image.at(d[k]);
        const auto& mem = map.members.at(rid);
        if (!std::equal(mem.begin(), mem.end(), d.begin() + static_cast<std::ptrdiff_t>(k),
                        d.begin() + static_cast<std::ptrdiff_t>(std::min(d.size(), k + mem.size()))) ||
            k + mem.size() > d.size())
          throw std::invalid_argument("plan breaks frozen segment " + list(mem));
        r.push_back(rid);
        k += mem.size();
      }
      out[v].push_back(std::move(r));
    }
  return out;
}

Plan expand(const Plan& plan, const SegmentMap& map) {
  Plan out(plan.size());
  for (std::size_t v = 0; v < plan.size(); ++v)
    for (const auto& d : plan[v]) {
      std::vector<int> e;
      for (int t : d) e.insert(e.end(), map.members.at(t).begin(), map.members.at(t).end());
      out[v].push_back(std::move(e));
    }
  return out;
}

Plan expand_to_root(const Plan& plan, const Evaluator& ev) {
  Plan out(plan.size());
  for (std::size_t v = 0; v < plan.size(); ++v)
    for (const auto& d : plan[v]) {
      std::vector<int> e;
      for (int t : d) {
        const auto m = ev.members(t);
        e.insert(e.end(), m.begin(), m.end());
      }
      out[v].push_back(std::move(e));
    }
  return out;
}

Solution expand(const Solution& solution, const SegmentMap& map) {
  Solution out;
  for (const auto& d : solution.drives) {
    std::vector<int> e;
    for (int t : d.customers()) e.insert(e.end(), map.members.at(t).begin(), map.members.at(t).end());
    out.drives.push_back(make_drive(d.vehicle_id, e));
  }
  return out;
}

Plan three_opt(const Evaluator& ev, Plan plan, const Deadline& deadline) {
  Improver imp(ev, std::move(plan));
  while (!deadline.expired() && (imp.three_opt_intra() || imp.two_opt_star() || imp.relocate_segment())) {
  }
  return imp.plan();
}

double arc_diversity(const std::vector<Plan>& plans) {
  if (plans.empty()) return 0.0;
  std::set<std::pair<int, int>> arcs;
  double total = 0.0;
  for (const auto& p : plans)
    for (const auto& drives : p)
      for (const auto& d : drives) {
        if (d.empty()) continue;
        int prev = 0;
        for (int t : d) {
          arcs.insert({prev, t});
          prev = t;
        }
        arcs.insert({prev, 0});
        total += static_cast<double>(d.size() + 1);
      }
  const double per = total / static_cast<double>(plans.size());
  return per > 0.0 ? static_cast<double>(arcs.size()) / per : 0.0;
}

namespace {

struct StartResult {
  Plan plan;
  Score score;
  bool ran = false;
  bool truncated = false;
};

void run_starts(const Evaluator& ev, const AmpConfig& cfg, const ParameterBand& band, int round,
                const Deadline& deadline, std::vector<StartResult>& results) {
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k; (k = next.fetch_add(1)) < static_cast<int>(results.size());) {
      // The very first start always runs so a result exists.
      if (deadline.expired() && !(round == 1 && k == 0)) continue;
      Rng rng = Rng::stream(cfg.seed, "amp-start", static_cast<std::uint64_t>(round), static_cast<std::uint64_t>(k));
      const RccwConfig rc = band.draw(rng);
      LsConfig lc = cfg.ls;
      lc.rng_seed = rng.engine()();
      auto plan = construct_plan(ev, rc);
      auto ls = run_local_search(ev, std::move(plan), lc, deadline);
      auto& r = results[k];
      r.plan = std::move(ls.plan);
      r.score = ls.stats.final;
      r.ran = true;
      r.truncated = ls.stats.truncated;
    }
  };
  const int w = std::max(1, std::min<int>(cfg.workers, static_cast<int>(results.size())));
  if (w == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < w; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace

AmpResult solve(const Instance& instance, const AmpConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const Deadline deadline = cfg.budget_s > 0.0 ? Deadline(cfg.budget_s) : Deadline::none();
  if (auto v = validate_instance(instance); !v.empty())
    throw ValidationError("invalid instance:\n" + describe(v), std::move(v));

  AmpResult res;
  std::shared_ptr<const Instance> current = std::make_shared<Instance>(instance);
  Plan best_root;
  Score best_score;
  bool have_best = false;
  auto offer = [&](const Evaluator& ev, const Plan& plan, const Score& s) {
    if (!have_best || s.better_than(best_score)) {
      best_root = expand_to_root(plan, ev);
      best_score = s;
      have_best = true;
    }
  };

  std::vector<PoolEntry> carried;
  for (int round = 1; round <= cfg.rounds; ++round) {
    const Evaluator ev(*current);
    const auto& band = round <= cfg.diversification_rounds ? cfg.diversification : cfg.intensification;
    std::vector<StartResult> results(std::max(1, cfg.starts));
    run_starts(ev, cfg, band, round, deadline, results);

    MemoryPool pool;
    pool.retention = cfg.retention;
    RoundStats rs;
    rs.round = round;
    rs.vertices = current->size();
    std::vector<double> costs;
    for (auto& r : results) {
      if (!r.ran) {
        res.budget_truncated = true;
        continue;
      }
      res.budget_truncated = res.budget_truncated || r.truncated;
      if (r.score.infeasibility > 0.0)
        ++rs.infeasible;
      else
        costs.push_back(r.score.cost);
      offer(ev, r.plan, r.score);
      pool.solutions.push_back({std::move(r.plan), r.score});
    }
    rs.starts = static_cast<int>(pool.solutions.size());
    for (auto& e : carried) pool.solutions.push_back(std::move(e));
    carried.clear();
    if (!costs.empty()) {
      rs.mean = std::accumulate(costs.begin(), costs.end(), 0.0) / static_cast<double>(costs.size());
      double ss = 0.0;
      for (double c : costs) ss += (c - rs.mean) * (c - rs.mean);
      rs.stddev = costs.size() > 1 ? std::sqrt(ss / static_cast<double>(costs.size() - 1)) : 0.0;
      rs.best = *std::min_element(costs.begin(), costs.end());
    }
    if (pool.solutions.empty()) {
      res.rounds.push_back(rs);
      break;
    }

    if (round < cfg.rounds && !deadline.expired()) {
      pool.retain();
      const auto segments = select_segments(pool);
      auto red = reduce(current, segments);
      const Evaluator next_ev(*red.instance);
      ReductionCheck chk;
      chk.round = round;
      chk.retained = static_cast<int>(pool.solutions.size());
      chk.segments = static_cast<int>(segments.size() - red.skipped.size());
      chk.skipped = static_cast<int>(red.skipped.size());
      for (const auto& e : pool.solutions) {
        auto mapped = map_to_reduced(e.plan, red.map);
        const Score s = plan_score(next_ev, mapped);
        const double err = std::abs(s.cost - e.score.cost) / std::max(1.0, std::abs(e.score.cost));
        chk.max_relative_error = std::max(chk.max_relative_error, err);
        if (s.infeasibility > e.score.infeasibility) ++chk.new_violations;
        if (cfg.carry_elite) carried.push_back({std::move(mapped), s});
      }
      res.checks.push_back(chk);
      rs.segments = chk.segments;
      res.rounds.push_back(rs);
      current = red.instance;
      continue;
    }

    res.rounds.push_back(rs);
    if (cfg.final_three_opt) {
      pool.retain();
      const Evaluator root_ev(*(current->is_reduced() ? current->root : current));
      const double before = best_score.cost;
      const auto count = std::min<std::size_t>(pool.solutions.size(), std::max(1, cfg.final_candidates));
      for (std::size_t k = 0; k < count && !deadline.expired(); ++k) {
        const Plan reduced = three_opt(ev, pool.solutions[k].plan, deadline);
        const Plan polished = three_opt(root_ev, expand_to_root(reduced, ev), deadline);
        offer(root_ev, polished, plan_score(root_ev, polished));
      }
      res.final_gain = before - best_score.cost;
    }
    break;
  }

  res.solution = propagate_schedule(instance, solution_from_plan(best_root));
  res.score = best_score;
  res.budget_truncated = res.budget_truncated || deadline.expired();
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::string format_round_log(const AmpResult& r) {
  std::ostringstream o;
  o << "round\tstarts\tvertices\tmean\tstd\tbest\tinfeasible\tfrozen_segments\n";
  char buf[256];
  for (const auto& s : r.rounds) {
    std::snprintf(buf, sizeof buf, "%d\t%d\t%d\t%.4f\t%.4f\t%.4f\t%d\t%d\n", s.round, s.starts, s.vertices, s.mean,
                  s.stddev, s.best, s.infeasible, s.segments);
    o << buf;
  }
  std::snprintf(buf, sizeof buf, "final\t-\t-\t-\t-\t%.4f\t%d\t-\n", r.score.cost, r.score.infeasibility > 0.0);
  o << buf;
  return o.str();
}

}  // namespace amvrp
