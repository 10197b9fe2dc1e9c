#include "amvrp/oracle.hpp"

#include <algorithm>
#include <limits>
#include <thread>

namespace amvrp {

std::vector<int> drive_encoding(const Solution& solution) {
  std::vector<int> out;
  for (const auto& d : solution.drives) {
    out.push_back(d.vehicle_id);
    out.insert(out.end(), d.stops.begin(), d.stops.end());
    out.push_back(-1);
  }
  return out;
}

namespace {

struct Best {
  bool found = false;
  double cost = std::numeric_limits<double>::infinity();
  std::vector<int> encoding;
  Plan plan;
};

class Enumerator {
 public:
  Enumerator(const Evaluator& ev, Plan plan, std::vector<Score> scores)
      : ev_(ev), plan_(std::move(plan)), scores_(std::move(scores)) {}

  // Places tokens k..n-1 into the current partial plan.
  void run(int k) {
    if (k == ev_.token_count()) {
      leaf();
      return;
    }
    const double m = ev_.token_mass(k), vol = ev_.token_volume(k);
    const int nv = ev_.vehicle_count();
    for (int v = 0; v < nv; ++v) {
      auto& drives = plan_[v];
      if (drives.empty() || !ev_.compatible(v, k)) continue;
      for (std::size_t d = 0; d < drives.size(); ++d) {
        double dm = m, dv = vol;
        for (int t : drives[d]) dm += ev_.token_mass(t), dv += ev_.token_volume(t);
        if (!ev_.fits(v, dm, dv)) continue;
        for (std::size_t p = 0; p <= drives[d].size(); ++p) {
          drives[d].insert(drives[d].begin() + static_cast<std::ptrdiff_t>(p), k);
          descend(v, k);
          drives[d].erase(drives[d].begin() + static_cast<std::ptrdiff_t>(p));
        }
      }
      if (!ev_.fits(v, m, vol)) continue;
      for (std::size_t d = 0; d <= drives.size(); ++d) {
        drives.insert(drives.begin() + static_cast<std::ptrdiff_t>(d), std::vector<int>{k});
        descend(v, k);
        drives.erase(drives.begin() + static_cast<std::ptrdiff_t>(d));
      }
    }
    for (int c = 0; c < ev_.class_count(); ++c) {
      int idle = -1;
      for (int w : ev_.class_members(c))
        if (plan_[w].empty()) {
          idle = w;
          break;
        }
      if (idle < 0 || !ev_.compatible(idle, k) || !ev_.fits(idle, m, vol)) continue;
      plan_[idle].push_back({k});
      descend(idle, k);
      plan_[idle].clear();
    }
  }

  const Best& best() const { return best_; }
  long long leaves() const { return leaves_; }

 private:
  void descend(int v, int k) {
    const Score saved = scores_[v];
    scores_[v] = score_of(ev_.evaluate_vehicle(v, plan_[v]));
    run(k + 1);
    scores_[v] = saved;
  }

  void leaf() {
    ++leaves_;
    double cost = 0.0;
    for (std::size_t v = 0; v < plan_.size(); ++v) {
      if (plan_[v].empty()) continue;
      if (scores_[v].infeasibility > 0.0) return;
      cost += scores_[v].cost;
    }
    if (best_.found && cost > best_.cost) return;
    auto enc = drive_encoding(solution_from_plan(plan_));
    if (best_.found && cost == best_.cost && !(enc < best_.encoding)) return;
    best_ = {true, cost, std::move(enc), plan_};
  }

  const Evaluator& ev_;
  Plan plan_;
  std::vector<Score> scores_;
  Best best_;
  long long leaves_ = 0;
};

bool better(const Best& a, const Best& b) {
  if (!a.found) return false;
  if (!b.found) return true;
  if (a.cost != b.cost) return a.cost < b.cost;
  return a.encoding < b.encoding;
}

}  // namespace

OracleResult solve_exact(const Instance& instance, const OracleLimits& limits) {
  OracleResult res;
  if (instance.is_reduced()) {
    res.message = "oracle runs on unreduced instances only";
    return res;
  }
  if (instance.customer_count() > limits.max_customers) {
    res.message = "instance has " + std::to_string(instance.customer_count()) +
                  " customers; oracle bound is " + std::to_string(limits.max_customers);
    return res;
  }
  const Evaluator ev(instance);
  const auto nv = static_cast<std::size_t>(ev.vehicle_count());
  Best best;
  if (instance.customer_count() == 0) {
    best.found = true;
    best.cost = 0.0;
    res.plans_evaluated = 1;
  } else {
    // Branch on the vehicle class of customer 1; interchangeable vehicles
    // make the first vehicle of each class sufficient.
    std::vector<int> roots;
    for (int c = 0; c < ev.class_count(); ++c) {
      const int v = ev.class_members(c).front();
      if (ev.compatible(v, 1) && ev.fits(v, ev.token_mass(1), ev.token_volume(1))) roots.push_back(v);
    }
    std::vector<Best> found(roots.size());
    std::vector<long long> leaves(roots.size(), 0);
    auto branch = [&](std::size_t b) {
      Plan plan(nv);
      plan[roots[b]].push_back({1});
      std::vector<Score> scores(nv);
      scores[roots[b]] = score_of(ev.evaluate_vehicle(roots[b], plan[roots[b]]));
      Enumerator e(ev, std::move(plan), std::move(scores));
      e.run(2);
      found[b] = e.best();
      leaves[b] = e.leaves();
    };
    const auto workers = static_cast<std::size_t>(std::max(1, limits.workers));
    if (workers == 1 || roots.size() < 2) {
      for (std::size_t b = 0; b < roots.size(); ++b) branch(b);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < std::min(workers, roots.size()); ++w)
        pool.emplace_back([&, w] {
          for (std::size_t b = w; b < roots.size(); b += workers) branch(b);
        });
      for (auto& t : pool) t.join();
    }
    for (std::size_t b = 0; b < roots.size(); ++b) {
      res.plans_evaluated += leaves[b];
      if (better(found[b], best)) best = std::move(found[b]);
    }
  }
  if (!best.found) {
    res.status = OracleStatus::Infeasible;
    res.message = "no feasible solution exists";
    return res;
  }
  res.status = OracleStatus::Optimal;
  res.solution = propagate_schedule(instance, solution_from_plan(best.plan));
  res.cost = evaluate(instance, res.solution).total;
  return res;
}

}  // namespace amvrp
