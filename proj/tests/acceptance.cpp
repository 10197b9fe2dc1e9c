// Acceptance run: one PASS/FAIL line per criterion on stdout, progress on
// stderr. Optional arguments select criteria by name.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "amvrp/amp.hpp"
#include "amvrp/evaluator.hpp"
#include "amvrp/io.hpp"
#include "amvrp/oracle.hpp"
#include "amvrp/pipeline.hpp"
#include "amvrp/rccw.hpp"
#include "amvrp/synthetic.hpp"
#include "support/generators.hpp"
#include "support/reference_cw.hpp"

using namespace amvrp;

namespace {

const std::string kData = AMVRP_DATA_DIR;
int failures = 0;

void report(const char* name, bool pass, const std::string& detail) {
  std::printf("%s %-22s %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Instance cmt(int k) { return parse_cmt(kData + "/cmt/vrpnc" + std::to_string(k) + ".txt"); }

AmpConfig base_config(std::uint64_t seed) {
  AmpConfig c;
  c.seed = seed;
  return c;
}

struct Runs {
  std::vector<double> costs;    // feasible totals, seed order
  std::vector<double> seconds;
  std::vector<AmpResult> amp;
};

std::map<int, Runs> cache;

const Runs& cmt_runs(int k, int count) {
  auto& r = cache[k];
  if (static_cast<int>(r.costs.size()) >= count) return r;
  const Instance in = cmt(k);
  for (int s = static_cast<int>(r.costs.size()); s < count; ++s) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto p = run_pipeline(in, base_config(run_seed(0, s)));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.costs.push_back(p.breakdown.feasible() ? p.breakdown.total : HUGE_VAL);
    r.seconds.push_back(secs);
    r.amp.push_back(p.amp);
    std::fprintf(stderr, "  vrpnc%d seed %d: %.2f (%.1f s)\n", k, s, r.costs.back(), secs);
  }
  return r;
}

double best_of(const Runs& r) { return *std::min_element(r.costs.begin(), r.costs.end()); }

void cmt1_best() {
  const auto& r = cmt_runs(1, 10);
  const double best = best_of(r);
  const double slowest = *std::max_element(r.seconds.begin(), r.seconds.end());
  report("cmt1-best-of-10", best <= 535.10 && slowest <= 600.0,
         fmt("best %.2f (bound 535.10), slowest run %.1f s (bound 600 s)", best, slowest));
}

void cmt_subset() {
  const auto known = read_best_known(kData + "/cmt/best_known.csv");
  double sum = 0.0;
  std::string detail;
  for (int k : {1, 6, 12, 14}) {
    const double sub = best_of(cmt_runs(k, 10)) / known.at("vrpnc" + std::to_string(k)).cost - 1.0;
    sum += sub;
    detail += fmt("vrpnc%g %.2f%% ", k, 100.0 * sub);
  }
  const double mean = sum / 4.0;
  report("cmt-subset-mean", mean <= 0.03, detail + fmt("mean %.2f%% (bound 3.00%%)", 100.0 * mean));
}

void oracle_equivalence() {
  Rng rng(2024);
  int matched = 0, instances = 0, regenerated = 0;
  std::string misses;
  while (instances < 50) {
    testing::TinyOptions o;
    o.split = instances % 5 == 4;
    o.monetary = instances % 2 == 1;
    // Split orders add one token; keep the oracle at eight tokens or fewer.
    o.customers = 3 + static_cast<int>(rng.below(o.split ? 4 : 5));
    const Instance in = testing::random_tiny(rng, o);
    const auto split = split_demands(in);
    const auto exact = solve_exact(split.instance);
    if (exact.status != OracleStatus::Optimal) {
      ++regenerated;
      continue;
    }
    double best = HUGE_VAL;
    for (int s = 0; s < 10; ++s) {
      const auto p = run_pipeline(in, base_config(run_seed(0, s)));
      if (p.breakdown.feasible()) best = std::min(best, p.breakdown.total);
    }
    const bool eq = std::abs(best - exact.cost) <= 1e-6 * std::max(1.0, exact.cost);
    if (eq)
      ++matched;
    else
      misses += fmt(" #%g(%.6g vs %.6g)", instances, best, exact.cost);
    std::fprintf(stderr, "  tiny %d: %d customers, amp %.6f oracle %.6f%s\n", instances,
                 in.customer_count(), best, exact.cost, eq ? "" : "  MISMATCH");
    ++instances;
  }
  report("oracle-equivalence", matched >= 47,
         fmt("%g/50 equal within 1e-6 (bound 47), %g infeasible draws replaced", matched, regenerated) +
             misses);
}

void cw_conformance() {
  Rng rng(77);
  int same = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 5 + static_cast<int>(rng.below(26));
    const Instance in = testing::random_cvrp(rng, n, 50.0 + rng.uniform(0.0, 100.0));
    std::vector<double> demand;
    for (const auto& l : in.locations) demand.push_back(l.demand_mass);
    const auto ref = testing::classical_cw(in.distance, demand, in.vehicles[0].capacity_mass);
    std::vector<std::vector<int>> got;
    for (const auto& d : construct(in, {1.0, 0.0, 0}).drives) got.push_back(d.customers());
    if (testing::undirected_arcs(got) == testing::undirected_arcs(ref)) ++same;
  }
  report("cw-conformance", same == 20, fmt("%g/20 instances arc-for-arc identical", same));
}

void non_passing() {
  Rng rng(5);
  long violations = 0, samples = 0;
  while (samples < 10000) {
    const std::size_t n = 2 + rng.below(6);
    const auto t = testing::random_tensor(rng, n, 2 + rng.below(20), 36000.0);
    for (int k = 0; k < 100; ++k, ++samples) {
      const int i = static_cast<int>(rng.below(n));
      int j = static_cast<int>(rng.below(n - 1));
      if (j >= i) ++j;
      double a = rng.uniform(0.0, 36000.0);
      double b = rng.uniform(0.0, 36000.0);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      // Half the samples straddle a boundary as tightly as possible.
      if (k % 2 == 0 && t.section_count() > 1) {
        const auto& bd = t.boundaries();
        const double edge = bd[1 + rng.below(t.section_count() - 1)];
        a = std::nextafter(edge, 0.0);
        b = edge;
      }
      if (a + lookup(t, i, j, a) > b + lookup(t, i, j, b)) ++violations;
    }
  }
  report("non-passing", violations == 0, fmt("%g violations in %g samples", violations, samples));
}

void formula_suite() {
  double worst = 0.0;
  const auto check = [&](double got, double hand) { worst = std::max(worst, std::abs(got - hand)); };
  // Fuel: price * d * (c0 + mu_m * m) * (1 - mu_v * v).
  check(fuel_cost({0.08, 1e-5, 2e-3, 1.8}, 20.0, 1440.0, 500.0), 2.754);
  check(fuel_cost({0.1, 0.0, 0.0, 1.5}, 10.0, 600.0, 0.0), 1.5);
  check(fuel_cost({0.2, 1e-4, 1e-3, 1.0}, 30.0, 3600.0, 1000.0), 30.0 * 0.3 * 0.97);
  check(fuel_cost({0.2, 1e-4, 1e-3, 1.0}, 0.0, 0.0, 1000.0), 0.0);
  PenaltyParams field;
  field.late_fixed = 1.5;
  field.late_per_second = 0.001;
  field.late_duration_per_second = 0.0007;
  // Location window [0, 1000]: arrive 950, leave 1100.
  check(soft_window_penalty(field, {0, 1000}, 950, 1100).late, 1.67);
  // Whole stay after the window: 1.5 + 0.001 * 300 + 0.0007 * 100.
  check(soft_window_penalty(field, {0, 1000}, 1200, 1300).late, 1.87);
  check(soft_window_penalty(field, {0, 1000}, 100, 900).late, 0.0);
  PenaltyParams early{0.5, 0.01, 0.002, 0, 0, 0};
  check(soft_window_penalty(early, {1000, 2000}, 940, 990).early, 0.5 + 0.6 + 0.1);
  check(soft_window_penalty(early, {1000, 2000}, 940, 1300).early, 0.5 + 0.6 + 0.12);
  // Vehicle window: return at 3740 against soft end 3000.
  PenaltyParams veh{0, 0, 0, 3.0, 0.002, 0.0};
  check(soft_window_penalty(veh, {0, 3000}, 3740, 3740).late, 4.48);
  double worst_sum = 0.0;
  Rng rng(6);
  for (int rep = 0; rep < 2000; ++rep) {
    testing::TinyOptions o;
    o.customers = 1 + static_cast<int>(rng.below(8));
    o.monetary = rep % 2 == 0;
    const Instance in = testing::random_tiny(rng, o);
    const auto b = evaluate(in, testing::random_solution(rng, in));
    const double parts = b.travel_cost + b.location_early_penalty + b.location_late_penalty +
                         b.vehicle_early_penalty + b.vehicle_late_penalty;
    worst_sum = std::max(worst_sum, std::abs(b.total - parts) / std::max(1.0, std::abs(parts)));
  }
  report("formula-suite", worst <= 1e-12 && worst_sum <= 1e-12,
         fmt("max unit-vector error %.3g, max total-vs-parts error %.3g (bound 1e-12)", worst, worst_sum));
}

void reduction_soundness() {
  const auto& r = cmt_runs(1, 10);
  double worst = 0.0;
  int checks = 0, violations = 0, segments = 0;
  for (const auto& a : r.amp)
    for (const auto& c : a.checks) {
      worst = std::max(worst, c.max_relative_error);
      violations += c.new_violations;
      segments += c.segments;
      ++checks;
    }
  report("reduction-soundness", checks > 0 && worst <= 1e-9 && violations == 0,
         fmt("%g reduce steps, %g segments frozen, max relative error %.3g, new violations %g", checks,
             segments, worst, violations));
}

void round_trend() {
  int cells = 0, narrowed = 0;
  std::string detail;
  for (int k : {1, 2, 3, 11, 12}) {
    const auto& r = cmt_runs(k, 3);
    for (int s = 0; s < 3; ++s) {
      const auto& rounds = r.amp[s].rounds;
      ++cells;
      if (rounds.size() >= 4 && rounds[3].stddev < rounds[0].stddev) ++narrowed;
      if (rounds.size() >= 4) detail += fmt(" %.1f>%.2f", rounds[0].stddev, rounds[3].stddev);
    }
  }
  report("round-std-trend", narrowed >= 12, fmt("%g/%g cells with round-4 std below round-1 std (bound 12);", narrowed, cells) + detail);
}

void dropout_diversity() {
  int wins = 0;
  std::string detail;
  for (int k : {1, 2, 3, 11, 12}) {
    const Instance in = cmt(k);
    const LsConfig ls;
    const auto zero = study_cell(in, 1.0, 0.0, 15, ls, 0);
    const auto drop = study_cell(in, 1.0, 0.3, 15, ls, 0);
    if (drop.diversity > zero.diversity) ++wins;
    detail += fmt(" vrpnc%g %.3f>%.3f", k, drop.diversity, zero.diversity);
    std::fprintf(stderr, "  study vrpnc%d done\n", k);
  }
  report("dropout-diversity", wins == 5, fmt("%g/5 instances;", wins) + detail);
}

void synthetic_day() {
  const auto data = generate_synthetic();
  const auto p = run_pipeline(data.instance, base_config(0));
  const auto& b = p.breakdown;
  report("synthetic-118", b.feasible() && b.exceeded_soft_seconds == 0.0,
         fmt("hard violations %g, exceeded soft seconds %.1f, total %.2f", static_cast<double>(b.hard_violations.size()),
             b.exceeded_soft_seconds, b.total));
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, void (*)()>> all{
      {"cmt1-best-of-10", cmt1_best},        {"cmt-subset-mean", cmt_subset},
      {"oracle-equivalence", oracle_equivalence}, {"cw-conformance", cw_conformance},
      {"non-passing", non_passing},          {"formula-suite", formula_suite},
      {"reduction-soundness", reduction_soundness}, {"round-std-trend", round_trend},
      {"dropout-diversity", dropout_diversity},     {"synthetic-118", synthetic_day},
  };
  std::set<std::string> only(argv + 1, argv + argc);
  for (const auto& [name, fn] : all) {
    if (!only.empty() && !only.count(name)) continue;
    std::fprintf(stderr, "[%s]\n", name.c_str());
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    std::fprintf(stderr, "  %.1f s\n", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return failures == 0 ? 0 : 1;
}
