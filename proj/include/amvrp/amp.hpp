#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "amvrp/budget.hpp"
#include "amvrp/evaluator.hpp"
#include "amvrp/localsearch.hpp"
#include "amvrp/rccw.hpp"

namespace amvrp {

/// Where RCCW draws lambda and dropout from. Dropout is picked uniformly
/// from `dropout_choices` when it is non-empty, else uniformly from
/// [dropout_min, dropout_max].
struct ParameterBand {
  double lambda_min = 0.4;
  double lambda_max = 1.6;
  std::vector<double> dropout_choices;
  double dropout_min = 0.2;
  double dropout_max = 0.4;

  RccwConfig draw(Rng& rng) const;
};

ParameterBand diversification_band();   // lambda [0.1, 1.7], dropout {0.3, 0.8}
ParameterBand intensification_band();   // lambda [0.6, 1.2], dropout {0.1, 0.15}
ParameterBand standalone_band();        // lambda [0.4, 1.6], dropout [0.2, 0.4]

struct AmpConfig {
  int rounds = 4;
  int starts = 15;
  double retention = 0.4;
  int diversification_rounds = 1;
  ParameterBand diversification = diversification_band();
  ParameterBand intensification = intensification_band();
  LsConfig ls;
  bool final_three_opt = true;
  // The closing 3-opt runs on this many of the best final-round solutions,
  // first on the reduced instance and then again after expansion.
  int final_candidates = 6;
  // Retained solutions, mapped onto the reduced instance, join the next
  // round's pool so the memory never loses its best entries.
  bool carry_elite = true;
  std::uint64_t seed = 0;
  int workers = 1;
  double budget_s = 0.0;  // 0 = unlimited
};

struct PoolEntry {
  Plan plan;
  Score score;
};

/// Elite store of one round. Sorted by score after retain().
struct MemoryPool {
  std::vector<PoolEntry> solutions;
  double retention = 0.4;

  /// Keeps the best ceil(retention * size) solutions.
  void retain();
};

/// Reduced vertex -> ordered parent vertices, and the inverse image.
struct SegmentMap {
  std::vector<std::vector<int>> members;  // indexed by reduced id
  std::vector<int> image;                 // parent id -> reduced id
  // Internal travel time of each merged vertex per time section (sum of the
  // frozen arcs looked up in that section). Informational.
  std::vector<std::vector<double>> internal_time;
};

/// Maximal directed token sequences (length >= 2, depot excluded) whose
/// arcs appear in every solution of the pool.
std::vector<std::vector<int>> select_segments(const MemoryPool& pool);

struct Reduction {
  std::shared_ptr<const Instance> instance;
  SegmentMap map;
  std::vector<std::string> skipped;  // one note per segment left unmerged
};

/// Merges each segment into one vertex: demand = sum, windows = intersection,
/// required skills = union. Segments whose hard or soft windows do not
/// intersect, or that no vehicle can serve, are skipped.
Reduction reduce(const std::shared_ptr<const Instance>& parent, const std::vector<std::vector<int>>& segments);

/// Parent-level plan -> reduced plan. Throws if a segment is not contiguous.
Plan map_to_reduced(const Plan& plan, const SegmentMap& map);
/// Reduced plan -> parent-level plan.
Plan expand(const Plan& plan, const SegmentMap& map);
/// Any-level plan -> root-level plan.
Plan expand_to_root(const Plan& plan, const Evaluator& ev);
Solution expand(const Solution& solution, const SegmentMap& map);

/// First-improvement intra-drive 3-opt and inter-drive 2-opt* until neither
/// finds anything.
Plan three_opt(const Evaluator& ev, Plan plan, const Deadline& deadline = Deadline::none());

struct RoundStats {
  int round = 0;
  int starts = 0;
  int vertices = 0;  // tokens in this round's instance, depot included
  double mean = 0.0;
  double stddev = 0.0;
  double best = 0.0;
  int infeasible = 0;
  int segments = 0;  // frozen after this round
};

/// Outcome of one reduce step, checked on every retained solution.
struct ReductionCheck {
  int round = 0;
  int retained = 0;
  int segments = 0;
  int skipped = 0;
  double max_relative_error = 0.0;
  int new_violations = 0;
};

struct AmpResult {
  Solution solution;  // root ids
  Score score;
  std::vector<RoundStats> rounds;
  std::vector<ReductionCheck> checks;
  double final_gain = 0.0;  // cost removed by the closing 3-opt
  bool budget_truncated = false;
  double seconds = 0.0;
};

AmpResult solve(const Instance& instance, const AmpConfig& config);

/// Distinct directed arcs over all plans divided by the mean arcs per plan.
double arc_diversity(const std::vector<Plan>& plans);

std::string format_round_log(const AmpResult& result);

}  // namespace amvrp
