#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "amvrp/budget.hpp"
#include "amvrp/evaluator.hpp"
#include "amvrp/random.hpp"

namespace amvrp {

/// Phase-1 strategy frequencies in percent. They are normalised before use.
struct StrategyWeights {
  double swap_2x1 = 47.5;
  double move_1 = 47.8;
  double swap_3x1 = 3.0;
  double swap_2x3 = 0.5;
  double swap_2x2 = 0.3;
  double swap_drives = 0.3;
  double move_drive = 0.3;
  double directions = 0.3;

  std::array<double, 8> as_array() const {
    return {swap_2x1, move_1, swap_3x1, swap_2x3, swap_2x2, swap_drives, move_drive, directions};
  }
};

struct LsConfig {
  int max_iterations = 2000;
  int combos_per_iteration = 40;
  std::uint64_t rng_seed = 0;
  StrategyWeights weights;
  // Exhaustive three-group swaps are cubic; phase 2 runs them only up to
  // this many tokens.
  int triple_swap_limit = 60;
  // Phase 2 applies the first improving neighbour found instead of the best.
  bool phase2_first_improvement = true;
  // Phase 2 also runs intra-drive 3-opt, 2-opt* and segment relocation.
  bool phase2_segment_moves = true;
};

struct LsStats {
  int phase1_moves = 0;
  int phase2_moves = 0;
  int phase2_cycles = 0;
  Score initial;
  Score final;
  bool truncated = false;
};

/// Mutable search state: a plan plus cached per-vehicle scores. Every public
/// step applies the single best strictly improving neighbour, or nothing.
/// `combos` > 0 samples that many candidates; 0 searches the whole
/// neighbourhood.
class Improver {
 public:
  Improver(const Evaluator& ev, Plan plan);

  const Plan& plan() const { return plan_; }
  Score score() const { return total_; }
  Score vehicle_score(int v) const { return vs_[v]; }

  bool swap_vertices(int g_n, int g_s, int combos, Rng* rng);
  bool move_vertices(int g_s, int combos, Rng* rng);
  bool swap_drives();
  bool move_drive();
  bool change_direction();

  /// Segment reversal/reconnection inside one drive (three cut points, all
  /// seven reconnections). First improvement.
  bool three_opt_intra();
  /// Tail exchange between two drives, plain and with both heads reversed.
  /// First improvement.
  bool two_opt_star();
  /// Moves a segment of any length from one drive into another drive, in
  /// either orientation. First improvement.
  bool relocate_segment();

  /// In first-improvement mode full scans stop at the first improving
  /// neighbour and the next scan resumes after it.
  void set_first_improvement(bool on) { first_improvement_ = on; }

 private:
  struct Group {
    int v, d, p;
  };
  struct Target {
    int kind;  // 0 existing drive, 1 new drive on used vehicle, 2 idle vehicle
    int w, e, q;
  };

  Score eval(int v, const std::vector<std::vector<int>>& drives);
  void commit(int v, std::vector<std::vector<int>> drives, Score s);
  void refresh();
  bool feasible() const { return total_.infeasibility <= 0.0; }
  double group_mass(const Group& g, int g_s) const;
  double group_volume(const Group& g, int g_s) const;
  bool group_compatible(const Group& g, int g_s, int w) const;
  std::vector<Group> group_starts(int g_s) const;
  bool overlaps(const Group& a, const Group& b, int g_s) const;
  bool build_move(const Group& g, int g_s, const Target& t);

  const Evaluator* ev_;
  Plan plan_;
  std::vector<Score> vs_;
  Score total_;
  std::vector<Group> positions_;
  std::vector<Target> targets_;
  std::vector<std::vector<double>> dm_, dvol_;
  bool first_improvement_ = false;
  std::size_t cursor_ = 0;
  std::vector<std::span<const int>> spans_;
  std::vector<std::vector<int>> trial_a_, trial_b_, trial_c_;
  int trial_va_ = -1, trial_vb_ = -1;
};

struct LsResult {
  Plan plan;
  LsStats stats;
};

/// Phase 1: max_iterations sampled steps with strategies drawn from the
/// weights. Phase 2: every strategy at full neighbourhood, each repeated
/// while it improves, until a whole cycle finds nothing.
LsResult run_local_search(const Evaluator& ev, Plan initial, const LsConfig& config,
                          const Deadline& deadline = Deadline::none());

/// Phase 2 only.
LsStats descend(Improver& imp, const LsConfig& config, const Deadline& deadline);

// Solution-level wrappers.
Solution swap_vertices(const Instance& instance, const Solution& solution, int g_c, int g_n, int g_s,
                       Rng& rng);
Solution move_vertices(const Instance& instance, const Solution& solution, int g_c, int g_s, Rng& rng);
Solution swap_drives(const Instance& instance, const Solution& solution);
Solution move_drive(const Instance& instance, const Solution& solution);
Solution change_direction(const Instance& instance, const Solution& solution);
Solution run(const Instance& instance, const Solution& initial, const LsConfig& config,
             LsStats* stats = nullptr);

}  // namespace amvrp
