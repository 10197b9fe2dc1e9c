#include "amvrp/pipeline.hpp"

#include "amvrp/localsearch.hpp"
#include "amvrp/random.hpp"
#include "amvrp/rccw.hpp"

namespace amvrp {

PipelineResult run_pipeline(const Instance& instance, const AmpConfig& config) {
  PipelineResult r;
  r.split = split_demands(instance);
  r.amp = solve(r.split.instance, config);
  r.breakdown = evaluate(r.split.instance, r.amp.solution);
  r.merged = merge_back(r.split.instance, r.amp.solution, r.split.map);
  return r;
}

StudyCell study_cell(const Instance& instance, double lambda, double dropout, int repetitions,
                     const LsConfig& ls, std::uint64_t seed) {
  const Evaluator ev(instance);
  StudyCell cell;
  cell.instance = instance.name;
  cell.lambda = lambda;
  cell.dropout = dropout;
  cell.runs = repetitions;
  std::vector<Plan> built, searched;
  for (int k = 0; k < repetitions; ++k) {
    RccwConfig rc;
    rc.lambda = lambda;
    rc.dropout = dropout;
    rc.rng_seed = Rng::derive(seed, "study-construct", static_cast<std::uint64_t>(k));
    Plan plan = construct_plan(ev, rc);
    cell.mean_construction_cost += plan_score(ev, plan).cost;
    LsConfig lc = ls;
    lc.rng_seed = Rng::derive(seed, "study-search", static_cast<std::uint64_t>(k));
    auto res = run_local_search(ev, plan, lc);
    cell.mean_search_cost += plan_score(ev, res.plan).cost;
    built.push_back(std::move(plan));
    searched.push_back(std::move(res.plan));
  }
  if (repetitions > 0) {
    cell.mean_construction_cost /= repetitions;
    cell.mean_search_cost /= repetitions;
  }
  cell.diversity = arc_diversity(built);
  cell.search_diversity = arc_diversity(searched);
  return cell;
}

}  // namespace amvrp
