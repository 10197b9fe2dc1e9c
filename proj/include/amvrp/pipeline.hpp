#pragma once

#include <cstdint>

#include "amvrp/amp.hpp"
#include "amvrp/io.hpp"
#include "amvrp/preprocess.hpp"

namespace amvrp {

/// Demand splitting, AMP and a final evaluation on the expanded instance.
struct PipelineResult {
  SplitResult split;
  AmpResult amp;
  CostBreakdown breakdown;
  MergedReport merged;
};

PipelineResult run_pipeline(const Instance& instance, const AmpConfig& config);

/// Seed of run `index` in a multi-seed experiment rooted at `root`.
inline std::uint64_t run_seed(std::uint64_t root, int index) { return root + static_cast<std::uint64_t>(index); }

/// `repetitions` constructions at (lambda, dropout), each followed by local
/// search. Diversity is measured on the constructions and on the searched
/// plans separately.
StudyCell study_cell(const Instance& instance, double lambda, double dropout, int repetitions,
                     const LsConfig& ls, std::uint64_t seed);

}  // namespace amvrp
