#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "amvrp/evaluator.hpp"
#include "amvrp/random.hpp"

namespace amvrp {

struct RccwConfig {
  double lambda = 1.0;   // route shape
  double dropout = 0.0;  // share of savings entries discarded
  std::uint64_t rng_seed = 0;
};

struct SavingsEntry {
  int i = 0;
  int j = 0;
  double value = 0.0;
  bool operator==(const SavingsEntry&) const = default;
};

class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cost of i -> j used for savings: first-section travel time, or in
/// monetary mode the fuel cost of vehicle 0 running empty at horizon start.
double reference_cost(const Instance& instance, int i, int j);

/// s_ij = c_i0 + c_0j - lambda * c_ij for every ordered customer pair,
/// sorted by value decreasing, ties by (i, j).
std::vector<SavingsEntry> compute_savings(const Instance& instance, double lambda);

/// Removes floor(dropout * size) entries chosen uniformly; survivors keep
/// their order.
std::vector<SavingsEntry> apply_dropout(std::vector<SavingsEntry> entries, double dropout, Rng& rng);

/// Savings merges on single-drive routes, then assignment of routes to the
/// fleet. Works on reduced instances; tokens are the instance's vertex ids.
Plan construct_plan(const Evaluator& ev, const RccwConfig& config);

Solution construct(const Instance& instance, const RccwConfig& config);

/// Routes onto vehicles: each route gets its own idle vehicle while one
/// fits, leftovers become extra drives of used vehicles, and routes that fit
/// nowhere are split at their depot-nearest customer.
Plan compress(const Evaluator& ev, std::vector<std::vector<int>> routes);

}  // namespace amvrp
