#pragma once

#include <string>

#include "amvrp/evaluator.hpp"
#include "amvrp/model.hpp"

namespace amvrp {

struct OracleLimits {
  int max_customers = 9;
  int workers = 1;
};

enum class OracleStatus { Optimal, Infeasible, Refused };

struct OracleResult {
  OracleStatus status = OracleStatus::Refused;
  Solution solution;
  double cost = 0.0;
  long long plans_evaluated = 0;
  std::string message;
};

/// Exhaustive search over every assignment of customers to drives, every
/// drive order per vehicle and every visiting order. Idle vehicles that are
/// interchangeable are tried once. Ties go to the lexicographically smallest
/// drive encoding.
OracleResult solve_exact(const Instance& instance, const OracleLimits& limits = {});

/// (vehicle, stops...) per drive, concatenated with -1 separators.
std::vector<int> drive_encoding(const Solution& solution);

}  // namespace amvrp
