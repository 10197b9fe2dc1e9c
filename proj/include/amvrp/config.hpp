#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "amvrp/amp.hpp"
#include "amvrp/oracle.hpp"

namespace amvrp {

struct StudyConfig {
  std::vector<double> lambda_grid{0.1, 0.4, 0.7, 1.0, 1.3, 1.6, 1.9};
  std::vector<double> dropout_grid{0.0, 0.1, 0.2, 0.3, 0.5, 0.8};
  int repetitions = 15;
};

/// Everything a run needs besides the instance. The JSON form lists every
/// field; missing fields keep their defaults, unknown fields are rejected.
struct RunConfig {
  AmpConfig amp;
  OracleLimits oracle;
  StudyConfig study;
  std::uint64_t seed = 0;
  int seeds = 10;
  double budget_s = 0.0;
  int workers = 0;  // 0 = all cores
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
std::string format_config(const RunConfig& config);

}  // namespace amvrp
