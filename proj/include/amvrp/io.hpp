#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "amvrp/evaluator.hpp"
#include "amvrp/model.hpp"

namespace amvrp {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), location(where) {}
  std::string location;  // "file:line" or a JSON path
};

/// Christofides-Mingozzi-Toth layout: header "n capacity max_route_time
/// drop_time", depot "x y", then n lines "x y demand". The fleet is n
/// identical vehicles; a route-time limit becomes the vehicle hard window.
Instance parse_cmt(const std::filesystem::path& path);
Instance parse_cmt_text(const std::string& text, const std::string& name = "cmt");

/// Text tensor: "amvrp-tensor 1", "n K", boundary line, then K blocks of n
/// rows. Values are written with 17 significant digits.
TravelTimeTensor read_tensor(const std::filesystem::path& path);
void write_tensor(const TravelTimeTensor& tensor, const std::filesystem::path& path);

/// JSON instance ("schema": "amvrp-rich/1"). Matrices live in tensor files
/// referenced relative to the document.
Instance parse_rich(const std::filesystem::path& path);
/// Writes `path` plus <stem>.distance.txt and <stem>.time.txt next to it.
void emit_rich(const Instance& instance, const std::filesystem::path& path);

/// Picks the parser by extension (.json is rich, anything else CMT).
Instance load_instance(const std::filesystem::path& path);

struct SolutionRecord {
  std::string instance;
  Solution solution;  // schedule propagated
  CostBreakdown breakdown;
  bool budget_truncated = false;
  std::uint64_t seed = 0;
  double seconds = 0.0;
};

std::string format_solution(const SolutionRecord& record);
void emit_solution(const SolutionRecord& record, const std::filesystem::path& path);

struct BestKnown {
  int customers = 0;
  std::string variants;
  double cost = 0.0;
};
std::map<std::string, BestKnown> read_best_known(const std::filesystem::path& path);

/// One instance, many seeds.
struct RunSet {
  std::string instance;
  int customers = 0;
  std::string variants;
  std::vector<double> costs;    // feasible totals, seed order
  std::vector<double> seconds;  // wall clock per run
  int infeasible = 0;
  int truncated = 0;
};

/// One row per instance (best, average, spread, suboptimality) plus an average row. Wall-clock times are kept out
/// of the report so equal seeds give byte-identical files; see format_timing.
std::string format_report(const std::vector<RunSet>& runs, const std::map<std::string, BestKnown>& best);
std::string format_timing(const std::vector<RunSet>& runs);
void emit_report(const std::vector<RunSet>& runs, const std::map<std::string, BestKnown>& best,
                 const std::filesystem::path& path);

struct StudyCell {
  std::string instance;
  double lambda = 0.0;
  double dropout = 0.0;
  int runs = 0;
  double mean_construction_cost = 0.0;
  double mean_search_cost = 0.0;
  double diversity = 0.0;         // of the constructions
  double search_diversity = 0.0;  // after local search
};

std::string format_plotdata(const std::vector<StudyCell>& cells);
void emit_plotdata(const std::vector<StudyCell>& cells, const std::filesystem::path& path);

/// Inputs of build_from_profiles as a JSON document ("schema":
/// "amvrp-profiles/1"); the static time matrix is a single-section tensor
/// file referenced relative to the document.
struct ProfileSpec {
  std::vector<std::vector<double>> static_time;
  std::vector<int> cluster_of;
  ProfileSet profiles;
  double step = 900.0;
  double horizon_begin = 0.0;
  double horizon_end = 86400.0;
};

ProfileSpec parse_profile_spec(const std::filesystem::path& path);
/// Writes `path` plus <stem>.static.txt next to it.
void emit_profile_spec(const ProfileSpec& spec, const std::filesystem::path& path);
TravelTimeTensor build_tensor(const ProfileSpec& spec);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace amvrp
