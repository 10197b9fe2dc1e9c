#include "amvrp/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace amvrp {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.contains(key)) throw ConfigError(path + "." + key + ": unknown field");
}

template <class T>
void read(const json& j, const char* key, const std::string& path, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + "." + key + ": wrong type");
  }
}

void read_range(const json& j, const char* key, const std::string& path, double& lo, double& hi) {
  if (!j.contains(key)) return;
  std::vector<double> r;
  read(j, key, path, r);
  if (r.size() != 2 || !(r[0] <= r[1])) throw ConfigError(path + "." + key + ": expected [min, max]");
  lo = r[0];
  hi = r[1];
}

void read_band(const json& j, const std::string& path, ParameterBand& b) {
  check_keys(j, path, {"lambda", "dropout_choices", "dropout_range"});
  read_range(j, "lambda", path, b.lambda_min, b.lambda_max);
  read(j, "dropout_choices", path, b.dropout_choices);
  read_range(j, "dropout_range", path, b.dropout_min, b.dropout_max);
}

json band_json(const ParameterBand& b) {
  return {{"lambda", {b.lambda_min, b.lambda_max}},
          {"dropout_choices", b.dropout_choices},
          {"dropout_range", {b.dropout_min, b.dropout_max}}};
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("$: ") + e.what());
  }
  RunConfig c;
  check_keys(root, "$", {"seed", "seeds", "budget_s", "workers", "amp", "local_search", "oracle", "study"});
  read(root, "seed", "$", c.seed);
  read(root, "seeds", "$", c.seeds);
  read(root, "budget_s", "$", c.budget_s);
  read(root, "workers", "$", c.workers);
  if (root.contains("amp")) {
    const auto& a = root["amp"];
    check_keys(a, "$.amp",
               {"rounds", "starts", "retention", "diversification_rounds", "final_three_opt",
                "final_candidates", "carry_elite", "diversification", "intensification"});
    read(a, "rounds", "$.amp", c.amp.rounds);
    read(a, "starts", "$.amp", c.amp.starts);
    read(a, "retention", "$.amp", c.amp.retention);
    read(a, "diversification_rounds", "$.amp", c.amp.diversification_rounds);
    read(a, "final_three_opt", "$.amp", c.amp.final_three_opt);
    read(a, "final_candidates", "$.amp", c.amp.final_candidates);
    read(a, "carry_elite", "$.amp", c.amp.carry_elite);
    if (a.contains("diversification")) read_band(a["diversification"], "$.amp.diversification", c.amp.diversification);
    if (a.contains("intensification")) read_band(a["intensification"], "$.amp.intensification", c.amp.intensification);
  }
  if (root.contains("local_search")) {
    const auto& l = root["local_search"];
    const std::string p = "$.local_search";
    check_keys(l, p, {"max_iterations", "combos_per_iteration", "triple_swap_limit",
                      "phase2_first_improvement", "phase2_segment_moves", "weights"});
    read(l, "max_iterations", p, c.amp.ls.max_iterations);
    read(l, "combos_per_iteration", p, c.amp.ls.combos_per_iteration);
    read(l, "triple_swap_limit", p, c.amp.ls.triple_swap_limit);
    read(l, "phase2_first_improvement", p, c.amp.ls.phase2_first_improvement);
    read(l, "phase2_segment_moves", p, c.amp.ls.phase2_segment_moves);
    if (l.contains("weights")) {
      const auto& w = l["weights"];
      const std::string q = p + ".weights";
      auto& cw = c.amp.ls.weights;
      check_keys(w, q, {"swap_2x1", "move_1", "swap_3x1", "swap_2x3", "swap_2x2", "swap_drives",
                        "move_drive", "directions"});
      read(w, "swap_2x1", q, cw.swap_2x1);
      read(w, "move_1", q, cw.move_1);
      read(w, "swap_3x1", q, cw.swap_3x1);
      read(w, "swap_2x3", q, cw.swap_2x3);
      read(w, "swap_2x2", q, cw.swap_2x2);
      read(w, "swap_drives", q, cw.swap_drives);
      read(w, "move_drive", q, cw.move_drive);
      read(w, "directions", q, cw.directions);
    }
  }
  if (root.contains("oracle")) {
    check_keys(root["oracle"], "$.oracle", {"max_customers"});
    read(root["oracle"], "max_customers", "$.oracle", c.oracle.max_customers);
  }
  if (root.contains("study")) {
    const auto& s = root["study"];
    check_keys(s, "$.study", {"lambda_grid", "dropout_grid", "repetitions"});
    read(s, "lambda_grid", "$.study", c.study.lambda_grid);
    read(s, "dropout_grid", "$.study", c.study.dropout_grid);
    read(s, "repetitions", "$.study", c.study.repetitions);
  }
  if (c.amp.rounds < 1 || c.amp.starts < 1) throw ConfigError("$.amp: rounds and starts must be >= 1");
  if (!(c.amp.retention > 0.0 && c.amp.retention <= 1.0))
    throw ConfigError("$.amp.retention: must be in (0, 1]");
  if (c.seeds < 1) throw ConfigError("$.seeds: must be >= 1");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config_text(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string format_config(const RunConfig& c) {
  const auto& w = c.amp.ls.weights;
  json j = {
      {"seed", c.seed},
      {"seeds", c.seeds},
      {"budget_s", c.budget_s},
      {"workers", c.workers},
      {"amp",
       {{"rounds", c.amp.rounds},
        {"starts", c.amp.starts},
        {"retention", c.amp.retention},
        {"diversification_rounds", c.amp.diversification_rounds},
        {"final_three_opt", c.amp.final_three_opt},
        {"final_candidates", c.amp.final_candidates},
        {"carry_elite", c.amp.carry_elite},
        {"diversification", band_json(c.amp.diversification)},
        {"intensification", band_json(c.amp.intensification)}}},
      {"local_search",
       {{"max_iterations", c.amp.ls.max_iterations},
        {"combos_per_iteration", c.amp.ls.combos_per_iteration},
        {"triple_swap_limit", c.amp.ls.triple_swap_limit},
        {"phase2_first_improvement", c.amp.ls.phase2_first_improvement},
        {"phase2_segment_moves", c.amp.ls.phase2_segment_moves},
        {"weights",
         {{"swap_2x1", w.swap_2x1},
          {"move_1", w.move_1},
          {"swap_3x1", w.swap_3x1},
          {"swap_2x3", w.swap_2x3},
          {"swap_2x2", w.swap_2x2},
          {"swap_drives", w.swap_drives},
          {"move_drive", w.move_drive},
          {"directions", w.directions}}}}},
      {"oracle", {{"max_customers", c.oracle.max_customers}}},
      {"study",
       {{"lambda_grid", c.study.lambda_grid},
        {"dropout_grid", c.study.dropout_grid},
        {"repetitions", c.study.repetitions}}},
  };
  return j.dump(2) + "\n";
}

}  // namespace amvrp
