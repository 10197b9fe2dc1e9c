// amvrp command-line front end: solve, bench, study, oracle, tensor.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "amvrp/config.hpp"
#include "amvrp/io.hpp"
#include "amvrp/oracle.hpp"
#include "amvrp/pipeline.hpp"
#include "amvrp/synthetic.hpp"

namespace fs = std::filesystem;
using namespace amvrp;

namespace {

enum Exit { kOk = 0, kError = 1, kInvalid = 2, kInfeasible = 3, kRefused = 4 };

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<int> seeds;
  std::optional<double> budget_s;
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<int> workers;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "root seed")->envname("AMVRP_SEED");
  app->add_option("--seeds", c.seeds, "number of seeded runs")->envname("AMVRP_SEEDS");
  app->add_option("--budget-s", c.budget_s, "wall-clock budget per run in seconds")->envname("AMVRP_BUDGET_S");
  app->add_option("--config", c.config, "JSON run configuration")->envname("AMVRP_CONFIG");
  app->add_option("--out", c.out, "output path")->envname("AMVRP_OUT");
  app->add_option("--workers", c.workers, "worker threads (0 = all cores)")->envname("AMVRP_WORKERS");
}

RunConfig resolve(const Common& c) {
  RunConfig cfg = c.config ? load_config(*c.config) : RunConfig{};
  if (c.seed) cfg.seed = *c.seed;
  if (c.seeds) cfg.seeds = *c.seeds;
  if (c.budget_s) cfg.budget_s = *c.budget_s;
  if (c.workers) cfg.workers = *c.workers;
  if (cfg.workers <= 0) cfg.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  cfg.amp.workers = cfg.workers;
  cfg.amp.budget_s = cfg.budget_s;
  cfg.oracle.workers = cfg.workers;
  return cfg;
}

void output(const Common& c, const std::string& text) {
  if (c.out)
    write_text(*c.out, text);
  else
    std::cout << text;
}

Instance load_valid(const fs::path& path) {
  Instance in = load_instance(path);
  if (auto v = validate_instance(in); !v.empty()) throw ValidationError("invalid instance " + path.string(), v);
  return in;
}

std::string variants_of(const Instance& in) {
  bool windows = false;
  for (const auto& v : in.vehicles) windows = windows || std::isfinite(v.hard_window.end);
  for (const auto& l : in.locations) windows = windows || std::isfinite(l.hard_window.end);
  return windows ? "CVRP+VRPTW" : "CVRP";
}

std::string format_deliveries(const PipelineResult& r) {
  if (r.split.map.identity()) return {};
  std::string s;
  char buf[160];
  for (std::size_t loc = 0; loc < r.merged.deliveries.size(); ++loc) {
    const auto& parts = r.merged.deliveries[loc];
    if (parts.size() < 2) continue;
    for (const auto& p : parts) {
      std::snprintf(buf, sizeof buf, "delivery %zu part %d vehicle %d drive %d mass %.3f volume %.3f\n", loc,
                    p.expanded_id, p.vehicle_id, p.drive_index, p.mass, p.volume);
      s += buf;
    }
  }
  return s;
}

int cmd_solve(const Common& c, const std::string& path) {
  RunConfig cfg = resolve(c);
  const int seeds = c.seeds ? *c.seeds : 1;
  const Instance instance = load_valid(path);
  std::optional<PipelineResult> best;
  std::uint64_t best_seed = 0;
  for (int s = 0; s < seeds; ++s) {
    AmpConfig ac = cfg.amp;
    ac.seed = run_seed(cfg.seed, s);
    auto r = run_pipeline(instance, ac);
    std::fprintf(stderr, "seed %llu total %.4f feasible %s %.1fs%s\n", static_cast<unsigned long long>(ac.seed),
                 r.breakdown.total, r.breakdown.feasible() ? "yes" : "no", r.amp.seconds,
                 r.amp.budget_truncated ? " budget-truncated" : "");
    const bool better = !best || (r.breakdown.feasible() && !best->breakdown.feasible()) ||
                        (r.breakdown.feasible() == best->breakdown.feasible() &&
                         r.breakdown.total < best->breakdown.total);
    if (better) {
      best = std::move(r);
      best_seed = ac.seed;
    }
  }
  SolutionRecord rec;
  rec.instance = instance.name;
  rec.solution = propagate_schedule(best->split.instance, best->amp.solution);
  rec.breakdown = best->breakdown;
  rec.budget_truncated = best->amp.budget_truncated;
  rec.seed = best_seed;
  output(c, format_solution(rec) + format_deliveries(*best) + format_round_log(best->amp));
  if (!best->breakdown.feasible()) {
    std::fprintf(stderr, "result is infeasible:\n%s\n", describe(best->breakdown.hard_violations).c_str());
    return kInfeasible;
  }
  return kOk;
}

std::vector<fs::path> collect(const std::vector<std::string>& inputs, std::optional<fs::path>& best_known) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p)) {
        const auto ext = e.path().extension();
        if (e.is_regular_file() && (ext == ".txt" || ext == ".json") &&
            e.path().filename().string().find('.') == e.path().stem().string().size())
          found.push_back(e.path());
      }
      std::sort(found.begin(), found.end(), [](const fs::path& a, const fs::path& b) {
        // vrpnc2 before vrpnc10
        const auto sa = a.stem().string(), sb = b.stem().string();
        return sa.size() != sb.size() ? sa.size() < sb.size() : sa < sb;
      });
      files.insert(files.end(), found.begin(), found.end());
      if (!best_known && fs::exists(p / "best_known.csv")) best_known = p / "best_known.csv";
    } else {
      files.push_back(p);
      if (!best_known && fs::exists(p.parent_path() / "best_known.csv"))
        best_known = p.parent_path() / "best_known.csv";
    }
  }
  return files;
}

int cmd_bench(const Common& c, const std::vector<std::string>& inputs) {
  RunConfig cfg = resolve(c);
  std::optional<fs::path> bk_path;
  const auto files = collect(inputs, bk_path);
  const auto best_known = bk_path ? read_best_known(*bk_path) : std::map<std::string, BestKnown>{};
  std::vector<RunSet> runs;
  for (const auto& f : files) {
    const Instance instance = load_valid(f);
    RunSet rs;
    rs.instance = instance.name;
    rs.customers = instance.customer_count();
    auto it = best_known.find(instance.name);
    rs.variants = it != best_known.end() ? it->second.variants : variants_of(instance);
    for (int s = 0; s < cfg.seeds; ++s) {
      AmpConfig ac = cfg.amp;
      ac.seed = run_seed(cfg.seed, s);
      const auto t0 = std::chrono::steady_clock::now();
      auto r = run_pipeline(instance, ac);
      rs.seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      if (r.breakdown.feasible())
        rs.costs.push_back(r.breakdown.total);
      else
        ++rs.infeasible;
      if (r.amp.budget_truncated) ++rs.truncated;
      std::fprintf(stderr, "%s seed %llu total %.4f %.1fs\n", instance.name.c_str(),
                   static_cast<unsigned long long>(ac.seed), r.breakdown.total, rs.seconds.back());
    }
    runs.push_back(std::move(rs));
  }
  output(c, format_report(runs, best_known));
  const auto timing = format_timing(runs);
  std::cerr << timing;
  if (c.out) write_text(fs::path(*c.out).concat(".timing.tsv"), timing);
  return kOk;
}

int cmd_study(const Common& c, const std::vector<std::string>& inputs) {
  RunConfig cfg = resolve(c);
  std::optional<fs::path> unused;
  const auto files = collect(inputs, unused);
  std::vector<StudyCell> cells;
  for (const auto& f : files) {
    const Instance instance = load_valid(f);
    for (double lambda : cfg.study.lambda_grid)
      for (double dropout : cfg.study.dropout_grid)
        cells.push_back(study_cell(instance, lambda, dropout, cfg.study.repetitions, cfg.amp.ls, cfg.seed));
  }
  output(c, format_plotdata(cells));
  return kOk;
}

int cmd_oracle(const Common& c, const std::string& path) {
  RunConfig cfg = resolve(c);
  const Instance instance = load_valid(path);
  const auto split = split_demands(instance);
  const auto r = solve_exact(split.instance, cfg.oracle);
  if (r.status == OracleStatus::Refused) {
    std::fprintf(stderr, "oracle refused: %s\n", r.message.c_str());
    return kRefused;
  }
  if (r.status == OracleStatus::Infeasible) {
    output(c, "status infeasible\nplans " + std::to_string(r.plans_evaluated) + "\n");
    return kInfeasible;
  }
  SolutionRecord rec;
  rec.instance = instance.name;
  rec.solution = r.solution;
  rec.breakdown = evaluate(split.instance, r.solution);
  output(c, "status optimal\nplans " + std::to_string(r.plans_evaluated) + "\n" + format_solution(rec));
  return kOk;
}

int cmd_tensor(const Common& c, const std::optional<std::string>& spec_path, bool synthetic) {
  if (!c.out) throw CLI::ValidationError("--out", "tensor needs an output path");
  if (synthetic) {
    SyntheticSpec spec;
    if (c.seed) spec.seed = *c.seed;
    const auto data = generate_synthetic(spec);
    const fs::path dir(*c.out);
    fs::create_directories(dir);
    emit_rich(data.instance, dir / "synthetic.json");
    ProfileSpec ps;
    ps.static_time = data.static_time;
    ps.cluster_of = data.cluster_of;
    ps.profiles = data.profiles;
    ps.step = spec.step;
    emit_profile_spec(ps, dir / "synthetic.profiles.json");
    std::fprintf(stderr, "wrote %s\n", (dir / "synthetic.json").c_str());
    return kOk;
  }
  if (!spec_path) throw CLI::ValidationError("tensor", "give a profile spec or --synthetic");
  write_tensor(build_tensor(parse_profile_spec(*spec_path)), *c.out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vehicle routing solver"};
  app.require_subcommand(1);
  Common common;

  std::string instance_path;
  std::vector<std::string> inputs;
  std::optional<std::string> spec_path;
  bool synthetic = false;

  auto* solve = app.add_subcommand("solve", "solve one instance");
  solve->add_option("instance", instance_path, "CMT or rich JSON instance")->required();
  add_common(solve, common);

  auto* bench = app.add_subcommand("bench", "multi-seed benchmark over instances or directories");
  bench->add_option("inputs", inputs, "instance files or corpus directories");
  add_common(bench, common);

  auto* study = app.add_subcommand("study", "lambda x dropout grid of construction + local search");
  study->add_option("inputs", inputs, "instance files or directories")->required();
  add_common(study, common);

  auto* oracle = app.add_subcommand("oracle", "exact optimum of a tiny instance");
  oracle->add_option("instance", instance_path, "instance file")->required();
  add_common(oracle, common);

  auto* tensor = app.add_subcommand("tensor", "build a travel-time tensor from profiles");
  tensor->add_option("spec", spec_path, "profile spec (JSON)");
  tensor->add_flag("--synthetic", synthetic, "write a generated 118-location instance and its profiles");
  add_common(tensor, common);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*solve) return cmd_solve(common, instance_path);
    if (*bench) return cmd_bench(common, inputs);
    if (*study) return cmd_study(common, inputs);
    if (*oracle) return cmd_oracle(common, instance_path);
    if (*tensor) return cmd_tensor(common, spec_path, synthetic);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "validation failure\n%s\n", describe(e.violations).c_str());
    return kInvalid;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kError;
  }
  return kOk;
}
