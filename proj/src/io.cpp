#include "amvrp/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace amvrp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string num(double v, int digits = 17) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return {buf, r.ptr};
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

// Whitespace tokenizer with line tracking for error messages.
class Tokens {
 public:
  Tokens(const std::string& text, std::string name) : s_(text), name_(std::move(name)) {}

  bool next(std::string_view& tok) {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      if (s_[pos_] == '\n') ++line_;
      ++pos_;
    }
    if (pos_ >= s_.size()) return false;
    const std::size_t b = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    tok = std::string_view(s_).substr(b, pos_ - b);
    return true;
  }
  double number(const char* what) {
    std::string_view tok;
    if (!next(tok)) fail(std::string("expected ") + what + ", found end of file");
    double v = 0.0;
    auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (r.ec != std::errc() || r.ptr != tok.data() + tok.size())
      fail(std::string("expected ") + what + ", found '" + std::string(tok) + "'");
    return v;
  }
  void word(std::string_view expected) {
    std::string_view tok;
    if (!next(tok) || tok != expected) fail("expected '" + std::string(expected) + "'");
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(name_ + ":" + std::to_string(line_), what);
  }

 private:
  const std::string& s_;
  std::string name_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

Instance parse_cmt_text(const std::string& text, const std::string& name) {
  std::vector<std::vector<double>> rows;
  std::vector<int> line_no;
  {
    std::istringstream in(text);
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
      ++ln;
      std::istringstream ls(line);
      std::vector<double> row;
      std::string tok;
      while (ls >> tok) {
        double v = 0.0;
        auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (r.ec != std::errc() || r.ptr != tok.data() + tok.size())
          throw ParseError(name + ":" + std::to_string(ln), "not a number: '" + tok + "'");
        row.push_back(v);
      }
      if (row.empty()) continue;
      rows.push_back(std::move(row));
      line_no.push_back(ln);
    }
  }
  const auto where = [&](std::size_t r) {
    return name + ":" + std::to_string(r < line_no.size() ? line_no[r] : (line_no.empty() ? 1 : line_no.back() + 1));
  };
  if (rows.empty()) throw ParseError(name + ":1", "empty file");
  const auto& h = rows[0];
  if (h.size() < 2 || h.size() > 4) throw ParseError(where(0), "header needs n, capacity[, max route time[, drop time]]");
  const double nd = h[0];
  if (nd < 1 || nd != std::floor(nd)) throw ParseError(where(0), "customer count must be a positive integer");
  const int n = static_cast<int>(nd);
  const double capacity = h[1];
  const double limit = h.size() > 2 && h[2] > 0.0 && h[2] < 999999.0 ? h[2] : kOpenEnd;
  const double drop = h.size() > 3 ? h[3] : 0.0;

  if (rows.size() < 2) throw ParseError(where(1), "expected depot coordinates, found end of file");
  if (rows[1].size() != 2) throw ParseError(where(1), "depot line needs x y");
  for (int c = 1; c <= n; ++c) {
    const std::size_t r = static_cast<std::size_t>(c) + 1;
    if (r >= rows.size())
      throw ParseError(where(r), "expected customer " + std::to_string(c) + ", found end of file");
    if (rows[r].size() != 3) throw ParseError(where(r), "customer line needs x y demand");
  }
  if (rows.size() > static_cast<std::size_t>(n) + 2)
    throw ParseError(where(static_cast<std::size_t>(n) + 2), "unexpected trailing data");

  Instance in;
  in.name = name;
  in.locations.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    auto& loc = in.locations[i];
    const auto& row = rows[static_cast<std::size_t>(i) + 1];
    loc.id = i;
    loc.x = row[0];
    loc.y = row[1];
    if (i > 0) {
      loc.demand_mass = row[2];
      loc.service_duration = drop;
    }
  }
  in.vehicles.resize(n);
  for (int v = 0; v < n; ++v) {
    auto& veh = in.vehicles[v];
    veh.id = v;
    veh.capacity_mass = capacity;
    veh.hard_window = {0.0, limit};
    veh.soft_window = veh.hard_window;
  }
  in.distance.assign(n + 1, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (i != j)
        in.distance[i][j] = std::hypot(in.locations[i].x - in.locations[j].x,
                                       in.locations[i].y - in.locations[j].y);
  in.travel_time = TravelTimeTensor(in.distance);
  return in;
}

Instance parse_cmt(const fs::path& path) { return parse_cmt_text(slurp(path), path.stem().string()); }

TravelTimeTensor read_tensor(const fs::path& path) {
  const std::string text = slurp(path);
  Tokens t(text, path.string());
  t.word("amvrp-tensor");
  t.word("1");
  const double nd = t.number("size n");
  const double kd = t.number("section count K");
  if (nd < 1 || kd < 1 || nd != std::floor(nd) || kd != std::floor(kd))
    t.fail("n and K must be positive integers");
  const auto n = static_cast<std::size_t>(nd);
  const auto k = static_cast<std::size_t>(kd);
  std::vector<double> boundaries(k + 1);
  for (auto& b : boundaries) b = t.number("section boundary");
  std::vector<std::vector<double>> sections(k, std::vector<double>(n * n));
  for (auto& s : sections)
    for (auto& v : s) v = t.number("matrix entry");
  std::string_view extra;
  if (t.next(extra)) t.fail("unexpected trailing data");
  try {
    return TravelTimeTensor(std::move(boundaries), n, std::move(sections));
  } catch (const std::invalid_argument& e) {
    throw ParseError(path.string(), e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_tensor(const TravelTimeTensor& tensor, const fs::path& path) {
  const std::size_t n = tensor.size();
  std::string s = "amvrp-tensor 1\n" + std::to_string(n) + " " + std::to_string(tensor.section_count()) + "\n";
  for (std::size_t b = 0; b < tensor.boundaries().size(); ++b)
    s += (b ? " " : "") + num(tensor.boundaries()[b]);
  s += "\n";
  for (std::size_t k = 0; k < tensor.section_count(); ++k)
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) s += (j ? " " : "") + num(tensor.at(k, i, j));
      s += "\n";
    }
  write_text(path, s);
}

namespace {

// Field access with path-to-field diagnostics.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ParseError(path_, "expected an object");
  }
  void allow(std::initializer_list<const char*> keys) const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool known = false;
      for (const char* k : keys) known = known || it.key() == k;
      if (!known) throw ParseError(path_ + "." + it.key(), "unknown field");
    }
  }
  bool has(const char* key) const { return j_.contains(key); }
  const json& at(const char* key) const {
    if (!j_.contains(key)) throw ParseError(path_ + "." + key, "missing field");
    return j_.at(key);
  }
  std::string sub(const char* key) const { return path_ + "." + key; }
  double number(const char* key) const {
    const auto& v = at(key);
    if (!v.is_number()) throw ParseError(sub(key), "expected a number");
    return v.get<double>();
  }
  double number_or(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }
  std::string string(const char* key) const {
    const auto& v = at(key);
    if (!v.is_string()) throw ParseError(sub(key), "expected a string");
    return v.get<std::string>();
  }
  int integer(const char* key) const {
    const auto& v = at(key);
    if (!v.is_number_integer()) throw ParseError(sub(key), "expected an integer");
    return v.get<int>();
  }
  const json& array(const char* key) const {
    const auto& v = at(key);
    if (!v.is_array()) throw ParseError(sub(key), "expected an array");
    return v;
  }

 private:
  const json& j_;
  std::string path_;
};

TimeWindow read_window(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !(j[1].is_number() || j[1].is_null()))
    throw ParseError(path, "expected [begin, end] with end a number or null for open");
  return {j[0].get<double>(), j[1].is_null() ? kOpenEnd : j[1].get<double>()};
}

json write_window(const TimeWindow& w) {
  return json::array({w.begin, std::isinf(w.end) ? json(nullptr) : json(w.end)});
}

SkillSet read_skills(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array of strings");
  SkillSet out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_string()) throw ParseError(path + "[" + std::to_string(k) + "]", "expected a string");
    out.insert(j[k].get<std::string>());
  }
  return out;
}

PenaltyParams read_penalties(const json& j, const std::string& path) {
  Reader r(j, path);
  r.allow({"early_fixed", "early_per_second", "early_duration_per_second", "late_fixed",
           "late_per_second", "late_duration_per_second"});
  PenaltyParams p;
  p.early_fixed = r.number_or("early_fixed", 0.0);
  p.early_per_second = r.number_or("early_per_second", 0.0);
  p.early_duration_per_second = r.number_or("early_duration_per_second", 0.0);
  p.late_fixed = r.number_or("late_fixed", 0.0);
  p.late_per_second = r.number_or("late_per_second", 0.0);
  p.late_duration_per_second = r.number_or("late_duration_per_second", 0.0);
  return p;
}

json write_penalties(const PenaltyParams& p) {
  return {{"early_fixed", p.early_fixed},
          {"early_per_second", p.early_per_second},
          {"early_duration_per_second", p.early_duration_per_second},
          {"late_fixed", p.late_fixed},
          {"late_per_second", p.late_per_second},
          {"late_duration_per_second", p.late_duration_per_second}};
}

constexpr const char* kSchema = "amvrp-rich/1";

}  // namespace

Instance parse_rich(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(slurp(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), e.what());
  }
  Reader r(doc, "$");
  r.allow({"schema", "name", "objective", "penalties", "locations", "vehicles", "matrices"});
  if (r.string("schema") != kSchema)
    throw ParseError("$.schema", "unsupported schema, expected " + std::string(kSchema));

  Instance in;
  in.name = r.has("name") ? r.string("name") : path.stem().string();
  const auto objective = r.string("objective");
  if (objective == "travel_time")
    in.objective = ObjectiveKind::TravelTime;
  else if (objective == "monetary")
    in.objective = ObjectiveKind::Monetary;
  else
    throw ParseError("$.objective", "expected \"travel_time\" or \"monetary\"");

  if (r.has("penalties")) {
    Reader p(r.at("penalties"), "$.penalties");
    p.allow({"location", "vehicle"});
    if (p.has("location")) in.location_penalties = read_penalties(p.at("location"), p.sub("location"));
    if (p.has("vehicle")) in.vehicle_penalties = read_penalties(p.at("vehicle"), p.sub("vehicle"));
  }

  const auto& locs = r.array("locations");
  for (std::size_t i = 0; i < locs.size(); ++i) {
    const std::string lp = "$.locations[" + std::to_string(i) + "]";
    Reader l(locs[i], lp);
    l.allow({"id", "x", "y", "service_duration", "hard_window", "soft_window", "skills", "cluster",
             "packages"});
    Location loc;
    loc.id = l.integer("id");
    loc.x = l.number("x");
    loc.y = l.number("y");
    loc.service_duration = l.number_or("service_duration", 0.0);
    if (l.has("hard_window")) loc.hard_window = read_window(l.at("hard_window"), l.sub("hard_window"));
    loc.soft_window = l.has("soft_window") ? read_window(l.at("soft_window"), l.sub("soft_window"))
                                           : loc.hard_window;
    if (l.has("skills")) loc.required_skills = read_skills(l.at("skills"), l.sub("skills"));
    if (l.has("cluster")) loc.cluster_id = l.integer("cluster");
    if (l.has("packages")) {
      const auto& pk = l.array("packages");
      for (std::size_t k = 0; k < pk.size(); ++k) {
        Reader p(pk[k], lp + ".packages[" + std::to_string(k) + "]");
        p.allow({"mass", "volume"});
        loc.demand_mass += p.number_or("mass", 0.0);
        loc.demand_volume += p.number_or("volume", 0.0);
      }
    }
    in.locations.push_back(std::move(loc));
  }

  const auto& vehs = r.array("vehicles");
  for (std::size_t v = 0; v < vehs.size(); ++v) {
    const std::string vp = "$.vehicles[" + std::to_string(v) + "]";
    Reader x(vehs[v], vp);
    x.allow({"id", "capacity_mass", "capacity_volume", "hard_window", "soft_window", "skills", "fuel"});
    Vehicle veh;
    veh.id = x.integer("id");
    veh.capacity_mass = x.number("capacity_mass");
    veh.capacity_volume = x.number_or("capacity_volume", 0.0);
    if (x.has("hard_window")) veh.hard_window = read_window(x.at("hard_window"), x.sub("hard_window"));
    veh.soft_window = x.has("soft_window") ? read_window(x.at("soft_window"), x.sub("soft_window"))
                                           : veh.hard_window;
    if (x.has("skills")) veh.skills = read_skills(x.at("skills"), x.sub("skills"));
    if (x.has("fuel")) {
      Reader f(x.at("fuel"), x.sub("fuel"));
      f.allow({"base_rate", "mass_factor", "speed_factor", "fuel_price"});
      veh.cost_model.base_rate = f.number_or("base_rate", 1.0);
      veh.cost_model.mass_factor = f.number_or("mass_factor", 0.0);
      veh.cost_model.speed_factor = f.number_or("speed_factor", 0.0);
      veh.cost_model.fuel_price = f.number_or("fuel_price", 1.0);
    }
    in.vehicles.push_back(std::move(veh));
  }

  Reader m(r.at("matrices"), "$.matrices");
  m.allow({"distance", "travel_time"});
  const fs::path base = path.parent_path();
  const auto distance = read_tensor(base / m.string("distance"));
  if (distance.section_count() != 1) throw ParseError("$.matrices.distance", "distance file must have one section");
  const std::size_t n = distance.size();
  in.distance.assign(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) in.distance[i][j] = distance.at(0, i, j);
  in.travel_time = read_tensor(base / m.string("travel_time"));

  if (auto v = validate_instance(in); !v.empty())
    throw ValidationError("invalid instance " + path.string() + ":\n" + describe(v), std::move(v));
  return in;
}

void emit_rich(const Instance& in, const fs::path& path) {
  const std::string stem = path.stem().string();
  const std::string dist_name = stem + ".distance.txt";
  const std::string time_name = stem + ".time.txt";

  json doc;
  doc["schema"] = kSchema;
  doc["name"] = in.name;
  doc["objective"] = in.objective == ObjectiveKind::Monetary ? "monetary" : "travel_time";
  doc["penalties"] = {{"location", write_penalties(in.location_penalties)},
                      {"vehicle", write_penalties(in.vehicle_penalties)}};
  json locs = json::array();
  for (const auto& l : in.locations) {
    json j = {{"id", l.id},
              {"x", l.x},
              {"y", l.y},
              {"service_duration", l.service_duration},
              {"hard_window", write_window(l.hard_window)},
              {"soft_window", write_window(l.soft_window)},
              {"skills", json(std::vector<std::string>(l.required_skills.begin(), l.required_skills.end()))}};
    if (l.cluster_id) j["cluster"] = *l.cluster_id;
    j["packages"] = json::array();
    if (l.demand_mass != 0.0 || l.demand_volume != 0.0)
      j["packages"].push_back({{"mass", l.demand_mass}, {"volume", l.demand_volume}});
    locs.push_back(std::move(j));
  }
  doc["locations"] = std::move(locs);
  json vehs = json::array();
  for (const auto& v : in.vehicles) {
    vehs.push_back({{"id", v.id},
                    {"capacity_mass", v.capacity_mass},
                    {"capacity_volume", v.capacity_volume},
                    {"hard_window", write_window(v.hard_window)},
                    {"soft_window", write_window(v.soft_window)},
                    {"skills", json(std::vector<std::string>(v.skills.begin(), v.skills.end()))},
                    {"fuel",
                     {{"base_rate", v.cost_model.base_rate},
                      {"mass_factor", v.cost_model.mass_factor},
                      {"speed_factor", v.cost_model.speed_factor},
                      {"fuel_price", v.cost_model.fuel_price}}}});
  }
  doc["vehicles"] = std::move(vehs);
  doc["matrices"] = {{"distance", dist_name}, {"travel_time", time_name}};

  write_text(path, doc.dump(2) + "\n");
  const fs::path base = path.parent_path();
  write_tensor(TravelTimeTensor(in.distance), base / dist_name);
  write_tensor(in.travel_time, base / time_name);
}

Instance load_instance(const fs::path& path) {
  if (path.extension() == ".json") return parse_rich(path);
  return parse_cmt(path);
}

std::string format_solution(const SolutionRecord& rec) {
  const auto& b = rec.breakdown;
  std::ostringstream o;
  o << "instance " << rec.instance << "\n";
  o << "seed " << rec.seed << "\n";
  o << "feasible " << (b.feasible() ? "yes" : "no") << "\n";
  o << "budget_truncated " << (rec.budget_truncated ? "yes" : "no") << "\n";
  o << "total " << fixed(b.total, 6) << "\n";
  o << "travel_cost " << fixed(b.travel_cost, 6) << "\n";
  o << "location_early_penalty " << fixed(b.location_early_penalty, 6) << "\n";
  o << "location_late_penalty " << fixed(b.location_late_penalty, 6) << "\n";
  o << "vehicle_early_penalty " << fixed(b.vehicle_early_penalty, 6) << "\n";
  o << "vehicle_late_penalty " << fixed(b.vehicle_late_penalty, 6) << "\n";
  o << "exceeded_soft_seconds " << fixed(b.exceeded_soft_seconds, 3) << "\n";
  o << "drives " << rec.solution.drives.size() << "\n";
  for (std::size_t d = 0; d < rec.solution.drives.size(); ++d) {
    const auto& dr = rec.solution.drives[d];
    o << "drive " << d << " vehicle " << dr.vehicle_id << ":";
    for (int s : dr.stops) o << " " << s;
    o << "\n";
    for (std::size_t k = 0; k < dr.schedule.size() && k < dr.stops.size(); ++k)
      o << "  " << dr.stops[k] << " " << fixed(dr.schedule[k].arrival, 3) << " "
        << fixed(dr.schedule[k].departure, 3) << "\n";
  }
  for (const auto& v : b.hard_violations) o << "violation " << v.entity << ": " << v.rule << "\n";
  return o.str();
}

void emit_solution(const SolutionRecord& rec, const fs::path& path) { write_text(path, format_solution(rec)); }

std::map<std::string, BestKnown> read_best_known(const fs::path& path) {
  std::istringstream in(slurp(path));
  std::string line;
  std::map<std::string, BestKnown> out;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (line.empty() || ln == 1) continue;
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cols.push_back(c);
    if (cols.size() != 4) throw ParseError(path.string() + ":" + std::to_string(ln), "expected 4 columns");
    try {
      out[cols[0]] = {std::stoi(cols[1]), cols[2], std::stod(cols[3])};
    } catch (const std::exception&) {
      throw ParseError(path.string() + ":" + std::to_string(ln), "bad number");
    }
  }
  return out;
}

namespace {

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

std::string format_report(const std::vector<RunSet>& runs, const std::map<std::string, BestKnown>& best) {
  std::ostringstream o;
  o << "instance\tcustomers\tvariants\tbest_known\tbest\taverage\tstd\tsubopt_best\tsubopt_avg\truns\tinfeasible\ttruncated\n";
  std::vector<double> sub_best, sub_avg;
  for (const auto& r : runs) {
    const double b = r.costs.empty() ? NAN : *std::min_element(r.costs.begin(), r.costs.end());
    const double a = r.costs.empty() ? NAN : mean(r.costs);
    auto it = best.find(r.instance);
    std::string bk = "-", sb = "-", sa = "-";
    if (it != best.end() && !r.costs.empty()) {
      bk = fixed(it->second.cost, 2);
      sub_best.push_back(b / it->second.cost - 1.0);
      sub_avg.push_back(a / it->second.cost - 1.0);
      sb = fixed(100.0 * sub_best.back(), 2) + "%";
      sa = fixed(100.0 * sub_avg.back(), 2) + "%";
    }
    o << r.instance << "\t" << r.customers << "\t" << r.variants << "\t" << bk << "\t"
      << (r.costs.empty() ? "-" : fixed(b, 2)) << "\t" << (r.costs.empty() ? "-" : fixed(a, 2)) << "\t"
      << fixed(stddev(r.costs), 2) << "\t" << sb << "\t" << sa << "\t"
      << r.costs.size() + r.infeasible << "\t" << r.infeasible << "\t" << r.truncated << "\n";
  }
  if (!sub_best.empty())
    o << "average\t-\t-\t-\t-\t-\t-\t" << fixed(100.0 * mean(sub_best), 2) << "%\t"
      << fixed(100.0 * mean(sub_avg), 2) << "%\t-\t-\t-\n";
  return o.str();
}

std::string format_timing(const std::vector<RunSet>& runs) {
  std::ostringstream o;
  o << "instance\tmean_s\tmax_s\n";
  for (const auto& r : runs)
    o << r.instance << "\t" << fixed(mean(r.seconds), 2) << "\t"
      << fixed(r.seconds.empty() ? 0.0 : *std::max_element(r.seconds.begin(), r.seconds.end()), 2) << "\n";
  return o.str();
}

void emit_report(const std::vector<RunSet>& runs, const std::map<std::string, BestKnown>& best,
                 const fs::path& path) {
  write_text(path, format_report(runs, best));
}

std::string format_plotdata(const std::vector<StudyCell>& cells) {
  std::ostringstream o;
  o << "instance\tlambda\tdropout\truns\tmean_construction_cost\tmean_search_cost\tdiversity\tsearch_diversity\n";
  for (const auto& c : cells)
    o << c.instance << "\t" << fixed(c.lambda, 3) << "\t" << fixed(c.dropout, 3) << "\t" << c.runs << "\t"
      << fixed(c.mean_construction_cost, 4) << "\t" << fixed(c.mean_search_cost, 4) << "\t"
      << fixed(c.diversity, 6) << "\t" << fixed(c.search_diversity, 6) << "\n";
  return o.str();
}

void emit_plotdata(const std::vector<StudyCell>& cells, const fs::path& path) {
  write_text(path, format_plotdata(cells));
}

namespace {

constexpr const char* kProfileSchema = "amvrp-profiles/1";

TimeProfile read_profile(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ParseError(path, "expected a non-empty array of [time, scaler]");
  TimeProfile p;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const auto& s = j[k];
    const std::string at = path + "[" + std::to_string(k) + "]";
    if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number())
      throw ParseError(at, "expected [time, scaler]");
    const double t = s[0].get<double>(), v = s[1].get<double>();
    if (!(v > 0.0)) throw ParseError(at, "scaler must be positive");
    if (!p.samples.empty() && !(t > p.samples.back().first)) throw ParseError(at, "samples must be sorted by time");
    p.samples.emplace_back(t, v);
  }
  return p;
}

json write_profile(const TimeProfile& p) {
  json a = json::array();
  for (const auto& [t, v] : p.samples) a.push_back({t, v});
  return a;
}

}  // namespace

ProfileSpec parse_profile_spec(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(slurp(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), e.what());
  }
  Reader r(doc, "$");
  r.allow({"schema", "step", "horizon", "static_time", "clusters", "between_clusters", "per_pair"});
  if (r.string("schema") != kProfileSchema)
    throw ParseError("$.schema", "unsupported schema, expected " + std::string(kProfileSchema));
  ProfileSpec spec;
  spec.step = r.number("step");
  if (r.has("horizon")) {
    const auto& h = r.array("horizon");
    if (h.size() != 2 || !h[0].is_number() || !h[1].is_number())
      throw ParseError("$.horizon", "expected [begin, end]");
    spec.horizon_begin = h[0].get<double>();
    spec.horizon_end = h[1].get<double>();
  }
  const auto base = path.parent_path();
  const auto t = read_tensor(base / r.string("static_time"));
  if (t.section_count() != 1) throw ParseError("$.static_time", "expected a single-section tensor");
  const std::size_t n = t.size();
  spec.static_time.assign(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) spec.static_time[i][j] = t.at(0, i, j);
  const auto& cl = r.array("clusters");
  if (cl.size() != n) throw ParseError("$.clusters", "expected one cluster id per location");
  for (std::size_t i = 0; i < n; ++i) {
    if (!cl[i].is_number_integer()) throw ParseError("$.clusters[" + std::to_string(i) + "]", "expected an integer");
    spec.cluster_of.push_back(cl[i].get<int>());
  }
  auto read_pairs = [&](const char* key, auto& target) {
    if (!r.has(key)) return;
    const auto& arr = r.array(key);
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string at = r.sub(key) + "[" + std::to_string(k) + "]";
      Reader e(arr[k], at);
      e.allow({"from", "to", "samples"});
      target[{e.integer("from"), e.integer("to")}] = read_profile(e.at("samples"), e.sub("samples"));
    }
  };
  read_pairs("between_clusters", spec.profiles.between_clusters);
  read_pairs("per_pair", spec.profiles.per_pair);
  return spec;
}

void emit_profile_spec(const ProfileSpec& spec, const fs::path& path) {
  const std::string static_name = path.stem().string() + ".static.txt";
  write_tensor(TravelTimeTensor(spec.static_time), path.parent_path() / static_name);
  json doc;
  doc["schema"] = kProfileSchema;
  doc["step"] = spec.step;
  doc["horizon"] = {spec.horizon_begin, spec.horizon_end};
  doc["static_time"] = static_name;
  doc["clusters"] = spec.cluster_of;
  auto pairs = [](const auto& m) {
    json a = json::array();
    for (const auto& [key, prof] : m)
      a.push_back({{"from", key.first}, {"to", key.second}, {"samples", write_profile(prof)}});
    return a;
  };
  doc["between_clusters"] = pairs(spec.profiles.between_clusters);
  doc["per_pair"] = pairs(spec.profiles.per_pair);
  write_text(path, doc.dump(1) + "\n");
}

TravelTimeTensor build_tensor(const ProfileSpec& spec) {
  return build_from_profiles(spec.static_time, spec.cluster_of, spec.profiles, spec.step,
                             spec.horizon_begin, spec.horizon_end);
}

}  // namespace amvrp
