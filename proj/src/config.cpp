#include "sarimg/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sarimg::config {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(const std::string& context, const std::string& what) {
  throw std::invalid_argument("config: " + context + ": " + what);
}

class Section {
 public:
  Section(const ConfigMap& map, std::string name) : name_(std::move(name)) {
    const auto it = map.find(name_);
    if (it != map.end()) values_ = &it->second;
  }

  bool has(const std::string& key) const {
    return values_ != nullptr && values_->count(key) > 0;
  }

  std::string require(const std::string& key) const {
    if (!has(key)) fail("[" + name_ + "]", "missing required key '" + key + "'");
    return values_->at(key);
  }

  std::string get(const std::string& key, const std::string& fallback) const {
    return has(key) ? values_->at(key) : fallback;
  }

  double get_double(const std::string& key, double fallback) const {
    return has(key) ? parse_double(key, values_->at(key)) : fallback;
  }
  double require_double(const std::string& key) const {
    return parse_double(key, require(key));
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? parse_u64(key, values_->at(key)) : fallback;
  }
  std::uint64_t require_u64(const std::string& key) const {
    return parse_u64(key, require(key));
  }

  bool get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = values_->at(key);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail(where(key), "expected a boolean, got '" + v + "'");
  }

  const std::string& name() const { return name_; }

 private:
  std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

  double parse_double(const std::string& key, const std::string& v) const {
    try {
      std::size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("trailing characters");
      return d;
    } catch (const std::exception&) {
      fail(where(key), "expected a number, got '" + v + "'");
    }
  }

  std::uint64_t parse_u64(const std::string& key, const std::string& v) const {
    try {
      std::size_t pos = 0;
      const unsigned long long u = std::stoull(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("trailing characters");
      return u;
    } catch (const std::exception&) {
      fail(where(key), "expected a nonnegative integer, got '" + v + "'");
    }
  }

  std::string name_;
  const std::map<std::string, std::string>* values_ = nullptr;
};

std::vector<scene::PointTarget> parse_points(const std::string& raw) {
  std::vector<scene::PointTarget> out;
  std::stringstream entries(raw);
  std::string entry;
  while (std::getline(entries, entry, ';')) {
    entry = trim(entry);
    if (entry.empty()) continue;
    std::stringstream fields(entry);
    std::string field;
    std::vector<double> vals;
    while (std::getline(fields, field, ',')) {
      field = trim(field);
      try {
        vals.push_back(std::stod(field));
      } catch (const std::exception&) {
        fail("[scene] points", "bad number '" + field + "' in entry '" + entry + "'");
      }
    }
    if (vals.size() != 3 && vals.size() != 4) {
      fail("[scene] points", "entry '" + entry + "' needs x,y,re[,im]");
    }
    scene::PointTarget p;
    p.x = vals[0];
    p.y = vals[1];
    p.amplitude = cplx{vals[2], vals.size() == 4 ? vals[3] : 0.0};
    out.push_back(p);
  }
  return out;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"scene",
       {"nx", "ny", "extent", "type", "points", "x_min", "x_max", "y_min",
        "y_max", "thickness", "amplitude", "amplitude_law"}},
      {"aperture",
       {"subapertures", "angles_per_subaperture", "frequencies",
        "theta_start_deg", "theta_end_deg", "center_freq_hz", "bandwidth_hz",
        "elevation_deg", "c_mps"}},
      {"sampling", {"fraction"}},
      {"noise", {"sigma", "snr_db"}},
      {"graph",
       {"sigma", "en_cutoff", "nltv_patch", "nltv_window",
        "nltv_patch_cutoff", "nltv_magnitude_only"}},
      {"solver",
       {"lambda_e", "lambda_f", "c_u", "c_z", "tol", "max_iter",
        "update_order"}},
      {"run",
       {"method", "seed", "workers", "out", "dump_measurements",
        "dump_graph"}},
  };
  return keys;
}

}  // namespace

ConfigMap parse_string(const std::string& text) {
  ConfigMap map;
  std::string section;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3) {
        fail("line " + std::to_string(lineno), "malformed section header '" + t + "'");
      }
      section = trim(t.substr(1, t.size() - 2));
      map[section];  // sections may be empty
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      fail("line " + std::to_string(lineno), "expected 'key = value', got '" + t + "'");
    }
    if (section.empty()) {
      fail("line " + std::to_string(lineno), "key outside any [section]");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) fail("line " + std::to_string(lineno), "empty key");
    map[section][key] = value;
  }
  return map;
}

ConfigMap parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

std::string serialize(const ConfigMap& map) {
  std::string out;
  for (const auto& [section, values] : map) {
    out += "[" + section + "]\n";
    for (const auto& [key, value] : values) {
      out += key + " = " + value + "\n";
    }
    out += "\n";
  }
  return out;
}

void set_value(ConfigMap& map, const std::string& section,
               const std::string& key, const std::string& value) {
  map[section][key] = value;
}

pipeline::ExperimentConfig to_experiment(const ConfigMap& map) {
  for (const auto& [section, values] : map) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) fail("[" + section + "]", "unknown section");
    for (const auto& [key, value] : values) {
      (void)value;
      if (it->second.count(key) == 0) {
        fail("[" + section + "]", "unknown key '" + key + "'");
      }
    }
  }

  pipeline::ExperimentConfig cfg;

  const Section sc(map, "scene");
  cfg.scene.nx = static_cast<std::size_t>(sc.require_u64("nx"));
  cfg.scene.ny = static_cast<std::size_t>(sc.require_u64("ny"));
  cfg.scene.extent = sc.require_double("extent");
  const std::string type = sc.get("type", "points");
  if (type == "points") {
    cfg.scene.kind = pipeline::SceneSpec::Kind::points;
    if (sc.has("points")) cfg.scene.points = parse_points(sc.require("points"));
  } else if (type == "rectangle" || type == "lshape") {
    cfg.scene.kind = type == "rectangle" ? pipeline::SceneSpec::Kind::rectangle
                                         : pipeline::SceneSpec::Kind::lshape;
    cfg.scene.rect.x_min = sc.require_double("x_min");
    cfg.scene.rect.x_max = sc.require_double("x_max");
    cfg.scene.rect.y_min = sc.require_double("y_min");
    cfg.scene.rect.y_max = sc.require_double("y_max");
    if (cfg.scene.kind == pipeline::SceneSpec::Kind::lshape) {
      cfg.scene.thickness = sc.require_double("thickness");
    }
  } else {
    fail("[scene] type", "expected points|rectangle|lshape, got '" + type + "'");
  }
  cfg.scene.amplitude = sc.get_double("amplitude", 1.0);
  const std::string law = sc.get("amplitude_law", "constant");
  if (law == "constant") {
    cfg.scene.law = scene::AmplitudeLaw::constant;
  } else if (law == "random-phase") {
    cfg.scene.law = scene::AmplitudeLaw::random_phase;
  } else {
    fail("[scene] amplitude_law", "expected constant|random-phase, got '" + law + "'");
  }

  const Section ap(map, "aperture");
  cfg.aperture.n_subapertures = static_cast<std::size_t>(ap.require_u64("subapertures"));
  cfg.aperture.angles_per_subaperture =
      static_cast<std::size_t>(ap.require_u64("angles_per_subaperture"));
  cfg.aperture.n_frequencies = static_cast<std::size_t>(ap.require_u64("frequencies"));
  cfg.aperture.theta_start_deg = ap.require_double("theta_start_deg");
  cfg.aperture.theta_end_deg = ap.require_double("theta_end_deg");
  cfg.aperture.center_freq_hz = ap.require_double("center_freq_hz");
  cfg.aperture.bandwidth_hz = ap.require_double("bandwidth_hz");
  cfg.aperture.elevation_deg = ap.get_double("elevation_deg", 0.0);
  cfg.aperture.c_mps = ap.get_double("c_mps", forward::kSpeedOfLight);

  const Section sa(map, "sampling");
  cfg.cs_fraction = sa.get_double("fraction", 1.0);

  const Section no(map, "noise");
  if (no.has("sigma") && no.has("snr_db")) {
    fail("[noise]", "give either sigma or snr_db, not both");
  }
  if (no.has("sigma")) cfg.noise.sigma = no.require_double("sigma");
  if (no.has("snr_db")) cfg.noise.snr_db = no.require_double("snr_db");

  const Section gr(map, "graph");
  cfg.graph.sigma = gr.get_double("sigma", 0.0);
  cfg.graph.en_cutoff = gr.get_double("en_cutoff", 0.0);
  cfg.graph.nltv_patch = static_cast<std::size_t>(gr.get_u64("nltv_patch", 3));
  cfg.graph.nltv_window = static_cast<std::size_t>(gr.get_u64("nltv_window", 21));
  cfg.graph.nltv_patch_cutoff = gr.get_double(
      "nltv_patch_cutoff", std::numeric_limits<double>::infinity());
  cfg.graph.nltv_magnitude_only = gr.get_bool("nltv_magnitude_only", false);

  const Section so(map, "run");
  cfg.method = pipeline::parse_method(so.get("method", "bp"));
  cfg.seed = so.get_u64("seed", 0);
  cfg.workers = static_cast<std::size_t>(so.get_u64("workers", 1));
  cfg.out_dir = so.get("out", "");
  cfg.dump_measurements = so.get_bool("dump_measurements", false);
  cfg.dump_graph = so.get_bool("dump_graph", false);

  const Section sv(map, "solver");
  const bool needs_solver = cfg.method != pipeline::Method::bp;
  if (needs_solver) {
    cfg.solver.lambda_e = sv.require_double("lambda_e");
    cfg.solver.lambda_f = sv.require_double("lambda_f");
  } else {
    cfg.solver.lambda_e = sv.get_double("lambda_e", 0.0);
    cfg.solver.lambda_f = sv.get_double("lambda_f", 0.0);
  }
  cfg.solver.c_u = sv.get_double("c_u", 1.0);
  cfg.solver.c_z = sv.get_double("c_z", 1.0);
  cfg.solver.tol = sv.get_double("tol", 1e-5);
  cfg.solver.max_iter = static_cast<std::size_t>(sv.get_u64("max_iter", 100));
  const std::string order = sv.get("update_order", "sequential");
  if (order == "sequential") {
    cfg.solver.update_order = solver::UpdateOrder::sequential;
  } else if (order == "jacobi") {
    cfg.solver.update_order = solver::UpdateOrder::jacobi;
  } else {
    fail("[solver] update_order", "expected sequential|jacobi, got '" + order + "'");
  }

  return cfg;
}

}  // namespace sarimg::config
