#include "tumorctl/config.hpp"

#include "tumorctl/io.hpp"
#include "tumorctl/optimizer.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace tumorctl {

using nlohmann::json;

const char* to_string(SeedControl seed) {
  switch (seed) {
    case SeedControl::Zero: return "zero";
    case SeedControl::Dosing: return "dosing";
    case SeedControl::ConstantFeasible: return "constant-feasible";
  }
  return "unknown";
}

SeedControl parse_seed_control(const std::string& name) {
  if (name == "zero") return SeedControl::Zero;
  if (name == "dosing") return SeedControl::Dosing;
  if (name == "constant-feasible") return SeedControl::ConstantFeasible;
  throw ConfigError("seed_control: expected zero | dosing | constant-feasible, got '" + name + "'");
}

namespace {

constexpr double kSecondsPerDay = 86400.0;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

double as_number(const std::string& key, const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      std::size_t used = 0;
      const std::string text = trim(v.get<std::string>());
      const double d = std::stod(text, &used);
      if (used == text.size()) return d;
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("config key '" + key + "': expected a number, got " + v.dump());
}

int as_int(const std::string& key, const json& v) {
  const double d = as_number(key, v);
  if (d != std::floor(d) || std::abs(d) > 1e9) throw ConfigError("config key '" + key + "': expected an integer");
  return static_cast<int>(d);
}

bool as_bool(const std::string& key, const json& v) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
  }
  if (v.is_number_integer()) return v.get<int>() != 0;
  throw ConfigError("config key '" + key + "': expected true or false, got " + v.dump());
}

std::string as_string(const std::string& key, const json& v) {
  if (v.is_string()) return v.get<std::string>();
  throw ConfigError("config key '" + key + "': expected a string, got " + v.dump());
}

std::vector<double> as_list(const std::string& key, const json& v) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& x : v) out.push_back(as_number(key, x));
  } else if (v.is_string()) {
    for (const auto& item : split(v.get<std::string>(), ',')) out.push_back(as_number(key, json(item)));
  } else {
    out.push_back(as_number(key, v));
  }
  return out;
}

std::vector<std::pair<double, double>> as_table(const std::string& key, const json& v) {
  std::vector<std::pair<double, double>> out;
  if (v.is_array()) {
    for (const auto& pt : v) {
      if (!pt.is_array() || pt.size() != 2) throw ConfigError("config key '" + key + "': expected [s, d] pairs");
      out.emplace_back(as_number(key, pt[0]), as_number(key, pt[1]));
    }
  } else if (v.is_string()) {
    for (const auto& item : split(v.get<std::string>(), ',')) {
      const auto parts = split(item, ':');
      if (parts.size() != 2) throw ConfigError("config key '" + key + "': expected 's:d' pairs, got '" + item + "'");
      out.emplace_back(as_number(key, json(parts[0])), as_number(key, json(parts[1])));
    }
  } else {
    throw ConfigError("config key '" + key + "': expected a table of (s, d) points");
  }
  return out;
}

using Setter = std::function<void(Config&, const std::string&, const json&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> m;
    auto num = [&m](const char* key, auto member) {
      m[key] = [member](Config& c, const std::string& k, const json& v) { member(c) = as_number(k, v); };
    };
    auto integer = [&m](const char* key, auto member) {
      m[key] = [member](Config& c, const std::string& k, const json& v) { member(c) = as_int(k, v); };
    };
    // model
    num("M0", [](Config& c) -> double& { return c.model.M0; });
    num("lambda", [](Config& c) -> double& { return c.model.lambda; });
    num("eps", [](Config& c) -> double& { return c.model.eps; });
    num("s_minus", [](Config& c) -> double& { return c.model.s_minus; });
    num("s_plus", [](Config& c) -> double& { return c.model.s_plus; });
    num("s_c", [](Config& c) -> double& { return c.model.s_m; });
    num("s_m", [](Config& c) -> double& { return c.model.s_m; });
    num("t0", [](Config& c) -> double& { return c.model.t0; });
    num("T", [](Config& c) -> double& { return c.model.T; });
    num("rho", [](Config& c) -> double& { return c.model.rho; });
    m["growth_table"] = [](Config& c, const std::string& k, const json& v) {
      c.model.growth_table = (v.is_string() && trim(v.get<std::string>()) == "linear")
                                 ? std::vector<std::pair<double, double>>{}
                                 : as_table(k, v);
    };
    // optimizer
    num("delta", [](Config& c) -> double& { return c.model.delta; });
    integer("N", [](Config& c) -> int& { return c.model.N; });
    num("tol", [](Config& c) -> double& { return c.model.tol; });
    num("grad_tol", [](Config& c) -> double& { return c.model.grad_tol; });
    m["clamp_nonnegative"] = [](Config& c, const std::string& k, const json& v) {
      c.model.clamp_nonnegative = as_bool(k, v);
    };
    // grid
    num("edge", [](Config& c) -> double& { return c.edge; });
    integer("nx", [](Config& c) -> int& { return c.nx; });
    integer("ny", [](Config& c) -> int& { return c.ny; });
    num("diffusion", [](Config& c) -> double& { return c.diffusion; });
    m["diffusion_cm2_per_s"] = [](Config& c, const std::string& k, const json& v) {
      c.diffusion = as_number(k, v) * kSecondsPerDay;
    };
    m["diffusion_field"] = [](Config& c, const std::string& k, const json& v) { c.diffusion_field = as_string(k, v); };
    integer("nt", [](Config& c) -> int& { return c.nt; });
    // tumor
    num("tumor_diameter", [](Config& c) -> double& { return c.tumor.diameter; });
    num("tumor_center_x", [](Config& c) -> double& { return c.tumor.center_x; });
    num("tumor_center_y", [](Config& c) -> double& { return c.tumor.center_y; });
    num("tumor_amplitude", [](Config& c) -> double& { return c.tumor.amplitude; });
    num("tumor_mollify_width", [](Config& c) -> double& { return c.tumor.mollify_width; });
    m["tracking_box"] = [](Config& c, const std::string& k, const json& v) {
      if (v.is_null() || (v.is_string() && trim(v.get<std::string>()) == "none")) {
        c.tracking_box.reset();
        return;
      }
      const auto box = as_list(k, v);
      if (box.size() != 4) throw ConfigError("config key '" + k + "': expected x0, x1, y0, y1");
      c.tracking_box = std::array<double, 4>{box[0], box[1], box[2], box[3]};
    };
    // dosing
    num("dose_rate", [](Config& c) -> double& { return c.dose_rate; });
    m["dose_rate_per_s"] = [](Config& c, const std::string& k, const json& v) {
      c.dose_rate = as_number(k, v) * kSecondsPerDay;
    };
    num("dose_window", [](Config& c) -> double& { return c.dose_window; });
    m["dose_window_hours"] = [](Config& c, const std::string& k, const json& v) {
      c.dose_window = as_number(k, v) / 24.0;
    };
    num("dose_period", [](Config& c) -> double& { return c.dose_period; });
    m["seed_control"] = [](Config& c, const std::string& k, const json& v) {
      c.seed_control = parse_seed_control(as_string(k, v));
    };
    // output and checks
    m["snapshot_times"] = [](Config& c, const std::string& k, const json& v) { c.snapshot_times = as_list(k, v); };
    integer("gradcheck_directions", [](Config& c) -> int& { return c.gradcheck_directions; });
    num("gradcheck_step", [](Config& c) -> double& { return c.gradcheck_step; });
    m["seed"] = [](Config& c, const std::string& k, const json& v) {
      const double d = as_number(k, v);
      if (d < 0 || d != std::floor(d)) throw ConfigError("config key 'seed': expected a nonnegative integer");
      c.seed = static_cast<std::uint64_t>(d);
    };
    return m;
  }();
  return table;
}

void apply_keys(Config& config, const json& object) {
  for (const auto& [key, value] : object.items()) {
    if (value.is_object()) {
      apply_keys(config, value);  // sections only group keys
      continue;
    }
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(config, key, value);
  }
}

json parse_key_value(const std::string& text) {
  json object = json::object();
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;  // blank, or an ini-style section header
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string raw = trim(line.substr(eq + 1));
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;
    object[key] = value;
  }
  return object;
}

}  // namespace

void Config::validate() const {
  model.validate();
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid config: " + what);
  };
  require(edge > 0.0, "edge must be > 0");
  require(nx > 0 && ny > 0, "nx and ny must be > 0");
  require(diffusion > 0.0, "diffusion must be > 0 (0 < k0 <= k(x))");
  require(nt > 0, "nt must be > 0");
  require(dose_window > 0.0 && dose_window <= dose_period, "need 0 < dose_window <= dose_period");
  require(gradcheck_directions > 0, "gradcheck_directions must be > 0");
  require(gradcheck_step > 0.0, "gradcheck_step must be > 0");
  for (double t : snapshot_times) require(t >= 0.0 && t <= model.T, "snapshot times must lie in [0, T]");
  require(model.T / nt * model.growth_law().rho() < 1.0, "dt * sup d(s) must be < 1; increase nt");
}

Config preset(const std::string& name) {
  Config c;
  if (name == "paper-sec6") return c;
  if (name == "zero-control") {
    c.seed_control = SeedControl::Zero;
    return c;
  }
  if (name == "coarse") {
    c.nx = c.ny = 31;
    c.nt = 672;
    return c;
  }
  throw ConfigError("unknown preset '" + name + "' (paper-sec6 | zero-control | coarse)");
}

Config parse_config(const std::string& text, Config base) {
  const std::string body = trim(text);
  json object;
  if (!body.empty() && body.front() == '{') {
    try {
      object = json::parse(body);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config JSON: ") + e.what());
    }
  } else {
    object = parse_key_value(body);
  }
  apply_keys(base, object);
  base.validate();
  return base;
}

Config load_config(const std::filesystem::path& path, Config base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  Config c = parse_config(buffer.str(), std::move(base));
  if (!c.diffusion_field.empty()) {
    const auto p = std::filesystem::path(c.diffusion_field);
    if (p.is_relative()) c.diffusion_field = (path.parent_path() / p).string();
  }
  return c;
}

json to_json(const Config& c) {
  json table = json::array();
  for (const auto& [s, d] : c.model.growth_table) table.push_back({s, d});
  json j;
  j["model"] = {{"M0", c.model.M0},       {"lambda", c.model.lambda}, {"eps", c.model.eps},
                {"s_minus", c.model.s_minus}, {"s_plus", c.model.s_plus}, {"s_m", c.model.s_m},
                {"t0", c.model.t0},       {"T", c.model.T},           {"rho", c.model.rho},
                {"growth_table", c.model.growth_table.empty() ? json("linear") : table}};
  j["optimizer"] = {{"delta", c.model.delta},
                    {"N", c.model.N},
                    {"tol", c.model.tol},
                    {"grad_tol", c.model.grad_tol},
                    {"clamp_nonnegative", c.model.clamp_nonnegative}};
  j["grid"] = {{"edge", c.edge}, {"nx", c.nx}, {"ny", c.ny}, {"diffusion", c.diffusion},
               {"diffusion_field", c.diffusion_field}, {"nt", c.nt}};
  j["tumor"] = {{"tumor_diameter", c.tumor.diameter},
                {"tumor_center_x", c.tumor.center_x},
                {"tumor_center_y", c.tumor.center_y},
                {"tumor_amplitude", c.tumor.amplitude},
                {"tumor_mollify_width", c.tumor.mollify_width},
                {"tracking_box", c.tracking_box ? json(*c.tracking_box) : json("none")}};
  j["dosing"] = {{"dose_rate", c.dose_rate},
                 {"dose_window", c.dose_window},
                 {"dose_period", c.dose_period},
                 {"seed_control", to_string(c.seed_control)}};
  j["output"] = {{"snapshot_times", c.snapshot_times},
                 {"gradcheck_directions", c.gradcheck_directions},
                 {"gradcheck_step", c.gradcheck_step},
                 {"seed", c.seed}};
  return j;
}

Grid make_grid(const Config& c) {
  if (c.diffusion_field.empty()) return Grid::uniform(c.nx, c.ny, c.edge, c.diffusion);
  const Field k = read_matrix(c.diffusion_field);
  if (k.nx != c.nx || k.ny != c.ny) {
    throw ConfigError("diffusion_field: matrix is " + std::to_string(k.ny) + "x" + std::to_string(k.nx) +
                      ", grid is " + std::to_string(c.ny) + "x" + std::to_string(c.nx));
  }
  return Grid(c.nx, c.ny, c.edge, k.values);
}

TimeMesh make_mesh(const Config& c) { return TimeMesh(c.model.T, c.nt); }

Field make_mask(const Config& c, const Grid& grid) {
  if (!c.tracking_box) return {};
  const auto [x0, x1, y0, y1] = *c.tracking_box;
  Field mask(grid);
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const bool in = grid.x(i) >= x0 && grid.x(i) <= x1 && grid.y(j) >= y0 && grid.y(j) <= y1;
      mask(i, j) = in ? 1.0 : 0.0;
    }
  }
  return mask;
}

Problem make_problem(const Config& c) {
  Grid grid = make_grid(c);
  const TimeMesh mesh = make_mesh(c);
  Field y0 = initial_condition(grid, c.tumor);
  Field mask = make_mask(c, grid);
  return Problem(c.model, std::move(grid), mesh, std::move(y0), std::move(mask));
}

ControlVector make_seed_control(const Config& c, const TimeMesh& mesh) {
  switch (c.seed_control) {
    case SeedControl::Zero: return ControlVector::constant(mesh, 0.0);
    case SeedControl::Dosing: return dosing_init(mesh, c.dose_rate, c.dose_window, c.dose_period);
    case SeedControl::ConstantFeasible: return reference_constant_control(c.model, mesh);
  }
  throw ConfigError("unknown seed control");
}

}  // namespace tumorctl
