#pragma once

#include "tumorctl/diffusion.hpp"
#include "tumorctl/model.hpp"
#include "tumorctl/problem.hpp"
#include "tumorctl/types.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tumorctl {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SeedControl { Zero, Dosing, ConstantFeasible };

const char* to_string(SeedControl seed);
SeedControl parse_seed_control(const std::string& name);

/// Every effective run setting, in day / cm units.
struct Config {
  ModelParams model;

  // spatial grid
  double edge = 3.0;                  // cm
  int nx = 61;
  int ny = 61;
  double diffusion = 2.5e-9 * 86400;  // cm^2/day
  std::string diffusion_field;        // optional plain-text matrix of per-cell k (cm^2/day)

  int nt = 2688;

  TumorShape tumor;
  std::optional<std::array<double, 4>> tracking_box;  // x0, x1, y0, y1 in cm

  // initial dosing schedule
  double dose_rate = 0.00014 * 86400;  // 1/day
  double dose_window = 1.0 / 24.0;     // day
  double dose_period = 1.0;            // day
  SeedControl seed_control = SeedControl::Dosing;

  std::vector<double> snapshot_times{0.0, 7.0, 14.0, 21.0, 28.0};

  // gradient check
  int gradcheck_directions = 5;
  double gradcheck_step = 1e-5;
  std::uint64_t seed = 20240601;

  void validate() const;
};

/// Named scenarios: "paper-sec6", "zero-control", "coarse".
Config preset(const std::string& name);

/// Parses either `key = value` lines (# comments) or a JSON object whose
/// nested sections are flattened. Values override `base`.
Config parse_config(const std::string& text, Config base = {});
Config load_config(const std::filesystem::path& path, Config base = {});

/// Canonical sectioned JSON with every effective value.
nlohmann::json to_json(const Config& config);

Grid make_grid(const Config& config);
TimeMesh make_mesh(const Config& config);
Field make_mask(const Config& config, const Grid& grid);
Problem make_problem(const Config& config);
ControlVector make_seed_control(const Config& config, const TimeMesh& mesh);

}  // namespace tumorctl
