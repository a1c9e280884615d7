#pragma once

#include "tumorctl/config.hpp"
#include "tumorctl/problem.hpp"

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <vector>

namespace tumorctl {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitDiverged = 2,
  kExitInfeasible = 3,
  kExitUsage = 4,
};

struct GradcheckReport {
  ControlVector gradient;
  std::vector<double> finite_difference;  // (J(u + h v) - J(u - h v)) / 2h
  std::vector<double> adjoint;            // <gradient, v>_U
  std::vector<double> relative_error;
  double max_relative_error = 0.0;
};

/// Compares the adjoint gradient with central differences of J_eps along
/// `directions` random unit directions (fixed seed). Difference quotients are
/// evaluated on up to `threads` threads.
GradcheckReport gradcheck(const Problem& problem, const ControlVector& u, int directions, double h,
                          std::uint64_t seed, int threads = 1);

/// Value of TUMORCTL_THREADS, at least 1.
int thread_count_from_env();

/// Forward solve with the seed control; writes s.csv, u.csv, snapshots,
/// cross_section.csv and manifest.json.
int cmd_simulate(const Config& config, const std::filesystem::path& out, std::ostream& log);

/// Gradient descent; writes iterates.csv (streamed), u.csv, s.csv, p2.csv,
/// snapshots, cross_section.csv and manifest.json.
int cmd_optimize(const Config& config, const std::filesystem::path& out, bool allow_infeasible,
                 std::ostream& log);

/// Exit 0 iff the largest relative error is at most 1e-3.
int cmd_gradcheck(const Config& config, const std::filesystem::path& out, std::ostream& log);

/// Exit 0 iff the constant-control feasibility condition holds.
int cmd_feasibility(const Config& config, std::ostream& log);

}  // namespace tumorctl
