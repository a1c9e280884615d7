#pragma once

#include "tumorctl/diffusion.hpp"
#include "tumorctl/model.hpp"
#include "tumorctl/optimizer.hpp"
#include "tumorctl/types.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace tumorctl {

/// Shortest round-trip decimal representation; output is byte-stable.
std::string format_number(double v);

/// ny rows of nx whitespace-separated values, row j = 0 first.
void write_matrix(const std::filesystem::path& path, const Field& f);
Field read_matrix(const std::filesystem::path& path);

/// Legacy VTK STRUCTURED_POINTS with the interior nodes as points.
void write_vtk(const std::filesystem::path& path, const Field& f, const Grid& grid, const std::string& name,
               double time);

/// t_day, s, s_minus, s_plus, s_c
void write_s_csv(const std::filesystem::path& path, const TimeSeries& s, const ModelParams& p,
                 const TimeMesh& mesh);

/// t_start_day, t_end_day, u_per_day
void write_u_csv(const std::filesystem::path& path, const ControlVector& u, const TimeMesh& mesh,
                 const std::string& column = "u_per_day");

/// Density along the horizontal center line (mean of the two middle rows
/// when ny is even).
std::vector<double> center_line(const Field& f);

/// x_cm, then one column per snapshot time.
void write_cross_section_csv(const std::filesystem::path& path, const std::vector<const Field*>& snapshots,
                             const std::vector<double>& times, const Grid& grid);

/// Streams one row per IterateRecord, flushing after each.
class IterateCsvWriter {
 public:
  explicit IterateCsvWriter(const std::filesystem::path& path);
  void write(const IterateRecord& r);

 private:
  std::ofstream out_;
};

}  // namespace tumorctl
