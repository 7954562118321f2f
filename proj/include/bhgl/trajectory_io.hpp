#ifndef BHGL_TRAJECTORY_IO_HPP
#define BHGL_TRAJECTORY_IO_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bhgl/config.hpp"
#include "bhgl/engine.hpp"

namespace bhgl {

// CSV with the fixed observable header. Absent values, and the zero
// variances of mean-field runs, are written as empty cells.
void write_csv(std::ostream& out, const std::vector<ObservableRecord>& samples);
std::string csv_text(const std::vector<ObservableRecord>& samples);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;

  int column(const std::string& name) const;  // -1 if missing
};

CsvTable read_csv(std::istream& in);
CsvTable load_csv(const std::string& path);

// key = value manifest of everything needed to reproduce a run.
std::string format_manifest(const RunConfig& config, const Trajectory& trajectory);

// gnuplot script plotting the standard panels from csv_name.
std::string plot_script(const std::string& csv_name, const std::string& title);

struct ColumnDeviation {
  std::string column;
  double max_abs = 0.0;
  double rms = 0.0;
  std::size_t points = 0;
  bool pass = false;
};

struct ComparisonReport {
  double t_begin = 0.0;
  double t_end = 0.0;
  std::vector<ColumnDeviation> columns;
  bool pass = true;
};

// Interpolates b linearly onto the times of a inside the common time range
// (optionally capped at t_max) and measures the deviation per column. With
// relative set, deviations are divided by max(|a|, floor) pointwise.
ComparisonReport compare_tables(const CsvTable& a, const CsvTable& b,
                                const std::vector<std::string>& columns, double tolerance,
                                bool relative = false, double t_max = -1.0);

std::string format_report(const ComparisonReport& report, double tolerance, bool relative);

}  // namespace bhgl

#endif  // BHGL_TRAJECTORY_IO_HPP
