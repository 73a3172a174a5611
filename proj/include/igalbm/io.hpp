#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "igalbm/benchmarks.hpp"

namespace igalbm {

/// Fields at one instant. Pressure is recomputed from rho on output.
struct FieldSnapshot {
  Fields fields;
  double time = 0.0;
  long step = 0;
};

/// Full-precision scientific notation ("%.17e"), round-trips exactly.
std::string format_double(double x);

/// VTK legacy ASCII STRUCTURED_GRID: points are the physical collocation
/// points; point data carry density, pressure, velocity_magnitude and the
/// velocity vector. Throws std::runtime_error if the file cannot be written.
void write_vtk(const FieldSnapshot& snap, const CollocationSet& colloc, const std::string& path);

/// Header `coordinate,velocity`. Empty samples are an error and no file is
/// created.
void write_centerline_csv(const std::vector<Sample>& samples, const std::string& path);

/// Streams the diagnostics time series as CSV.
class DiagnosticsWriter {
public:
  explicit DiagnosticsWriter(const std::string& path);
  void write(const Diagnostics& d);

private:
  std::ofstream out_;
};

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& path);

}  // namespace igalbm
