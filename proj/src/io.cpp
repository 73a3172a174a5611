#include "igalbm/io.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace igalbm {

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", x);
  return buf;
}

void write_vtk(const FieldSnapshot& snap, const CollocationSet& colloc, const std::string& path) {
  const int N = colloc.size();
  if (snap.fields.size() != N) throw std::invalid_argument("write_vtk: snapshot does not match the grid");
  auto out = open_or_throw(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "igalbm step " << snap.step << " time " << format_double(snap.time) << "\n";
  out << "ASCII\nDATASET STRUCTURED_GRID\n";
  out << "DIMENSIONS " << colloc.n_u << " " << colloc.n_v << " 1\n";
  out << "POINTS " << N << " double\n";
  for (const auto& p : colloc.physical) out << format_double(p.x()) << " " << format_double(p.y()) << " 0\n";
  out << "POINT_DATA " << N << "\n";
  auto scalar = [&](const char* name, auto&& value) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (int k = 0; k < N; ++k) out << format_double(value(k)) << "\n";
  };
  const auto& f = snap.fields;
  scalar("density", [&](int k) { return f.rho[k]; });
  scalar("pressure", [&](int k) { return f.pressure(k); });
  scalar("velocity_magnitude", [&](int k) { return std::hypot(f.ux[k], f.uy[k]); });
  out << "VECTORS velocity double\n";
  for (int k = 0; k < N; ++k) out << format_double(f.ux[k]) << " " << format_double(f.uy[k]) << " 0\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_centerline_csv(const std::vector<Sample>& samples, const std::string& path) {
  if (samples.empty()) throw std::invalid_argument("write_centerline_csv: no samples");
  auto out = open_or_throw(path);
  out << "coordinate,velocity\n";
  for (const auto& s : samples) out << format_double(s.coordinate) << "," << format_double(s.value) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

DiagnosticsWriter::DiagnosticsWriter(const std::string& path) : out_(open_or_throw(path)) {
  out_ << "step,time,total_mass,kinetic_energy,max_velocity,residual_u,residual_rho\n";
}

void DiagnosticsWriter::write(const Diagnostics& d) {
  out_ << d.step << "," << format_double(d.time) << "," << format_double(d.total_mass) << ","
       << format_double(d.kinetic_energy) << "," << format_double(d.max_velocity) << ","
       << format_double(d.residual_u) << "," << format_double(d.residual_rho) << "\n";
  out_.flush();
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& path) {
  auto out = open_or_throw(path);
  out << "resolution,h,error,order,mass_drift,steps,status\n";
  for (const auto& r : rows) {
    out << r.resolution << "," << format_double(r.h) << "," << format_double(r.error) << ","
        << (std::isnan(r.order) ? std::string("") : format_double(r.order)) << "," << format_double(r.mass_drift)
        << "," << r.steps << "," << (r.ok ? "ok" : "failed") << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace igalbm
