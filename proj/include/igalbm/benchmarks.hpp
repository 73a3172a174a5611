#pragma once

#include <string>
#include <utility>
#include <vector>

#include "igalbm/solver.hpp"

namespace igalbm {

// ------------------------------------------------------------- Taylor-Green

struct TaylorGreenParams {
  double u0 = 0.05;
  double nu = 0.002;
  double rho0 = 1.0;
  double p0 = 1.0 / 3.0;  // reference pressure; only differences enter the density
  double lx = 1.0;
  double ly = 1.0;

  double kx() const;
  double ky() const;
  double kappa2() const { return kx() * kx() + ky() * ky(); }
  /// Time at which kappa^2 nu t = 1.
  double unit_decay_time() const { return 1.0 / (kappa2() * nu); }
};

struct TgvValue {
  double ux = 0.0;
  double uy = 0.0;
  double p = 0.0;
};

/// Viscous Taylor-Green solution: velocity decays as exp(-kappa^2 nu t),
/// pressure as exp(-2 kappa^2 nu t).
TgvValue tgv_exact(double x, double y, double t, const TaylorGreenParams& params);

/// Periodic box with `resolution` collocation points per direction. The
/// initial density is rho0 + (P - P0) / cs^2.
CaseSpec tgv_case(const TaylorGreenParams& params, int resolution, int degree);

/// Exploratory: the Taylor-Green field on curved_quad, with every edge a
/// far-field condition driven by the analytic solution.
CaseSpec tgv_curved_case(const TaylorGreenParams& params, int resolution, int degree, double amplitude);

/// ||u_num - u_exact|| / ||u_exact|| over all points and both components.
/// Throws DomainError when the exact field vanishes.
double l2_error(const std::vector<double>& ux, const std::vector<double>& uy, const std::vector<double>& ex,
                const std::vector<double>& ey);

/// Relative L2 velocity error of `fields` against the analytic solution at t.
double tgv_error(const Fields& fields, const CollocationSet& colloc, double t, const TaylorGreenParams& params);

/// Least-squares slope of -log(E) against t: the exponential decay rate.
double fit_decay_rate(const std::vector<double>& t, const std::vector<double>& energy);

// ------------------------------------------------------------------- cavity

struct CavityParams {
  double u_lid = 0.1;
  double re = 100.0;
  double length = 1.0;

  double nu() const { return u_lid * length / re; }
};

/// Unit-square cavity: lid (eta max) moving in +x, other walls at rest,
/// bounce-back everywhere (or equilibrium walls). Starts at rest, rho = 1.
CaseSpec cavity_case(const CavityParams& params, int resolution, int degree, bool equilibrium_walls = false);

// ------------------------------------------------------------ post-processing

/// Spline interpolant of point values on a discretization: the coefficients
/// Phi^-1 v are solved once, then evaluated anywhere.
class SplineField {
public:
  SplineField(const Discretization& disc, const std::vector<double>& values);
  double operator()(double xi, double eta) const;
  double at_physical(const Vec2& x) const;

private:
  const Discretization* disc_;
  std::vector<double> coef_;  // layout i + n_u * j
};

/// Parameter (xi, eta) of a physical point, by Newton iteration on the map.
/// Throws DomainError if the point is not inside the patch.
Vec2 invert_map(const NurbsPatch2D& patch, const Vec2& x);

struct Sample {
  double coordinate = 0.0;
  double value = 0.0;
};

enum class CenterlineAxis {
  Vertical,    // u_x along x = L/2, coordinate y
  Horizontal,  // u_y along y = L/2, coordinate x
};

/// Samples at `coordinates` (sorted ascending on return) from the spline
/// interpolant. The box is [0, L]^2 with L taken from the patch corner.
std::vector<Sample> centerline_extract(const Discretization& disc, const Fields& fields, CenterlineAxis axis,
                                       std::vector<double> coordinates);
std::vector<Sample> centerline_extract(const Discretization& disc, const Fields& fields, CenterlineAxis axis,
                                       int n_samples);

struct GhiaReference {
  std::vector<Sample> u_vertical;    // (y, u / U_lid)
  std::vector<Sample> v_horizontal;  // (x, v / U_lid)
  std::string provenance;
};

/// Parses the bundled reference file (two '#'-commented tables).
GhiaReference load_ghia(const std::string& path);
/// The bundled Re = 100 file.
GhiaReference load_ghia_re100();
std::string default_ghia_path();

struct ProfileError {
  double rms = 0.0;
  double max = 0.0;
};

/// |num / U_lid - ref| at the reference stations. Samples must sit at the
/// reference coordinates (1e-12), otherwise DomainError.
ProfileError compare_ghia(const std::vector<Sample>& samples, const std::vector<Sample>& reference, double u_lid);

struct VortexTopology {
  double psi_primary = 0.0;  // extremum of the streamfunction
  Vec2 primary_center = Vec2::Zero();
  double psi_bottom_left = 0.0;   // extremum of opposite sign in the corner box
  double psi_bottom_right = 0.0;
  bool primary = false;
  bool bottom_left = false;
  bool bottom_right = false;
};

/// psi(x, y) = int_0^y u_x(x, s) ds on an (m x m) grid over the square
/// [0, L]^2, with Gauss quadrature on the spline interpolant.
std::vector<double> streamfunction(const Discretization& disc, const Fields& fields, int m);

/// One primary vortex and counter-rotating regions in the bottom corner
/// boxes of side `corner` * L. Values below `threshold` times |psi_primary|
/// count as noise.
VortexTopology vortex_topology(const Discretization& disc, const Fields& fields, int m = 161, double corner = 0.3,
                               double threshold = 1e-8);

// --------------------------------------------------------- convergence study

struct ConvergenceRow {
  int resolution = 0;
  double h = 0.0;
  double error = 0.0;
  double order = 0.0;  // NaN on the first row or after a failed row
  double mass_drift = 0.0;
  long steps = 0;
  bool ok = true;
  std::string message;
};

struct ConvergenceOptions {
  TaylorGreenParams tgv;
  std::vector<int> resolutions{16, 32, 64};
  int degree = 3;
  double final_time = 0.0;  // 0 = one unit decay time
  SolverConfig solver;
  bool exact_injection = false;  // harness self-test: skip the solve
};

/// Runs the Taylor-Green case to a fixed time at each resolution. A
/// diverging resolution is reported in its row and the study continues.
std::vector<ConvergenceRow> convergence_study(const ConvergenceOptions& opts);

/// order = log(E_coarse / E_fine) / log(h_coarse / h_fine).
double observed_order(double e_coarse, double e_fine, double h_coarse, double h_fine);

}  // namespace igalbm
