#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "igalbm/collocation.hpp"
#include "igalbm/errors.hpp"
#include "igalbm/kernels.hpp"
#include "igalbm/lattice.hpp"

namespace igalbm {

/// Distribution values at the collocation points, layout [alpha * N + k].
struct State {
  std::vector<double> f;
  double time = 0.0;
  long step = 0;
};

/// Macroscopic fields; p = rho cs^2 is derived on demand.
struct Fields {
  std::vector<double> rho;
  std::vector<double> ux;
  std::vector<double> uy;

  int size() const { return static_cast<int>(rho.size()); }
  double pressure(int k) const { return rho[k] * d2q9().cs2; }
};

/// Throws DivergenceError (step -1) on a nonpositive or non-finite density.
Fields compute_fields(const std::vector<double>& f, int n_points);

// ---------------------------------------------------------------- boundaries

enum class Edge { XiMin = 0, XiMax = 1, EtaMin = 2, EtaMax = 3 };
std::string_view edge_name(Edge e);

enum class BcKind { None, Periodic, BounceBack, EquilibriumWall, FarField, Outflow };

/// Prescribed far-field state as a function of the physical point and time.
using FarFieldTarget = std::function<void(const Vec2& x, double t, double& rho, Vec2& u)>;

struct EdgeCondition {
  BcKind kind = BcKind::None;
  Vec2 wall_velocity = Vec2::Zero();  // BounceBack, EquilibriumWall
  double rho_target = 1.0;            // FarField
  Vec2 u_inflow = Vec2::Zero();       // FarField
  FarFieldTarget target;              // FarField; overrides the constants when set

  static EdgeCondition make(BcKind kind, Vec2 wall = Vec2::Zero(), double rho = 1.0, Vec2 u = Vec2::Zero()) {
    EdgeCondition c;
    c.kind = kind;
    c.wall_velocity = wall;
    c.rho_target = rho;
    c.u_inflow = u;
    return c;
  }
  static EdgeCondition periodic() { return make(BcKind::Periodic); }
  static EdgeCondition wall(Vec2 u = Vec2::Zero()) { return make(BcKind::BounceBack, u); }
  static EdgeCondition equilibrium_wall(Vec2 u = Vec2::Zero()) { return make(BcKind::EquilibriumWall, u); }
  static EdgeCondition farfield(double rho, Vec2 u) { return make(BcKind::FarField, Vec2::Zero(), rho, u); }
  static EdgeCondition outflow() { return make(BcKind::Outflow); }
};

struct BoundarySpec {
  std::array<EdgeCondition, 4> edges;

  EdgeCondition& operator[](Edge e) { return edges[static_cast<int>(e)]; }
  const EdgeCondition& operator[](Edge e) const { return edges[static_cast<int>(e)]; }
};

/// Point indices along an edge (in increasing tangential order) and the
/// neighbour one index inward along the edge normal.
std::vector<int> edge_points(const CollocationSet& colloc, Edge e);
std::vector<int> edge_inward(const CollocationSet& colloc, Edge e);

/// Periodic pairing. With a periodic basis in that direction there is no seam
/// and nothing to do; on clamped grids ("copy mode") the max edge takes the
/// values of the min edge.
void apply_periodic_copy(std::vector<double>& f, const CollocationSet& colloc, bool xi_direction);

/// Moving-wall bounce-back at the edge points. For every direction leaving
/// through the edge (e~ . n > 0 in parametric space) the opposite population
/// is set to f*_a - 2 w_a rho_b (e_a . u_wall) / cs^2. Values and rho_b are
/// read from the pre-boundary snapshot f_star.
void apply_bounce_back(std::vector<double>& f, const std::vector<double>& f_star, const CollocationSet& colloc,
                       const TransformedVelocities& et, Edge e, const Vec2& u_wall);

/// Sets every population at the edge to f^eq(rho_b, u_wall).
void apply_equilibrium_wall(std::vector<double>& f, const std::vector<double>& f_star,
                            const CollocationSet& colloc, Edge e, const Vec2& u_wall);

/// f(boundary) = f^eq(rho_t, u_t) + [f(x_i) - f^eq(x_i)] with x_i the inward
/// neighbour.
void apply_farfield(std::vector<double>& f, const std::vector<double>& f_star, const CollocationSet& colloc,
                    Edge e, const EdgeCondition& bc, double time);

/// Zeroth-order extrapolation: copies the inward neighbour.
void apply_outflow_neumann(std::vector<double>& f, const std::vector<double>& f_star,
                           const CollocationSet& colloc, Edge e);

/// Throws ConfigError for unpaired periodic edges or a mismatch with the
/// basis (a periodic direction has no edges to hold walls).
void validate_boundaries(const BoundarySpec& bc, bool periodic_u, bool periodic_v);

/// Applies every edge condition to f. Order: periodic copies, outflow,
/// far-field, stationary walls, moving walls last (moving walls win at
/// corners). Periodic pairs act only in directions whose basis is clamped.
void apply_boundaries(std::vector<double>& f, const BoundarySpec& bc, const CollocationSet& colloc,
                      const TransformedVelocities& et, double time, bool periodic_u, bool periodic_v);

// ------------------------------------------------------------- time stepping

/// dt = cfl * min_k 1 / max_a (|e~xi| / h_xi + |e~eta| / h_eta).
double cfl_timestep(const MetricData& metrics, const TransformedVelocities& et, double cfl);

/// dt = cfl * min_k min_a h_min / |e~_a|, with h_min the smallest parametric
/// Greville spacing. Constant for a fixed geometry.
double adaptive_timestep(const TransformedVelocities& et, double h_min_param, double cfl);

using RhsFunction = std::function<void(const double* f, double* out)>;
using StageHook = std::function<void(std::vector<double>& stage)>;

struct Rk4Workspace {
  std::vector<double> k1, k2, k3, k4, stage;
};

/// Classical RK4: f += dt/6 (k1 + 2 k2 + 2 k3 + k4). The optional hook is
/// applied to every intermediate stage state. Throws DivergenceError naming
/// the stage when a stage derivative is not finite.
void rk4_step(std::vector<double>& f, const RhsFunction& rhs, double dt, Rk4Workspace& ws,
              const StageHook& hook = {});

/// Relative change of both fields below eps (denominators guarded by 1e-14).
bool check_convergence(const std::vector<double>& u_new, const std::vector<double>& u_old,
                       const std::vector<double>& rho_new, const std::vector<double>& rho_old, double eps);
double relative_change(const std::vector<double>& now, const std::vector<double>& before);

// ------------------------------------------------------------------ the run

enum class RelaxationMode {
  Continuous,  // tau = nu / cs^2, the relation of the time-continuous model integrated here
  Lattice,     // tau = nu / cs^2 + dt / 2
};

enum class KernelKind { Parallel, Reference };

struct SolverConfig {
  double cfl = 0.5;
  std::optional<double> dt;          // overrides cfl when set
  std::optional<double> tau;         // overrides the relaxation relation when set
  RelaxationMode relaxation = RelaxationMode::Continuous;
  long n_max = 1000;
  std::optional<double> final_time;  // n_max = ceil(T / dt), dt = T / n_max
  double epsilon = 1e-8;
  bool stop_on_convergence = true;
  bool adaptive_dt = false;
  long output_every = 100;
  bool bc_per_stage = false;
  // Rescale f after every step so the total mass keeps its initial value.
  // Wall conditions on collocation grids leak mass; the rescaling leaves u unchanged.
  bool mass_correction = false;
  ConvectionForm convection = ConvectionForm::Advective;
  KernelKind kernel = KernelKind::Parallel;
  int threads = 1;                   // 0 = OpenMP default
};

/// Initial macroscopic state at a physical point.
using InitialField = std::function<void(const Vec2& x, double& rho, Vec2& u)>;

struct CaseSpec {
  std::string name;
  NurbsPatch2D patch;
  BoundarySpec boundaries;
  InitialField initial;
  double nu = 1e-3;
  double u_ref = 0.0;  // characteristic speed (Mach guard, normalizations)
};

struct Diagnostics {
  long step = 0;
  double time = 0.0;
  double total_mass = 0.0;
  double kinetic_energy = 0.0;  // sum of rho |u|^2 / 2 times the point areas
  double max_velocity = 0.0;
  double residual_u = 0.0;
  double residual_rho = 0.0;
};

Diagnostics diagnose(const Fields& fields, const MetricData& metrics);

/// Divergence during run(): carries the last diagnostics that were finite.
class SolverDivergence : public DivergenceError {
public:
  SolverDivergence(const std::string& what, long step, Diagnostics last_good)
      : DivergenceError(what, step), last_good_(last_good) {}
  const Diagnostics& last_good() const { return last_good_; }

private:
  Diagnostics last_good_;
};

struct RunSinks {
  std::function<void(const Diagnostics&)> diagnostics;  // every output interval and at the end
  std::function<void(const State&, const Fields&)> snapshot;  // every output interval and at the end
  std::function<void(const std::string&)> warning;
};

struct RunResult {
  State state;
  Fields fields;
  std::vector<Diagnostics> history;
  bool converged = false;
  double dt = 0.0;
  double tau = 0.0;
};

/// Precomputed, immutable per-geometry data.
struct Discretization {
  NurbsPatch2D patch;
  CollocationSet colloc;
  DiffOperators ops;
  MetricData metrics;
  TransformedVelocities et;

  int size() const { return colloc.size(); }
};

Discretization discretize(const NurbsPatch2D& patch, const std::string& label = "patch");

class Solver {
public:
  Solver(CaseSpec spec, SolverConfig config);

  const Discretization& disc() const { return disc_; }
  const CaseSpec& spec() const { return spec_; }
  const SolverConfig& config() const { return config_; }
  double dt() const { return dt_; }
  double tau() const { return tau_; }
  long n_max() const { return n_max_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  State initial_state() const;

  void rhs(const double* f, double* out);

  /// One RK4 step followed by the boundary conditions (and the mass
  /// correction when enabled).
  void step(State& s);
  /// Area-weighted sum of the density.
  double total_mass(const std::vector<double>& f) const;

  RunResult run(const RunSinks& sinks = {});

private:
  CaseSpec spec_;
  SolverConfig config_;
  Discretization disc_;
  double dt_ = 0.0;
  double tau_ = 0.0;
  long n_max_ = 0;
  double target_mass_ = 0.0;
  RhsWorkspace ws_;
  Rk4Workspace rk_;
  std::optional<DenseOperators> dense_;
  std::vector<std::string> warnings_;
};

}  // namespace igalbm
