#include "igalbm/solver.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace igalbm {

namespace {

std::size_t at(int a, int N, int k) { return static_cast<std::size_t>(a) * N + k; }

bool all_finite(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

double norm2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * a[i] + b[i] * b[i];
  return std::sqrt(s);
}

double diff_norm2(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c,
                  const std::vector<double>& d) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i] - c[i], y = b[i] - d[i];
    s += x * x + y * y;
  }
  return std::sqrt(s);
}

}  // namespace

Fields compute_fields(const std::vector<double>& f, int N) {
  Fields out;
  out.rho.resize(N);
  out.ux.resize(N);
  out.uy.resize(N);
  for (int k = 0; k < N; ++k) {
    double fk[kQ];
    for (int a = 0; a < kQ; ++a) fk[a] = f[at(a, N, k)];
    const double rho = fk[0] + fk[1] + fk[2] + fk[3] + fk[4] + fk[5] + fk[6] + fk[7] + fk[8];
    if (!(rho > 0.0) || !std::isfinite(rho)) {
      std::ostringstream msg;
      msg << "density " << rho << " at point " << k;
      throw DivergenceError(msg.str(), -1);
    }
    out.rho[k] = rho;
    out.ux[k] = (fk[1] - fk[3] + fk[5] - fk[6] - fk[7] + fk[8]) / rho;
    out.uy[k] = (fk[2] - fk[4] + fk[5] + fk[6] - fk[7] - fk[8]) / rho;
  }
  return out;
}

Diagnostics diagnose(const Fields& fl, const MetricData& metrics) {
  Diagnostics d;
  for (int k = 0; k < fl.size(); ++k) {
    const double u2 = fl.ux[k] * fl.ux[k] + fl.uy[k] * fl.uy[k];
    d.total_mass += fl.rho[k] * metrics.area[k];
    d.kinetic_energy += 0.5 * fl.rho[k] * u2 * metrics.area[k];
    d.max_velocity = std::max(d.max_velocity, std::sqrt(u2));
  }
  return d;
}

double cfl_timestep(const MetricData& metrics, const TransformedVelocities& et, double cfl) {
  if (!(cfl > 0.0) || cfl > 1.0) throw ConfigError("CFL must be in (0, 1]");
  double worst = 0.0;
  for (int k = 0; k < metrics.size(); ++k) {
    for (int a = 0; a < kQ; ++a) {
      worst = std::max(worst, std::abs(et.at_xi(a, k)) / metrics.h_xi[k] + std::abs(et.at_eta(a, k)) / metrics.h_eta[k]);
    }
  }
  if (!(worst > 0.0)) throw SetupError("cfl_timestep: no moving direction");
  return cfl / worst;
}

double adaptive_timestep(const TransformedVelocities& et, double h_min, double cfl) {
  if (!(cfl > 0.0) || cfl > 1.0) throw ConfigError("CFL must be in (0, 1]");
  double fastest = 0.0;
  for (int k = 0; k < et.n; ++k) {
    for (int a = 0; a < kQ; ++a) fastest = std::max(fastest, std::hypot(et.at_xi(a, k), et.at_eta(a, k)));
  }
  return cfl * h_min / fastest;
}

void rk4_step(std::vector<double>& f, const RhsFunction& rhs, double dt, Rk4Workspace& ws, const StageHook& hook) {
  const std::size_t n = f.size();
  for (auto* v : {&ws.k1, &ws.k2, &ws.k3, &ws.k4, &ws.stage}) v->resize(n);
  auto check = [](const std::vector<double>& k, const char* name) {
    if (!all_finite(k)) throw DivergenceError(std::string("RK4 stage ") + name + " produced non-finite values", -1);
  };
  auto stage = [&](const std::vector<double>& k, double c) {
    for (std::size_t i = 0; i < n; ++i) ws.stage[i] = f[i] + c * k[i];
    if (hook) hook(ws.stage);
  };
  rhs(f.data(), ws.k1.data());
  check(ws.k1, "k1");
  stage(ws.k1, 0.5 * dt);
  rhs(ws.stage.data(), ws.k2.data());
  check(ws.k2, "k2");
  stage(ws.k2, 0.5 * dt);
  rhs(ws.stage.data(), ws.k3.data());
  check(ws.k3, "k3");
  stage(ws.k3, dt);
  rhs(ws.stage.data(), ws.k4.data());
  check(ws.k4, "k4");
  const double c = dt / 6.0;
  for (std::size_t i = 0; i < n; ++i) f[i] += c * (ws.k1[i] + 2.0 * ws.k2[i] + 2.0 * ws.k3[i] + ws.k4[i]);
}

double relative_change(const std::vector<double>& now, const std::vector<double>& before) {
  double d = 0.0, s = 0.0;
  for (std::size_t i = 0; i < now.size(); ++i) {
    d += (now[i] - before[i]) * (now[i] - before[i]);
    s += now[i] * now[i];
  }
  return std::sqrt(d) / (std::sqrt(s) + 1e-14);
}

bool check_convergence(const std::vector<double>& u_new, const std::vector<double>& u_old,
                       const std::vector<double>& rho_new, const std::vector<double>& rho_old, double eps) {
  return relative_change(u_new, u_old) < eps && relative_change(rho_new, rho_old) < eps;
}

Discretization discretize(const NurbsPatch2D& patch, const std::string& label) {
  Discretization d;
  d.patch = patch;
  d.colloc = make_collocation(patch);
  d.ops = make_diff_operators(patch, d.colloc, label);
  d.metrics = precompute_metrics(patch, d.colloc);
  d.et = transform_velocities(d.metrics, d2q9());
  return d;
}

Solver::Solver(CaseSpec spec, SolverConfig config) : spec_(std::move(spec)), config_(std::move(config)) {
  const bool pu = spec_.patch.knots_u().periodic();
  const bool pv = spec_.patch.knots_v().periodic();
  validate_boundaries(spec_.boundaries, pu, pv);
  if (!spec_.initial) throw SetupError(spec_.name + ": no initial field");
  if (!(spec_.nu > 0.0)) throw SetupError(spec_.name + ": viscosity must be positive");
  if (!(config_.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (config_.n_max < 0) throw ConfigError("max_steps must be >= 0");
  if (config_.threads > 0) omp_set_num_threads(config_.threads);

  disc_ = discretize(spec_.patch, spec_.name);

  if (config_.dt) {
    if (!(*config_.dt > 0.0)) throw ConfigError("dt must be positive");
    dt_ = *config_.dt;
  } else if (config_.adaptive_dt) {
    auto smallest = [](const KnotVector& kv) {
      const auto s = kv.local_spacing();
      return *std::min_element(s.begin(), s.end());
    };
    dt_ = adaptive_timestep(disc_.et, std::min(smallest(spec_.patch.knots_u()), smallest(spec_.patch.knots_v())),
                            config_.cfl);
  } else {
    dt_ = cfl_timestep(disc_.metrics, disc_.et, config_.cfl);
  }
  n_max_ = config_.n_max;
  if (config_.final_time) {
    const double T = *config_.final_time;
    if (!(T > 0.0)) throw ConfigError("final_time must be positive");
    const long n = static_cast<long>(std::ceil(T / dt_ - 1e-9));
    dt_ = T / static_cast<double>(n);
    n_max_ = std::min(n, config_.n_max);
  }

  if (config_.tau) {
    tau_ = *config_.tau;
    if (!(tau_ > 0.0)) throw ConfigError("tau must be positive");
  } else if (config_.relaxation == RelaxationMode::Lattice) {
    tau_ = relaxation_time(spec_.nu, dt_);
  } else {
    tau_ = continuous_relaxation_time(spec_.nu);
  }
  if (config_.relaxation == RelaxationMode::Lattice && tau_ / dt_ < 0.55) {
    warnings_.push_back("tau / dt = " + std::to_string(tau_ / dt_) + " is close to the stability limit 0.5");
  }
  // Real-axis limit of the RK4 stability region is about 2.785.
  if (dt_ / tau_ > 2.5) {
    warnings_.push_back("dt / tau = " + std::to_string(dt_ / tau_) +
                        " exceeds 2.5; RK4 is near its stability limit for the collision term");
  }

  double max_mach = 0.0;
  for (const auto& x : disc_.colloc.physical) {
    double rho = 1.0;
    Vec2 u = Vec2::Zero();
    spec_.initial(x, rho, u);
    max_mach = std::max(max_mach, mach_number(u));
  }
  max_mach = std::max(max_mach, spec_.u_ref / d2q9().cs());
  if (max_mach > kMachWarning) {
    warnings_.push_back("Mach number " + std::to_string(max_mach) + " exceeds " + std::to_string(kMachWarning));
  }

  if (config_.kernel == KernelKind::Reference) dense_ = densify(disc_.ops);
  ws_.resize(disc_.size());
  if (config_.mass_correction) {
    State s = initial_state();
    apply_boundaries(s.f, spec_.boundaries, disc_.colloc, disc_.et, 0.0, pu, pv);
    target_mass_ = total_mass(s.f);
  }
}

double Solver::total_mass(const std::vector<double>& f) const {
  const int N = disc_.size();
  double m = 0.0;
  for (int k = 0; k < N; ++k) {
    double rho = 0.0;
    for (int a = 0; a < kQ; ++a) rho += f[at(a, N, k)];
    m += disc_.metrics.area[k] * rho;
  }
  return m;
}

State Solver::initial_state() const {
  const int N = disc_.size();
  State s;
  s.f.resize(static_cast<std::size_t>(kQ) * N);
  for (int k = 0; k < N; ++k) {
    double rho = 1.0;
    Vec2 u = Vec2::Zero();
    spec_.initial(disc_.colloc.physical[k], rho, u);
    std::array<double, kQ> feq;
    try {
      feq = equilibrium(rho, u);
    } catch (const DomainError& e) {
      throw SetupError(spec_.name + ": initial field: " + e.what());
    }
    for (int a = 0; a < kQ; ++a) s.f[at(a, N, k)] = feq[a];
  }
  return s;
}

void Solver::rhs(const double* f, double* out) {
  if (dense_) {
    rhs_reference(*dense_, disc_.et, tau_, config_.convection, f, out);
    return;
  }
  const RhsContext ctx{&disc_.ops, &disc_.et, tau_, config_.convection};
  rhs_parallel(ctx, f, out, ws_);
}

void Solver::step(State& s) {
  const bool pu = spec_.patch.knots_u().periodic();
  const bool pv = spec_.patch.knots_v().periodic();
  auto rhs_fn = [this](const double* f, double* out) { rhs(f, out); };
  StageHook hook;
  if (config_.bc_per_stage) {
    hook = [&](std::vector<double>& stage) {
      apply_boundaries(stage, spec_.boundaries, disc_.colloc, disc_.et, s.time, pu, pv);
    };
  }
  rk4_step(s.f, rhs_fn, dt_, rk_, hook);
  s.time += dt_;
  s.step += 1;
  apply_boundaries(s.f, spec_.boundaries, disc_.colloc, disc_.et, s.time, pu, pv);
  if (config_.mass_correction) {
    const double m = total_mass(s.f);
    if (!(m > 0.0) || !std::isfinite(m)) throw DivergenceError("total mass is not positive", s.step);
    const double scale = target_mass_ / m;
    for (double& x : s.f) x *= scale;
  }
}

RunResult Solver::run(const RunSinks& sinks) {
  RunResult res;
  res.dt = dt_;
  res.tau = tau_;
  State s = initial_state();
  const int N = disc_.size();
  // Boundary values are part of the initial state as well.
  apply_boundaries(s.f, spec_.boundaries, disc_.colloc, disc_.et, 0.0, spec_.patch.knots_u().periodic(),
                   spec_.patch.knots_v().periodic());
  for (const auto& w : warnings_) {
    if (sinks.warning) sinks.warning(w);
  }

  Fields fields = compute_fields(s.f, N);
  Diagnostics diag = diagnose(fields, disc_.metrics);
  auto emit = [&](const Diagnostics& d) {
    res.history.push_back(d);
    if (sinks.diagnostics) sinks.diagnostics(d);
    if (sinks.snapshot) sinks.snapshot(s, fields);
  };
  emit(diag);
  Diagnostics last_good = diag;
  const long every = std::max(1L, config_.output_every);

  while (s.step < n_max_) {
    Fields previous = std::move(fields);
    const long attempt = s.step + 1;
    try {
      step(s);
      fields = compute_fields(s.f, N);
    } catch (const DivergenceError& e) {
      std::ostringstream msg;
      msg << "diverged at step " << attempt << ": " << e.what();
      throw SolverDivergence(msg.str(), attempt, last_good);
    }
    diag = diagnose(fields, disc_.metrics);
    diag.step = s.step;
    diag.time = s.time;
    const double du = diff_norm2(fields.ux, fields.uy, previous.ux, previous.uy) / (norm2(fields.ux, fields.uy) + 1e-14);
    const double drho = relative_change(fields.rho, previous.rho);
    diag.residual_u = du;
    diag.residual_rho = drho;
    last_good = diag;
    const bool done = config_.stop_on_convergence && du < config_.epsilon && drho < config_.epsilon;
    if (done) res.converged = true;
    if (done || s.step % every == 0 || s.step == n_max_) emit(diag);
    if (done) break;
  }
  res.state = std::move(s);
  res.fields = std::move(fields);
  return res;
}

}  // namespace igalbm
