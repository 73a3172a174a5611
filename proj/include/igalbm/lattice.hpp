#pragma once

#include <array>
#include <vector>

#include "igalbm/collocation.hpp"

namespace igalbm {

inline constexpr int kQ = 9;

/// D2Q9 velocity set with c = 1: alpha = 0 rest, 1..4 cardinal
/// (1,0), (0,1), (-1,0), (0,-1), 5..8 diagonal (1,1), (-1,1), (-1,-1), (1,-1).
struct VelocitySet {
  std::array<std::array<int, 2>, kQ> e{};
  std::array<double, kQ> w{};
  std::array<int, kQ> opposite{};
  double cs2 = 1.0 / 3.0;

  double cs() const;
};

const VelocitySet& d2q9();

/// Second-order Maxwellian truncation. Throws DomainError when rho <= 0.
std::array<double, kQ> equilibrium(double rho, const Vec2& u);

/// Same formula without argument checks, for the hot loops.
inline void equilibrium_unchecked(double rho, double ux, double uy, double* feq) {
  constexpr double w0 = 4.0 / 9.0, w1 = 1.0 / 9.0, w5 = 1.0 / 36.0;
  const double usq = 1.5 * (ux * ux + uy * uy);
  auto term = [&](double eu) { return 1.0 + 3.0 * eu + 4.5 * eu * eu - usq; };
  feq[0] = w0 * rho * (1.0 - usq);
  feq[1] = w1 * rho * term(ux);
  feq[2] = w1 * rho * term(uy);
  feq[3] = w1 * rho * term(-ux);
  feq[4] = w1 * rho * term(-uy);
  feq[5] = w5 * rho * term(ux + uy);
  feq[6] = w5 * rho * term(-ux + uy);
  feq[7] = w5 * rho * term(-ux - uy);
  feq[8] = w5 * rho * term(ux - uy);
}

struct Moments {
  double rho = 0.0;
  Vec2 u = Vec2::Zero();
  double p = 0.0;
};

/// rho = sum f, u = sum f e / rho with the physical velocities, p = rho cs^2.
/// Throws DivergenceError (step -1) when rho <= 0.
Moments moments(const std::array<double, kQ>& f);

/// Lattice relation tau = nu / cs^2 + dt / 2 for streaming-collision LBM.
double relaxation_time(double nu, double dt);
/// Inverse of relaxation_time: nu = cs^2 (tau - dt / 2).
double viscosity(double tau, double dt);

/// Relation for the time-continuous discrete-velocity equation that the RK4
/// solver integrates: tau = nu / cs^2.
double continuous_relaxation_time(double nu);

/// Mach number |u| / cs and the guard above which a warning is emitted.
inline constexpr double kMachWarning = 0.3;
double mach_number(const Vec2& u);

/// Per-point contravariant lattice velocities e~ = J^-1 e, layout [alpha * N + k].
struct TransformedVelocities {
  int n = 0;
  std::vector<double> xi;
  std::vector<double> eta;
  // True where the component vanishes at every point (its term is skipped).
  std::array<bool, kQ> zero_xi{};
  std::array<bool, kQ> zero_eta{};

  double at_xi(int alpha, int k) const { return xi[static_cast<std::size_t>(alpha) * n + k]; }
  double at_eta(int alpha, int k) const { return eta[static_cast<std::size_t>(alpha) * n + k]; }
};

TransformedVelocities transform_velocities(const MetricData& metrics, const VelocitySet& vset);

}  // namespace igalbm
