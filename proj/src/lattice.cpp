#include "igalbm/lattice.hpp"

#include <cmath>
#include <sstream>

#include "igalbm/errors.hpp"

namespace igalbm {

double VelocitySet::cs() const { return std::sqrt(cs2); }

const VelocitySet& d2q9() {
  static const VelocitySet set = [] {
    VelocitySet s;
    s.e = {{{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};
    s.w = {4.0 / 9.0, 1.0 / 9.0, 1.0 / 9.0, 1.0 / 9.0, 1.0 / 9.0, 1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0};
    s.opposite = {0, 3, 4, 1, 2, 7, 8, 5, 6};
    s.cs2 = 1.0 / 3.0;
    return s;
  }();
  return set;
}

std::array<double, kQ> equilibrium(double rho, const Vec2& u) {
  if (!(rho > 0.0)) {
    std::ostringstream msg;
    msg << "equilibrium: density must be positive, got " << rho;
    throw DomainError(msg.str());
  }
  const auto& vs = d2q9();
  std::array<double, kQ> feq{};
  const double usq = u.squaredNorm();
  for (int a = 0; a < kQ; ++a) {
    const double eu = vs.e[a][0] * u.x() + vs.e[a][1] * u.y();
    feq[a] = vs.w[a] * rho * (1.0 + eu / vs.cs2 + eu * eu / (2.0 * vs.cs2 * vs.cs2) - usq / (2.0 * vs.cs2));
  }
  return feq;
}

Moments moments(const std::array<double, kQ>& f) {
  const auto& vs = d2q9();
  Moments m;
  for (int a = 0; a < kQ; ++a) {
    m.rho += f[a];
    m.u.x() += f[a] * vs.e[a][0];
    m.u.y() += f[a] * vs.e[a][1];
  }
  if (!(m.rho > 0.0)) {
    std::ostringstream msg;
    msg << "moments: nonpositive density " << m.rho;
    throw DivergenceError(msg.str(), -1);
  }
  m.u /= m.rho;
  m.p = m.rho * vs.cs2;
  return m;
}

double relaxation_time(double nu, double dt) {
  if (!(nu > 0.0) || !(dt > 0.0)) throw DomainError("relaxation_time: nu and dt must be positive");
  return nu / d2q9().cs2 + 0.5 * dt;
}

double viscosity(double tau, double dt) { return d2q9().cs2 * (tau - 0.5 * dt); }

double continuous_relaxation_time(double nu) {
  if (!(nu > 0.0)) throw DomainError("continuous_relaxation_time: nu must be positive");
  return nu / d2q9().cs2;
}

double mach_number(const Vec2& u) { return u.norm() / d2q9().cs(); }

TransformedVelocities transform_velocities(const MetricData& metrics, const VelocitySet& vset) {
  TransformedVelocities t;
  const int N = metrics.size();
  t.n = N;
  t.xi.resize(static_cast<std::size_t>(kQ) * N);
  t.eta.resize(static_cast<std::size_t>(kQ) * N);
  for (int a = 0; a < kQ; ++a) {
    const Vec2 e(vset.e[a][0], vset.e[a][1]);
    bool zx = true, ze = true;
    for (int k = 0; k < N; ++k) {
      const Vec2 et = metrics.jac[k].inv * e;
      t.xi[static_cast<std::size_t>(a) * N + k] = et.x();
      t.eta[static_cast<std::size_t>(a) * N + k] = et.y();
      zx = zx && et.x() == 0.0;
      ze = ze && et.y() == 0.0;
    }
    t.zero_xi[a] = zx;
    t.zero_eta[a] = ze;
  }
  return t;
}

}  // namespace igalbm
