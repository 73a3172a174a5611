#include <doctest.h>

#include <random>

#include "igalbm/errors.hpp"
#include "igalbm/geometry.hpp"
#include "igalbm/lattice.hpp"

using namespace igalbm;

namespace {

// Generic second-order equilibrium from the velocity set itself.
std::array<double, kQ> generic_feq(double rho, Vec2 u) {
  const auto& v = d2q9();
  std::array<double, kQ> f{};
  for (int a = 0; a < kQ; ++a) {
    const double eu = v.e[a][0] * u.x() + v.e[a][1] * u.y();
    f[a] = v.w[a] * rho * (1 + eu / v.cs2 + eu * eu / (2 * v.cs2 * v.cs2) - u.squaredNorm() / (2 * v.cs2));
  }
  return f;
}

}  // namespace

TEST_CASE("D2Q9 moment identities") {
  const auto& v = d2q9();
  double s0 = 0.0;
  Vec2 s1 = Vec2::Zero();
  Mat2 s2 = Mat2::Zero();
  for (int a = 0; a < kQ; ++a) {
    const Vec2 e(v.e[a][0], v.e[a][1]);
    s0 += v.w[a];
    s1 += v.w[a] * e;
    s2 += v.w[a] * e * e.transpose();
    CHECK(v.e[v.opposite[a]][0] == -v.e[a][0]);
    CHECK(v.e[v.opposite[a]][1] == -v.e[a][1]);
  }
  CHECK(std::abs(s0 - 1.0) < 1e-15);
  CHECK(s1.norm() < 1e-15);
  CHECK((s2 - v.cs2 * Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(v.cs() == doctest::Approx(std::sqrt(1.0 / 3.0)));
}

TEST_CASE("equilibrium: generic formula, unchecked kernel, moment round-trip") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> R(0.5, 1.5), U(-0.15, 0.15);
  for (int s = 0; s < 1000; ++s) {
    const double rho = R(rng);
    const Vec2 u(U(rng), U(rng));
    const auto f = equilibrium(rho, u);
    const auto g = generic_feq(rho, u);
    std::array<double, kQ> h{};
    equilibrium_unchecked(rho, u.x(), u.y(), h.data());
    for (int a = 0; a < kQ; ++a) {
      CHECK(std::abs(f[a] - g[a]) < 1e-15);
      CHECK(std::abs(f[a] - h[a]) < 1e-16);
    }
    const auto m = moments(f);
    CHECK(std::abs(m.rho - rho) < 1e-14);
    CHECK((m.u - u).norm() < 1e-14);
    CHECK(m.p == doctest::Approx(rho / 3.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(equilibrium(0.0, Vec2::Zero()), DomainError);
  CHECK_THROWS_AS(equilibrium(-1.0, Vec2::Zero()), DomainError);
}

TEST_CASE("BGK collision conserves mass and momentum on random states") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> P(0.01, 0.3);
  const auto& v = d2q9();
  double worst_m = 0.0, worst_p = 0.0;
  for (int s = 0; s < 10000; ++s) {
    std::array<double, kQ> f{};
    for (auto& x : f) x = P(rng);
    const auto m = moments(f);
    const auto feq = equilibrium(m.rho, m.u);
    double dm = 0.0;
    Vec2 dp = Vec2::Zero();
    for (int a = 0; a < kQ; ++a) {
      const double omega = -(f[a] - feq[a]) / 0.7;
      dm += omega;
      dp += omega * Vec2(v.e[a][0], v.e[a][1]);
    }
    worst_m = std::max(worst_m, std::abs(dm));
    worst_p = std::max(worst_p, dp.cwiseAbs().maxCoeff());
  }
  CHECK(worst_m < 1e-13);
  CHECK(worst_p < 1e-13);
}

TEST_CASE("moments reject nonpositive density") {
  std::array<double, kQ> f{};
  CHECK_THROWS_AS(moments(f), DivergenceError);
}

TEST_CASE("relaxation relations") {
  CHECK(relaxation_time(0.01, 0.1) == doctest::Approx(0.03 + 0.05));
  CHECK(viscosity(relaxation_time(0.0123, 0.02), 0.02) == doctest::Approx(0.0123).epsilon(1e-14));
  CHECK(continuous_relaxation_time(0.002) == doctest::Approx(0.006));
  CHECK(mach_number(Vec2(0.1, 0.0)) == doctest::Approx(0.1 * std::sqrt(3.0)));
}

TEST_CASE("transformed velocities are J^-1 e") {
  GeometryParams gp;
  gp.length = 2.0;
  gp.degree = 2;
  const auto square = build_geometry(GeometryKind::UnitSquare, gp);
  const auto c = make_collocation(square);
  const auto et = transform_velocities(precompute_metrics(square, c), d2q9());
  for (int a = 0; a < kQ; ++a) {
    for (int k = 0; k < c.size(); ++k) {
      CHECK(et.at_xi(a, k) == doctest::Approx(d2q9().e[a][0] / 2.0).epsilon(1e-14));
      CHECK(et.at_eta(a, k) == doctest::Approx(d2q9().e[a][1] / 2.0).epsilon(1e-14));
    }
  }
  CHECK(et.zero_xi[0]);
  CHECK(et.zero_xi[2]);
  CHECK_FALSE(et.zero_xi[1]);
  CHECK(et.zero_eta[1]);

  const auto curved = build_geometry(GeometryKind::CurvedQuad, {});
  const auto cc = make_collocation(curved);
  const auto m = precompute_metrics(curved, cc);
  const auto ec = transform_velocities(m, d2q9());
  for (int k = 0; k < cc.size(); k += 7) {
    for (int a = 0; a < kQ; ++a) {
      const Vec2 e(d2q9().e[a][0], d2q9().e[a][1]);
      // J e~ must give back the physical lattice velocity.
      const Vec2 back = m.jac[k].J * Vec2(ec.at_xi(a, k), ec.at_eta(a, k));
      CHECK((back - e).norm() < 1e-13);
    }
  }
}
