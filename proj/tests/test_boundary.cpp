#include <doctest.h>

#include <random>

#include "igalbm/errors.hpp"
#include "igalbm/geometry.hpp"
#include "igalbm/solver.hpp"

using namespace igalbm;

namespace {

struct Grid {
  NurbsPatch2D patch;
  CollocationSet c;
  TransformedVelocities et;
};

Grid grid(GeometryKind kind, int degree = 2, int elements = 4) {
  GeometryParams gp;
  gp.degree = degree;
  gp.elements_u = elements;
  gp.elements_v = elements;
  Grid g;
  g.patch = build_geometry(kind, gp);
  g.c = make_collocation(g.patch);
  g.et = transform_velocities(precompute_metrics(g.patch, g.c), d2q9());
  return g;
}

std::vector<double> random_f(int N, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.02, 0.2);
  std::vector<double> f(static_cast<std::size_t>(kQ) * N);
  for (auto& x : f) x = U(rng);
  return f;
}

std::array<double, kQ> node(const std::vector<double>& f, int N, int k) {
  std::array<double, kQ> out{};
  for (int a = 0; a < kQ; ++a) out[a] = f[a * N + k];
  return out;
}

}  // namespace

TEST_CASE("edge point lists") {
  const auto g = grid(GeometryKind::UnitSquare, 2, 3);  // 5 x 5 points
  CHECK(edge_points(g.c, Edge::XiMin) == std::vector<int>{0, 5, 10, 15, 20});
  CHECK(edge_points(g.c, Edge::XiMax) == std::vector<int>{4, 9, 14, 19, 24});
  CHECK(edge_points(g.c, Edge::EtaMin) == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(edge_points(g.c, Edge::EtaMax) == std::vector<int>{20, 21, 22, 23, 24});
  CHECK(edge_inward(g.c, Edge::XiMin) == std::vector<int>{1, 6, 11, 16, 21});
  CHECK(edge_inward(g.c, Edge::EtaMax) == std::vector<int>{15, 16, 17, 18, 19});
  CHECK(edge_name(Edge::EtaMax) == "eta_max");
}

TEST_CASE("stationary bounce-back reflects outgoing populations and stops the normal flux") {
  for (auto kind : {GeometryKind::UnitSquare, GeometryKind::QuarterAnnulus, GeometryKind::CurvedQuad}) {
    const auto g = grid(kind);
    const int N = g.c.size();
    const auto& v = d2q9();
    for (Edge e : {Edge::XiMin, Edge::XiMax, Edge::EtaMin, Edge::EtaMax}) {
      const auto star = random_f(N, 17);
      auto f = star;
      apply_bounce_back(f, star, g.c, g.et, e, Vec2::Zero());
      for (int k : edge_points(g.c, e)) {
        // Normal mass flux through the edge in parametric space vanishes.
        const int comp = (e == Edge::XiMin || e == Edge::XiMax) ? 0 : 1;
        double flux = 0.0;
        for (int a = 0; a < kQ; ++a) flux += (comp == 0 ? g.et.at_xi(a, k) : g.et.at_eta(a, k)) * f[a * N + k];
        INFO(geometry_name(kind), " ", edge_name(e), " point ", k);
        CHECK(std::abs(flux) < 1e-14);
        CHECK(f[0 * N + k] == star[0 * N + k]);
        int changed = 0;
        for (int a = 0; a < kQ; ++a) {
          if (f[a * N + k] != star[a * N + k]) {
            ++changed;
            CHECK(f[a * N + k] == star[v.opposite[a] * N + k]);
          }
        }
        // Three directions leave an axis-aligned edge, up to four a skew one.
        CHECK(changed <= 4);
      }
    }
  }
}

TEST_CASE("moving-wall bounce-back keeps the wall equilibrium fixed") {
  const auto g = grid(GeometryKind::UnitSquare);
  const int N = g.c.size();
  const Vec2 uw(0.1, 0.0);
  std::vector<double> f(static_cast<std::size_t>(kQ) * N);
  for (int k = 0; k < N; ++k) {
    const auto feq = equilibrium(1.03, uw);
    for (int a = 0; a < kQ; ++a) f[a * N + k] = feq[a];
  }
  const auto star = f;
  apply_bounce_back(f, star, g.c, g.et, Edge::EtaMax, uw);
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i] - star[i]));
  CHECK(m < 1e-16);

  // From a random state, the formula is f_opp = f*_a - 2 w_a rho_b (e_a . u_w) / cs^2.
  const auto r = random_f(N, 5);
  auto h = r;
  apply_bounce_back(h, r, g.c, g.et, Edge::EtaMax, uw);
  const auto& v = d2q9();
  for (int k : edge_points(g.c, Edge::EtaMax)) {
    double rho = 0.0;
    for (int a = 0; a < kQ; ++a) rho += r[a * N + k];
    for (int a : {2, 5, 6}) {
      const double want = r[a * N + k] - 2.0 * v.w[a] * rho * (v.e[a][0] * uw.x()) / v.cs2;
      CHECK(h[v.opposite[a] * N + k] == doctest::Approx(want).epsilon(1e-15));
    }
  }
}

TEST_CASE("equilibrium wall") {
  const auto g = grid(GeometryKind::UnitSquare);
  const int N = g.c.size();
  const auto star = random_f(N, 2);
  auto f = star;
  apply_equilibrium_wall(f, star, g.c, Edge::XiMin, Vec2(0.0, 0.05));
  for (int k : edge_points(g.c, Edge::XiMin)) {
    const auto m = moments(node(f, N, k));
    const auto ms = moments(node(star, N, k));
    CHECK(m.rho == doctest::Approx(ms.rho).epsilon(1e-14));
    CHECK((m.u - Vec2(0.0, 0.05)).norm() < 1e-14);
  }
}

TEST_CASE("far-field: target moments plus the interior non-equilibrium part") {
  const auto g = grid(GeometryKind::UnitSquare);
  const int N = g.c.size();
  // Interior in equilibrium: the boundary must take exactly the target equilibrium.
  std::vector<double> f(static_cast<std::size_t>(kQ) * N);
  for (int k = 0; k < N; ++k) {
    const auto feq = equilibrium(1.0 + 0.01 * k / N, Vec2(0.02, 0.01 * k / N));
    for (int a = 0; a < kQ; ++a) f[a * N + k] = feq[a];
  }
  const auto star = f;
  apply_farfield(f, star, g.c, Edge::XiMax, EdgeCondition::farfield(0.98, Vec2(0.04, -0.01)), 0.0);
  for (int k : edge_points(g.c, Edge::XiMax)) {
    const auto m = moments(node(f, N, k));
    CHECK(m.rho == doctest::Approx(0.98).epsilon(1e-14));
    CHECK((m.u - Vec2(0.04, -0.01)).norm() < 1e-14);
  }
  // A target functor overrides the constants.
  auto bc = EdgeCondition::farfield(1.0, Vec2::Zero());
  bc.target = [](const Vec2& x, double t, double& rho, Vec2& u) {
    rho = 1.0 + 0.01 * t;
    u = Vec2(0.01 * x.y(), 0.0);
  };
  f = star;
  apply_farfield(f, star, g.c, Edge::EtaMin, bc, 2.0);
  for (int k : edge_points(g.c, Edge::EtaMin)) {
    const auto m = moments(node(f, N, k));
    CHECK(m.rho == doctest::Approx(1.02).epsilon(1e-14));
    CHECK(std::abs(m.u.x() - 0.01 * g.c.physical[k].y()) < 1e-14);
  }
}

TEST_CASE("outflow copies the inward neighbour") {
  const auto g = grid(GeometryKind::UnitSquare);
  const int N = g.c.size();
  const auto star = random_f(N, 3);
  auto f = star;
  apply_outflow_neumann(f, star, g.c, Edge::XiMax);
  const auto pts = edge_points(g.c, Edge::XiMax);
  const auto in = edge_inward(g.c, Edge::XiMax);
  for (std::size_t m = 0; m < pts.size(); ++m) {
    for (int a = 0; a < kQ; ++a) CHECK(f[a * N + pts[m]] == star[a * N + in[m]]);
  }
}

TEST_CASE("periodic copy on a clamped grid") {
  const auto g = grid(GeometryKind::UnitSquare);
  const int N = g.c.size();
  auto f = random_f(N, 4);
  apply_periodic_copy(f, g.c, true);
  const auto lo = edge_points(g.c, Edge::XiMin);
  const auto hi = edge_points(g.c, Edge::XiMax);
  for (std::size_t m = 0; m < lo.size(); ++m) {
    for (int a = 0; a < kQ; ++a) CHECK(f[a * N + hi[m]] == f[a * N + lo[m]]);
  }
}

TEST_CASE("boundary specifications are validated") {
  BoundarySpec bc;
  bc[Edge::XiMin] = EdgeCondition::periodic();
  bc[Edge::XiMax] = EdgeCondition::wall();
  bc[Edge::EtaMin] = EdgeCondition::wall();
  bc[Edge::EtaMax] = EdgeCondition::wall();
  CHECK_THROWS_AS(validate_boundaries(bc, false, false), ConfigError);
  bc[Edge::XiMax] = EdgeCondition::periodic();
  CHECK_NOTHROW(validate_boundaries(bc, false, false));
  CHECK_NOTHROW(validate_boundaries(bc, true, false));
  // A periodic basis has no edges to hold walls.
  CHECK_THROWS_AS(validate_boundaries(bc, false, true), ConfigError);
  bc[Edge::EtaMin] = EdgeCondition::farfield(-1.0, Vec2::Zero());
  CHECK_THROWS_AS(validate_boundaries(bc, false, false), ConfigError);
}

TEST_CASE("the moving lid wins at the corners") {
  const auto g = grid(GeometryKind::UnitSquare);
  const int N = g.c.size();
  BoundarySpec bc;
  bc[Edge::XiMin] = EdgeCondition::wall();
  bc[Edge::XiMax] = EdgeCondition::wall();
  bc[Edge::EtaMin] = EdgeCondition::wall();
  bc[Edge::EtaMax] = EdgeCondition::wall(Vec2(0.1, 0.0));
  const auto star = random_f(N, 6);
  auto f = star;
  apply_boundaries(f, bc, g.c, g.et, 0.0, false, false);
  auto lid = star;
  apply_bounce_back(lid, star, g.c, g.et, Edge::EtaMax, Vec2(0.1, 0.0));
  const int corner = g.c.index(0, g.c.n_v - 1);
  for (int a : {4, 7, 8}) CHECK(f[a * N + corner] == lid[a * N + corner]);
}
