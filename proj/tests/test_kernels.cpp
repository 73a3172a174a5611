#include <doctest.h>

#include <omp.h>

#include <random>

#include "igalbm/errors.hpp"
#include "igalbm/geometry.hpp"
#include "igalbm/kernels.hpp"

using namespace igalbm;

namespace {

struct Setup {
  NurbsPatch2D patch;
  CollocationSet colloc;
  DiffOperators ops;
  MetricData metrics;
  TransformedVelocities et;
};

Setup make_setup(GeometryKind kind, int degree, int elements) {
  GeometryParams gp;
  gp.degree = degree;
  gp.elements_u = elements;
  gp.elements_v = elements;
  Setup s;
  s.patch = build_geometry(kind, gp);
  s.colloc = make_collocation(s.patch);
  s.ops = make_diff_operators(s.patch, s.colloc);
  s.metrics = precompute_metrics(s.patch, s.colloc);
  s.et = transform_velocities(s.metrics, d2q9());
  return s;
}

std::vector<double> random_state(int N, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-0.02, 0.02), V(-0.05, 0.05);
  std::vector<double> f(static_cast<std::size_t>(kQ) * N);
  for (int k = 0; k < N; ++k) {
    const auto feq = equilibrium(1.0 + V(rng), Vec2(V(rng), V(rng)));
    for (int a = 0; a < kQ; ++a) f[a * N + k] = feq[a] * (1.0 + U(rng));
  }
  return f;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("parallel kernel matches the dense reference") {
  std::mt19937_64 rng(1);
  for (auto kind : {GeometryKind::PeriodicBox, GeometryKind::CurvedQuad, GeometryKind::QuarterAnnulus}) {
    const auto s = make_setup(kind, 3, 7);
    const int N = s.colloc.size();
    const auto dense = densify(s.ops);
    for (auto form : {ConvectionForm::Advective, ConvectionForm::Flux}) {
      const auto f = random_state(N, rng);
      std::vector<double> a(f.size()), b(f.size());
      RhsWorkspace ws;
      ws.resize(N);
      rhs_parallel({&s.ops, &s.et, 0.05, form}, f.data(), a.data(), ws);
      rhs_reference(dense, s.et, 0.05, form, f.data(), b.data());
      INFO(geometry_name(kind));
      CHECK(max_diff(a, b) < 1e-12);
    }
  }
}

TEST_CASE("kernel result does not depend on the thread count") {
  const auto s = make_setup(GeometryKind::CurvedQuad, 2, 9);
  std::mt19937_64 rng(2);
  const auto f = random_state(s.colloc.size(), rng);
  std::vector<double> a(f.size()), b(f.size());
  RhsWorkspace ws;
  ws.resize(s.colloc.size());
  const int before = omp_get_max_threads();
  omp_set_num_threads(1);
  rhs_parallel({&s.ops, &s.et, 0.1}, f.data(), a.data(), ws);
  omp_set_num_threads(4);
  rhs_parallel({&s.ops, &s.et, 0.1}, f.data(), b.data(), ws);
  omp_set_num_threads(before);
  CHECK(max_diff(a, b) == 0.0);
}

TEST_CASE("collision part of the RHS conserves mass and momentum") {
  // A spatially uniform state has no convection; R is the collision alone.
  const auto s = make_setup(GeometryKind::QuarterAnnulus, 2, 4);
  const int N = s.colloc.size();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> P(0.02, 0.25);
  const auto& v = d2q9();
  RhsWorkspace ws;
  ws.resize(N);
  for (int trial = 0; trial < 200; ++trial) {
    std::array<double, kQ> f0{};
    for (auto& x : f0) x = P(rng);
    std::vector<double> f(static_cast<std::size_t>(kQ) * N), r(f.size());
    for (int a = 0; a < kQ; ++a) std::fill_n(f.begin() + a * N, N, f0[a]);
    rhs_parallel({&s.ops, &s.et, 0.3}, f.data(), r.data(), ws);
    for (int k = 0; k < N; k += 5) {
      double m = 0.0;
      Vec2 p = Vec2::Zero();
      for (int a = 0; a < kQ; ++a) {
        m += r[a * N + k];
        p += r[a * N + k] * Vec2(v.e[a][0], v.e[a][1]);
      }
      CHECK(std::abs(m) < 1e-13);
      CHECK(p.cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("uniform equilibrium is a fixed point of the advective form on curved maps") {
  const auto s = make_setup(GeometryKind::CurvedQuad, 3, 6);
  const int N = s.colloc.size();
  const auto feq = equilibrium(1.0, Vec2(0.03, -0.01));
  std::vector<double> f(static_cast<std::size_t>(kQ) * N), r(f.size()), q(f.size());
  for (int a = 0; a < kQ; ++a) std::fill_n(f.begin() + a * N, N, feq[a]);
  RhsWorkspace ws;
  ws.resize(N);
  rhs_parallel({&s.ops, &s.et, 0.1, ConvectionForm::Advective}, f.data(), r.data(), ws);
  double m = 0.0;
  for (double x : r) m = std::max(m, std::abs(x));
  CHECK(m < 1e-13);
  // The flux form differentiates the varying e~ as well and is not steady.
  rhs_parallel({&s.ops, &s.et, 0.1, ConvectionForm::Flux}, f.data(), q.data(), ws);
  double mq = 0.0;
  for (double x : q) mq = std::max(mq, std::abs(x));
  CHECK(mq > 1e-6);
}

TEST_CASE("advective and flux forms agree on affine maps") {
  const auto s = make_setup(GeometryKind::UnitSquare, 3, 6);
  std::mt19937_64 rng(8);
  const auto f = random_state(s.colloc.size(), rng);
  std::vector<double> a(f.size()), b(f.size());
  RhsWorkspace ws;
  ws.resize(s.colloc.size());
  rhs_parallel({&s.ops, &s.et, 0.1, ConvectionForm::Advective}, f.data(), a.data(), ws);
  rhs_parallel({&s.ops, &s.et, 0.1, ConvectionForm::Flux}, f.data(), b.data(), ws);
  CHECK(max_diff(a, b) < 1e-11);
}

TEST_CASE("nonpositive density is reported") {
  const auto s = make_setup(GeometryKind::UnitSquare, 2, 3);
  const int N = s.colloc.size();
  std::vector<double> f(static_cast<std::size_t>(kQ) * N, 0.1), r(f.size());
  for (int a = 0; a < kQ; ++a) f[a * N + 3] = -0.2;
  RhsWorkspace ws;
  ws.resize(N);
  CHECK_THROWS_AS(rhs_parallel({&s.ops, &s.et, 0.1}, f.data(), r.data(), ws), DivergenceError);
}
