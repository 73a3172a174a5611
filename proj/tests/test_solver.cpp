#include <doctest.h>

#include <numbers>

#include "igalbm/benchmarks.hpp"
#include "igalbm/errors.hpp"
#include "igalbm/geometry.hpp"
#include "igalbm/solver.hpp"

using namespace igalbm;

namespace {

CaseSpec rest_case(GeometryKind kind, Vec2 u = Vec2::Zero()) {
  GeometryParams gp;
  gp.degree = 3;
  gp.elements_u = 6;
  gp.elements_v = 6;
  CaseSpec c;
  c.name = std::string(geometry_name(kind));
  c.patch = build_geometry(kind, gp);
  for (auto& e : c.boundaries.edges) e = EdgeCondition::wall();
  c.initial = [u](const Vec2&, double& rho, Vec2& v) {
    rho = 1.0;
    v = u;
  };
  c.nu = 0.01;
  return c;
}

double max_speed(const Fields& f) {
  double m = 0.0;
  for (int k = 0; k < f.size(); ++k) m = std::max(m, std::hypot(f.ux[k], f.uy[k]));
  return m;
}

}  // namespace

TEST_CASE("rest equilibrium is a fixed point on every walled geometry") {
  for (auto kind : {GeometryKind::UnitSquare, GeometryKind::CurvedQuad, GeometryKind::QuarterAnnulus}) {
    SolverConfig cfg;
    cfg.n_max = 100;
    cfg.stop_on_convergence = false;
    Solver s(rest_case(kind), cfg);
    const auto res = s.run();
    INFO(geometry_name(kind));
    CHECK(res.state.step == 100);
    CHECK(max_speed(res.fields) < 1e-13);
    for (const auto& d : res.history) CHECK(d.max_velocity < 1e-13);
  }
}

TEST_CASE("zero steps return the initial fields") {
  SolverConfig cfg;
  cfg.n_max = 0;
  Solver s(rest_case(GeometryKind::UnitSquare), cfg);
  const auto res = s.run();
  CHECK(res.state.step == 0);
  CHECK(res.history.size() == 1);
  CHECK(res.fields.rho.front() == doctest::Approx(1.0));
}

TEST_CASE("final time fixes the step count and divides it evenly") {
  SolverConfig cfg;
  cfg.final_time = 0.1;
  cfg.n_max = 1000000;
  cfg.stop_on_convergence = false;
  Solver s(rest_case(GeometryKind::UnitSquare), cfg);
  CHECK(s.dt() * s.n_max() == doctest::Approx(0.1).epsilon(1e-14));
  const auto res = s.run();
  CHECK(res.state.time == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(res.state.step == s.n_max());
}

TEST_CASE("relaxation relations") {
  SolverConfig cfg;
  cfg.dt = 0.002;
  Solver a(rest_case(GeometryKind::UnitSquare), cfg);
  CHECK(a.tau() == doctest::Approx(0.03));
  cfg.relaxation = RelaxationMode::Lattice;
  Solver b(rest_case(GeometryKind::UnitSquare), cfg);
  CHECK(b.tau() == doctest::Approx(0.031));
  cfg.tau = 0.5;
  Solver c(rest_case(GeometryKind::UnitSquare), cfg);
  CHECK(c.tau() == 0.5);
}

TEST_CASE("warnings for high Mach number and stiff relaxation") {
  SolverConfig cfg;
  Solver fast(rest_case(GeometryKind::UnitSquare, Vec2(0.2, 0.0)), cfg);
  bool mach = false;
  for (const auto& w : fast.warnings()) mach = mach || w.find("Mach") != std::string::npos;
  CHECK(mach);
  cfg.tau = 1e-4;
  Solver stiff(rest_case(GeometryKind::UnitSquare), cfg);
  bool st = false;
  for (const auto& w : stiff.warnings()) st = st || w.find("dt / tau") != std::string::npos;
  CHECK(st);
}

TEST_CASE("divergence is reported with the last good diagnostics") {
  SolverConfig cfg;
  cfg.dt = 0.5;  // far beyond the CFL limit
  cfg.n_max = 1000;
  cfg.stop_on_convergence = false;
  Solver s(tgv_case({}, 12, 3), cfg);
  try {
    s.run();
    FAIL("expected divergence");
  } catch (const SolverDivergence& e) {
    CHECK(e.step() >= 1);
    CHECK(e.last_good().step == e.step() - 1);
    CHECK(std::isfinite(e.last_good().total_mass));
  }
}

TEST_CASE("reference and parallel kernels give the same trajectory") {
  SolverConfig cfg;
  cfg.n_max = 20;
  cfg.cfl = 0.2;  // keeps dt / tau inside the RK4 region on this coarse grid
  cfg.stop_on_convergence = false;
  CavityParams cp;
  Solver a(cavity_case(cp, 12, 2), cfg);
  cfg.kernel = KernelKind::Reference;
  Solver b(cavity_case(cp, 12, 2), cfg);
  const auto ra = a.run();
  const auto rb = b.run();
  double m = 0.0;
  for (std::size_t i = 0; i < ra.state.f.size(); ++i) m = std::max(m, std::abs(ra.state.f[i] - rb.state.f[i]));
  CHECK(m < 1e-13);
}

TEST_CASE("runs are deterministic") {
  SolverConfig cfg;
  cfg.n_max = 30;
  cfg.cfl = 0.2;
  cfg.stop_on_convergence = false;
  Solver a(cavity_case({}, 10, 2), cfg);
  Solver b(cavity_case({}, 10, 2), cfg);
  CHECK(a.run().state.f == b.run().state.f);
}

TEST_CASE("mass correction holds the total mass") {
  SolverConfig cfg;
  cfg.n_max = 400;
  cfg.cfl = 0.3;
  cfg.stop_on_convergence = false;
  Solver plain(cavity_case({}, 16, 2), cfg);
  cfg.mass_correction = true;
  Solver fixed(cavity_case({}, 16, 2), cfg);
  const auto rp = plain.run();
  const auto rf = fixed.run();
  const double m0 = rf.history.front().total_mass;
  CHECK(std::abs(rf.history.back().total_mass - m0) < 1e-13);
  CHECK(std::abs(rp.history.back().total_mass - m0) > std::abs(rf.history.back().total_mass - m0));
  // Rescaling leaves u = sum(f e) / sum(f) alone; the flow differs only through rho.
  CHECK(max_speed(rf.fields) == doctest::Approx(max_speed(rp.fields)).epsilon(1e-3));
}

TEST_CASE("diagnostics integrate over the physical domain") {
  SolverConfig cfg;
  cfg.n_max = 0;
  auto spec = rest_case(GeometryKind::QuarterAnnulus);
  Solver s(spec, cfg);
  const auto res = s.run();
  // Area of the quarter annulus r in [1, 2] (trapezoidal rule on the grid).
  CHECK(res.history.front().total_mass == doctest::Approx(3.0 * std::numbers::pi / 4.0).epsilon(1e-2));
  CHECK(res.history.front().kinetic_energy == 0.0);
}

TEST_CASE("bad inputs are rejected") {
  SolverConfig cfg;
  auto spec = rest_case(GeometryKind::UnitSquare);
  spec.nu = 0.0;
  CHECK_THROWS_AS(Solver(spec, cfg), SetupError);
  spec = rest_case(GeometryKind::UnitSquare);
  spec.initial = nullptr;
  CHECK_THROWS_AS(Solver(spec, cfg), SetupError);
  spec = rest_case(GeometryKind::UnitSquare);
  cfg.dt = -1.0;
  CHECK_THROWS_AS(Solver(spec, cfg), ConfigError);
  spec.initial = [](const Vec2&, double& rho, Vec2& u) {
    rho = -1.0;
    u = Vec2::Zero();
  };
  cfg.dt.reset();
  Solver s(spec, cfg);
  CHECK_THROWS_AS(s.initial_state(), SetupError);
}
