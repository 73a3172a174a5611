#include <cmath>
#include <sstream>

#include "igalbm/solver.hpp"

namespace igalbm {

namespace {

std::size_t at(int a, int N, int k) { return static_cast<std::size_t>(a) * N + k; }

double density(const std::vector<double>& f, int N, int k) {
  double rho = 0.0;
  for (int a = 0; a < kQ; ++a) rho += f[at(a, N, k)];
  return rho;
}

Vec2 velocity(const std::vector<double>& f, int N, int k, double rho) {
  const auto& vs = d2q9();
  Vec2 j = Vec2::Zero();
  for (int a = 0; a < kQ; ++a) j += f[at(a, N, k)] * Vec2(vs.e[a][0], vs.e[a][1]);
  return j / rho;
}

// Outward unit normal of the edge in parametric space.
Vec2 param_normal(Edge e) {
  switch (e) {
    case Edge::XiMin: return {-1.0, 0.0};
    case Edge::XiMax: return {1.0, 0.0};
    case Edge::EtaMin: return {0.0, -1.0};
    case Edge::EtaMax: return {0.0, 1.0};
  }
  return Vec2::Zero();
}

bool is_moving(const EdgeCondition& c) { return c.wall_velocity.squaredNorm() > 0.0; }

}  // namespace

std::string_view edge_name(Edge e) {
  switch (e) {
    case Edge::XiMin: return "xi_min";
    case Edge::XiMax: return "xi_max";
    case Edge::EtaMin: return "eta_min";
    case Edge::EtaMax: return "eta_max";
  }
  return "?";
}

std::vector<int> edge_points(const CollocationSet& c, Edge e) {
  std::vector<int> pts;
  switch (e) {
    case Edge::XiMin:
    case Edge::XiMax: {
      const int i = e == Edge::XiMin ? 0 : c.n_u - 1;
      for (int j = 0; j < c.n_v; ++j) pts.push_back(c.index(i, j));
      break;
    }
    case Edge::EtaMin:
    case Edge::EtaMax: {
      const int j = e == Edge::EtaMin ? 0 : c.n_v - 1;
      for (int i = 0; i < c.n_u; ++i) pts.push_back(c.index(i, j));
      break;
    }
  }
  return pts;
}

std::vector<int> edge_inward(const CollocationSet& c, Edge e) {
  auto pts = edge_points(c, e);
  const int step = e == Edge::XiMin ? 1 : e == Edge::XiMax ? -1 : e == Edge::EtaMin ? c.n_u : -c.n_u;
  for (int& k : pts) k += step;
  return pts;
}

void apply_periodic_copy(std::vector<double>& f, const CollocationSet& c, bool xi_direction) {
  const int N = c.size();
  const auto src = edge_points(c, xi_direction ? Edge::XiMin : Edge::EtaMin);
  const auto dst = edge_points(c, xi_direction ? Edge::XiMax : Edge::EtaMax);
  for (std::size_t m = 0; m < src.size(); ++m) {
    for (int a = 0; a < kQ; ++a) f[at(a, N, dst[m])] = f[at(a, N, src[m])];
  }
}

void apply_bounce_back(std::vector<double>& f, const std::vector<double>& f_star, const CollocationSet& c,
                       const TransformedVelocities& et, Edge e, const Vec2& u_wall) {
  const auto& vs = d2q9();
  const int N = c.size();
  const Vec2 n = param_normal(e);
  for (int k : edge_points(c, e)) {
    const double rho_b = density(f_star, N, k);
    double scale = 0.0;
    for (int a = 0; a < kQ; ++a) scale = std::max(scale, std::hypot(et.at_xi(a, k), et.at_eta(a, k)));
    // Components tangent to a curved edge are zero only up to rounding.
    const double tol = 1e-10 * scale;
    for (int a = 1; a < kQ; ++a) {
      const double en = et.at_xi(a, k) * n.x() + et.at_eta(a, k) * n.y();
      if (en <= tol) continue;
      const double eu = vs.e[a][0] * u_wall.x() + vs.e[a][1] * u_wall.y();
      f[at(vs.opposite[a], N, k)] = f_star[at(a, N, k)] - 2.0 * vs.w[a] * rho_b * eu / vs.cs2;
    }
  }
}

void apply_equilibrium_wall(std::vector<double>& f, const std::vector<double>& f_star, const CollocationSet& c,
                            Edge e, const Vec2& u_wall) {
  const int N = c.size();
  for (int k : edge_points(c, e)) {
    const auto feq = equilibrium(density(f_star, N, k), u_wall);
    for (int a = 0; a < kQ; ++a) f[at(a, N, k)] = feq[a];
  }
}

void apply_farfield(std::vector<double>& f, const std::vector<double>& f_star, const CollocationSet& c, Edge e,
                    const EdgeCondition& bc, double time) {
  const int N = c.size();
  const auto pts = edge_points(c, e);
  const auto inner = edge_inward(c, e);
  for (std::size_t m = 0; m < pts.size(); ++m) {
    double rho_t = bc.rho_target;
    Vec2 u_t = bc.u_inflow;
    if (bc.target) bc.target(c.physical[pts[m]], time, rho_t, u_t);
    const auto feq_t = equilibrium(rho_t, u_t);
    const int ki = inner[m];
    const double rho_i = density(f_star, N, ki);
    const auto feq_i = equilibrium(rho_i, velocity(f_star, N, ki, rho_i));
    for (int a = 0; a < kQ; ++a) f[at(a, N, pts[m])] = feq_t[a] + (f_star[at(a, N, ki)] - feq_i[a]);
  }
}

void apply_outflow_neumann(std::vector<double>& f, const std::vector<double>& f_star, const CollocationSet& c,
                           Edge e) {
  const int N = c.size();
  const auto pts = edge_points(c, e);
  const auto inner = edge_inward(c, e);
  for (std::size_t m = 0; m < pts.size(); ++m) {
    for (int a = 0; a < kQ; ++a) f[at(a, N, pts[m])] = f_star[at(a, N, inner[m])];
  }
}

void validate_boundaries(const BoundarySpec& bc, bool periodic_u, bool periodic_v) {
  std::ostringstream errs;
  auto check_pair = [&](Edge lo, Edge hi, bool periodic_basis, const char* dir) {
    const bool p_lo = bc[lo].kind == BcKind::Periodic;
    const bool p_hi = bc[hi].kind == BcKind::Periodic;
    if (p_lo != p_hi) {
      errs << "periodic condition on " << edge_name(p_lo ? lo : hi) << " needs its partner "
           << edge_name(p_lo ? hi : lo) << "; ";
    }
    if (periodic_basis && !(p_lo && p_hi)) {
      errs << "the " << dir << " direction has a periodic basis, so both of its edges must be periodic; ";
    }
  };
  check_pair(Edge::XiMin, Edge::XiMax, periodic_u, "xi");
  check_pair(Edge::EtaMin, Edge::EtaMax, periodic_v, "eta");
  for (int e = 0; e < 4; ++e) {
    const auto& c = bc.edges[e];
    if (!c.wall_velocity.allFinite() || !c.u_inflow.allFinite() || !std::isfinite(c.rho_target)) {
      errs << edge_name(static_cast<Edge>(e)) << ": non-finite boundary data; ";
    }
    if (c.kind == BcKind::FarField && !c.target && !(c.rho_target > 0.0)) {
      errs << edge_name(static_cast<Edge>(e)) << ": far-field density must be positive; ";
    }
  }
  const std::string s = errs.str();
  if (!s.empty()) throw ConfigError("boundary conditions: " + s.substr(0, s.size() - 2));
}

void apply_boundaries(std::vector<double>& f, const BoundarySpec& bc, const CollocationSet& c,
                      const TransformedVelocities& et, double time, bool periodic_u, bool periodic_v) {
  if (bc[Edge::XiMin].kind == BcKind::Periodic && !periodic_u) apply_periodic_copy(f, c, true);
  if (bc[Edge::EtaMin].kind == BcKind::Periodic && !periodic_v) apply_periodic_copy(f, c, false);
  bool any = false;
  for (const auto& e : bc.edges) any = any || (e.kind != BcKind::None && e.kind != BcKind::Periodic);
  if (!any) return;
  const std::vector<double> f_star = f;
  constexpr std::array<Edge, 4> order{Edge::XiMin, Edge::XiMax, Edge::EtaMin, Edge::EtaMax};
  for (Edge e : order) {
    const auto& cond = bc[e];
    if (cond.kind == BcKind::Outflow) apply_outflow_neumann(f, f_star, c, e);
  }
  for (Edge e : order) {
    const auto& cond = bc[e];
    if (cond.kind == BcKind::FarField) apply_farfield(f, f_star, c, e, cond, time);
  }
  for (int pass = 0; pass < 2; ++pass) {
    const bool moving = pass == 1;
    for (Edge e : order) {
      const auto& cond = bc[e];
      if (is_moving(cond) != moving) continue;
      if (cond.kind == BcKind::BounceBack) apply_bounce_back(f, f_star, c, et, e, cond.wall_velocity);
      if (cond.kind == BcKind::EquilibriumWall) apply_equilibrium_wall(f, f_star, c, e, cond.wall_velocity);
    }
  }
}

}  // namespace igalbm
