#include "igalbm/geometry.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <json.hpp>
#include <sstream>

#include "igalbm/errors.hpp"

namespace igalbm {

namespace {

constexpr std::array<std::pair<GeometryKind, std::string_view>, 4> kGeometryNames{{
    {GeometryKind::UnitSquare, "unit_square"},
    {GeometryKind::PeriodicBox, "periodic_box"},
    {GeometryKind::CurvedQuad, "curved_quad"},
    {GeometryKind::QuarterAnnulus, "quarter_annulus"},
}};

void check_params(const GeometryParams& p) {
  if (p.degree < 1) throw SetupError("geometry: degree must be >= 1");
  if (p.elements_u < 1 || p.elements_v < 1) throw SetupError("geometry: need at least one element per direction");
  if (!(p.length > 0.0)) throw SetupError("geometry: length must be positive");
  if (p.height < 0.0) throw SetupError("geometry: height must be positive (or 0 for a square)");
}

double box_height(const GeometryParams& p) { return p.height > 0.0 ? p.height : p.length; }

NurbsPatch2D box_patch(KnotVector ku, KnotVector kv, double L, double H, bool periodic) {
  const auto gu = ku.greville_points();
  const auto gv = kv.greville_points();
  std::vector<Vec2> cps;
  cps.reserve(gu.size() * gv.size());
  for (double y : gv) {
    for (double x : gu) cps.emplace_back(L * x, H * y);
  }
  std::vector<double> w(cps.size(), 1.0);
  if (periodic) return NurbsPatch2D(std::move(ku), std::move(kv), std::move(cps), std::move(w), Vec2(L, 0.0), Vec2(0.0, H));
  return NurbsPatch2D(std::move(ku), std::move(kv), std::move(cps), std::move(w));
}

NurbsPatch2D curved_quad(const GeometryParams& p) {
  auto ku = KnotVector::clamped_uniform(p.degree, p.elements_u);
  auto kv = KnotVector::clamped_uniform(p.degree, p.elements_v);
  const auto gu = ku.greville_points();
  const auto gv = kv.greville_points();
  const double L = p.length;
  const double a = p.amplitude;
  const double pi = std::numbers::pi;
  const int nu = ku.n_basis();
  const int nv = kv.n_basis();
  std::vector<Vec2> cps;
  cps.reserve(nu * nv);
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) {
      Vec2 P(L * gu[i], L * gv[j]);
      const bool interior = i > 0 && i < nu - 1 && j > 0 && j < nv - 1;
      if (interior) {
        P.x() += a * L * std::sin(pi * gu[i]) * std::sin(2.0 * pi * gv[j]);
        P.y() += a * L * std::sin(2.0 * pi * gu[i]) * std::sin(pi * gv[j]);
      }
      cps.push_back(P);
    }
  }
  std::vector<double> w(cps.size(), 1.0);
  return NurbsPatch2D(std::move(ku), std::move(kv), std::move(cps), std::move(w));
}

NurbsPatch2D quarter_annulus(const GeometryParams& p) {
  if (p.degree < 2) throw SetupError("quarter_annulus: exact circular arcs need degree >= 2");
  if (!(p.r_inner > 0.0) || !(p.r_outer > p.r_inner)) throw SetupError("quarter_annulus: need 0 < r_inner < r_outer");

  auto ku = KnotVector::clamped_uniform(p.degree, p.elements_u);
  auto kv = KnotVector::clamped_uniform(p.degree, p.elements_v);

  // The unit quarter circle as a homogeneous quadratic Bezier curve. Any
  // clamped spline space of degree >= 2 on [0, 1] contains it, so
  // interpolation at the Greville points recovers its coefficients exactly.
  const double s = std::sqrt(0.5);
  const std::array<Eigen::Vector3d, 3> H{Eigen::Vector3d(1.0, 0.0, 1.0), Eigen::Vector3d(s, s, s),
                                         Eigen::Vector3d(0.0, 1.0, 1.0)};
  const auto gv = kv.greville_points();
  const int nv = kv.n_basis();
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(nv, nv);
  Eigen::MatrixXd rhs(nv, 3);
  for (int m = 0; m < nv; ++m) {
    const auto b = kv.eval_basis(gv[m]);
    for (int a = 0; a <= kv.degree(); ++a) phi(m, b.first + a) = b.values[a];
    const double t = gv[m];
    const Eigen::Vector3d h = (1 - t) * (1 - t) * H[0] + 2 * t * (1 - t) * H[1] + t * t * H[2];
    rhs.row(m) = h.transpose();
  }
  const Eigen::MatrixXd coef = phi.partialPivLu().solve(rhs);

  const auto gu = ku.greville_points();
  const int nu = ku.n_basis();
  std::vector<Vec2> cps;
  std::vector<double> w;
  cps.reserve(nu * nv);
  w.reserve(nu * nv);
  for (int j = 0; j < nv; ++j) {
    const double wj = coef(j, 2);
    if (!(wj > 0.0)) throw SetupError("quarter_annulus: arc refinement produced a nonpositive weight");
    const Vec2 C(coef(j, 0) / wj, coef(j, 1) / wj);
    for (int i = 0; i < nu; ++i) {
      const double r = p.r_inner + (p.r_outer - p.r_inner) * gu[i];
      cps.push_back(r * C);
      w.push_back(wj);
    }
  }
  return NurbsPatch2D(std::move(ku), std::move(kv), std::move(cps), std::move(w));
}

void check_orientation(const NurbsPatch2D& patch, std::string_view name) {
  const auto gu = patch.knots_u().greville_points();
  const auto gv = patch.knots_v().greville_points();
  for (std::size_t j = 0; j < gv.size(); ++j) {
    for (std::size_t i = 0; i < gu.size(); ++i) {
      double det = 0.0;
      try {
        det = jacobian(patch, gu[i], gv[j]).det;
      } catch (const SingularMapError&) {
        det = 0.0;
      }
      if (!(det > 0.0)) {
        std::ostringstream msg;
        msg << name << ": det J = " << det << " <= 0 at Greville point (" << i << ", " << j << ")";
        throw SetupError(msg.str());
      }
    }
  }
}

}  // namespace

std::string_view geometry_name(GeometryKind kind) {
  for (const auto& [k, name] : kGeometryNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<GeometryKind> geometry_from_name(std::string_view name) {
  for (const auto& [k, n] : kGeometryNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::vector<std::string> registered_geometries() {
  std::vector<std::string> names;
  for (const auto& entry : kGeometryNames) names.emplace_back(entry.second);
  return names;
}

NurbsPatch2D build_geometry(GeometryKind kind, const GeometryParams& params) {
  check_params(params);
  NurbsPatch2D patch;
  switch (kind) {
    case GeometryKind::UnitSquare:
      patch = box_patch(KnotVector::clamped_uniform(params.degree, params.elements_u),
                        KnotVector::clamped_uniform(params.degree, params.elements_v), params.length, box_height(params), false);
      break;
    case GeometryKind::PeriodicBox:
      patch = box_patch(KnotVector::periodic_uniform(params.degree, params.elements_u),
                        KnotVector::periodic_uniform(params.degree, params.elements_v), params.length, box_height(params), true);
      break;
    case GeometryKind::CurvedQuad:
      patch = curved_quad(params);
      break;
    case GeometryKind::QuarterAnnulus:
      patch = quarter_annulus(params);
      break;
  }
  check_orientation(patch, geometry_name(kind));
  return patch;
}

std::string dump_patch(const NurbsPatch2D& patch) {
  using nlohmann::json;
  auto knots = [](const KnotVector& kv) {
    json j;
    j["degree"] = kv.degree();
    j["n_basis"] = kv.n_basis();
    j["periodic"] = kv.periodic();
    j["knots"] = std::vector<double>(kv.knots().begin(), kv.knots().end());
    return j;
  };
  json doc;
  doc["knots_u"] = knots(patch.knots_u());
  doc["knots_v"] = knots(patch.knots_v());
  json cps = json::array();
  for (const auto& P : patch.control_points()) cps.push_back({P.x(), P.y()});
  doc["control_points"] = std::move(cps);
  doc["weights"] = patch.weights();
  doc["period_shift_u"] = {patch.period_shift_u().x(), patch.period_shift_u().y()};
  doc["period_shift_v"] = {patch.period_shift_v().x(), patch.period_shift_v().y()};
  return doc.dump(2);
}

}  // namespace igalbm
