#include "igalbm/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "igalbm/geometry.hpp"

namespace igalbm {

namespace {

constexpr double kPi = std::numbers::pi;

GeometryParams box_params(int degree, int elements, double lx, double ly) {
  GeometryParams g;
  g.degree = degree;
  g.elements_u = elements;
  g.elements_v = elements;
  g.length = lx;
  g.height = ly;
  return g;
}

void tgv_density_velocity(const TaylorGreenParams& p, const Vec2& x, double t, double& rho, Vec2& u) {
  const auto v = tgv_exact(x.x(), x.y(), t, p);
  rho = p.rho0 + (v.p - p.p0) / d2q9().cs2;
  u = Vec2(v.ux, v.uy);
}

// Upper corner of a box-like patch, i.e. its extent.
Vec2 patch_extent(const NurbsPatch2D& patch) {
  const auto& ku = patch.knots_u();
  const auto& kv = patch.knots_v();
  return map_point(patch, ku.domain_end(), kv.domain_end()) - map_point(patch, ku.domain_begin(), kv.domain_begin());
}

}  // namespace

double TaylorGreenParams::kx() const { return 2.0 * kPi / lx; }
double TaylorGreenParams::ky() const { return 2.0 * kPi / ly; }

TgvValue tgv_exact(double x, double y, double t, const TaylorGreenParams& p) {
  const double kx = p.kx(), ky = p.ky();
  const double decay = std::exp(-p.kappa2() * p.nu * t);
  TgvValue v;
  v.ux = -p.u0 * std::cos(kx * x) * std::sin(ky * y) * decay;
  v.uy = (kx / ky) * p.u0 * std::sin(kx * x) * std::cos(ky * y) * decay;
  v.p = p.p0 - 0.25 * p.rho0 * p.u0 * p.u0 *
                   (std::cos(2.0 * kx * x) + (kx / ky) * (kx / ky) * std::cos(2.0 * ky * y)) * decay * decay;
  return v;
}

CaseSpec tgv_case(const TaylorGreenParams& p, int resolution, int degree) {
  if (!(p.lx > 0.0) || !(p.ly > 0.0)) throw SetupError("taylor_green: box lengths must be positive");
  CaseSpec c;
  c.name = "taylor_green";
  c.patch = build_geometry(GeometryKind::PeriodicBox, box_params(degree, resolution, p.lx, p.ly));
  for (auto& e : c.boundaries.edges) e = EdgeCondition::periodic();
  c.initial = [p](const Vec2& x, double& rho, Vec2& u) { tgv_density_velocity(p, x, 0.0, rho, u); };
  c.nu = p.nu;
  c.u_ref = p.u0 * std::max(1.0, p.kx() / p.ky());
  return c;
}

CaseSpec tgv_curved_case(const TaylorGreenParams& p, int resolution, int degree, double amplitude) {
  GeometryParams g = box_params(degree, resolution - degree, p.lx, p.lx);
  g.amplitude = amplitude;
  CaseSpec c;
  c.name = "taylor_green_curved";
  c.patch = build_geometry(GeometryKind::CurvedQuad, g);
  EdgeCondition ff = EdgeCondition::farfield(p.rho0, Vec2::Zero());
  ff.target = [p](const Vec2& x, double t, double& rho, Vec2& u) { tgv_density_velocity(p, x, t, rho, u); };
  for (auto& e : c.boundaries.edges) e = ff;
  c.initial = [p](const Vec2& x, double& rho, Vec2& u) { tgv_density_velocity(p, x, 0.0, rho, u); };
  c.nu = p.nu;
  c.u_ref = p.u0;
  return c;
}

double l2_error(const std::vector<double>& ux, const std::vector<double>& uy, const std::vector<double>& ex,
                const std::vector<double>& ey) {
  if (ux.size() != ex.size() || uy.size() != ey.size() || ux.size() != uy.size()) {
    throw DomainError("l2_error: field sizes differ");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < ux.size(); ++k) {
    num += (ux[k] - ex[k]) * (ux[k] - ex[k]) + (uy[k] - ey[k]) * (uy[k] - ey[k]);
    den += ex[k] * ex[k] + ey[k] * ey[k];
  }
  if (!(den > 0.0)) throw DomainError("l2_error: exact field is identically zero");
  return std::sqrt(num / den);
}

double tgv_error(const Fields& fields, const CollocationSet& colloc, double t, const TaylorGreenParams& p) {
  std::vector<double> ex(colloc.size()), ey(colloc.size());
  for (int k = 0; k < colloc.size(); ++k) {
    const auto v = tgv_exact(colloc.physical[k].x(), colloc.physical[k].y(), t, p);
    ex[k] = v.ux;
    ey[k] = v.uy;
  }
  return l2_error(fields.ux, fields.uy, ex, ey);
}

double fit_decay_rate(const std::vector<double>& t, const std::vector<double>& energy) {
  if (t.size() != energy.size() || t.size() < 2) throw DomainError("fit_decay_rate: need at least two samples");
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  const double n = static_cast<double>(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(energy[i] > 0.0)) throw DomainError("fit_decay_rate: energy must be positive");
    const double y = std::log(energy[i]);
    st += t[i];
    sy += y;
    stt += t[i] * t[i];
    sty += t[i] * y;
  }
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  return -slope;
}

CaseSpec cavity_case(const CavityParams& p, int resolution, int degree, bool equilibrium_walls) {
  if (!(p.re > 0.0)) throw SetupError("lid_cavity: Re must be positive");
  if (resolution <= degree) throw SetupError("lid_cavity: resolution must exceed the degree");
  CaseSpec c;
  c.name = "lid_cavity";
  c.patch = build_geometry(GeometryKind::UnitSquare, box_params(degree, resolution - degree, p.length, p.length));
  auto wall = [&](Vec2 u) { return equilibrium_walls ? EdgeCondition::equilibrium_wall(u) : EdgeCondition::wall(u); };
  c.boundaries[Edge::XiMin] = wall(Vec2::Zero());
  c.boundaries[Edge::XiMax] = wall(Vec2::Zero());
  c.boundaries[Edge::EtaMin] = wall(Vec2::Zero());
  c.boundaries[Edge::EtaMax] = wall(Vec2(p.u_lid, 0.0));
  c.initial = [](const Vec2&, double& rho, Vec2& u) {
    rho = 1.0;
    u = Vec2::Zero();
  };
  c.nu = p.nu();
  c.u_ref = p.u_lid;
  return c;
}

// ------------------------------------------------------------ SplineField

SplineField::SplineField(const Discretization& disc, const std::vector<double>& values) : disc_(&disc) {
  const auto& patch = disc.patch;
  const int nu = patch.n_u(), nv = patch.n_v();
  if (static_cast<int>(values.size()) != nu * nv) throw DomainError("SplineField: value count does not match grid");
  coef_.resize(values.size());
  if (patch.separable_weights()) {
    const auto cu = assemble_collocation_1d(patch.knots_u(), patch.weight_factors_u());
    const auto cv = assemble_collocation_1d(patch.knots_v(), patch.weight_factors_v());
    Eigen::Map<const Eigen::MatrixXd> V(values.data(), nu, nv);
    const Eigen::MatrixXd X = cu.phi.partialPivLu().solve(V);
    Eigen::Map<Eigen::MatrixXd> C(coef_.data(), nu, nv);
    C = cv.phi.partialPivLu().solve(X.transpose()).transpose();
  } else {
    const auto mats = assemble_collocation(patch, disc.colloc);
    Eigen::Map<const Eigen::VectorXd> v(values.data(), nu * nv);
    Eigen::Map<Eigen::VectorXd>(coef_.data(), nu * nv) = mats.phi.partialPivLu().solve(v);
  }
}

double SplineField::operator()(double xi, double eta) const {
  const auto& patch = disc_->patch;
  const int nu = patch.n_u();
  if (patch.separable_weights()) {
    const auto bu = eval_rational1d(patch.knots_u(), patch.weight_factors_u(), xi);
    const auto bv = eval_rational1d(patch.knots_v(), patch.weight_factors_v(), eta);
    double s = 0.0;
    for (std::size_t b = 0; b < bv.value.size(); ++b) {
      const int j = patch.knots_v().global_index(bv.first + static_cast<int>(b));
      for (std::size_t a = 0; a < bu.value.size(); ++a) {
        const int i = patch.knots_u().global_index(bu.first + static_cast<int>(a));
        s += bu.value[a] * bv.value[b] * coef_[i + nu * j];
      }
    }
    return s;
  }
  const auto r = eval_nurbs2d(patch, xi, eta);
  double s = 0.0;
  for (std::size_t a = 0; a < r.index.size(); ++a) s += r.value[a] * coef_[r.index[a]];
  return s;
}

double SplineField::at_physical(const Vec2& x) const {
  const Vec2 p = invert_map(disc_->patch, x);
  return (*this)(p.x(), p.y());
}

Vec2 invert_map(const NurbsPatch2D& patch, const Vec2& x) {
  const auto& ku = patch.knots_u();
  const auto& kv = patch.knots_v();
  const Vec2 lo(ku.domain_begin(), kv.domain_begin());
  const Vec2 hi(ku.domain_end(), kv.domain_end());
  const double scale = std::max(1.0, patch_extent(patch).norm());
  Vec2 p = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    const Vec2 r = map_point(patch, p.x(), p.y()) - x;
    if (r.norm() < 1e-14 * scale) return p;
    const auto jd = jacobian(patch, p.x(), p.y());
    p -= jd.inv * r;
    if (!ku.periodic()) p.x() = std::clamp(p.x(), lo.x(), hi.x());
    if (!kv.periodic()) p.y() = std::clamp(p.y(), lo.y(), hi.y());
  }
  const Vec2 r = map_point(patch, p.x(), p.y()) - x;
  if (r.norm() > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "invert_map: point (" << x.x() << ", " << x.y() << ") is not inside the patch";
    throw DomainError(msg.str());
  }
  return p;
}

std::vector<Sample> centerline_extract(const Discretization& disc, const Fields& fields, CenterlineAxis axis,
                                       std::vector<double> coordinates) {
  std::sort(coordinates.begin(), coordinates.end());
  const Vec2 ext = patch_extent(disc.patch);
  const bool vertical = axis == CenterlineAxis::Vertical;
  const SplineField field(disc, vertical ? fields.ux : fields.uy);
  std::vector<Sample> out;
  out.reserve(coordinates.size());
  for (double c : coordinates) {
    const Vec2 x = vertical ? Vec2(0.5 * ext.x(), c) : Vec2(c, 0.5 * ext.y());
    out.push_back({c, field.at_physical(x)});
  }
  return out;
}

std::vector<Sample> centerline_extract(const Discretization& disc, const Fields& fields, CenterlineAxis axis,
                                       int n_samples) {
  if (n_samples < 2) throw DomainError("centerline_extract: need at least two samples");
  const Vec2 ext = patch_extent(disc.patch);
  const double L = axis == CenterlineAxis::Vertical ? ext.y() : ext.x();
  std::vector<double> c(n_samples);
  for (int i = 0; i < n_samples; ++i) c[i] = L * i / (n_samples - 1);
  return centerline_extract(disc, fields, axis, std::move(c));
}

ProfileError compare_ghia(const std::vector<Sample>& samples, const std::vector<Sample>& reference, double u_lid) {
  if (samples.size() != reference.size()) throw DomainError("compare_ghia: sample count differs from the reference");
  if (!(u_lid > 0.0)) throw DomainError("compare_ghia: U_lid must be positive");
  ProfileError e;
  double sq = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (std::abs(samples[i].coordinate - reference[i].coordinate) > 1e-12) {
      std::ostringstream msg;
      msg << "compare_ghia: sample " << i << " at " << samples[i].coordinate << ", reference station at "
          << reference[i].coordinate;
      throw DomainError(msg.str());
    }
    const double d = std::abs(samples[i].value / u_lid - reference[i].value);
    sq += d * d;
    e.max = std::max(e.max, d);
  }
  e.rms = std::sqrt(sq / static_cast<double>(samples.size()));
  return e;
}

std::vector<double> streamfunction(const Discretization& disc, const Fields& fields, int m) {
  if (m < 3) throw DomainError("streamfunction: grid too small");
  const Vec2 ext = patch_extent(disc.patch);
  const SplineField u(disc, fields.ux);
  // 4-point Gauss-Legendre on [-1, 1].
  const double g1 = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  const double g2 = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  const double w1 = (18.0 + std::sqrt(30.0)) / 36.0;
  const double w2 = (18.0 - std::sqrt(30.0)) / 36.0;
  const std::array<double, 4> gx{-g2, -g1, g1, g2};
  const std::array<double, 4> gw{w2, w1, w1, w2};
  std::vector<double> psi(static_cast<std::size_t>(m) * m, 0.0);
  const double hy = ext.y() / (m - 1);
  for (int i = 0; i < m; ++i) {
    const double x = ext.x() * i / (m - 1);
    double acc = 0.0;
    for (int j = 1; j < m; ++j) {
      const double y0 = hy * (j - 1);
      double s = 0.0;
      for (int q = 0; q < 4; ++q) s += gw[q] * u.at_physical(Vec2(x, y0 + 0.5 * hy * (gx[q] + 1.0)));
      acc += 0.5 * hy * s;
      psi[static_cast<std::size_t>(j) * m + i] = acc;
    }
  }
  return psi;
}

VortexTopology vortex_topology(const Discretization& disc, const Fields& fields, int m, double corner,
                               double threshold) {
  const Vec2 ext = patch_extent(disc.patch);
  const auto psi = streamfunction(disc, fields, m);
  VortexTopology t;
  auto at = [&](int i, int j) { return psi[static_cast<std::size_t>(j) * m + i]; };
  // Grid lines on the walls are excluded: their values only carry the
  // boundary scheme's slip error.
  for (int j = 1; j < m - 1; ++j) {
    for (int i = 1; i < m - 1; ++i) {
      if (std::abs(at(i, j)) > std::abs(t.psi_primary)) {
        t.psi_primary = at(i, j);
        t.primary_center = Vec2(ext.x() * i / (m - 1), ext.y() * j / (m - 1));
      }
    }
  }
  t.primary = t.psi_primary != 0.0;
  if (!t.primary) return t;
  const double sign = t.psi_primary > 0.0 ? 1.0 : -1.0;
  const double noise = threshold * std::abs(t.psi_primary);
  const int nc = static_cast<int>(std::floor(corner * (m - 1)));
  for (int j = 1; j <= nc; ++j) {
    for (int i = 1; i <= nc; ++i) {
      const double l = -sign * at(i, j);
      const double r = -sign * at(m - 1 - i, j);
      if (l > -sign * t.psi_bottom_left) t.psi_bottom_left = at(i, j);
      if (r > -sign * t.psi_bottom_right) t.psi_bottom_right = at(m - 1 - i, j);
    }
  }
  t.bottom_left = -sign * t.psi_bottom_left > noise;
  t.bottom_right = -sign * t.psi_bottom_right > noise;
  return t;
}

// ------------------------------------------------------------ convergence

double observed_order(double e_coarse, double e_fine, double h_coarse, double h_fine) {
  return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

std::vector<ConvergenceRow> convergence_study(const ConvergenceOptions& opts) {
  if (opts.resolutions.size() < 3) throw ConfigError("convergence study needs at least three resolutions");
  const double T = opts.final_time > 0.0 ? opts.final_time : opts.tgv.unit_decay_time();
  std::vector<ConvergenceRow> rows;
  for (int res : opts.resolutions) {
    ConvergenceRow row;
    row.resolution = res;
    row.h = opts.tgv.lx / res;
    try {
      const CaseSpec spec = tgv_case(opts.tgv, res, opts.degree);
      if (opts.exact_injection) {
        const auto colloc = make_collocation(spec.patch);
        Fields f;
        f.rho.assign(colloc.size(), opts.tgv.rho0);
        f.ux.resize(colloc.size());
        f.uy.resize(colloc.size());
        for (int k = 0; k < colloc.size(); ++k) {
          const auto v = tgv_exact(colloc.physical[k].x(), colloc.physical[k].y(), T, opts.tgv);
          f.ux[k] = v.ux;
          f.uy[k] = v.uy;
        }
        row.error = tgv_error(f, colloc, T, opts.tgv);
      } else {
        SolverConfig cfg = opts.solver;
        cfg.final_time = T;
        cfg.n_max = std::numeric_limits<long>::max();
        cfg.stop_on_convergence = false;
        cfg.output_every = std::numeric_limits<long>::max();
        Solver solver(spec, cfg);
        const auto result = solver.run();
        row.steps = result.state.step;
        row.error = tgv_error(result.fields, solver.disc().colloc, result.state.time, opts.tgv);
        const double m0 = result.history.front().total_mass;
        row.mass_drift = std::abs(result.history.back().total_mass - m0) / m0;
      }
    } catch (const std::exception& e) {
      row.ok = false;
      row.message = e.what();
    }
    row.order = std::numeric_limits<double>::quiet_NaN();
    if (!rows.empty() && rows.back().ok && row.ok && row.error > 0.0 && rows.back().error > 0.0) {
      row.order = observed_order(rows.back().error, row.error, rows.back().h, row.h);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace igalbm
