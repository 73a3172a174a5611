#include "igalbm/nurbs_patch.hpp"

#include <cmath>
#include <sstream>

#include "igalbm/errors.hpp"

namespace igalbm {

NurbsPatch2D::NurbsPatch2D(KnotVector knots_u, KnotVector knots_v, std::vector<Vec2> control_points,
                           std::vector<double> weights, Vec2 period_shift_u, Vec2 period_shift_v)
    : knots_u_(std::move(knots_u)),
      knots_v_(std::move(knots_v)),
      control_points_(std::move(control_points)),
      weights_(std::move(weights)),
      shift_u_(period_shift_u),
      shift_v_(period_shift_v) {
  const std::size_t n = static_cast<std::size_t>(n_u()) * static_cast<std::size_t>(n_v());
  if (control_points_.size() != n || weights_.size() != n) {
    std::ostringstream msg;
    msg << "patch: control net has " << control_points_.size() << " points and " << weights_.size()
        << " weights, knot vectors require " << n_u() << "x" << n_v();
    throw SetupError(msg.str());
  }
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw SetupError("patch: weights must be finite and strictly positive");
  }

  weight_u_.resize(n_u());
  weight_v_.resize(n_v());
  const double w00 = weights_[0];
  for (int i = 0; i < n_u(); ++i) weight_u_[i] = weight(i, 0) / w00;
  for (int j = 0; j < n_v(); ++j) weight_v_[j] = weight(0, j);
  separable_ = true;
  for (int j = 0; j < n_v() && separable_; ++j) {
    for (int i = 0; i < n_u(); ++i) {
      const double w = weight(i, j);
      if (std::abs(w - weight_u_[i] * weight_v_[j]) > 1e-14 * w) {
        separable_ = false;
        break;
      }
    }
  }
}

RationalBasis2D eval_nurbs2d(const NurbsPatch2D& patch, double xi, double eta) {
  const auto& ku = patch.knots_u();
  const auto& kv = patch.knots_v();
  const auto bu = ku.eval_basis_derivs(xi);
  const auto bv = kv.eval_basis_derivs(eta);
  const int p = ku.degree();
  const int q = kv.degree();
  const long wraps_u = ku.reduce(xi).periods;
  const long wraps_v = kv.reduce(eta).periods;

  RationalBasis2D out;
  const int count = (p + 1) * (q + 1);
  out.index.resize(count);
  out.value.resize(count);
  out.d_xi.resize(count);
  out.d_eta.resize(count);
  out.offset.resize(count);

  double W = 0.0, W_xi = 0.0, W_eta = 0.0;
  int k = 0;
  for (int b = 0; b <= q; ++b) {
    const int jj = bv.first + b;
    const int j = kv.global_index(jj);
    for (int a = 0; a <= p; ++a, ++k) {
      const int ii = bu.first + a;
      const int i = ku.global_index(ii);
      const double w = patch.weight(i, j);
      out.index[k] = i + patch.n_u() * j;
      out.value[k] = w * bu.values[a] * bv.values[b];
      out.d_xi[k] = w * bu.derivs[a] * bv.values[b];
      out.d_eta[k] = w * bu.values[a] * bv.derivs[b];
      out.offset[k] = static_cast<double>(ku.wrap_count(ii) + wraps_u) * patch.period_shift_u() +
                      static_cast<double>(kv.wrap_count(jj) + wraps_v) * patch.period_shift_v();
      W += out.value[k];
      W_xi += out.d_xi[k];
      W_eta += out.d_eta[k];
    }
  }
  // Quotient rule: dR/dxi = (w N' M W - w N M W_xi) / W^2.
  for (int m = 0; m < count; ++m) {
    const double r = out.value[m] / W;
    out.d_xi[m] = (out.d_xi[m] - r * W_xi) / W;
    out.d_eta[m] = (out.d_eta[m] - r * W_eta) / W;
    out.value[m] = r;
  }
  return out;
}

Vec2 map_point(const NurbsPatch2D& patch, double xi, double eta) {
  const auto basis = eval_nurbs2d(patch, xi, eta);
  Vec2 x = Vec2::Zero();
  const auto& cps = patch.control_points();
  for (std::size_t m = 0; m < basis.index.size(); ++m) {
    x += basis.value[m] * (cps[basis.index[m]] + basis.offset[m]);
  }
  return x;
}

Mat2 inverse_jacobian(const Mat2& J, double det) {
  Mat2 inv;
  inv << J(1, 1), -J(0, 1), -J(1, 0), J(0, 0);
  return inv / det;
}

JacobianData jacobian(const NurbsPatch2D& patch, double xi, double eta) {
  const auto basis = eval_nurbs2d(patch, xi, eta);
  const auto& cps = patch.control_points();
  Vec2 x_xi = Vec2::Zero();
  Vec2 x_eta = Vec2::Zero();
  for (std::size_t m = 0; m < basis.index.size(); ++m) {
    const Vec2 P = cps[basis.index[m]] + basis.offset[m];
    x_xi += basis.d_xi[m] * P;
    x_eta += basis.d_eta[m] * P;
  }
  JacobianData jd;
  jd.J.col(0) = x_xi;
  jd.J.col(1) = x_eta;
  jd.det = x_xi.x() * x_eta.y() - x_eta.x() * x_xi.y();
  if (!(std::abs(jd.det) >= 1e-12)) {
    std::ostringstream msg;
    msg << "singular geometry map at (xi, eta) = (" << xi << ", " << eta << "), det J = " << jd.det;
    throw SingularMapError(msg.str(), xi, eta);
  }
  jd.inv = inverse_jacobian(jd.J, jd.det);
  return jd;
}

RationalBasis1D eval_rational1d(const KnotVector& kv, const std::vector<double>& weights, double xi) {
  const auto b = kv.eval_basis_derivs(xi);
  RationalBasis1D out;
  out.first = b.first;
  const int count = kv.degree() + 1;
  out.value.resize(count);
  out.deriv.resize(count);
  double W = 0.0, W_d = 0.0;
  for (int a = 0; a < count; ++a) {
    const double w = weights[kv.global_index(b.first + a)];
    out.value[a] = w * b.values[a];
    out.deriv[a] = w * b.derivs[a];
    W += out.value[a];
    W_d += out.deriv[a];
  }
  for (int a = 0; a < count; ++a) {
    const double r = out.value[a] / W;
    out.deriv[a] = (out.deriv[a] - r * W_d) / W;
    out.value[a] = r;
  }
  return out;
}

}  // namespace igalbm
