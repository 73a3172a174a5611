#pragma once

#include <Eigen/Dense>
#include <vector>

#include "igalbm/knot_vector.hpp"

namespace igalbm {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Tensor-product rational patch x(xi, eta) = sum_k R_k(xi, eta) P_k.
///
/// Control points and weights are stored with the u index fastest:
/// k = i + n_u * j. For a periodic direction the control net is understood
/// to repeat with a translation: P_{i+n} = P_i + period_shift.
class NurbsPatch2D {
public:
  NurbsPatch2D() = default;
  NurbsPatch2D(KnotVector knots_u, KnotVector knots_v, std::vector<Vec2> control_points,
               std::vector<double> weights, Vec2 period_shift_u = Vec2::Zero(),
               Vec2 period_shift_v = Vec2::Zero());

  const KnotVector& knots_u() const { return knots_u_; }
  const KnotVector& knots_v() const { return knots_v_; }
  int n_u() const { return knots_u_.n_basis(); }
  int n_v() const { return knots_v_.n_basis(); }
  int degree_u() const { return knots_u_.degree(); }
  int degree_v() const { return knots_v_.degree(); }
  int size() const { return n_u() * n_v(); }

  const Vec2& control_point(int i, int j) const { return control_points_[i + n_u() * j]; }
  double weight(int i, int j) const { return weights_[i + n_u() * j]; }
  const std::vector<Vec2>& control_points() const { return control_points_; }
  const std::vector<double>& weights() const { return weights_; }
  const Vec2& period_shift_u() const { return shift_u_; }
  const Vec2& period_shift_v() const { return shift_v_; }

  /// True when w_ij = a_i * b_j, so the rational basis factors per direction.
  bool separable_weights() const { return separable_; }
  const std::vector<double>& weight_factors_u() const { return weight_u_; }
  const std::vector<double>& weight_factors_v() const { return weight_v_; }

private:
  KnotVector knots_u_;
  KnotVector knots_v_;
  std::vector<Vec2> control_points_;
  std::vector<double> weights_;
  Vec2 shift_u_ = Vec2::Zero();
  Vec2 shift_v_ = Vec2::Zero();
  bool separable_ = false;
  std::vector<double> weight_u_;
  std::vector<double> weight_v_;
};

/// The (p+1)(q+1) active rational functions at one parameter.
struct RationalBasis2D {
  std::vector<int> index;    // global control index i + n_u * j
  std::vector<double> value;
  std::vector<double> d_xi;
  std::vector<double> d_eta;
  std::vector<Vec2> offset;  // periodic translation of the control point
};

struct JacobianData {
  Mat2 J = Mat2::Identity();     // columns: dx/dxi, dx/deta
  double det = 1.0;
  Mat2 inv = Mat2::Identity();   // rows: grad xi, grad eta
};

RationalBasis2D eval_nurbs2d(const NurbsPatch2D& patch, double xi, double eta);
Vec2 map_point(const NurbsPatch2D& patch, double xi, double eta);

/// Throws SingularMapError when |det J| < 1e-12.
JacobianData jacobian(const NurbsPatch2D& patch, double xi, double eta);

/// Inverse through the adjugate: [y_eta, -x_eta; -y_xi, x_xi] / det.
Mat2 inverse_jacobian(const Mat2& J, double det);

/// Univariate rational basis with per-function weights (used for the
/// separable factors of a patch).
struct RationalBasis1D {
  int first = 0;
  std::vector<double> value;
  std::vector<double> deriv;
};
RationalBasis1D eval_rational1d(const KnotVector& kv, const std::vector<double>& weights, double xi);

}  // namespace igalbm
