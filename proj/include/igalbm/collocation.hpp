#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "igalbm/nurbs_patch.hpp"

namespace igalbm {

/// Tensor-product Greville grid. Point k = i + n_u * j (u index fastest);
/// every per-point array in the solver uses this ordering.
struct CollocationSet {
  int n_u = 0;
  int n_v = 0;
  std::vector<double> xi;   // n_u abscissae
  std::vector<double> eta;  // n_v abscissae
  std::vector<Vec2> parametric;
  std::vector<Vec2> physical;

  int size() const { return n_u * n_v; }
  int index(int i, int j) const { return i + n_u * j; }
};

CollocationSet make_collocation(const NurbsPatch2D& patch);

struct CollocationMatrices {
  Eigen::MatrixXd phi;      // phi(k, m) = R_m(xi_k, eta_k)
  Eigen::MatrixXd phi_xi;
  Eigen::MatrixXd phi_eta;
};

/// Dense N x N collocation matrices of the rational basis and its first
/// parametric derivatives.
CollocationMatrices assemble_collocation(const NurbsPatch2D& patch, const CollocationSet& colloc);

/// One-dimensional collocation matrices of a (rational) univariate basis at
/// its Greville points.
struct Collocation1D {
  Eigen::MatrixXd phi;
  Eigen::MatrixXd phi_d;
};
Collocation1D assemble_collocation_1d(const KnotVector& kv, const std::vector<double>& weights);

/// Differentiation operators D_xi = Phi_xi Phi^-1 and D_eta = Phi_eta Phi^-1
/// acting on point values.
///
/// Stored either as dense N x N matrices or, for a separable basis, as the
/// Kronecker factors D_xi = I (x) A and D_eta = B (x) I with A (n_u x n_u)
/// and B (n_v x n_v). Both forms apply to the same point-value layout.
class DiffOperators {
public:
  DiffOperators() = default;
  static DiffOperators from_dense(Eigen::MatrixXd d_xi, Eigen::MatrixXd d_eta, int n_u, int n_v);
  static DiffOperators from_factors(Eigen::MatrixXd a_u, Eigen::MatrixXd b_v);

  bool factored() const { return factored_; }
  int n_u() const { return n_u_; }
  int n_v() const { return n_v_; }
  int size() const { return n_u_ * n_v_; }

  /// Factors (valid when factored()).
  const Eigen::MatrixXd& factor_xi() const { return a_; }
  const Eigen::MatrixXd& factor_eta() const { return b_; }

  /// Dense N x N form (materialized from the factors when needed).
  Eigen::MatrixXd dense_xi() const;
  Eigen::MatrixXd dense_eta() const;

  /// out = D * in for `count` consecutive fields of length N.
  void apply_xi(const double* in, double* out, int count = 1) const;
  void apply_eta(const double* in, double* out, int count = 1) const;

private:
  bool factored_ = false;
  int n_u_ = 0;
  int n_v_ = 0;
  Eigen::MatrixXd a_;
  Eigen::MatrixXd b_;
  Eigen::MatrixXd dense_xi_;
  Eigen::MatrixXd dense_eta_;
};

/// Condition-number ceiling for Phi; above it operator construction fails.
inline constexpr double kMaxCollocationCondition = 1e12;

/// Dense route: one LU factorization of Phi, solved against both derivative
/// matrices. Throws SetupError naming `label` if Phi is numerically singular.
DiffOperators build_diff_operators(const CollocationMatrices& mats, int n_u, int n_v,
                                   const std::string& label = "patch");

/// Factored route for patches with separable weights.
DiffOperators build_tensor_diff_operators(const NurbsPatch2D& patch, const std::string& label = "patch");

/// Factored route when possible, dense otherwise.
DiffOperators make_diff_operators(const NurbsPatch2D& patch, const CollocationSet& colloc,
                                  const std::string& label = "patch");

struct MetricData {
  std::vector<JacobianData> jac;
  std::vector<double> h_xi;    // |dx/dxi| * local xi spacing
  std::vector<double> h_eta;
  std::vector<double> area;    // |J| times the trapezoidal parametric weights

  int size() const { return static_cast<int>(jac.size()); }
};

/// Throws SetupError with the offending point index when det J <= 0.
MetricData precompute_metrics(const NurbsPatch2D& patch, const CollocationSet& colloc);

}  // namespace igalbm
