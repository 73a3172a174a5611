#include "igalbm/collocation.hpp"

#include <cmath>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

#include "igalbm/errors.hpp"

namespace igalbm {

namespace {

using Eigen::MatrixXd;

// Rows of a differentiation matrix must annihilate constants; put the
// rounding residue on the diagonal so that sum_j D_ij is as close to zero as
// floating point allows.
void zero_row_sums(MatrixXd& D) {
  for (Eigen::Index r = 0; r < D.rows(); ++r) {
    double off = 0.0;
    for (Eigen::Index c = 0; c < D.cols(); ++c) {
      if (c != r) off += D(r, c);
    }
    D(r, r) = -off;
  }
}

// D = Phi_d * Phi^-1 via Phi^T D^T = Phi_d^T.
MatrixXd right_divide(const Eigen::PartialPivLU<MatrixXd>& lu_t, const MatrixXd& phi_d) {
  MatrixXd Dt = lu_t.solve(phi_d.transpose());
  return Dt.transpose();
}

double condition_estimate(const Eigen::PartialPivLU<MatrixXd>& lu) {
  const double rc = lu.rcond();
  return rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

void check_condition(double cond, const std::string& label) {
  if (!(cond <= kMaxCollocationCondition)) {
    std::ostringstream msg;
    msg << label << ": collocation matrix is numerically singular (condition estimate " << cond
        << " > " << kMaxCollocationCondition << ")";
    throw SetupError(msg.str());
  }
}

}  // namespace

CollocationSet make_collocation(const NurbsPatch2D& patch) {
  CollocationSet c;
  c.n_u = patch.n_u();
  c.n_v = patch.n_v();
  c.xi = patch.knots_u().greville_points();
  c.eta = patch.knots_v().greville_points();
  c.parametric.reserve(c.size());
  c.physical.reserve(c.size());
  for (int j = 0; j < c.n_v; ++j) {
    for (int i = 0; i < c.n_u; ++i) {
      c.parametric.emplace_back(c.xi[i], c.eta[j]);
      c.physical.push_back(map_point(patch, c.xi[i], c.eta[j]));
    }
  }
  return c;
}

CollocationMatrices assemble_collocation(const NurbsPatch2D& patch, const CollocationSet& colloc) {
  const int N = colloc.size();
  CollocationMatrices m;
  m.phi = MatrixXd::Zero(N, N);
  m.phi_xi = MatrixXd::Zero(N, N);
  m.phi_eta = MatrixXd::Zero(N, N);
  for (int k = 0; k < N; ++k) {
    const auto& p = colloc.parametric[k];
    const auto basis = eval_nurbs2d(patch, p.x(), p.y());
    for (std::size_t a = 0; a < basis.index.size(); ++a) {
      // Periodic wrap can visit the same global function twice on coarse grids.
      m.phi(k, basis.index[a]) += basis.value[a];
      m.phi_xi(k, basis.index[a]) += basis.d_xi[a];
      m.phi_eta(k, basis.index[a]) += basis.d_eta[a];
    }
  }
  return m;
}

Collocation1D assemble_collocation_1d(const KnotVector& kv, const std::vector<double>& weights) {
  const auto g = kv.greville_points();
  const int n = kv.n_basis();
  Collocation1D c;
  c.phi = MatrixXd::Zero(n, n);
  c.phi_d = MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const auto b = eval_rational1d(kv, weights, g[k]);
    for (std::size_t a = 0; a < b.value.size(); ++a) {
      const int col = kv.global_index(b.first + static_cast<int>(a));
      c.phi(k, col) += b.value[a];
      c.phi_d(k, col) += b.deriv[a];
    }
  }
  return c;
}

DiffOperators DiffOperators::from_dense(MatrixXd d_xi, MatrixXd d_eta, int n_u, int n_v) {
  DiffOperators ops;
  ops.factored_ = false;
  ops.n_u_ = n_u;
  ops.n_v_ = n_v;
  ops.dense_xi_ = std::move(d_xi);
  ops.dense_eta_ = std::move(d_eta);
  return ops;
}

DiffOperators DiffOperators::from_factors(MatrixXd a_u, MatrixXd b_v) {
  DiffOperators ops;
  ops.factored_ = true;
  ops.n_u_ = static_cast<int>(a_u.rows());
  ops.n_v_ = static_cast<int>(b_v.rows());
  ops.a_ = std::move(a_u);
  ops.b_ = std::move(b_v);
  return ops;
}

MatrixXd DiffOperators::dense_xi() const {
  if (!factored_) return dense_xi_;
  return Eigen::kroneckerProduct(MatrixXd::Identity(n_v_, n_v_), a_);
}

MatrixXd DiffOperators::dense_eta() const {
  if (!factored_) return dense_eta_;
  return Eigen::kroneckerProduct(b_, MatrixXd::Identity(n_u_, n_u_));
}

void DiffOperators::apply_xi(const double* in, double* out, int count) const {
  const int N = size();
  if (factored_) {
    // All fields side by side: an n_u x (n_v * count) block, one GEMM.
    Eigen::Map<const MatrixXd> F(in, n_u_, static_cast<Eigen::Index>(n_v_) * count);
    Eigen::Map<MatrixXd> G(out, n_u_, static_cast<Eigen::Index>(n_v_) * count);
    G.noalias() = a_ * F;
    return;
  }
  Eigen::Map<const MatrixXd> F(in, N, count);
  Eigen::Map<MatrixXd> G(out, N, count);
  G.noalias() = dense_xi_ * F;
}

void DiffOperators::apply_eta(const double* in, double* out, int count) const {
  const int N = size();
  if (factored_) {
    for (int c = 0; c < count; ++c) {
      Eigen::Map<const MatrixXd> F(in + static_cast<std::ptrdiff_t>(c) * N, n_u_, n_v_);
      Eigen::Map<MatrixXd> G(out + static_cast<std::ptrdiff_t>(c) * N, n_u_, n_v_);
      G.noalias() = F * b_.transpose();
    }
    return;
  }
  Eigen::Map<const MatrixXd> F(in, N, count);
  Eigen::Map<MatrixXd> G(out, N, count);
  G.noalias() = dense_eta_ * F;
}

DiffOperators build_diff_operators(const CollocationMatrices& mats, int n_u, int n_v, const std::string& label) {
  // Phi^T is factorized once; both operators come from the same factors.
  Eigen::PartialPivLU<MatrixXd> lu_t(mats.phi.transpose());
  check_condition(condition_estimate(lu_t), label);
  MatrixXd d_xi = right_divide(lu_t, mats.phi_xi);
  MatrixXd d_eta = right_divide(lu_t, mats.phi_eta);
  zero_row_sums(d_xi);
  zero_row_sums(d_eta);
  return DiffOperators::from_dense(std::move(d_xi), std::move(d_eta), n_u, n_v);
}

DiffOperators build_tensor_diff_operators(const NurbsPatch2D& patch, const std::string& label) {
  if (!patch.separable_weights()) throw SetupError(label + ": weights are not separable; use the dense route");
  const auto cu = assemble_collocation_1d(patch.knots_u(), patch.weight_factors_u());
  const auto cv = assemble_collocation_1d(patch.knots_v(), patch.weight_factors_v());
  Eigen::PartialPivLU<MatrixXd> lu_u(cu.phi.transpose());
  Eigen::PartialPivLU<MatrixXd> lu_v(cv.phi.transpose());
  // cond(B (x) A) = cond(A) cond(B).
  check_condition(condition_estimate(lu_u) * condition_estimate(lu_v), label);
  MatrixXd a = right_divide(lu_u, cu.phi_d);
  MatrixXd b = right_divide(lu_v, cv.phi_d);
  zero_row_sums(a);
  zero_row_sums(b);
  return DiffOperators::from_factors(std::move(a), std::move(b));
}

DiffOperators make_diff_operators(const NurbsPatch2D& patch, const CollocationSet& colloc, const std::string& label) {
  if (patch.separable_weights()) return build_tensor_diff_operators(patch, label);
  return build_diff_operators(assemble_collocation(patch, colloc), colloc.n_u, colloc.n_v, label);
}

MetricData precompute_metrics(const NurbsPatch2D& patch, const CollocationSet& colloc) {
  const auto dxi = patch.knots_u().local_spacing();
  const auto deta = patch.knots_v().local_spacing();
  const auto qxi = patch.knots_u().quadrature_weights();
  const auto qeta = patch.knots_v().quadrature_weights();
  MetricData m;
  const int N = colloc.size();
  m.jac.resize(N);
  m.h_xi.resize(N);
  m.h_eta.resize(N);
  m.area.resize(N);
  for (int j = 0; j < colloc.n_v; ++j) {
    for (int i = 0; i < colloc.n_u; ++i) {
      const int k = colloc.index(i, j);
      JacobianData jd;
      try {
        jd = jacobian(patch, colloc.xi[i], colloc.eta[j]);
      } catch (const SingularMapError& e) {
        std::ostringstream msg;
        msg << "metrics: singular map at collocation point " << k << " (" << i << ", " << j << "): " << e.what();
        throw SetupError(msg.str());
      }
      if (!(jd.det > 0.0)) {
        std::ostringstream msg;
        msg << "metrics: det J = " << jd.det << " <= 0 at collocation point " << k << " (" << i << ", " << j << ")";
        throw SetupError(msg.str());
      }
      m.jac[k] = jd;
      m.h_xi[k] = jd.J.col(0).norm() * dxi[i];
      m.h_eta[k] = jd.J.col(1).norm() * deta[j];
      m.area[k] = jd.det * qxi[i] * qeta[j];
    }
  }
  return m;
}

}  // namespace igalbm
