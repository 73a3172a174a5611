#pragma once

#include <Eigen/Dense>
#include <vector>

#include "igalbm/collocation.hpp"
#include "igalbm/lattice.hpp"

namespace igalbm {

/// How the convection term is assembled.
///
/// Advective: C = -(e~xi * D_xi f + e~eta * D_eta f), the transformed
/// convection term itself. Flux: C = -(D_xi(e~xi f) + D_eta(e~eta f)). The two
/// agree when e~ is constant (affine maps); on curved maps only the advective
/// form keeps a uniform state exactly steady.
enum class ConvectionForm { Advective, Flux };

struct RhsContext {
  const DiffOperators* ops = nullptr;
  const TransformedVelocities* et = nullptr;
  double tau = 1.0;
  ConvectionForm form = ConvectionForm::Advective;
};

/// Scratch buffers for the parallel kernel, sized Q * N.
struct RhsWorkspace {
  std::vector<double> dxi;
  std::vector<double> deta;
  std::vector<double> scaled;

  void resize(int n_points);
};

/// R = C + Omega for all directions and points. f and out use the layout
/// [alpha * N + k]. Per-direction operator products and the per-point
/// collision run under OpenMP. Throws DivergenceError (step -1) when a
/// density is nonpositive or not finite.
void rhs_parallel(const RhsContext& ctx, const double* f, double* out, RhsWorkspace& ws);

/// Dense N x N operators for the reference kernel.
struct DenseOperators {
  Eigen::MatrixXd d_xi;
  Eigen::MatrixXd d_eta;
};
DenseOperators densify(const DiffOperators& ops);

/// Straight loops over the dense matrices, single-threaded. Slow (O(N^2) per
/// direction); kept as the oracle for rhs_parallel.
void rhs_reference(const DenseOperators& dense, const TransformedVelocities& et, double tau,
                   ConvectionForm form, const double* f, double* out);

}  // namespace igalbm
