#include "igalbm/kernels.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "igalbm/errors.hpp"

namespace igalbm {

namespace {

[[noreturn]] void bad_density(int k, double rho) {
  std::ostringstream msg;
  msg << "rhs: density " << rho << " at point " << k;
  throw DivergenceError(msg.str(), -1);
}

}  // namespace

void RhsWorkspace::resize(int n_points) {
  const std::size_t n = static_cast<std::size_t>(kQ) * n_points;
  dxi.assign(n, 0.0);
  deta.assign(n, 0.0);
  scaled.assign(n, 0.0);
}

void rhs_parallel(const RhsContext& ctx, const double* f, double* out, RhsWorkspace& ws) {
  const DiffOperators& ops = *ctx.ops;
  const TransformedVelocities& et = *ctx.et;
  const int N = ops.size();
  if (static_cast<int>(ws.dxi.size()) != kQ * N) ws.resize(N);
  double* dxi = ws.dxi.data();
  double* deta = ws.deta.data();
  double* g = ws.scaled.data();
  const bool flux = ctx.form == ConvectionForm::Flux;

  // Direction 0 never moves; its derivative terms are skipped below.
#pragma omp parallel for schedule(static)
  for (int a = 1; a < kQ; ++a) {
    const std::size_t off = static_cast<std::size_t>(a) * N;
    if (flux) {
      for (int k = 0; k < N; ++k) g[off + k] = et.xi[off + k] * f[off + k];
      ops.apply_xi(g + off, dxi + off);
      for (int k = 0; k < N; ++k) g[off + k] = et.eta[off + k] * f[off + k];
      ops.apply_eta(g + off, deta + off);
    } else {
      if (!et.zero_xi[a]) ops.apply_xi(f + off, dxi + off);
      if (!et.zero_eta[a]) ops.apply_eta(f + off, deta + off);
    }
  }

  const double inv_tau = 1.0 / ctx.tau;
  int bad = -1;
#pragma omp parallel for schedule(static) reduction(max : bad)
  for (int k = 0; k < N; ++k) {
    double fk[kQ];
    for (int a = 0; a < kQ; ++a) fk[a] = f[static_cast<std::size_t>(a) * N + k];
    const double rho = fk[0] + fk[1] + fk[2] + fk[3] + fk[4] + fk[5] + fk[6] + fk[7] + fk[8];
    if (!(rho > 0.0) || !std::isfinite(rho)) {
      bad = std::max(bad, k);
      continue;
    }
    const double jx = fk[1] - fk[3] + fk[5] - fk[6] - fk[7] + fk[8];
    const double jy = fk[2] - fk[4] + fk[5] + fk[6] - fk[7] - fk[8];
    double feq[kQ];
    equilibrium_unchecked(rho, jx / rho, jy / rho, feq);
    out[k] = -(fk[0] - feq[0]) * inv_tau;
    for (int a = 1; a < kQ; ++a) {
      const std::size_t i = static_cast<std::size_t>(a) * N + k;
      double c = 0.0;
      if (flux) {
        c = dxi[i] + deta[i];
      } else {
        if (!et.zero_xi[a]) c += et.xi[i] * dxi[i];
        if (!et.zero_eta[a]) c += et.eta[i] * deta[i];
      }
      out[i] = -c - (fk[a] - feq[a]) * inv_tau;
    }
  }
  if (bad >= 0) {
    double rho = 0.0;
    for (int a = 0; a < kQ; ++a) rho += f[static_cast<std::size_t>(a) * N + bad];
    bad_density(bad, rho);
  }
}

DenseOperators densify(const DiffOperators& ops) { return {ops.dense_xi(), ops.dense_eta()}; }

void rhs_reference(const DenseOperators& dense, const TransformedVelocities& et, double tau,
                   ConvectionForm form, const double* f, double* out) {
  const auto& vs = d2q9();
  const int N = static_cast<int>(dense.d_xi.rows());
  std::vector<double> g_xi(N), g_eta(N);
  for (int a = 0; a < kQ; ++a) {
    const double* fa = f + static_cast<std::size_t>(a) * N;
    for (int m = 0; m < N; ++m) {
      g_xi[m] = form == ConvectionForm::Flux ? et.at_xi(a, m) * fa[m] : fa[m];
      g_eta[m] = form == ConvectionForm::Flux ? et.at_eta(a, m) * fa[m] : fa[m];
    }
    for (int k = 0; k < N; ++k) {
      double sx = 0.0, se = 0.0;
      for (int m = 0; m < N; ++m) {
        sx += dense.d_xi(k, m) * g_xi[m];
        se += dense.d_eta(k, m) * g_eta[m];
      }
      out[static_cast<std::size_t>(a) * N + k] =
          form == ConvectionForm::Flux ? -(sx + se) : -(et.at_xi(a, k) * sx + et.at_eta(a, k) * se);
    }
  }
  for (int k = 0; k < N; ++k) {
    std::array<double, kQ> fk;
    for (int a = 0; a < kQ; ++a) fk[a] = f[static_cast<std::size_t>(a) * N + k];
    double rho = 0.0;
    Vec2 j = Vec2::Zero();
    for (int a = 0; a < kQ; ++a) {
      rho += fk[a];
      j += fk[a] * Vec2(vs.e[a][0], vs.e[a][1]);
    }
    if (!(rho > 0.0) || !std::isfinite(rho)) bad_density(k, rho);
    const auto feq = equilibrium(rho, j / rho);
    for (int a = 0; a < kQ; ++a) out[static_cast<std::size_t>(a) * N + k] -= (fk[a] - feq[a]) / tau;
  }
}

}  // namespace igalbm
