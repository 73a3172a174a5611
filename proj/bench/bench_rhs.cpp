// Times one RHS evaluation: dense serial reference against the factored
// OpenMP kernel, on the Taylor-Green box at a few resolutions.

#include <chrono>
#include <cstdio>
#include <omp.h>

#include "igalbm/benchmarks.hpp"

using namespace igalbm;

namespace {

template <class F>
double time_per_call(F&& f, int reps) {
  f();  // warm-up
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
  std::printf("threads available: %d\n", omp_get_max_threads());
  std::printf("%6s %14s %14s %9s %12s\n", "n", "reference [s]", "parallel [s]", "speedup", "max |diff|");
  for (int n : {16, 32, 48}) {
    const auto spec = tgv_case(TaylorGreenParams{}, n, 3);
    const auto disc = discretize(spec.patch);
    const int N = disc.size();
    SolverConfig cfg;
    Solver solver(spec, cfg);
    const auto state = solver.initial_state();
    std::vector<double> a(state.f.size()), b(state.f.size());

    const auto dense = densify(disc.ops);
    const double t_ref = time_per_call(
        [&] { rhs_reference(dense, disc.et, solver.tau(), ConvectionForm::Advective, state.f.data(), a.data()); },
        n <= 32 ? 5 : 2);
    RhsWorkspace ws;
    ws.resize(N);
    const RhsContext ctx{&disc.ops, &disc.et, solver.tau(), ConvectionForm::Advective};
    const double t_par = time_per_call([&] { rhs_parallel(ctx, state.f.data(), b.data(), ws); }, 200);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
    std::printf("%6d %14.4e %14.4e %9.1f %12.3e\n", n, t_ref, t_par, t_ref / t_par, diff);
  }
  return 0;
}
