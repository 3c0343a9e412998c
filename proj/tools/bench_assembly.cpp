// Serial vs element-parallel assembly of the coupled residual and Jacobian on
// the rotated-squares example.  Usage: fpi_bench [h] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "fpi/mms.hpp"

#ifdef FPI_HAVE_OPENMP
#include <omp.h>
#endif

int main(int argc, char** argv) {
  using namespace fpi;
  using Clock = std::chrono::steady_clock;
  const double h = argc > 1 ? std::atof(argv[1]) : 0.03125;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;

  FluidParams fluid;
  PoroParams poro;
  NitscheConfig nitsche;
  SolverConfig solver;
  const Example1 ex = build_example1(h);
  const ManufacturedSolution mms(make_mms_params(0.1, 0.21, -0.01, fluid, poro), fluid, poro, nitsche);
  const Model model(make_mms_problem(ex, mms, poro, fluid, nitsche, solver));
  const State s = mms_initial_state(ex, mms, 0.0);
  const CutTopology topo = model.cut(s.u);
  const DofMap dofs(topo.active_node, ex.poro.num_nodes());

  int threads = 1;
#ifdef FPI_HAVE_OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("h = %g, %d dofs, %d threads\n", h, dofs.num_dofs(), threads);

  Vector R[2];
  SparseMatrix J[2];
  double seconds[2] = {0.0, 0.0};
  for (int mode = 0; mode < 2; ++mode) {
    AssemblyOptions opt;
    opt.parallel = mode == 1;
    for (int r = 0; r < repeats; ++r) {
      const auto t0 = Clock::now();
      model.assemble(s, s, topo, dofs, opt, R[mode], &J[mode]);
      seconds[mode] += std::chrono::duration<double>(Clock::now() - t0).count();
    }
    seconds[mode] /= repeats;
  }
  const double dr = (R[0] - R[1]).lpNorm<Eigen::Infinity>();
  const double dj = SparseMatrix(J[0] - J[1]).coeffs().cwiseAbs().maxCoeff();
  std::printf("serial   %.4f s\nparallel %.4f s  (speed-up %.2f)\n", seconds[0], seconds[1], seconds[0] / seconds[1]);
  std::printf("max |R_serial - R_parallel| = %.3e, max |J_serial - J_parallel| = %.3e\n", dr, dj);
  return dr == 0.0 && dj == 0.0 ? 0 : 1;
}
