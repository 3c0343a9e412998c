#include <Eigen/SparseLU>
#if defined(FPI_HAVE_UMFPACK)
#include <Eigen/UmfPackSupport>
#endif
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "fpi/error.hpp"
#include "fpi/problem.hpp"

namespace fpi {

State reconstruct_state(const Mesh& bg, const State& old, const std::vector<char>& new_active) {
  State s = old;
  const int nn = bg.num_nodes();
  bool any_valid = false;
  for (int n = 0; n < nn; ++n) any_valid = any_valid || old.fluid_valid[n];
  for (int n = 0; n < nn; ++n) {
    if (!new_active[n] || old.fluid_valid[n]) continue;
    if (!any_valid) fail(ErrorKind::Reconstruction, "no valid fluid values to reconstruct from");
    const Point x = bg.node(n);
    // elements within two rings of the node
    std::vector<int> ring;
    for (int e : bg.elements_of_node(n))
      for (int m : bg.element(e))
        for (int e2 : bg.elements_of_node(m)) ring.push_back(e2);
    std::sort(ring.begin(), ring.end());
    ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int e : ring) {
      const auto& c = bg.element(e);
      if (!(old.fluid_valid[c[0]] && old.fluid_valid[c[1]] && old.fluid_valid[c[2]] && old.fluid_valid[c[3]]))
        continue;
      const auto cs = bg.corners(e);
      const Point centroid = (cs[0] + cs[1] + cs[2] + cs[3]) * 0.25;
      const double dist = norm(centroid - x);
      if (dist < best_d) best_d = dist, best = e;
    }
    if (best >= 0) {
      const auto& c = bg.element(best);
      std::array<double, 4> N;
      shape_values(inverse_map(bg.corners(best), x).local, N);
      Point v{0.0, 0.0}, a{0.0, 0.0};
      double p = 0.0;
      for (int k = 0; k < 4; ++k) {
        v += old.vF[c[k]] * N[k];
        a += old.aF[c[k]] * N[k];
        p += old.pF[c[k]] * N[k];
      }
      s.vF[n] = v, s.aF[n] = a, s.pF[n] = p;
      continue;
    }
    int nearest = -1;
    best_d = std::numeric_limits<double>::infinity();
    for (int m = 0; m < nn; ++m) {
      if (!old.fluid_valid[m]) continue;
      const double dist = norm(bg.node(m) - x);
      if (dist < best_d) best_d = dist, nearest = m;
    }
    s.vF[n] = old.vF[nearest], s.aF[n] = old.aF[nearest], s.pF[n] = old.pF[nearest];
  }
  s.fluid_valid = new_active;
  return s;
}

Vector linear_solve(const SparseMatrix& A, const Vector& b) {
  // structurally empty rows/columns give a precise diagnosis
  std::vector<char> row_nz(A.rows(), 0), col_nz(A.cols(), 0);
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
      if (it.value() != 0.0) row_nz[it.row()] = col_nz[it.col()] = 1;
  for (int i = 0; i < A.rows(); ++i)
    if (!row_nz[i] || !col_nz[i])
      fail(ErrorKind::Singular, "singular system matrix (empty row/column at dof " + std::to_string(i) + ")");
#if defined(FPI_HAVE_UMFPACK)
  Eigen::UmfPackLU<SparseMatrix> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) fail(ErrorKind::Singular, "singular system matrix (UMFPACK factorization failed)");
#else
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success)
    fail(ErrorKind::Singular, "singular system matrix (" + lu.lastErrorMessage() + ")");
#endif
  Vector x = lu.solve(b);
  if (lu.info() != Eigen::Success || !x.allFinite())
    fail(ErrorKind::Singular, "singular system matrix (non-finite solution)");
  return x;
}

void Model::update_rates(const State& h, State& s) const {
  const TimeScheme ts{prob_.solver.theta, prob_.solver.dt};
  for (size_t n = 0; n < s.vF.size(); ++n)
    if (s.fluid_valid[n]) s.aF[n] = ts.rate(s.vF[n], h.vF[n], h.aF[n]);
  for (size_t m = 0; m < s.u.size(); ++m) {
    s.vs[m] = ts.rate(s.u[m], h.u[m], h.vs[m]);
    s.as[m] = ts.rate(s.vs[m], h.vs[m], h.as[m]);
    s.aP[m] = ts.rate(s.vP[m], h.vP[m], h.aP[m]);
  }
}

namespace {

std::string history_text(const std::vector<double>& r) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific;
  for (size_t i = 0; i < r.size(); ++i) os << (i ? ", " : "") << r[i];
  return os.str();
}

}  // namespace

State Model::advance(const State& state_n, StepInfo* info) const {
  const SolverConfig& sc = prob_.solver;
  const double t = state_n.t + sc.dt;
  const AssemblyOptions opt{true, sc.parallel, sc.jacobian};
  const Mesh& bg = *prob_.background;

  struct Linearization {
    CutTopology topo;
    DofMap dofs;
    State hist;
    Vector R;
    SparseMatrix J;
  };
  // Re-cuts at the iterate's displacement, fills newly active nodes and assembles.
  auto linearize = [&](State& it, Linearization& L) {
    const CutGeometry geo = geometry(it.u);
    L.topo = classify_and_cut(bg, geo, prob_.cut_options);
    L.dofs = DofMap(L.topo.active_node, prob_.poro->num_nodes());
    it = reconstruct_state(bg, it, L.topo.active_node);
    std::vector<char> need = state_n.fluid_valid;
    for (size_t n = 0; n < need.size(); ++n) need[n] = need[n] || L.topo.active_node[n];
    L.hist = reconstruct_state(bg, state_n, need);
    assemble(it, L.hist, L.topo, L.dofs, opt, L.R, &L.J);
    apply_dirichlet(it, geo, L.topo, L.dofs, t, L.R, &L.J);
  };

  State iterate = state_n;
  iterate.t = t;
  std::vector<double> res;
  double r0 = 0.0;
  Linearization L;
  linearize(iterate, L);
  for (int k = 1;; ++k) {
    const double r = L.R.norm();
    res.push_back(r);
    if (k == 1) r0 = r;
    if (sc.verbose) std::fprintf(stderr, "  newton %d |R| = %.3e\n", k, r);
    if (!std::isfinite(r))
      fail(ErrorKind::Divergence, "Newton diverged: non-finite residual (history: " + history_text(res) + ")");
    if (r <= sc.atol || r <= sc.rtol * r0) break;
    if (k >= sc.max_iterations)
      fail(ErrorKind::Divergence, "Newton did not converge in " + std::to_string(sc.max_iterations) +
                                      " iterations (history: " + history_text(res) + ")");
    const Vector dx = linear_solve(L.J, L.R);
    const Vector x0 = gather(iterate, L.dofs);
    const State base = iterate;
    const DofMap d0 = L.dofs;
    double lambda = 1.0;
    for (int halving = 0;; ++halving) {
      State trial = base;
      scatter(x0 - lambda * dx, d0, trial);
      try {
        linearize(trial, L);
        iterate = std::move(trial);
        break;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ElementInversion && e.kind() != ErrorKind::Geometry &&
            e.kind() != ErrorKind::Porosity)
          throw;
        if (halving >= 5) throw;
        lambda *= 0.5;
      }
    }
  }
  State out = iterate;
  out.fluid_valid = L.topo.active_node;
  update_rates(L.hist, out);
  if (info) {
    info->iterations = static_cast<int>(res.size());
    info->residuals = res;
  }
  return out;
}

}  // namespace fpi
