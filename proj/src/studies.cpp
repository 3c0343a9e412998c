#include "fpi/studies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "fpi/constitutive.hpp"
#include "fpi/error.hpp"

namespace fpi {

double observed_order(double e_coarse, double e_fine) { return std::log2(e_coarse / e_fine); }

MmsOutcome run_mms_case(const MmsCase& c) {
  MmsOutcome out;
  out.report.h = c.h;
  try {
    const Example1 ex = build_example1(c.h);
    MmsParams m = make_mms_params(c.amplitudes.AF, c.amplitudes.AP, c.amplitudes.APS, c.fluid, c.poro);
    m.B = c.amplitudes.B;
    m.C = c.amplitudes.C;
    const ManufacturedSolution mms(m, c.fluid, c.poro, c.nitsche);
    const Model model(make_mms_problem(ex, mms, c.poro, c.fluid, c.nitsche, c.solver, c.stab));
    State s = mms_initial_state(ex, mms, 0.0);
    const int steps = std::max(1, static_cast<int>(std::lround(c.t_end / c.solver.dt)));
    for (int k = 0; k < steps; ++k) {
      StepInfo info;
      s = model.advance(s, &info);
      out.newton_iterations += info.iterations;
    }
    out.report = error_norms(model, s, mms);
    out.report.h = c.h;
    out.ok = true;
  } catch (const Error& e) {
    out.message = e.what();
  }
  return out;
}

namespace {

const char* tangential_name(TangentialMethod m) {
  return m == TangentialMethod::Nitsche ? "nitsche" : "substitution";
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::vector<std::string> base_header() {
  std::vector<std::string> h{"study",   "h",        "dt",         "t_end",       "theta",       "mu",
                             "rho",     "phi0",     "porosity_mode", "permeability_mode", "K0", "phi_ref",
                             "E",       "nu",       "kappa_p",    "rho_s0",      "gamma_n_inv", "gamma_t_inv",
                             "zeta",    "tangential", "beta_bj",  "alpha_bj",    "AF",          "AP",
                             "APS",     "status",   "newton_iterations", "message"};
  for (const char* n : kNormNames) h.emplace_back(n);
  return h;
}

std::vector<std::string> base_row(const char* study, const MmsCase& c, const MmsOutcome& o) {
  std::vector<std::string> r{study,
                             csv_number(c.h),
                             csv_number(c.solver.dt),
                             csv_number(c.t_end),
                             csv_number(c.solver.theta),
                             csv_number(c.fluid.mu),
                             csv_number(c.fluid.rho),
                             csv_number(c.poro.phi0),
                             c.poro.porosity_mode == PorosityMode::Constant ? "constant" : "constitutive",
                             c.poro.permeability_mode == PermeabilityMode::Constant ? "constant" : "kozeny_carman",
                             csv_number(c.poro.K0),
                             csv_number(c.poro.phi_ref),
                             csv_number(c.poro.E),
                             csv_number(c.poro.nu),
                             csv_number(c.poro.kappa_p),
                             csv_number(c.poro.rho_s0),
                             csv_number(1.0 / c.nitsche.gamma_n),
                             csv_number(1.0 / c.nitsche.gamma_t),
                             csv_number(c.nitsche.zeta),
                             tangential_name(c.nitsche.tangential),
                             csv_number(c.nitsche.beta_bj),
                             csv_number(c.nitsche.alpha_bj),
                             csv_number(c.amplitudes.AF),
                             csv_number(c.amplitudes.AP),
                             csv_number(c.amplitudes.APS),
                             o.ok ? "ok" : "failed",
                             std::to_string(o.newton_iterations),
                             sanitize(o.message)};
  for (double v : o.report.norms) r.push_back(o.ok ? csv_number(v) : "");
  return r;
}

MmsCase case_from(const RunConfig& cfg) {
  MmsCase c;
  c.h = cfg.h;
  c.t_end = cfg.t_end;
  c.fluid = cfg.fluid;
  c.poro = cfg.poro;
  c.nitsche = cfg.nitsche;
  c.solver = cfg.solver;
  c.stab = cfg.stab;
  c.amplitudes = cfg.mms;
  return c;
}

std::string describe(const MmsCase& c, const MmsOutcome& o) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "h=%g gn_inv=%g gt_inv=%g zeta=%g %s beta=%g alpha=%g phi=%g: %s (%d its)", c.h,
                1.0 / c.nitsche.gamma_n, 1.0 / c.nitsche.gamma_t, c.nitsche.zeta,
                tangential_name(c.nitsche.tangential), c.nitsche.beta_bj, c.nitsche.alpha_bj, c.poro.phi0,
                o.ok ? "ok" : "failed", o.newton_iterations);
  return o.ok ? buf : std::string(buf) + " " + o.message;
}

MmsOutcome run_logged(const MmsCase& c, const Progress& progress) {
  MmsOutcome o = run_mms_case(c);
  if (progress) progress(describe(c, o));
  return o;
}

}  // namespace

CsvTable run_convergence(const RunConfig& cfg, const Progress& progress) {
  auto header = base_header();
  header.insert(header.begin() + 1, "variant");
  for (const char* n : kNormNames) header.push_back(std::string("order_") + n);
  CsvTable table(header);
  for (double beta : {1.0, 0.0}) {
    MmsOutcome prev;
    for (size_t i = 0; i < cfg.h_list.size(); ++i) {
      MmsCase c = case_from(cfg);
      c.h = cfg.h_list[i];
      c.nitsche.beta_bj = beta;
      const MmsOutcome o = run_logged(c, progress);
      auto row = base_row("convergence", c, o);
      row.insert(row.begin() + 1, beta == 1.0 ? "BJ" : "BJS");
      for (int k = 0; k < kNumNorms; ++k) {
        const bool have = i > 0 && o.ok && prev.ok;
        row.push_back(have ? csv_number(observed_order(prev.report.norms[k], o.report.norms[k])) : "");
      }
      table.add_row(row);
      prev = o;
    }
  }
  return table;
}

CsvTable run_penalty_sweep(const RunConfig& cfg, const Progress& progress) {
  auto header = base_header();
  header.insert(header.begin() + 1, "swept");
  CsvTable table(header);
  for (double zeta : {-1.0, 1.0}) {
    for (const char* swept : {"gamma_n_inv", "gamma_t_inv"}) {
      for (double v : cfg.penalty_list) {
        MmsCase c = case_from(cfg);
        c.nitsche.zeta = zeta;
        c.nitsche.gamma_n = c.nitsche.gamma_t = 1.0 / 45.0;
        (swept[6] == 'n' ? c.nitsche.gamma_n : c.nitsche.gamma_t) = 1.0 / v;
        auto row = base_row("penalty", c, run_logged(c, progress));
        row.insert(row.begin() + 1, swept);
        table.add_row(row);
      }
    }
  }
  return table;
}

CsvTable run_porosity_sweep(const RunConfig& cfg, const Progress& progress) {
  CsvTable table(base_header());
  for (TangentialMethod method : {TangentialMethod::Substitution, TangentialMethod::Nitsche}) {
    for (double alpha : cfg.porosity_alpha_list) {
      for (double phi : cfg.porosity_list) {
        MmsCase c = case_from(cfg);
        c.nitsche.tangential = method;
        c.nitsche.alpha_bj = alpha;
        c.poro.phi0 = phi;
        c.poro.porosity_mode = PorosityMode::Constant;
        table.add_row(base_row("porosity", c, run_logged(c, progress)));
      }
    }
  }
  return table;
}

CsvTable run_alpha_sweep(const RunConfig& cfg, const Progress& progress) {
  auto header = base_header();
  header.insert(header.begin() + 1, "variant");
  CsvTable table(header);
  for (TangentialMethod method : {TangentialMethod::Substitution, TangentialMethod::Nitsche}) {
    for (double beta : {1.0, 0.0}) {
      for (double alpha : cfg.alpha_list) {
        MmsCase c = case_from(cfg);
        c.nitsche.tangential = method;
        c.nitsche.beta_bj = beta;
        c.nitsche.alpha_bj = alpha;
        auto row = base_row("alpha", c, run_logged(c, progress));
        row.insert(row.begin() + 1, beta == 1.0 ? "BJ" : "BJS");
        table.add_row(row);
      }
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Beam

namespace {

constexpr double kBeamLeft = 0.45, kBeamWidth = 0.1, kBeamShaft = 0.85, kTipRadius = 0.05;

double beam_top(double x) {
  const double d = x - (kBeamLeft + 0.5 * kBeamWidth);
  return kBeamShaft + std::sqrt(std::max(0.0, kTipRadius * kTipRadius - d * d));
}

struct MaterialProbe {
  int element = -1;
  Point xi;
};

MaterialProbe locate_material(const Mesh& mesh, const Point& X) {
  const ElementLocator loc(mesh);
  MaterialProbe p;
  p.element = loc.locate(X, &p.xi);
  if (p.element >= 0) return p;
  // Outside (e.g. on the polygonal approximation of a curved edge): nearest node.
  int best = 0;
  for (int n = 1; n < mesh.num_nodes(); ++n)
    if (norm(mesh.node(n) - X) < norm(mesh.node(best) - X)) best = n;
  p.element = mesh.elements_of_node(best).front();
  const auto& conn = mesh.element(p.element);
  const int a = static_cast<int>(std::find(conn.begin(), conn.end(), best) - conn.begin());
  p.xi = Point{kRefCorner[a][0], kRefCorner[a][1]};
  return p;
}

struct ProbeValues {
  Point u;
  double p = 0.0, phi = 0.0;
};

ProbeValues evaluate_probe(const Mesh& pm, const State& s, const PoroParams& prm, const MaterialProbe& pr) {
  const ShapeEval sh = reference_map(pm, pr.element, pr.xi);
  const auto& conn = pm.element(pr.element);
  ProbeValues v;
  Mat2<double> G{0.0, 0.0, 0.0, 0.0};
  for (int a = 0; a < 4; ++a) {
    v.u += s.u[conn[a]] * sh.N[a];
    v.p += s.pP[conn[a]] * sh.N[a];
    G += outer(s.u[conn[a]], sh.dN[a]);
  }
  v.phi = porosity(det(Mat2<double>::identity() + G), v.p, prm);
  return v;
}

Point inflow(const Point& x, double t) {
  const double ramp = t <= 2.0 ? 2.0 - 2.0 * std::cos(0.5 * kPi * t) : 4.0;
  return Point{0.2 * (x.y - x.y * x.y) * ramp, 0.0};
}

}  // namespace

Mesh build_beam_mesh(int nx, int ny) {
  if (nx < 1 || ny < 1) fail(ErrorKind::InvalidArgument, "beam mesh needs nx, ny >= 1");
  std::vector<Point> nodes;
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const double x = kBeamLeft + kBeamWidth * i / nx;
      nodes.push_back(Point{x, beam_top(x) * j / ny});
    }
  std::vector<std::array<int, 4>> elements;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  std::map<std::pair<int, int>, std::string> tags;
  auto key = [](int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; };
  for (int i = 0; i < nx; ++i) {
    tags[key(id(i, 0), id(i + 1, 0))] = "bottom";
    tags[key(id(i, ny), id(i + 1, ny))] = "top";
  }
  for (int j = 0; j < ny; ++j) {
    tags[key(id(0, j), id(0, j + 1))] = "left";
    tags[key(id(nx, j), id(nx, j + 1))] = "right";
  }
  return Mesh(std::move(nodes), std::move(elements), std::move(tags));
}

double porosity_at(const Mesh& poro, const State& s, const PoroParams& prm, const Point& X) {
  return evaluate_probe(poro, s, prm, locate_material(poro, X)).phi;
}

Point displacement_at(const Mesh& poro, const State& s, const Point& X) {
  PoroParams prm;
  return evaluate_probe(poro, s, prm, locate_material(poro, X)).u;
}

BeamResult run_beam(const RunConfig& cfg, const std::string& out_dir, const Progress& progress) {
  BeamResult result;
  const BeamConfig& bc = cfg.beam;
  const Mesh background = build_structured_mesh(Point{0.0, 0.0}, Point{2.0, 1.0}, bc.nx, bc.ny);
  const Mesh poro = bc.mesh_file.empty() ? build_beam_mesh(bc.poro_nx, bc.poro_ny) : load_mesh(bc.mesh_file);

  const std::vector<int> inlet = background.nodes_with_tag("left");
  const std::vector<int> outlet = background.nodes_with_tag("right");
  std::vector<int> walls = background.nodes_with_tag("bottom");
  for (int n : background.nodes_with_tag("top")) walls.push_back(n);
  const std::vector<int> foot = poro.nodes_with_tag("bottom");

  Problem prob;
  prob.background = &background;
  prob.poro = &poro;
  prob.fluid = cfg.fluid;
  prob.poro_params = cfg.poro;
  prob.stab = cfg.stab;
  prob.nitsche = cfg.nitsche;
  prob.solver = cfg.solver;
  prob.poro_exterior_tags = {"bottom"};
  prob.interface_extension = 2.0 / bc.ny;
  prob.fluid_bc = [&](double t, const CutGeometry&, const CutTopology& topo, std::vector<FluidBC>& out) {
    for (int n : inlet) {
      if (!topo.active_node[n]) continue;
      const Point v = inflow(background.node(n), t);
      out.push_back({n, 0, v.x});
      out.push_back({n, 1, v.y});
    }
    for (int n : outlet)
      if (topo.active_node[n]) out.push_back({n, 1, 0.0});
    for (int n : walls) {
      if (!topo.active_node[n]) continue;
      out.push_back({n, 0, 0.0});
      out.push_back({n, 1, 0.0});
    }
  };
  prob.poro_bc = [&](double, std::vector<PoroBC>& out) {
    for (int m : foot) {
      out.push_back({m, PoroField::U, 0, 0.0});
      out.push_back({m, PoroField::U, 1, 0.0});
      out.push_back({m, PoroField::VP, 1, 0.0});
    }
  };
  const Model model(prob);

  const MaterialProbe up = locate_material(poro, bc.probe_upstream);
  const MaterialProbe down = locate_material(poro, bc.probe_downstream);
  const MaterialProbe tip = locate_material(poro, bc.probe_tip);

  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  auto write_fields = [&](int step, const State& s) {
    if (out_dir.empty() || bc.output_every <= 0 || step % bc.output_every != 0) return;
    char name[64];
    std::snprintf(name, sizeof name, "/fluid_%05d.vtk", step);
    write_fluid_vtk(out_dir + name, background, s);
    std::snprintf(name, sizeof name, "/poro_%05d.vtk", step);
    write_poro_vtk(out_dir + name, poro, s, nodal_porosity(poro, s, cfg.poro));
  };
  auto record = [&](const State& s, int its) {
    const ProbeValues t = evaluate_probe(poro, s, cfg.poro, tip);
    const ProbeValues a = evaluate_probe(poro, s, cfg.poro, up);
    const ProbeValues b = evaluate_probe(poro, s, cfg.poro, down);
    result.probes.add_row({csv_number(s.t), csv_number(t.u.x), csv_number(t.u.y), csv_number(a.phi),
                           csv_number(b.phi), csv_number(a.p), csv_number(b.p), std::to_string(its)});
  };
  auto flush = [&] {
    if (!out_dir.empty()) result.probes.write(out_dir + "/probes.csv");
  };

  State s(background.num_nodes(), poro.num_nodes());
  std::fill(s.fluid_valid.begin(), s.fluid_valid.end(), 1);
  record(s, 0);
  write_fields(0, s);
  const int steps = std::max(1, static_cast<int>(std::lround(cfg.t_end / cfg.solver.dt)));
  for (int k = 1; k <= steps; ++k) {
    StepInfo info;
    try {
      s = model.advance(s, &info);
    } catch (const Error& e) {
      result.message = "step " + std::to_string(k) + ": " + e.what();
      flush();
      return result;
    }
    record(s, info.iterations);
    write_fields(k, s);
    if (progress) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "step %d/%d t=%.3f its=%d tip_ux=%.4e", k, steps, s.t, info.iterations,
                    result.probes.number(result.probes.rows().size() - 1, "tip_ux"));
      progress(buf);
    }
  }
  flush();
  result.completed = true;
  return result;
}

}  // namespace fpi
