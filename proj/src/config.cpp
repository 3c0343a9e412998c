#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "fpi/error.hpp"
#include "fpi/studies.hpp"

namespace fpi {

const char* study_name(StudyKind k) {
  switch (k) {
    case StudyKind::Convergence: return "convergence";
    case StudyKind::Penalty: return "penalty";
    case StudyKind::Porosity: return "porosity";
    case StudyKind::Alpha: return "alpha";
    case StudyKind::Beam: return "beam";
  }
  return "?";
}

RunConfig default_config(StudyKind kind) {
  RunConfig c;
  c.study = kind;
  c.nitsche.gamma_n = c.nitsche.gamma_t = 1.0 / 45.0;
  c.nitsche.zeta = -1.0;
  c.poro.phi0 = 0.5;
  c.poro.K0 = 0.1;
  c.poro.phi_ref = 0.5;
  c.poro.E = 1000.0;
  c.poro.nu = 0.3;
  c.poro.rho_s0 = 1.0;
  c.solver.dt = 0.05;
  c.t_end = 0.1;
  switch (kind) {
    case StudyKind::Convergence:
    case StudyKind::Penalty:
    case StudyKind::Alpha:
      break;
    case StudyKind::Porosity:
      c.mms.AP = c.mms.APS = -1e-5;
      c.poro.permeability_mode = PermeabilityMode::KozenyCarman;
      break;
    case StudyKind::Beam:
      c.fluid = {0.1, 0.01};
      c.poro.porosity_mode = PorosityMode::Constitutive;
      c.poro.permeability_mode = PermeabilityMode::KozenyCarman;
      c.poro.K0 = 1e-5;
      c.poro.E = 100.0;
      c.poro.kappa_p = 100.0;
      c.poro.rho_s0 = 0.2;
      c.solver.dt = 0.02;
      c.t_end = 4.0;
      break;
  }
  return c;
}

namespace {

struct Entry {
  std::string help;
  std::function<void(RunConfig&, const std::string&)> set;
};

[[noreturn]] void config_error(int line, const std::string& key, const std::string& what) {
  fail(ErrorKind::Config, "line " + std::to_string(line) + ": key '" + key + "': " + what);
}

double to_number(const std::string& v) {
  size_t pos = 0;
  const double d = std::stod(v, &pos);
  if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
  return d;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<double> to_list(const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_number(trim(item)));
  if (out.empty()) throw std::invalid_argument(v);
  return out;
}

template <class E>
E to_choice(const std::string& v, const std::map<std::string, E>& options) {
  const auto it = options.find(v);
  if (it == options.end()) throw std::out_of_range(v);
  return it->second;
}

bool to_bool(const std::string& v) {
  return to_choice<bool>(v, {{"true", true}, {"false", false}, {"on", true}, {"off", false},
                             {"1", true}, {"0", false}});
}

using Table = std::map<std::string, Entry>;

Table make_table() {
  Table t;
  auto num = [&t](const std::string& key, const std::string& help, std::function<double&(RunConfig&)> ref) {
    t[key] = {help, [ref](RunConfig& c, const std::string& v) { ref(c) = to_number(v); }};
  };
  auto inv = [&t](const std::string& key, const std::string& help, std::function<double&(RunConfig&)> ref) {
    t[key] = {help, [ref](RunConfig& c, const std::string& v) {
                const double d = to_number(v);
                if (!(d > 0.0)) throw std::invalid_argument(v);
                ref(c) = 1.0 / d;
              }};
  };
  auto list = [&t](const std::string& key, const std::string& help,
                   std::function<std::vector<double>&(RunConfig&)> ref) {
    t[key] = {help, [ref](RunConfig& c, const std::string& v) { ref(c) = to_list(v); }};
  };
  auto integer = [&t](const std::string& key, const std::string& help, std::function<int&(RunConfig&)> ref) {
    t[key] = {help, [ref](RunConfig& c, const std::string& v) {
                const double d = to_number(v);
                if (d != std::floor(d)) throw std::invalid_argument(v);
                ref(c) = static_cast<int>(d);
              }};
  };
  auto point = [&t](const std::string& key, const std::string& help, std::function<Point&(RunConfig&)> ref) {
    t[key] = {help, [ref](RunConfig& c, const std::string& v) {
                const auto l = to_list(v);
                if (l.size() != 2) throw std::invalid_argument(v);
                ref(c) = Point{l[0], l[1]};
              }};
  };

  t["study"] = {"convergence | penalty | porosity | alpha | beam", [](RunConfig&, const std::string&) {}};
  t["output_dir"] = {"directory for CSV/VTK output", [](RunConfig& c, const std::string& v) { c.output_dir = v; }};

  num("h", "mesh size of single-mesh sweeps", [](RunConfig& c) -> double& { return c.h; });
  list("h_list", "mesh sizes of the convergence study", [](RunConfig& c) -> auto& { return c.h_list; });
  list("penalty_list", "inverse penalties of the penalty sweep", [](RunConfig& c) -> auto& { return c.penalty_list; });
  list("porosity_list", "porosities of the porosity sweep", [](RunConfig& c) -> auto& { return c.porosity_list; });
  list("porosity_alpha_list", "alpha_bj values of the porosity sweep",
       [](RunConfig& c) -> auto& { return c.porosity_alpha_list; });
  list("alpha_list", "alpha_bj values of the alpha sweep", [](RunConfig& c) -> auto& { return c.alpha_list; });
  num("t_end", "final time", [](RunConfig& c) -> double& { return c.t_end; });

  num("dt", "time step", [](RunConfig& c) -> double& { return c.solver.dt; });
  num("theta", "one-step-theta parameter", [](RunConfig& c) -> double& { return c.solver.theta; });
  num("rtol", "Newton relative tolerance", [](RunConfig& c) -> double& { return c.solver.rtol; });
  num("atol", "Newton absolute tolerance", [](RunConfig& c) -> double& { return c.solver.atol; });
  integer("max_iterations", "Newton iteration limit", [](RunConfig& c) -> int& { return c.solver.max_iterations; });
  t["jacobian"] = {"analytic | fd", [](RunConfig& c, const std::string& v) {
                     c.solver.jacobian = to_choice<JacobianMode>(
                         v, {{"analytic", JacobianMode::Analytic}, {"fd", JacobianMode::FiniteDifference}});
                   }};
  t["parallel"] = {"parallel element kernels (true | false)",
                   [](RunConfig& c, const std::string& v) { c.solver.parallel = to_bool(v); }};

  num("mu", "fluid dynamic viscosity", [](RunConfig& c) -> double& { return c.fluid.mu; });
  num("rho", "fluid density", [](RunConfig& c) -> double& { return c.fluid.rho; });
  num("phi0", "initial porosity", [](RunConfig& c) -> double& { return c.poro.phi0; });
  t["porosity_mode"] = {"constant | constitutive", [](RunConfig& c, const std::string& v) {
                          c.poro.porosity_mode = to_choice<PorosityMode>(
                              v, {{"constant", PorosityMode::Constant}, {"constitutive", PorosityMode::Constitutive}});
                        }};
  t["permeability_mode"] = {"constant | kozeny_carman", [](RunConfig& c, const std::string& v) {
                              c.poro.permeability_mode = to_choice<PermeabilityMode>(
                                  v, {{"constant", PermeabilityMode::Constant},
                                      {"kozeny_carman", PermeabilityMode::KozenyCarman}});
                            }};
  num("K0", "material permeability (reference value for kozeny_carman)",
      [](RunConfig& c) -> double& { return c.poro.K0; });
  num("phi_ref", "Kozeny-Carman reference porosity", [](RunConfig& c) -> double& { return c.poro.phi_ref; });
  num("E", "Young's modulus of the skeleton", [](RunConfig& c) -> double& { return c.poro.E; });
  num("nu", "Poisson ratio of the skeleton", [](RunConfig& c) -> double& { return c.poro.nu; });
  num("kappa_p", "bulk modulus of the volumetric energy", [](RunConfig& c) -> double& { return c.poro.kappa_p; });
  num("rho_s0", "initial solid-phase density", [](RunConfig& c) -> double& { return c.poro.rho_s0; });
  t["interface_mass_flux"] = {"keep the fluid-mass flux term on the interface (true | false)",
                              [](RunConfig& c, const std::string& v) { c.poro.interface_mass_flux = to_bool(v); }};

  inv("gamma_n_inv", "inverse normal Nitsche penalty", [](RunConfig& c) -> double& { return c.nitsche.gamma_n; });
  inv("gamma_t_inv", "inverse tangential Nitsche penalty", [](RunConfig& c) -> double& { return c.nitsche.gamma_t; });
  num("zeta", "adjoint sign (-1 | +1)", [](RunConfig& c) -> double& { return c.nitsche.zeta; });
  t["tangential"] = {"substitution | nitsche", [](RunConfig& c, const std::string& v) {
                       c.nitsche.tangential = to_choice<TangentialMethod>(
                           v, {{"substitution", TangentialMethod::Substitution}, {"nitsche", TangentialMethod::Nitsche}});
                     }};
  num("beta_bj", "1: Beavers-Joseph, 0: Beavers-Joseph-Saffman", [](RunConfig& c) -> double& { return c.nitsche.beta_bj; });
  num("alpha_bj", "slip model constant", [](RunConfig& c) -> double& { return c.nitsche.alpha_bj; });

  num("gamma_p", "CIP pressure constant", [](RunConfig& c) -> double& { return c.stab.gamma_p; });
  num("gamma_u", "CIP convective constant", [](RunConfig& c) -> double& { return c.stab.gamma_u; });
  num("gamma_div", "CIP divergence constant", [](RunConfig& c) -> double& { return c.stab.gamma_div; });
  num("c_t", "transient scaling constant", [](RunConfig& c) -> double& { return c.stab.c_t; });
  num("c_k", "reactive scaling constant", [](RunConfig& c) -> double& { return c.stab.c_k; });
  num("c_v", "convective scaling constant", [](RunConfig& c) -> double& { return c.stab.c_v; });
  num("gamma_nu_gp", "ghost-penalty viscous constant", [](RunConfig& c) -> double& { return c.stab.gamma_nu_gp; });
  num("gamma_t_gp", "ghost-penalty transient constant", [](RunConfig& c) -> double& { return c.stab.gamma_t_gp; });
  num("c_v_gamma", "interface convective scaling", [](RunConfig& c) -> double& { return c.stab.c_v_gamma; });
  num("c_t_gamma", "interface transient scaling", [](RunConfig& c) -> double& { return c.stab.c_t_gamma; });

  num("AF", "fluid velocity amplitude", [](RunConfig& c) -> double& { return c.mms.AF; });
  num("AP", "poro velocity amplitude", [](RunConfig& c) -> double& { return c.mms.AP; });
  num("APS", "displacement amplitude", [](RunConfig& c) -> double& { return c.mms.APS; });
  num("B", "spatial frequency", [](RunConfig& c) -> double& { return c.mms.B; });
  num("C", "temporal decay constant", [](RunConfig& c) -> double& { return c.mms.C; });

  integer("beam_nx", "background elements along the channel", [](RunConfig& c) -> int& { return c.beam.nx; });
  integer("beam_ny", "background elements across the channel", [](RunConfig& c) -> int& { return c.beam.ny; });
  integer("beam_poro_nx", "beam elements across", [](RunConfig& c) -> int& { return c.beam.poro_nx; });
  integer("beam_poro_ny", "beam elements along", [](RunConfig& c) -> int& { return c.beam.poro_ny; });
  t["beam_mesh"] = {"beam mesh file (empty: generated)",
                    [](RunConfig& c, const std::string& v) { c.beam.mesh_file = v; }};
  integer("output_every", "VTK output interval in steps (0: none)", [](RunConfig& c) -> int& { return c.beam.output_every; });
  point("probe_upstream", "material point x, y", [](RunConfig& c) -> Point& { return c.beam.probe_upstream; });
  point("probe_downstream", "material point x, y", [](RunConfig& c) -> Point& { return c.beam.probe_downstream; });
  point("probe_tip", "material point x, y", [](RunConfig& c) -> Point& { return c.beam.probe_tip; });
  return t;
}

const Table& table() {
  static const Table t = make_table();
  return t;
}

struct Line {
  int number;
  std::string key, value;
};

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  std::vector<Line> lines;
  std::stringstream ss(text);
  std::string raw;
  int n = 0;
  while (std::getline(ss, raw)) {
    ++n;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(ErrorKind::Config, "line " + std::to_string(n) + ": expected 'key = value'");
    Line l{n, trim(s.substr(0, eq)), trim(s.substr(eq + 1))};
    if (!table().count(l.key)) config_error(n, l.key, "unknown key");
    if (l.value.empty()) config_error(n, l.key, "missing value");
    lines.push_back(l);
  }
  StudyKind kind = StudyKind::Convergence;
  for (const auto& l : lines) {
    if (l.key != "study") continue;
    try {
      kind = to_choice<StudyKind>(l.value, {{"convergence", StudyKind::Convergence},
                                            {"penalty", StudyKind::Penalty},
                                            {"porosity", StudyKind::Porosity},
                                            {"alpha", StudyKind::Alpha},
                                            {"beam", StudyKind::Beam}});
    } catch (const std::out_of_range&) {
      config_error(l.number, l.key, "unknown value '" + l.value + "'");
    }
  }
  RunConfig cfg = default_config(kind);
  for (const auto& l : lines) {
    try {
      table().at(l.key).set(cfg, l.value);
    } catch (const std::out_of_range&) {
      config_error(l.number, l.key, "unknown value '" + l.value + "'");
    } catch (const std::invalid_argument&) {
      config_error(l.number, l.key, "invalid value '" + l.value + "'");
    }
  }
  try {
    validate(cfg.fluid);
    validate(cfg.poro);
    validate(cfg.nitsche);
    validate(cfg.solver);
    validate(cfg.stab);
  } catch (const Error& e) {
    fail(ErrorKind::Config, e.what());
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_reference() {
  std::string out;
  for (const auto& [key, e] : table()) out += key + " : " + e.help + "\n";
  return out;
}

}  // namespace fpi
