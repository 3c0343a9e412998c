#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fpi/error.hpp"
#include "fpi/studies.hpp"

using namespace fpi;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    return e.what();
  }
  FAIL("expected a config error");
  return "";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp(const std::string& name) {
  return std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/" + name;
}

}  // namespace

TEST_CASE("config defaults") {
  const RunConfig c = parse_config_text("");
  CHECK(c.study == StudyKind::Convergence);
  CHECK(c.h_list.size() == 5);
  CHECK(c.nitsche.gamma_n == doctest::Approx(1.0 / 45.0));
  CHECK(c.nitsche.zeta == -1.0);
  CHECK(c.solver.dt == 0.05);
  CHECK(c.t_end == doctest::Approx(0.1));

  const RunConfig p = parse_config_text("study = porosity\n");
  CHECK(p.mms.AP == -1e-5);
  CHECK(p.mms.APS == -1e-5);
  CHECK(p.poro.permeability_mode == PermeabilityMode::KozenyCarman);
  CHECK(p.poro.K0 == 0.1);
  CHECK(p.poro.phi_ref == 0.5);

  const RunConfig b = parse_config_text("# demo\nstudy = beam   # bending\n");
  CHECK(b.fluid.mu == 0.01);
  CHECK(b.fluid.rho == 0.1);
  CHECK(b.poro.K0 == 1e-5);
  CHECK(b.poro.E == 100.0);
  CHECK(b.poro.rho_s0 == 0.2);
  CHECK(b.poro.porosity_mode == PorosityMode::Constitutive);
  CHECK(b.solver.dt == 0.02);
  CHECK(b.t_end == 4.0);
  CHECK(b.beam.nx == 100);
  CHECK(b.beam.ny == 50);
}

TEST_CASE("config values") {
  const RunConfig c = parse_config_text(
      "gamma_n_inv = 45\ngamma_t_inv = 100\ntangential = substitution\nh_list = 0.25, 0.125\n"
      "jacobian = fd\nparallel = false\nprobe_tip = 0.5, 0.9\nstudy = penalty\n");
  CHECK(c.study == StudyKind::Penalty);
  CHECK(c.nitsche.gamma_n == doctest::Approx(1.0 / 45.0).epsilon(1e-15));
  CHECK(c.nitsche.gamma_t == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(c.nitsche.tangential == TangentialMethod::Substitution);
  CHECK(c.h_list == std::vector<double>{0.25, 0.125});
  CHECK(c.solver.jacobian == JacobianMode::FiniteDifference);
  CHECK_FALSE(c.solver.parallel);
}

TEST_CASE("config errors name the line and key") {
  std::string e = config_error("tangential = nitschee\n");
  CHECK(e.find("unknown value") != std::string::npos);
  CHECK(e.find("tangential") != std::string::npos);
  CHECK(e.find("line 1") != std::string::npos);

  e = config_error("h = 0.125\n\nmystery = 3\n");
  CHECK(e.find("line 3") != std::string::npos);
  CHECK(e.find("mystery") != std::string::npos);

  e = config_error("dt = fast\n");
  CHECK(e.find("dt") != std::string::npos);
  CHECK(config_error("study = beams\n").find("unknown value") != std::string::npos);
  CHECK(config_error("max_iterations = 2.5\n").find("max_iterations") != std::string::npos);
  CHECK(config_error("dt\n").find("line 1") != std::string::npos);
  CHECK(config_error("gamma_n_inv = 0\n").find("gamma_n_inv") != std::string::npos);
  config_error("nu = 0.5\n");  // rejected by parameter validation
  CHECK_THROWS_AS(parse_config(temp("fpi_does_not_exist.cfg")), Error);
}

TEST_CASE("config reference documents every key") {
  const std::string ref = config_reference();
  for (const char* key : {"study", "h_list", "gamma_n_inv", "tangential", "beta_bj", "alpha_bj", "porosity_list",
                          "beam_nx", "probe_upstream", "output_dir"})
    CHECK(ref.find(std::string(key) + " :") != std::string::npos);
}

TEST_CASE("csv formatting") {
  CHECK(csv_number(0.1) == "1.00000000e-01");
  CHECK(csv_number(-45.0) == "-4.50000000e+01");
  CsvTable t({"a", "b"});
  t.add_row({"1", "x"});
  CHECK_THROWS_AS(t.add_row({"1"}), Error);
  CHECK(t.cell(0, "b") == "x");
  CHECK(t.cell(0, "c").empty());
  CHECK(std::isnan(t.number(0, "c")));
  t.write(temp("fpi_t.csv"));
  CHECK(slurp(temp("fpi_t.csv")) == "a,b\n1,x\n");
}

TEST_CASE("observed order") {
  CHECK(observed_order(4.0, 1.0) == doctest::Approx(2.0));
  CHECK(observed_order(1.0, 1.0 / std::pow(2.0, 1.5)) == doctest::Approx(1.5));
}

TEST_CASE("convergence study output is self-describing and reproducible") {
  RunConfig c = parse_config_text("h_list = 0.25, 0.125\nt_end = 0.05\nparallel = false\n");
  const CsvTable a = run_convergence(c);
  REQUIRE(a.rows().size() == 4);
  for (size_t i = 0; i < a.rows().size(); ++i) {
    CHECK(a.cell(i, "status") == "ok");
    CHECK(!a.cell(i, "gamma_n_inv").empty());
    CHECK(!a.cell(i, "E_t").empty());
  }
  CHECK(a.cell(0, "variant") == "BJ");
  CHECK(a.cell(2, "variant") == "BJS");
  CHECK(a.cell(0, "order_vF_L2").empty());
  CHECK(!a.cell(1, "order_vF_L2").empty());
  CHECK(a.number(0, "gamma_n_inv") == doctest::Approx(45.0));
  a.write(temp("fpi_conv_a.csv"));
  run_convergence(c).write(temp("fpi_conv_b.csv"));
  CHECK(slurp(temp("fpi_conv_a.csv")) == slurp(temp("fpi_conv_b.csv")));
}

TEST_CASE("failed runs are recorded, not fatal") {
  RunConfig c = parse_config_text("h_list = 0.25\nt_end = 0.05\nmax_iterations = 1\n");
  const CsvTable t = run_convergence(c);
  CHECK(t.cell(0, "status") == "failed");
  CHECK(t.cell(0, "message").find("Newton") != std::string::npos);
  CHECK(t.cell(0, "message").find(',') == std::string::npos);
  CHECK(t.cell(0, "vF_L2").empty());
}

TEST_CASE("beam mesh") {
  const Mesh m = build_beam_mesh(10, 120);
  CHECK(m.num_elements() == 1200);
  CHECK(m.nodes_with_tag("bottom").size() == 11);
  double top = 0.0, area = 0.0;
  for (const auto& p : m.nodes()) top = std::max(top, p.y);
  for (int e = 0; e < m.num_elements(); ++e) area += m.area(e);
  CHECK(top == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(area == doctest::Approx(0.1 * 0.85 + kPi * 0.05 * 0.05 / 2).epsilon(2e-3));
  for (const auto& p : m.nodes()) CHECK(p.x >= 0.45 - 1e-15);
}

TEST_CASE("short coarse beam run") {
  RunConfig c = parse_config_text(
      "study = beam\nbeam_nx = 20\nbeam_ny = 10\nbeam_poro_nx = 4\nbeam_poro_ny = 20\nt_end = 0.06\n"
      "output_every = 1\n");
  const std::string dir = temp("fpi_beam_test");
  const BeamResult r = run_beam(c, dir);
  CHECK(r.completed);
  REQUIRE(r.probes.rows().size() == 4);
  CHECK(r.probes.number(0, "tip_ux") == 0.0);
  CHECK(r.probes.number(3, "t") == doctest::Approx(0.06));
  CHECK(std::ifstream(dir + "/probes.csv").good());
  const std::string vtk = slurp(dir + "/fluid_00003.vtk");
  CHECK(vtk.find("SCALARS active int") != std::string::npos);
  CHECK(vtk.find("VECTORS velocity double") != std::string::npos);
  CHECK(slurp(dir + "/poro_00003.vtk").find("SCALARS porosity double") != std::string::npos);
}
