#include "fpi/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "fpi/constitutive.hpp"
#include "fpi/error.hpp"

namespace fpi {

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) fail(ErrorKind::InvalidArgument, "csv row width does not match header");
  rows_.push_back(std::move(row));
}

const std::string& CsvTable::cell(size_t i, const std::string& name) const {
  static const std::string empty;
  const auto it = std::find(header_.begin(), header_.end(), name);
  if (it == header_.end() || i >= rows_.size()) return empty;
  return rows_[i][it - header_.begin()];
}

double CsvTable::number(size_t i, const std::string& name) const {
  const std::string& s = cell(i, name);
  return s.empty() ? std::nan("") : std::stod(s);
}

void CsvTable::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + path);
  auto line = [&](const std::vector<std::string>& r) {
    for (size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
}

namespace {

void write_geometry(std::ofstream& out, const std::vector<Point>& x, const std::vector<std::array<int, 4>>& cells) {
  out << "# vtk DataFile Version 3.0\nfpi\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << x.size() << " double\n";
  char buf[96];
  for (const auto& p : x) {
    std::snprintf(buf, sizeof buf, "%.10e %.10e 0\n", p.x, p.y);
    out << buf;
  }
  out << "CELLS " << cells.size() << ' ' << 5 * cells.size() << '\n';
  for (const auto& c : cells) out << "4 " << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << c[3] << '\n';
  out << "CELL_TYPES " << cells.size() << '\n';
  for (size_t i = 0; i < cells.size(); ++i) out << "9\n";
  out << "POINT_DATA " << x.size() << '\n';
}

void write_vectors(std::ofstream& out, const char* name, const std::vector<Point>& v) {
  out << "VECTORS " << name << " double\n";
  char buf[96];
  for (const auto& p : v) {
    std::snprintf(buf, sizeof buf, "%.10e %.10e 0\n", p.x, p.y);
    out << buf;
  }
}

template <class T>
void write_scalars(std::ofstream& out, const char* name, const char* type, const std::vector<T>& v) {
  out << "SCALARS " << name << ' ' << type << " 1\nLOOKUP_TABLE default\n";
  for (const auto& s : v) out << s << '\n';
}

std::ofstream open_or_fail(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + path);
  out.precision(10);
  return out;
}

}  // namespace

void write_fluid_vtk(const std::string& path, const Mesh& bg, const State& s) {
  auto out = open_or_fail(path);
  write_geometry(out, bg.nodes(), bg.elements());
  write_vectors(out, "velocity", s.vF);
  write_scalars(out, "pressure", "double", s.pF);
  std::vector<int> active(s.fluid_valid.begin(), s.fluid_valid.end());
  write_scalars(out, "active", "int", active);
}

void write_poro_vtk(const std::string& path, const Mesh& pm, const State& s, const std::vector<double>& phi) {
  auto out = open_or_fail(path);
  std::vector<Point> x(pm.num_nodes());
  for (int m = 0; m < pm.num_nodes(); ++m) x[m] = pm.node(m) + s.u[m];
  write_geometry(out, x, pm.elements());
  write_vectors(out, "velocity", s.vP);
  write_scalars(out, "pressure", "double", s.pP);
  write_scalars(out, "porosity", "double", phi);
  write_vectors(out, "displacement", s.u);
}

std::vector<double> nodal_porosity(const Mesh& pm, const State& s, const PoroParams& prm) {
  std::vector<double> sum(pm.num_nodes(), 0.0);
  std::vector<int> count(pm.num_nodes(), 0);
  for (int e = 0; e < pm.num_elements(); ++e) {
    const auto c = pm.corners(e);
    const auto& conn = pm.element(e);
    for (int a = 0; a < 4; ++a) {
      const ShapeEval sh = reference_map(c, Point{kRefCorner[a][0], kRefCorner[a][1]});
      Mat2<double> G{0.0, 0.0, 0.0, 0.0};
      for (int b = 0; b < 4; ++b) G += outer(s.u[conn[b]], sh.dN[b]);
      const double J = det(Mat2<double>::identity() + G);
      sum[conn[a]] += porosity(J, s.pP[conn[a]], prm);
      count[conn[a]] += 1;
    }
  }
  for (int m = 0; m < pm.num_nodes(); ++m) sum[m] /= std::max(count[m], 1);
  return sum;
}

}  // namespace fpi
