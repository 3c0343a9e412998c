#pragma once

// CSV tables and legacy-VTK field output.

#include <string>
#include <vector>

#include "fpi/mesh.hpp"
#include "fpi/problem.hpp"

namespace fpi {

/// Scientific notation with 9 significant digits.
std::string csv_number(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(std::vector<std::string> row);
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  /// Value of column `name` in row `i` ("" when absent).
  const std::string& cell(size_t i, const std::string& name) const;
  double number(size_t i, const std::string& name) const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Background mesh with velocity, pressure and the active flag. Inactive
/// nodes carry their last (ghost-extended) values.
void write_fluid_vtk(const std::string& path, const Mesh& background, const State& s);

/// Poroelastic mesh in the current configuration with velocity, pressure,
/// porosity and displacement.
void write_poro_vtk(const std::string& path, const Mesh& poro, const State& s,
                    const std::vector<double>& nodal_porosity);

/// Porosity at the nodes, averaged over the adjacent elements.
std::vector<double> nodal_porosity(const Mesh& poro, const State& s, const PoroParams& prm);

}  // namespace fpi
