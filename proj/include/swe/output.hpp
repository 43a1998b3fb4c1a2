#pragma once

#include <string>
#include <vector>

#include "swe/integrators.hpp"

namespace swe {

// Time series of conserved quantities, one row per record. Relative errors
// are baselined at the first row. 17 significant digits, deterministic.
void write_csv(const std::vector<RunRecord>& series, const std::string& path);

// Legacy ASCII VTK snapshot: q and vertex-averaged u as point data, cell
// means of D as cell data.
void write_vtk(const ShallowWater& sw, const State& state, const std::string& path);

}  // namespace swe
