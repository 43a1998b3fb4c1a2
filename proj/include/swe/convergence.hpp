#pragma once

#include <vector>

#include "swe/scenario.hpp"

namespace swe {

struct ConvergenceRow {
  int level = 0;       // refinement (disk) or cells per side (rectangle)
  double h = 0;        // longest edge
  double err_u = 0;    // L2 error of velocity against the steady reference
  double err_d = 0;    // L2 error of depth
  double rate_u = 0;   // log2 ratio to the previous level (0 on the first row)
  double rate_d = 0;
};

// Runs a steady scenario to the configured horizon at each resolution and
// measures L2 errors against the analytic state. Levels may run in parallel;
// SWE_THREADS caps the worker count (default 1).
std::vector<ConvergenceRow> convergence_study(const Config& cfg,
                                              const std::vector<int>& levels);

}  // namespace swe
