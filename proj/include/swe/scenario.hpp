#pragma once

#include <memory>

#include "swe/config.hpp"
#include "swe/expression.hpp"

namespace swe {

// A fully assembled run: mesh, discretization and initial state, plus the
// analytic reference when the scenario is a steady state.
struct Problem {
  std::unique_ptr<Mesh> mesh;
  std::unique_ptr<ShallowWater> model;
  State state;
  bool steady = false;
  std::function<Vec2(Vec2)> u_ref;
  std::function<double(Vec2)> d_ref;
};

Problem setup(const Config& cfg);

// StepConfig with scenario defaults resolved (tau, reference depth)
StepConfig to_step_config(const Config& cfg, const Problem& p);

}  // namespace swe
