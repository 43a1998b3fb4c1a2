#pragma once

#include <functional>

#include "swe/assembly.hpp"

namespace swe {

// How the potential vorticity is handled.
//  no_boundary:  full velocity space, q diagnosed from u; valid on closed
//                (fully periodic) meshes where no boundary terms arise.
//  prognostic_z: slip walls; the mass-weighted vorticity Z is carried as a
//                prognostic field so the boundary part of q has its own
//                dynamics and enstrophy stays a conserved quantity.
//  naive:        slip walls but q re-diagnosed from u every evaluation; the
//                boundary acts as an uncontrolled enstrophy source. Kept as
//                a negative control.
enum class Scheme { no_boundary, prognostic_z, naive };

struct State {
  Field u;  // velocity, H(div) space
  Field D;  // depth, discontinuous space
  Field Z;  // mass-weighted vorticity, continuous space (q carrier)
  double t = 0;
};

struct ConservedSet {
  double energy = 0;      // integral of D|u|^2/2 + g D^2/2
  double total_pv = 0;    // integral of q D
  double enstrophy = 0;   // integral of q^2 D
  double mass = 0;        // integral of D
};

// Galerkin time derivatives as coefficient vectors in the three spaces.
struct Tendencies {
  Vector u_t;
  Vector d_t;
  Vector z_t;
};

struct ShallowWater {
  const Mesh* mesh = nullptr;
  Scheme scheme = Scheme::prognostic_z;
  int degree = 2;  // velocity space is BDM(degree-1), depth DG(degree-2)
  double g = 1.0;

  Discretization disc;
  FunctionSpace v0;   // CG(degree): q and Z
  FunctionSpace v0r;  // interior restriction of v0
  FunctionSpace v1;   // BDM(degree-1), slip-restricted unless no_boundary
  FunctionSpace v2;   // DG(degree-2)

  ScalarQuad fq;       // Coriolis parameter at quadrature points
  Vector f_rhs;        // <gamma, f> over v0
  Vector f_rhs_ring;   // <gamma, f> over v0r

  SpMat m0, m1, m2;
  SpMat curl;       // <grad_perp gamma, u>, v0 x v1
  SpMat curl_ring;  // same with interior test functions
  SpMat btan;       // <<gamma, n_perp . u>>, boundary pairing
  Factorized fac0, fac1, fac2, fac0r;

  ShallowWater(const Mesh& mesh, int degree, Scheme scheme, double g,
               const std::function<double(Vec2)>& coriolis, int exactness = -1);

  // throws if D is not strictly positive at every quadrature point
  void check_depth(const Field& D) const;

  Field diagnose_flux(const Field& u, const Field& D) const;       // F = P(uD)
  Field diagnose_q(const Field& Z, const Field& D) const;          // <g,qD>=<g,Z>
  Field diagnose_q_from_velocity(const Field& u, const Field& D) const;
  Field q_of(const State& s) const;  // scheme-appropriate q

  // Z from the vorticity relation <g,Z> = -<grad_perp g,u> + <<g,n_perp.u>> + <g,f>
  Field init_z(const Field& u) const;
  // interior-only vorticity diagnosis (no boundary term by construction)
  Field diagnose_ring_vorticity(const Field& u) const;

  // max-norm residual of the vorticity relation for a carried Z
  double consistency_residual(const Field& u, const Field& Z) const;
  // same with q in place of Z through the D-weighted pairing
  double pv_residual(const Field& u, const Field& q, const Field& D) const;
  // interior rows only; this is the part the dynamics preserve exactly
  double ring_pv_residual(const Field& u, const Field& q, const Field& D) const;

  ConservedSet conserved(const State& s) const;

  Tendencies semidiscrete_tendencies(const State& s) const;
  double energy_rate(const State& s, const Tendencies& t) const;
  double enstrophy_rate(const State& s, const Tendencies& t) const;

  // project initial data and initialize Z consistently
  State make_state(const std::function<Vec2(Vec2)>& u0,
                   const std::function<double(Vec2)>& d0) const;

  double mean_depth(const Field& D) const;
};

}  // namespace swe
