#pragma once

#include "sobolev/hodge.hpp"
#include "sobolev/variational.hpp"

namespace sobolev::pde {

using calculus::GridFunction;

struct ResidualReport {
  double r_biharmonic = 0.0;  // sup_B(R) |Delta(|Delta u|^{p-2} Delta u) - |u|^{q-2} u|
  double r_system_1 = 0.0;    // sup |-Delta u - |v|^{p'-2} v|
  double r_system_2 = 0.0;    // sup |-Delta v - |u|^{q-2} u|
  double positivity_u = 0.0;  // min of u over interior vertices of its ball
  double positivity_v = 0.0;
  bool hyperbola_ok = false;  // 1/p' + 1/q < (N-2)/N (supercritical)
};

struct GroundStateResult {
  GridFunction u;  // rescaled positive solution, multiplier 1
  double K_est = 0.0;
  double scale_c = 0.0;      // c = K_est^{1/(q-p)}
  double multiplier = 0.0;   // <Delta phi_p(Delta u), u> / <|u|^{q-2} u, u>; must be 1
  double v_norm_q = 0.0;     // intermediate Poisson comparison: ||v||_q >= 1
  double v_dominates = 0.0;  // min(v - |u_min|); >= 0 by the maximum principle
  bool positivity_ok = false;
  ResidualReport report;
  variational::MinimizationResult stage1;  // the underlying minimization
};

// Positive ground state of Delta(|Delta u|^{p-2} Delta u) = |u|^{q-2} u:
// 1. minimize the quotient (stage 1) to get u_min with multiplier K;
// 2. positivity step: solve -Delta v = |Delta u_min| on the extension ball
//    (maximum principle gives v >= |u_min| and ||v||_q >= 1), restrict to the
//    domain ball, renormalize, and re-minimize from it;
// 3. rescale by c = K^{1/(q-p)} so the multiplier becomes exactly 1
//    (Delta phi_p scales by c^{p-1}, the right side by c^{q-1}).
GroundStateResult ground_state_biharmonic(const variational::MinimizationConfig& config);

// Reduction-by-inversion: v = -|Delta u|^{p-2} Delta u on the extension
// ball; |v|^{p'-2} v = -Delta u holds identically since (p-1)(p'-1) = 1.
std::pair<GridFunction, GridFunction> lane_emden_pair(const GridFunction& u, double p);

// Residuals and positivity for the Lane-Emden system
//   -Delta u = |v|^{p'-2} v,  -Delta v = |u|^{q-2} u.
// Throws UsageError if (p', q) does not satisfy the supercritical hyperbola
// condition 1/p' + 1/q < (N-2)/N.
ResidualReport verify_system(const GridFunction& u, const GridFunction& v, double p, double q);

}  // namespace sobolev::pde
