#pragma once

#include "sobolev/grid.hpp"

namespace sobolev::calculus {

// Edge gradient: (grad u)(e) = u(head) - u(tail) on the ball's oriented edges.
EdgeFunction edge_gradient(const GridFunction& u);

// Signed incidence sum per vertex, oriented so that div(grad u) = Delta u at
// vertices all of whose edges lie in the ball:
//   div a(x) = sum_{e = (x, y)} a(e) - sum_{e = (y, x)} a(e).
GridFunction divergence(const EdgeFunction& alpha);

struct HodgeResult {
  GridFunction potential;     // f, supported on interior vertices
  EdgeFunction circulation;   // h = alpha - grad f, div h = 0 on interior
  double solve_residual = 0.0;
  double orthogonality = 0.0;  // <grad f, h>
};

struct HodgeOptions {
  double tol = 1e-12;
  int max_iterations = 10000;
};

// ell^2(E) = grad(D) + H: solves Delta f = div alpha on interior vertices
// (f = 0 on the boundary ring and outside), h = alpha - grad f. The interior
// restriction makes <grad f, h> vanish at solver precision.
HodgeResult hodge_decompose(const EdgeFunction& alpha, const HodgeOptions& opts = {});

}  // namespace sobolev::calculus

namespace sobolev::pde {

struct PoissonOptions {
  double tol = 1e-12;  // relative residual
  int max_iterations = 20000;
};

// Solves -Delta w = g on the ball with implicit-zero exterior (Dirichlet);
// -Delta_D is an irreducible M-matrix, so g >= 0, g != 0 gives w > 0 at every
// ball vertex. Throws NonConvergenceError if CG misses the tolerance.
calculus::GridFunction solve_poisson(const calculus::GridFunction& g,
                                     const PoissonOptions& opts = {});

}  // namespace sobolev::pde
