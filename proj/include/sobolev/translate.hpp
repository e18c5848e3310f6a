#pragma once

#include "sobolev/grid.hpp"

namespace sobolev::cayley {

struct TranslateResult {
  calculus::GridFunction function;
  // ell^1 mass of source values whose destination g^{-1} y left the ball.
  double dropped_mass = 0.0;
};

// Left translation x -> u(g x) restricted to u's ball. Left multiplication is
// an automorphism of the right Cayley graph, so adjacency (and all ell^p
// norms, when nothing is dropped) are preserved.
TranslateResult translate_function(const calculus::GridFunction& u, const GroupElement& g);

}  // namespace sobolev::cayley
