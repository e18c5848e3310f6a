#pragma once

#include <Eigen/Core>

#include "sobolev/ball.hpp"

namespace sobolev::calculus {

using cayley::BallPtr;
using cayley::VertexIndex;

// Finitely supported real function on the group: dense values over a
// CayleyBall in canonical order, implicit value 0 outside the ball.
struct GridFunction {
  BallPtr ball;
  Eigen::VectorXd values;

  GridFunction() = default;
  GridFunction(BallPtr b, Eigen::VectorXd v);
  static GridFunction zero(BallPtr b);
  // Dirac delta at a vertex (default: the identity, index 0).
  static GridFunction delta(BallPtr b, VertexIndex at = 0);

  double operator()(VertexIndex i) const { return values[i]; }
  std::int64_t size() const { return values.size(); }
};

// Real 1-form on the oriented edges of a ball (orientation: lower vertex
// index -> higher), one value per undirected edge.
struct EdgeFunction {
  BallPtr ball;
  Eigen::VectorXd values;  // indexed like ball->edges()

  EdgeFunction() = default;
  EdgeFunction(BallPtr b, Eigen::VectorXd v);
  static EdgeFunction zero(BallPtr b);
};

// Re-expresses u on `target` (same group), which must contain supp(u);
// exterior values are the implicit zeros. Used to evaluate operators whose
// support spreads beyond u's ball (halo handling).
GridFunction embed(const GridFunction& u, const BallPtr& target);

// ell^p norm (p >= 1) and sup norm.
double lp_norm(const GridFunction& u, double p);
double sup_norm(const GridFunction& u);

// Deterministic pairwise summation in canonical index order.
double pairwise_sum(const Eigen::VectorXd& v);

}  // namespace sobolev::calculus
