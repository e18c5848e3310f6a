#pragma once

#include <Eigen/SparseCore>
#include <functional>
#include <vector>

#include "sobolev/grid.hpp"

namespace sobolev::calculus {

// Graph Laplacian with implicit-zero exterior (Dirichlet truncation):
//   Delta u(x) = sum_{y ~ x} (u(y) - u(x)),
// the degree is the full |S| at every vertex, boundary edges contribute 0.
// Exact (equal to the infinite-graph value) at vertices whose 1-ball lies in
// the ball, i.e. at distance <= R-1.
GridFunction laplacian(const GridFunction& u);

// Difference in the i-th generator direction: d_i u(x) = u(x s_i) - u(x).
GridFunction directional_diff(const GridFunction& u, int generator);

// Second difference d_j d_i u as a grid function on u's ball.
GridFunction second_diff(const GridFunction& u, int gen_i, int gen_j);

// Carre du champ: Gamma f(x) = 1/2 sum_{y ~ x} |f(y) - f(x)|^2 (unit weights).
GridFunction gamma(const GridFunction& u);

// -Delta u(x) = 1/2 sum_i d_{s_i^{-1}} d_{s_i} u(x); must agree with
// -laplacian(u) to machine precision everywhere on the ball.
GridFunction laplacian_via_hessian(const GridFunction& u);

// True Hessian p-norm over the whole group:
//   (sum_{i,j} sum_x |d_j d_i u(x)|^p)^(1/p),
// evaluated on an internally built extension of radius R+2 so the halo is
// exact.
double hessian_norm(const GridFunction& u, double p);

// True D^{1,p} norm (sum over x and neighbors of |u(y)-u(x)|^p)^(1/p),
// extension radius R+1.
double d1p_norm(const GridFunction& u, double p);

// True D^{2,p} norm = ||Delta u||_p over the group, extension radius R+1.
double d2p_norm(const GridFunction& u, double p);

struct NormReport {
  double p = 2.0;
  double lp = 0.0;         // ||u||_p
  double d1p = 0.0;        // ||u||_{D^{1,p}}
  double d2p = 0.0;        // ||Delta u||_p
  double d2p_tilde = 0.0;  // ||hess u||_p
};

NormReport norm_report(const GridFunction& u, double p);

// Twice continuously differentiable scalar function with the data the chain
// rule check needs. `d2_critical_points` lists interior critical points of
// phi'' so interval extrema can be computed exactly.
struct ScalarC2 {
  std::function<double(double)> phi;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  std::vector<double> d2_critical_points;
};

struct ChainRuleVertexReport {
  VertexIndex vertex = 0;
  double ratio = 0.0;      // (Delta phi(f) - phi'(f) Delta f) / Gamma f
  double lo = 0.0;         // min phi'' over [m, M] on the 1-ball
  double hi = 0.0;         // max phi'' over [m, M]
  double margin = 0.0;     // min(ratio - lo, hi - ratio); >= 0 means membership
  bool member = false;
};

struct ChainRuleReport {
  std::vector<ChainRuleVertexReport> vertices;  // interior vertices with Gamma f > 0
  std::int64_t checked = 0;
  std::int64_t members = 0;
  double worst_margin = 0.0;
};

// Verifies Delta phi(f)(x) = phi'(f(x)) Delta f(x) + phi''(xi) Gamma f(x) for
// some xi in [min f, max f] over the 1-ball of x, at every interior vertex
// with Gamma f(x) > 0: the implied ratio must lie in the range of phi'' over
// that interval.
ChainRuleReport chain_rule_check(const ScalarC2& phi, const GridFunction& f);

// Sparse Dirichlet Laplacian of the ball (negative definite, full degree |S|).
Eigen::SparseMatrix<double> laplacian_matrix(const BallPtr& ball);

}  // namespace sobolev::calculus
