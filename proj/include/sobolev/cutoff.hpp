#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sobolev/grid.hpp"

namespace sobolev::cutoff {

enum class CutoffKind { FirstOrderLog, SecondOrderSmooth };

// First order: r, R are Euclidean distances and
//   eta(x) = 1 ^ (log R - log|x|) / (log R - log r) v 0.
// Second order: r, R are *squared* Euclidean distances, f(x) = sum x_i^2,
//   phi(s) = 1 ^ log(1 - (1 - s/R)^3) / log(1 - (1 - r/R)^3) v 0,
//   eta = phi o f; phi is C^2 on (r, infty), smooth at the outer corner.
struct CutoffSpec {
  int dim = 3;  // lattice dimension N
  double r = 10.0;
  double R = 100.0;
  CutoffKind kind = CutoffKind::FirstOrderLog;

  void validate() const;  // r > 1, R > r; second order additionally r > 100
};

// eta as a function of the squared Euclidean distance f = |x|^2 (both
// constructions are radial in f).
double eta_value(const CutoffSpec& spec, double f);

// eta sampled on a ball (the ball must cover supp eta = {f < R^2} resp.
// {f < R}; intended for small scales and tests).
calculus::GridFunction eta_on_ball(const CutoffSpec& spec, const cayley::BallPtr& ball);

// Builds a covering lattice ball (word radius ceil(sqrt(N) * euclidean
// radius)) and evaluates eta on it.
calculus::GridFunction eta_grid(const CutoffSpec& spec,
                                std::int64_t vertex_cap = cayley::kDefaultVertexCap);

struct DecayRow {
  double R = 0.0;
  double loglog_ratio = 0.0;  // log log(R/r)
  double value = 0.0;
  std::string kind;
};

struct DecayTable {
  int dim = 0;
  double r = 0.0;
  std::vector<DecayRow> rows;
  // Least-squares slope of log(value) vs log log(R/r) over the last
  // fit_points sweep values, one per record kind.
  std::map<std::string, double> fitted_slopes;
  int fit_points = 4;
};

struct DecayOptions {
  int fit_last_k = 4;
  // Cap on the squared-radius table length (memory and runtime guard).
  std::int64_t f_cap = 2'000'000;
};

// Norm decay sweep over R_list (increasing, geometric recommended).
//
// FirstOrderLog (any N >= 3): records "grad" = ||grad eta||_N^N over the
// whole lattice.
//
// SecondOrderSmooth (N = 4 exact fast path): records, per R,
//   "lap_x"       sum_{x in X} |Delta eta|^{N/2},   X = {f(y) > r for all y ~ x}
//   "hess_x"      sum_{x in X} sum_{i,j} |d_j d_i eta|^{N/2}
//   "grad"        ||grad eta||_N^N over the whole lattice
//   "lap_collar"  same Delta sum over the collar Y = {sqrt(r)-2 <= |x| <= sqrt(r)+2}
//   "hess_collar" Hessian sum over Y
//   "lap_bound"   sup over sampled X of |Delta eta(x)| f(x) log(R/r)
// The X/Y split mirrors the interior estimate and the separate boundary
// estimate of the construction; expected asymptotic slopes are 1-N for the
// first-order gradient record and 1-N/2 for the second-order records on X.
//
// All sums are exact lattice sums, computed through sum-of-squares
// representation counts r_k (radial reduction), so no ball is materialized.
DecayTable decay_study(CutoffKind kind, int N, double r, const std::vector<double>& R_list,
                       const DecayOptions& opts = {});

// Representation counts r_dim(k) for k = 0..F (number of ways to write k as
// an ordered sum of dim signed squares). Exposed for tests.
std::vector<std::int64_t> sum_of_squares_counts(std::int64_t F, int dim);

}  // namespace sobolev::cutoff
