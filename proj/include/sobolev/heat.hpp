#pragma once

#include <Eigen/Dense>
#include <memory>

#include "sobolev/calculus.hpp"

namespace sobolev::calculus {

// Eigendecomposition of -Delta_D (SPD) on a ball; exactness oracle for matrix
// functions at small scale.
class DenseSpectral {
 public:
  explicit DenseSpectral(const BallPtr& ball);

  const Eigen::VectorXd& eigenvalues() const { return evals_; }  // of -Delta, ascending
  // V f(Lambda) V^T u for a scalar function of -Delta's eigenvalues.
  GridFunction apply(const GridFunction& u, const std::function<double(double)>& f) const;
  GridFunction heat(const GridFunction& u, double t) const;       // e^{t Delta} u
  GridFunction sqrt_op(const GridFunction& u) const;              // (-Delta)^{1/2} u

 private:
  BallPtr ball_;
  Eigen::VectorXd evals_;
  Eigen::MatrixXd evecs_;
};

struct HeatOptions {
  int dense_threshold = 3000;  // dense eigendecomposition below, Lanczos above
  int krylov_dim = 80;
};

struct HeatResult {
  GridFunction u;
  // ell^1 mass of the result on the two outermost rings relative to the
  // total; certificate that the halo absorbed the diffusion.
  double boundary_mass_fraction = 0.0;
};

// e^{t Delta} u on the Dirichlet truncation, t >= 0; t = 0 returns u exactly.
HeatResult heat_apply(const GridFunction& u, double t, const HeatOptions& opts = {});

struct HalfLaplacianOptions {
  double t_max = 400.0;  // upper truncation T of the time integral
  int panels = 24;       // cap on composite 10-node Gauss-Legendre panels
  double panel_start = 0.2;
  double panel_ratio = 1.4;
  double tail_tol = 1e-6;  // relative bound on the dropped tail integral
  int dense_threshold = 3000;
  int krylov_dim = 80;
};

struct HalfLaplacianResult {
  GridFunction u;
  double tail_bound = 0.0;  // computable ell^2 bound on the dropped tail
};

// (-Delta)^{1/2} u via the semigroup integral
//   (1/(2 sqrt(pi))) int_0^inf (u - e^{t Delta} u) t^{-3/2} dt
// (|Gamma(-1/2)| = 2 sqrt(pi); the difference is oriented so that applying
// the operator twice reproduces -Delta). Substituting t = tau^2 removes the
// endpoint singularity; the [T, inf) block of the -u part is integrated
// exactly and the remaining semigroup tail is bounded by
// ||e^{T Delta} u||_2 / sqrt(pi T). Throws NonConvergenceError if that bound
// exceeds tail_tol * ||u||_2.
HalfLaplacianResult half_laplacian(const GridFunction& u, const HalfLaplacianOptions& opts = {});

}  // namespace sobolev::calculus
