#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sobolev/calculus.hpp"
#include "sobolev/translate.hpp"

namespace sobolev::variational {

using calculus::GridFunction;

enum class InitKind { RadialBump, Random };

struct ArmijoParams {
  double slope = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 60;
};

struct MinimizationConfig {
  cayley::GroupSpec spec = cayley::GroupSpec::lattice(3);
  double p = 1.2;
  double q = 7.0;
  int domain_radius = 10;
  InitKind init = InitKind::RadialBump;
  std::uint64_t seed = 0;
  double step = 1.0;  // initial line-search step
  ArmijoParams armijo;
  double tol_grad = 1e-8;  // stop when ||projected gradient||_2 falls below
  int max_iter = 200000;   // total accepted steps across all epsilon stages
  std::vector<double> epsilon_schedule = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
  double bump_sigma = 0.0;  // 0 -> domain_radius / 4
  int restarts = 5;         // random restarts beyond the radial start
  bool include_delta_restart = true;
  double translate_drop_tol = 1e-9;
  int lbfgs_memory = 10;  // 0 falls back to plain projected gradient steps
  std::int64_t vertex_cap = cayley::kDefaultVertexCap;

  // Critical exponents for the standing assumptions 1 < p < N/2, q > p**.
  double p_star2() const;  // p** = Np/(N-2p)
  void validate() const;
};

struct MinimizationResult {
  GridFunction u_star;                    // ||u_star||_q = 1 on the domain ball
  double K_est = 0.0;                     // ||Delta u_star||_p^p (true norm)
  std::vector<double> objective_history;  // regularized objective, non-increasing
  double el_residual = 0.0;               // sup_B(R) |Delta(phi_p(Delta u)) - K |u|^{q-2} u|
  double el_residual_normalized = 0.0;    // el_residual / ||u||_inf^{q-1}
  cayley::GroupElement argmax_vertex;     // must be e after normalization
  double projected_grad_norm = 0.0;
  int iterations = 0;
  int restart_index = 0;
  bool converged = false;
  double constraint_drift = 0.0;  // max observed | ||u||_q - 1 |
  double dropped_translation_mass = 0.0;
  double multiplier_check = 0.0;  // <Delta phi_p(Delta u), u> / <|u|^{q-2} u, u>; = K_est at a critical point
};

// ||Delta u||_p^p / ||u||_q^p with the true (halo-exact) Laplacian norm.
double rayleigh(const GridFunction& u, double p, double q);

struct ElGradient {
  GridFunction free_gradient;       // p * Delta(phi_{p,eps}(Delta u)) on u's ball
  GridFunction projected_gradient;  // tangential component on {||u||_q = 1}
};

// Gradient of J(u) = ||Delta u||_p^p with |t|^{p-2} t regularized as
// (t^2 + eps^2)^{(p-2)/2} t; symmetry of the Dirichlet Laplacian gives
// grad J = p Delta(phi(Delta u)).
ElGradient el_gradient(const GridFunction& u, double p, double q, double eps);

// Minimizes ||Delta u||_p^p over {||u||_q = 1, supp u in B(R)}: projected
// descent on the q-sphere with Armijo backtracking (L-BFGS directions when
// lbfgs_memory > 0), renormalization and translate_to_argmax after every
// accepted step, and a decreasing epsilon schedule re-converged stage by
// stage. The delta restart makes K_est <= rayleigh(delta_e) structural.
MinimizationResult minimize_best_constant(const MinimizationConfig& config);

// Same descent, single run from a caller-provided start vector on the domain
// ball (used by the ground-state pipeline to polish the positive candidate).
MinimizationResult minimize_from(const MinimizationConfig& config, const Eigen::VectorXd& start);

// Translates u so the argmax of |u| sits at the identity (tie-break: smallest
// (distance, lex) vertex). Throws if the dropped mass exceeds drop_tol
// relative to ||u||_1 and drop_tol >= 0.
GridFunction translate_to_argmax(const GridFunction& u, double drop_tol = -1.0,
                                 double* dropped_mass = nullptr);

struct InterpolationReport {
  double lhs = 0.0;    // ||u||_q^q
  double rhs = 0.0;    // ||u||_{q'}^{q'} ||u||_inf^{q-q'}
  double ratio = 0.0;  // lhs / rhs, must be <= 1
  bool holds = false;
};

InterpolationReport interpolation_check(const GridFunction& u, double q_prime, double q);

struct TailProfile {
  std::vector<double> radii;
  std::vector<double> mu;  // sum_{d > R} |Delta u|^p  (Laplacian tail mass)
  std::vector<double> nu;  // sum_{d > R} |u|^q
};

TailProfile tail_profile(const GridFunction& u, double p, double q,
                         const std::vector<double>& radii);

struct BrezisLiebGap {
  double gap_lp = 0.0;         // (||u_n||_p^p - ||u_n - u||_p^p) - ||u||_p^p
  double gap_laplacian = 0.0;  // same with Delta u over a region
};

// region_radius < 0 means the whole (extended) ball.
BrezisLiebGap brezis_lieb_gap(const GridFunction& u_n, const GridFunction& u, double p,
                              double region_radius = -1.0);

// p = 1 Hessian variant on the integer lattice: minimizes ||hess u||_1 over
// the q-sphere (q > N/(N-2)) with the smoothed absolute value
// sqrt(t^2 + eps^2) and the same translation normalization. K_est is the
// exact ell^1 Hessian norm of the result.
MinimizationResult minimize_hessian_l1(const MinimizationConfig& config);

}  // namespace sobolev::variational
