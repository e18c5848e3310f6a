#include "sobolev/pde.hpp"

#include <cmath>
#include <limits>

#include "sobolev/errors.hpp"

namespace sobolev::pde {

namespace {

using Eigen::VectorXd;
using cayley::VertexIndex;

// |t|^{s-2} t with the removable zero at t = 0 (s > 1).
double signed_power(double t, double s) {
  if (t == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(t), s - 1.0), t);
}

VectorXd signed_power(const VectorXd& t, double s) {
  VectorXd out(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) out[i] = signed_power(t[i], s);
  return out;
}

double interior_min(const GridFunction& u) {
  double m = std::numeric_limits<double>::infinity();
  for (VertexIndex i = 0; i < u.ball->size(); ++i)
    if (u.ball->is_interior(i)) m = std::min(m, u.values[i]);
  return m;
}

}  // namespace

ResidualReport verify_system(const GridFunction& u, const GridFunction& v, double p, double q) {
  const double pprime = p / (p - 1.0);
  const double N = u.ball->spec().homogeneous_dim();
  ResidualReport rep;
  rep.hyperbola_ok = 1.0 / pprime + 1.0 / q < (N - 2.0) / N;
  if (!rep.hyperbola_ok)
    throw UsageError("verify_system: (p', q) violates the supercritical hyperbola condition");

  // All Laplacians taken exactly: u and v are embedded into a common ball one
  // ring beyond v's support.
  auto common = cayley::build_ball(u.ball->spec(),
                                   std::max(u.ball->radius(), v.ball->radius()) + 1);
  GridFunction ue = calculus::embed(u, common);
  GridFunction ve = calculus::embed(v, common);
  VectorXd lap_u = calculus::laplacian(ue).values;
  VectorXd lap_v = calculus::laplacian(ve).values;

  // residuals evaluated over u's ball, where both Laplacians are exact and
  // the Euler-Lagrange equation is imposed
  const int r_eq = u.ball->radius();
  double r1 = 0.0, r2 = 0.0;
  for (VertexIndex i = 0; i < common->size(); ++i) {
    if (common->distance(i) > r_eq) continue;
    r1 = std::max(r1, std::abs(-lap_u[i] - signed_power(ve.values[i], pprime)));
    r2 = std::max(r2, std::abs(-lap_v[i] - signed_power(ue.values[i], q)));
  }
  rep.r_system_1 = r1;
  rep.r_system_2 = r2;
  rep.r_biharmonic = r2;  // -Delta v = Delta(phi_p(Delta u)): same expression
  rep.positivity_u = interior_min(u);
  rep.positivity_v = interior_min(v);
  return rep;
}

std::pair<GridFunction, GridFunction> lane_emden_pair(const GridFunction& u, double p) {
  auto ext = cayley::build_ball(u.ball->spec(), u.ball->radius() + 1);
  GridFunction du = calculus::laplacian(calculus::embed(u, ext));
  GridFunction v(ext, -signed_power(du.values, p));
  return {u, v};
}

GroundStateResult ground_state_biharmonic(const variational::MinimizationConfig& config) {
  GroundStateResult out;
  out.stage1 = variational::minimize_best_constant(config);
  const double p = config.p, q = config.q;

  // Positivity step on the extension ball: -Delta v = |Delta u_min| with v
  // superharmonic relative to +-u_min, so v >= |u_min| and ||v||_q >= 1.
  auto ext = cayley::build_ball(config.spec, config.domain_radius + 1, config.vertex_cap);
  GridFunction u_min = calculus::embed(out.stage1.u_star, ext);
  GridFunction rhs(ext, calculus::laplacian(u_min).values.array().abs().matrix());
  GridFunction v = solve_poisson(rhs);
  out.v_norm_q = calculus::lp_norm(v, q);
  out.v_dominates = (v.values - u_min.values.array().abs().matrix()).minCoeff();

  // Restrict the positive candidate to the domain ball and re-minimize from it.
  variational::MinimizationConfig cfg2 = config;
  cfg2.restarts = 0;
  cfg2.include_delta_restart = false;
  auto domain = out.stage1.u_star.ball;
  VectorXd v0(domain->size());
  for (VertexIndex i = 0; i < domain->size(); ++i) {
    auto j = ext->index_of(domain->element(i));
    v0[i] = v.values[*j];
  }
  // re-run the descent with the positive start by passing it as a radial-like
  // seed: reuse minimize via a custom start is not exposed, so run descent by
  // temporarily treating v0 as the bump (sigma unused).
  variational::MinimizationResult polished = variational::minimize_from(cfg2, v0);
  // keep the better of the two minimizers
  const variational::MinimizationResult& winner =
      polished.K_est <= out.stage1.K_est ? polished : out.stage1;

  out.K_est = winner.K_est;
  out.scale_c = std::pow(out.K_est, 1.0 / (q - p));
  // canonical sign: the quotient is even, pick the representative with a
  // positive peak
  VectorXd uw = winner.u_star.values;
  Eigen::Index peak;
  uw.array().abs().maxCoeff(&peak);
  if (uw[peak] < 0.0) uw = -uw;
  GridFunction w(winner.u_star.ball, out.scale_c * uw);

  // multiplier re-estimated from the residual ratio <A w, w> / <B w, w>
  auto wex = cayley::build_ball(config.spec, config.domain_radius + 1, config.vertex_cap);
  GridFunction we = calculus::embed(w, wex);
  VectorXd dw = calculus::laplacian(we).values;
  GridFunction phi_dw(wex, signed_power(dw, p));
  VectorXd A = calculus::laplacian(phi_dw).values;
  VectorXd B = signed_power(we.values, q);
  out.multiplier = A.dot(we.values) / B.dot(we.values);

  double r_bih = 0.0;
  for (VertexIndex i = 0; i < wex->size(); ++i) {
    if (wex->distance(i) > config.domain_radius) continue;
    r_bih = std::max(r_bih, std::abs(A[i] - B[i]));
  }
  out.report.r_biharmonic = r_bih;
  out.report.positivity_u = interior_min(w);
  out.positivity_ok = out.report.positivity_u > 0.0;
  out.u = std::move(w);

  auto [uu, vv] = lane_emden_pair(out.u, p);
  ResidualReport sys = verify_system(uu, vv, p, q);
  out.report.r_system_1 = sys.r_system_1;
  out.report.r_system_2 = sys.r_system_2;
  out.report.positivity_v = sys.positivity_v;
  out.report.hyperbola_ok = sys.hyperbola_ok;
  return out;
}

}  // namespace sobolev::pde
