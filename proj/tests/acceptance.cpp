// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Each criterion pins its tolerances in code; timings are wall-clock.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "sobolev/ball.hpp"
#include "sobolev/calculus.hpp"
#include "sobolev/cutoff.hpp"
#include "sobolev/heat.hpp"
#include "sobolev/hodge.hpp"
#include "sobolev/pde.hpp"
#include "sobolev/variational.hpp"

using namespace sobolev;
using namespace sobolev::calculus;
using cayley::GroupSpec;
using cayley::VertexIndex;

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
  std::printf("criterion %2d [%s] %s: %s\n", criterion, ok ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

GridFunction random_function(const cayley::BallPtr& ball, std::uint64_t seed, int support = -1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(ball->size());
  for (VertexIndex i = 0; i < ball->size(); ++i)
    v[i] = (support < 0 || ball->distance(i) <= support) ? dist(rng) : 0.0;
  return GridFunction(ball, std::move(v));
}

variational::MinimizationConfig default_config(int radius) {
  variational::MinimizationConfig cfg;
  cfg.spec = GroupSpec::lattice(3);
  cfg.p = 1.2;
  cfg.q = 7.0;
  cfg.domain_radius = radius;
  cfg.max_iter = 250000;
  cfg.tol_grad = 1e-9;
  cfg.restarts = 2;
  cfg.seed = 7;
  return cfg;
}

// ---------------------------------------------------------------- criterion 1
void criterion_exact_identities() {
  Timer timer;
  double worst_identity = 0.0, worst_symmetry = 0.0, worst_green = 0.0;
  for (auto spec : {GroupSpec::lattice(3), GroupSpec::heisenberg()}) {
    const int radius = spec.kind == cayley::GroupKind::IntegerLattice ? 6 : 4;
    auto ball = cayley::build_ball(spec, radius);
    for (int t = 0; t < 50; ++t) {
      auto u = random_function(ball, 1000 + t);
      auto lhs = laplacian_via_hessian(u);
      auto rhs = laplacian(u);
      worst_identity =
          std::max(worst_identity, (lhs.values + rhs.values).array().abs().maxCoeff());

      auto v = random_function(ball, 2000 + t, radius - 1);
      auto w = random_function(ball, 3000 + t, radius - 1);
      const double sym =
          std::abs(laplacian(v).values.dot(w.values) - v.values.dot(laplacian(w).values));
      worst_symmetry = std::max(worst_symmetry, sym);

      double dirichlet = 0.0;
      for (VertexIndex i = 0; i < ball->size(); ++i)
        for (int g = 0; g < ball->num_generators(); ++g) {
          VertexIndex j = ball->neighbor(i, g);
          const double d = (j == cayley::kOutside ? 0.0 : v.values[j]) - v.values[i];
          dirichlet += d * d;
        }
      worst_green = std::max(
          worst_green, std::abs(-laplacian(v).values.dot(v.values) - 0.5 * dirichlet));
    }
  }
  const double elapsed = timer.seconds();
  const bool ok =
      worst_identity < 1e-12 && worst_symmetry < 1e-12 && worst_green < 1e-12 && elapsed < 30.0;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "identity %.2e, symmetry %.2e, green %.2e (tol 1e-12), %.1fs (cap 30s)",
                worst_identity, worst_symmetry, worst_green, elapsed);
  report(1, "exact identity suite", ok, buf);
}

// ---------------------------------------------------------------- criterion 2
void criterion_chain_rule() {
  auto ball = cayley::build_ball(GroupSpec::lattice(3), 5);
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> dist(-4, 4);

  double worst_quadratic = 0.0;
  std::int64_t checked = 0, members = 0;
  ScalarC2 philog{[](double s) { return std::log1p(s * s); },
                  [](double s) { return 2 * s / (1 + s * s); },
                  [](double s) {
                    const double d = 1 + s * s;
                    return 2 * (1 - s * s) / (d * d);
                  },
                  {0.0, std::sqrt(3.0), -std::sqrt(3.0)}};

  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd f(ball->size());
    for (VertexIndex i = 0; i < ball->size(); ++i) f[i] = dist(rng);
    GridFunction ff(ball, f);

    // quadratic: Delta(f^2) = 2 f Delta f + 2 Gamma f exactly
    GridFunction f2(ball, f.array().square().matrix());
    auto l2 = laplacian(f2);
    auto lf = laplacian(ff);
    auto gf = gamma(ff);
    for (VertexIndex i = 0; i < ball->size(); ++i) {
      if (!ball->is_interior(i)) continue;
      const double rhs = 2 * f[i] * lf.values[i] + 2 * gf.values[i];
      worst_quadratic = std::max(worst_quadratic, std::abs(l2.values[i] - rhs));
    }

    auto rep = chain_rule_check(philog, ff);
    checked += rep.checked;
    members += rep.members;
  }
  const bool ok = worst_quadratic < 1e-12 && checked > 0 && members == checked;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "quadratic error %.2e (tol 1e-12), membership %lld/%lld",
                worst_quadratic, static_cast<long long>(members),
                static_cast<long long>(checked));
  report(2, "discrete chain rule", ok, buf);
}

// ---------------------------------------------------------------- criterion 3
void criterion_cutoff_decay() {
  Timer timer;
  auto first =
      cutoff::decay_study(cutoff::CutoffKind::FirstOrderLog, 3, 10.0, {100, 200, 400, 800, 1600});
  const double slope1 = first.fitted_slopes.at("grad");

  auto second = cutoff::decay_study(cutoff::CutoffKind::SecondOrderSmooth, 4, 200.0,
                                    {1600, 6400, 25600, 102400});
  const double slope2 = second.fitted_slopes.at("lap_x");

  bool collar_monotone = true;
  double prev = 1e300;
  for (const auto& row : second.rows)
    if (row.kind == "lap_collar") {
      if (row.value >= prev) collar_monotone = false;
      prev = row.value;
    }

  const double elapsed = timer.seconds();
  const bool ok_first = std::abs(slope1 - (-2.0)) <= 0.25 * 2.0;
  const bool ok_second = std::abs(slope2 - (-1.0)) <= 0.25 * 1.0;
  const bool ok = ok_first && ok_second && collar_monotone && elapsed < 600.0;
  char buf[320];
  std::snprintf(buf, sizeof(buf),
                "first-order slope %.3f (target -2 +-25%%), second-order slope %.3f (target -1 "
                "+-25%%), collar monotone %s, %.0fs (cap 600s)",
                slope1, slope2, collar_monotone ? "yes" : "no", elapsed);
  report(3, "cutoff norm decay", ok, buf);
}

// ---------------------------------------------------------------- criterion 4
variational::MinimizationResult criterion_minimization() {
  Timer timer;
  auto cfg10 = default_config(10);
  auto res10 = variational::minimize_best_constant(cfg10);
  auto cfg14 = default_config(14);
  cfg14.bump_sigma = 2.5;  // same start profile as R = 10
  auto res14 = variational::minimize_best_constant(cfg14);

  const double delta_bound = std::pow(6.0, 1.2) + 6.0;
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < res10.objective_history.size(); ++i)
    if (res10.objective_history[i + 1] > res10.objective_history[i] + 1e-12) monotone = false;

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  bool random_never_beats = true;
  auto ball = res10.u_star.ball;
  for (int t = 0; t < 1000; ++t) {
    Eigen::VectorXd v(ball->size());
    for (VertexIndex i = 0; i < ball->size(); ++i) v[i] = dist(rng);
    GridFunction w(ball, v);
    if (variational::rayleigh(w, cfg10.p, cfg10.q) < res10.K_est - 1e-9)
      random_never_beats = false;
  }

  const double stability = std::abs(res10.K_est - res14.K_est) / res10.K_est;
  const double elapsed = timer.seconds();

  const bool ok_bound = res10.K_est <= delta_bound;
  const bool ok_resid = res10.el_residual_normalized < 1e-4;
  const bool ok_stab = stability < 0.01;
  const bool ok = ok_bound && monotone && ok_resid && ok_stab && random_never_beats &&
                  elapsed < 900.0;
  char buf[420];
  std::snprintf(buf, sizeof(buf),
                "K(10) %.6f <= %.6f %s, monotone %s, residual %.2e (tol 1e-4) %s, stability "
                "%.2f%% (tol 1%%) %s, 1000 samples %s, %.0fs (cap 900s)",
                res10.K_est, delta_bound, ok_bound ? "ok" : "VIOLATED", monotone ? "yes" : "NO",
                res10.el_residual_normalized, ok_resid ? "ok" : "VIOLATED", 100 * stability,
                ok_stab ? "ok" : "VIOLATED", random_never_beats ? "ok" : "BEATEN", elapsed);
  report(4, "best-constant minimization", ok, buf);
  return res10;
}

// -------------------------------------------------------------- criteria 5, 6
void criterion_ground_state_and_system() {
  auto cfg = default_config(10);
  cfg.restarts = 0;
  auto gs = pde::ground_state_biharmonic(cfg);

  const bool ok5 = gs.positivity_ok && std::abs(gs.multiplier - 1.0) < 1e-8;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "interior min %.3e > 0 %s, |multiplier-1| %.2e (tol 1e-8)",
                gs.report.positivity_u, gs.positivity_ok ? "ok" : "VIOLATED",
                std::abs(gs.multiplier - 1.0));
  report(5, "positive ground state", ok5, buf);

  // structural identity for arbitrary u
  auto ball = cayley::build_ball(GroupSpec::lattice(3), 5);
  double worst_structural = 0.0;
  for (int t = 0; t < 20; ++t) {
    auto u = random_function(ball, 600 + t);
    auto [uu, vv] = pde::lane_emden_pair(u, cfg.p);
    auto rep = pde::verify_system(uu, vv, cfg.p, cfg.q);
    auto du = laplacian(calculus::embed(u, vv.ball));
    worst_structural = std::max(
        worst_structural, rep.r_system_1 / std::max(1.0, du.values.array().abs().maxCoeff()));
  }

  auto [u, v] = pde::lane_emden_pair(gs.u, cfg.p);
  auto rep = pde::verify_system(u, v, cfg.p, cfg.q);
  const double umax = sup_norm(gs.u);
  const bool ok6 = worst_structural < 1e-13 && rep.r_system_2 / std::pow(umax, cfg.q - 1) < 1e-4 &&
                   rep.positivity_u > 0 && rep.positivity_v > 0;
  char buf6[320];
  std::snprintf(buf6, sizeof(buf6),
                "structural residual %.2e (tol 1e-13), system residual %.2e (tol 1e-4), "
                "min u %.2e, min v %.2e",
                worst_structural, rep.r_system_2 / std::pow(umax, cfg.q - 1), rep.positivity_u,
                rep.positivity_v);
  report(6, "lane-emden system", ok6, buf6);
}

// ---------------------------------------------------------------- criterion 7
void criterion_hodge() {
  auto ball = cayley::build_ball(GroupSpec::lattice(2), 10);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double worst_div = 0.0, worst_orth = 0.0, worst_rec = 0.0;
  for (int t = 0; t < 10; ++t) {
    Eigen::VectorXd a(ball->edges().size());
    for (Eigen::Index k = 0; k < a.size(); ++k) a[k] = dist(rng);
    EdgeFunction alpha(ball, a);
    auto res = hodge_decompose(alpha);
    auto divh = divergence(res.circulation);
    for (VertexIndex i = 0; i < ball->size(); ++i)
      if (ball->is_interior(i)) worst_div = std::max(worst_div, std::abs(divh.values[i]));
    worst_orth = std::max(worst_orth, std::abs(res.orthogonality));
    Eigen::VectorXd rec = edge_gradient(res.potential).values + res.circulation.values;
    worst_rec = std::max(worst_rec, (rec - alpha.values).array().abs().maxCoeff());
  }
  const bool ok = worst_div < 1e-10 && worst_orth < 1e-8 && worst_rec < 1e-12;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "div h %.2e (tol 1e-10), <grad f, h> %.2e (tol 1e-8), reconstruction %.2e",
                worst_div, worst_orth, worst_rec);
  report(7, "hodge decomposition", ok, buf);
}

// ---------------------------------------------------------------- criterion 8
void criterion_half_laplacian() {
  auto ball = cayley::build_ball(GroupSpec::lattice(2), 5);
  auto u = random_function(ball, 12, 3);
  auto half = half_laplacian(u);
  DenseSpectral spec(ball);
  auto exact = spec.sqrt_op(u);
  const double rel_sqrt = (half.u.values - exact.values).norm() / exact.values.norm();
  auto twice = half_laplacian(half.u);
  auto lap = laplacian(u);
  const double rel_square = (twice.u.values + lap.values).norm() / lap.values.norm();
  const bool ok = rel_sqrt < 1e-4 && rel_square < 1e-3;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "vs spectral sqrt %.2e (tol 1e-4), squared vs -laplacian %.2e (tol 1e-3)",
                rel_sqrt, rel_square);
  report(8, "half-laplacian quadrature", ok, buf);
}

// ---------------------------------------------------------------- criterion 9
void criterion_growth() {
  auto g2 = cayley::growth_sequence(GroupSpec::lattice(2), 20);
  bool exact = true;
  for (int n = 1; n <= 20; ++n) {
    std::int64_t count = 0;  // brute-force oracle
    for (int x = -n; x <= n; ++x)
      for (int y = -n; y <= n; ++y)
        if (std::abs(x) + std::abs(y) <= n) ++count;
    if (g2.values[n] != count || g2.values[n] != 2LL * n * n + 2 * n + 1) exact = false;
  }
  auto gh = cayley::growth_sequence(GroupSpec::heisenberg(), 15);
  const bool ok = exact && std::abs(gh.fitted_dimension - 4.0) <= 0.3;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "Z^2 exact (n<=20) %s, heisenberg exponent %.3f (4 +- 0.3)",
                exact ? "yes" : "NO", gh.fitted_dimension);
  report(9, "growth functions", ok, buf);
}

// --------------------------------------------------------------- criterion 10
void criterion_brezis_lieb() {
  auto ball = cayley::build_ball(GroupSpec::lattice(3), 8);
  // disjoint supports with dyadic values: gap must be exactly zero
  Eigen::VectorXd u = Eigen::VectorXd::Zero(ball->size());
  Eigen::VectorXd far_bump = Eigen::VectorXd::Zero(ball->size());
  for (VertexIndex i = 0; i < ball->size(); ++i) {
    if (ball->distance(i) <= 2) u[i] = 1.0;
    if (ball->distance(i) >= 6 && ball->distance(i) <= 7) far_bump[i] = 0.5;
  }
  GridFunction uf(ball, u);
  GridFunction un(ball, u + far_bump);
  auto gap0 = variational::brezis_lieb_gap(un, uf, 2.0);

  // weakly-overlapping gaussians, 1/n perturbation: decreasing below 1e-6
  Eigen::VectorXd g0(ball->size()), g1(ball->size());
  for (VertexIndex i = 0; i < ball->size(); ++i) {
    const auto& x = ball->element(i);
    double f0 = 0.0, f1 = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double c = static_cast<double>(x[k]);
      f0 += c * c;
      f1 += (k == 0 ? (c - 7.0) * (c - 7.0) : c * c);
    }
    g0[i] = std::exp(-f0 / 2.0);
    g1[i] = std::exp(-f1 / 2.0);
  }
  GridFunction base(ball, g0);
  bool decreasing = true;
  double prev = 1e300, last = 0.0;
  for (double n : {1.0, 10.0, 100.0, 1000.0}) {
    GridFunction um(ball, g0 + g1 / n);
    last = std::abs(variational::brezis_lieb_gap(um, base, 2.0).gap_lp);
    if (last >= prev) decreasing = false;
    prev = last;
  }
  const bool ok = gap0.gap_lp == 0.0 && decreasing && last < 1e-6;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "disjoint gap %.1e (must be exactly 0), overlapping gap at n=1e3: %.2e (tol 1e-6)",
                gap0.gap_lp, last);
  report(10, "brezis-lieb refinement", ok, buf);
}

// --------------------------------------------------------------- criterion 11
void criterion_hessian_l1() {
  variational::MinimizationConfig cfg;
  cfg.spec = GroupSpec::lattice(3);
  cfg.p = 1.0;
  cfg.q = 4.0;
  cfg.domain_radius = 6;
  cfg.max_iter = 60000;
  cfg.restarts = 1;
  cfg.seed = 5;
  auto res = variational::minimize_hessian_l1(cfg);
  const double bound = 16.0 * 9.0;
  const bool ok = res.K_est <= bound + 1e-12 && res.constraint_drift < 1e-12;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "K~ %.6f <= %.1f, constraint drift %.2e (tol 1e-12)",
                res.K_est, bound, res.constraint_drift);
  report(11, "p=1 hessian variant", ok, buf);
}

}  // namespace

int main() {
  Timer total;
  criterion_exact_identities();
  criterion_chain_rule();
  criterion_cutoff_decay();
  criterion_minimization();
  criterion_ground_state_and_system();
  criterion_hodge();
  criterion_half_laplacian();
  criterion_growth();
  criterion_brezis_lieb();
  criterion_hessian_l1();
  std::printf("acceptance: %d criteria failed, %.0fs total\n", g_failures, total.seconds());
  return g_failures == 0 ? 0 : 1;
}
