#include "checks.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "sobolev/calculus.hpp"
#include "sobolev/heat.hpp"
#include "sobolev/hodge.hpp"
#include "sobolev/variational.hpp"

namespace sobolev::cli {

namespace {

using namespace sobolev::calculus;
using cayley::GroupSpec;
using cayley::VertexIndex;

GridFunction random_function(const cayley::BallPtr& ball, std::uint64_t seed, int support = -1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(ball->size());
  for (VertexIndex i = 0; i < ball->size(); ++i)
    v[i] = (support < 0 || ball->distance(i) <= support) ? dist(rng) : 0.0;
  return GridFunction(ball, std::move(v));
}

// Laplacian with an injected sign error on the diagonal; the symmetry and
// identity properties must catch it.
GridFunction broken_laplacian(const GridFunction& u) {
  const auto& ball = *u.ball;
  const int m = ball.num_generators();
  Eigen::VectorXd out(ball.size());
  for (VertexIndex i = 0; i < ball.size(); ++i) {
    double acc = static_cast<double>(m) * u.values[i];  // sign flipped
    for (int g = 0; g < m; ++g) {
      VertexIndex j = ball.neighbor(i, g);
      if (j != cayley::kOutside) acc += u.values[j];
    }
    out[i] = acc;
  }
  return GridFunction(u.ball, std::move(out));
}

}  // namespace

int run_checks(const CheckOptions& opts) {
  auto lap = opts.inject_sign_bug ? std::function<GridFunction(const GridFunction&)>(broken_laplacian)
                                  : std::function<GridFunction(const GridFunction&)>(
                                        [](const GridFunction& u) { return laplacian(u); });

  std::vector<std::pair<std::string, std::function<bool()>>> properties;

  auto ball3 = cayley::build_ball(GroupSpec::lattice(3), 6);

  properties.emplace_back("laplacian_hessian_identity", [&] {
    for (int t = 0; t < 25; ++t) {
      auto u = random_function(ball3, 10 + t);
      auto lhs = laplacian_via_hessian(u);
      auto rhs = lap(u);
      if ((lhs.values + rhs.values).array().abs().maxCoeff() >= 1e-12) return false;
    }
    return true;
  });

  properties.emplace_back("laplacian_symmetry", [&] {
    for (int t = 0; t < 25; ++t) {
      auto u = random_function(ball3, 40 + t, 5);
      auto v = random_function(ball3, 70 + t, 5);
      const double a = lap(u).values.dot(v.values);
      const double b = u.values.dot(lap(v).values);
      if (std::abs(a - b) >= 1e-12 * std::max(1.0, std::abs(a))) return false;
    }
    return true;
  });

  properties.emplace_back("greens_identity", [&] {
    for (int t = 0; t < 10; ++t) {
      auto u = random_function(ball3, 90 + t, 5);
      double dirichlet = 0.0;
      for (VertexIndex i = 0; i < ball3->size(); ++i)
        for (int g = 0; g < ball3->num_generators(); ++g) {
          VertexIndex j = ball3->neighbor(i, g);
          const double d = (j == cayley::kOutside ? 0.0 : u.values[j]) - u.values[i];
          dirichlet += d * d;
        }
      const double lhs = -lap(u).values.dot(u.values);
      if (std::abs(lhs - 0.5 * dirichlet) >= 1e-12 * std::max(1.0, lhs)) return false;
    }
    return true;
  });

  properties.emplace_back("chain_rule_quadratic", [&] {
    Eigen::VectorXd f(ball3->size());
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> dist(-3, 3);
    for (VertexIndex i = 0; i < ball3->size(); ++i) f[i] = dist(rng);
    GridFunction ff(ball3, f);
    GridFunction f2(ball3, f.array().square().matrix());
    auto lhs = lap(f2);
    auto lf = lap(ff);
    auto gf = gamma(ff);
    for (VertexIndex i = 0; i < ball3->size(); ++i) {
      if (!ball3->is_interior(i)) continue;
      const double rhs = 2.0 * f[i] * lf.values[i] + 2.0 * gf.values[i];
      if (std::abs(lhs.values[i] - rhs) >= 1e-12 * std::max(1.0, std::abs(rhs))) return false;
    }
    return true;
  });

  properties.emplace_back("chain_rule_interval_membership", [&] {
    ScalarC2 philog{[](double s) { return std::log1p(s * s); },
                    [](double s) { return 2 * s / (1 + s * s); },
                    [](double s) {
                      const double d = 1 + s * s;
                      return 2 * (1 - s * s) / (d * d);
                    },
                    {0.0, std::sqrt(3.0), -std::sqrt(3.0)}};
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<int> dist(-4, 4);
    for (int t = 0; t < 20; ++t) {
      Eigen::VectorXd f(ball3->size());
      for (VertexIndex i = 0; i < ball3->size(); ++i) f[i] = dist(rng);
      auto rep = chain_rule_check(philog, GridFunction(ball3, f));
      if (rep.members != rep.checked) return false;
    }
    return true;
  });

  properties.emplace_back("hodge_decomposition", [&] {
    auto ball2 = cayley::build_ball(GroupSpec::lattice(2), 8);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int t = 0; t < 5; ++t) {
      Eigen::VectorXd a(ball2->edges().size());
      for (Eigen::Index k = 0; k < a.size(); ++k) a[k] = dist(rng);
      EdgeFunction alpha(ball2, a);
      auto res = hodge_decompose(alpha);
      // exact reconstruction
      Eigen::VectorXd rec = edge_gradient(res.potential).values + res.circulation.values;
      if ((rec - alpha.values).array().abs().maxCoeff() >= 1e-12) return false;
      // div h = 0 on interior
      auto divh = divergence(res.circulation);
      for (VertexIndex i = 0; i < ball2->size(); ++i)
        if (ball2->is_interior(i) && std::abs(divh.values[i]) >= 1e-10) return false;
      if (std::abs(res.orthogonality) >= 1e-8) return false;
    }
    return true;
  });

  properties.emplace_back("half_laplacian_squares_to_minus_laplacian", [&] {
    auto ball2 = cayley::build_ball(GroupSpec::lattice(2), 6);
    auto u = random_function(ball2, 8, 2);
    auto once = half_laplacian(u);
    auto twice = half_laplacian(once.u);
    auto target = lap(u);
    const double rel = (twice.u.values + target.values).norm() / target.values.norm();
    return rel < 1e-3;
  });

  properties.emplace_back("brezis_lieb_disjoint_and_vanishing", [&] {
    auto ball = cayley::build_ball(GroupSpec::lattice(3), 8);
    // disjoint supports and dyadic values: gap exactly zero in floating point
    Eigen::VectorXd u = Eigen::VectorXd::Zero(ball->size());
    Eigen::VectorXd far_bump = Eigen::VectorXd::Zero(ball->size());
    for (VertexIndex i = 0; i < ball->size(); ++i) {
      if (ball->distance(i) <= 2) u[i] = 1.0;
      if (ball->distance(i) >= 6 && ball->distance(i) <= 7) far_bump[i] = 0.5;
    }
    GridFunction uf(ball, u);
    GridFunction un(ball, u + far_bump);
    auto gap = variational::brezis_lieb_gap(un, uf, 2.0);
    if (gap.gap_lp != 0.0) return false;
    // overlapping weakly-correlated bumps: 1/n perturbation gap decreasing to 0
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
    double prev = 1e300;
    for (double n : {1.0, 10.0, 100.0, 1000.0}) {
      GridFunction um(ball, g0 + g1 / n);
      auto g = variational::brezis_lieb_gap(um, base, 2.0);
      if (std::abs(g.gap_lp) >= prev) return false;
      prev = std::abs(g.gap_lp);
    }
    return prev < 1e-6;
  });

  int failures = 0;
  int ran = 0;
  for (auto& [name, fn] : properties) {
    if (!opts.filter.empty() && name.find(opts.filter) == std::string::npos) continue;
    ++ran;
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      std::printf("FAIL %s (exception: %s)\n", name.c_str(), e.what());
      ++failures;
      continue;
    }
    std::printf("%s %s\n", ok ? "PASS" : "FAIL", name.c_str());
    if (!ok) ++failures;
  }
  if (ran == 0) {
    std::printf("no properties match filter '%s'\n", opts.filter.c_str());
    return 1;
  }
  return failures;
}

}  // namespace sobolev::cli
