#include "sobolev/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sobolev/errors.hpp"

namespace sobolev::calculus {

GridFunction laplacian(const GridFunction& u) {
  const auto& ball = *u.ball;
  const int m = ball.num_generators();
  Eigen::VectorXd out(ball.size());
  for (VertexIndex i = 0; i < ball.size(); ++i) {
    double acc = -static_cast<double>(m) * u.values[i];
    for (int g = 0; g < m; ++g) {
      VertexIndex j = ball.neighbor(i, g);
      if (j != cayley::kOutside) acc += u.values[j];
    }
    out[i] = acc;
  }
  return GridFunction(u.ball, std::move(out));
}

GridFunction directional_diff(const GridFunction& u, int generator) {
  const auto& ball = *u.ball;
  if (generator < 0 || generator >= ball.num_generators())
    throw UsageError("directional_diff: generator index out of range");
  Eigen::VectorXd out(ball.size());
  for (VertexIndex i = 0; i < ball.size(); ++i) {
    VertexIndex j = ball.neighbor(i, generator);
    out[i] = (j == cayley::kOutside ? 0.0 : u.values[j]) - u.values[i];
  }
  return GridFunction(u.ball, std::move(out));
}

GridFunction second_diff(const GridFunction& u, int gen_i, int gen_j) {
  return directional_diff(directional_diff(u, gen_i), gen_j);
}

GridFunction gamma(const GridFunction& u) {
  const auto& ball = *u.ball;
  const int m = ball.num_generators();
  Eigen::VectorXd out(ball.size());
  for (VertexIndex i = 0; i < ball.size(); ++i) {
    double acc = 0.0;
    for (int g = 0; g < m; ++g) {
      VertexIndex j = ball.neighbor(i, g);
      const double d = (j == cayley::kOutside ? 0.0 : u.values[j]) - u.values[i];
      acc += d * d;
    }
    out[i] = 0.5 * acc;
  }
  return GridFunction(u.ball, std::move(out));
}

GridFunction laplacian_via_hessian(const GridFunction& u) {
  const auto& ball = *u.ball;
  const int m = ball.num_generators();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(ball.size());
  for (int g = 0; g < m; ++g) {
    GridFunction d = second_diff(u, g, ball.spec().inverse_generator(g));
    acc += d.values;
  }
  return GridFunction(u.ball, 0.5 * acc);
}

namespace {

BallPtr extension_ball(const GridFunction& u, int halo) {
  return cayley::build_ball(u.ball->spec(), u.ball->radius() + halo);
}

}  // namespace

double hessian_norm(const GridFunction& u, double p) {
  if (p < 1.0) throw UsageError("hessian_norm: p must be >= 1");
  GridFunction v = embed(u, extension_ball(u, 2));
  const int m = v.ball->num_generators();
  double total = 0.0;
  for (int gi = 0; gi < m; ++gi)
    for (int gj = 0; gj < m; ++gj) {
      GridFunction d = second_diff(v, gi, gj);
      total += pairwise_sum(d.values.array().abs().pow(p).matrix());
    }
  return std::pow(total, 1.0 / p);
}

double d1p_norm(const GridFunction& u, double p) {
  if (p < 1.0) throw UsageError("d1p_norm: p must be >= 1");
  GridFunction v = embed(u, extension_ball(u, 1));
  const int m = v.ball->num_generators();
  double total = 0.0;
  for (int g = 0; g < m; ++g) {
    GridFunction d = directional_diff(v, g);
    total += pairwise_sum(d.values.array().abs().pow(p).matrix());
  }
  return std::pow(total, 1.0 / p);
}

double d2p_norm(const GridFunction& u, double p) {
  if (p < 1.0) throw UsageError("d2p_norm: p must be >= 1");
  GridFunction v = embed(u, extension_ball(u, 1));
  GridFunction du = laplacian(v);
  return std::pow(pairwise_sum(du.values.array().abs().pow(p).matrix()), 1.0 / p);
}

NormReport norm_report(const GridFunction& u, double p) {
  NormReport r;
  r.p = p;
  r.lp = lp_norm(u, p);
  r.d1p = d1p_norm(u, p);
  r.d2p = d2p_norm(u, p);
  r.d2p_tilde = hessian_norm(u, p);
  return r;
}

namespace {

// Extrema of phi'' over [lo, hi]: endpoints plus listed interior critical
// points of phi''.
std::pair<double, double> d2_range(const ScalarC2& phi, double lo, double hi) {
  double mn = std::min(phi.d2(lo), phi.d2(hi));
  double mx = std::max(phi.d2(lo), phi.d2(hi));
  for (double c : phi.d2_critical_points) {
    if (c > lo && c < hi) {
      const double v = phi.d2(c);
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
  }
  return {mn, mx};
}

}  // namespace

ChainRuleReport chain_rule_check(const ScalarC2& phi, const GridFunction& f) {
  const auto& ball = *f.ball;
  const int m = ball.num_generators();

  Eigen::VectorXd phif(ball.size());
  for (VertexIndex i = 0; i < ball.size(); ++i) phif[i] = phi.phi(f.values[i]);
  GridFunction lap_phif = laplacian(GridFunction(f.ball, std::move(phif)));
  GridFunction lap_f = laplacian(f);
  GridFunction gam_f = gamma(f);

  ChainRuleReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (VertexIndex i = 0; i < ball.size(); ++i) {
    if (!ball.is_interior(i)) continue;  // exterior zeros would corrupt phi(f)
    if (gam_f.values[i] <= 0.0) continue;
    double lo = f.values[i], hi = f.values[i];
    for (int g = 0; g < m; ++g) {
      VertexIndex j = ball.neighbor(i, g);
      if (j == cayley::kOutside) continue;
      lo = std::min(lo, f.values[j]);
      hi = std::max(hi, f.values[j]);
    }
    ChainRuleVertexReport v;
    v.vertex = i;
    v.ratio = (lap_phif.values[i] - phi.d1(f.values[i]) * lap_f.values[i]) / gam_f.values[i];
    std::tie(v.lo, v.hi) = d2_range(phi, lo, hi);
    v.margin = std::min(v.ratio - v.lo, v.hi - v.ratio);
    v.member = v.margin >= -1e-10 * std::max(1.0, std::max(std::abs(v.lo), std::abs(v.hi)));
    report.vertices.push_back(v);
    report.checked += 1;
    if (v.member) report.members += 1;
    report.worst_margin = std::min(report.worst_margin, v.margin);
  }
  if (report.checked == 0) report.worst_margin = 0.0;
  return report;
}

Eigen::SparseMatrix<double> laplacian_matrix(const BallPtr& ball) {
  const int m = ball->num_generators();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(ball->size() * (m + 1));
  for (VertexIndex i = 0; i < ball->size(); ++i) {
    trip.emplace_back(i, i, -static_cast<double>(m));
    for (int g = 0; g < m; ++g) {
      VertexIndex j = ball->neighbor(i, g);
      if (j != cayley::kOutside) trip.emplace_back(i, j, 1.0);
    }
  }
  Eigen::SparseMatrix<double> L(ball->size(), ball->size());
  L.setFromTriplets(trip.begin(), trip.end());
  return L;
}

}  // namespace sobolev::calculus
