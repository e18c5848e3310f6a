#include "sobolev/hodge.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include "sobolev/calculus.hpp"
#include "sobolev/errors.hpp"

namespace sobolev::calculus {

EdgeFunction edge_gradient(const GridFunction& u) {
  const auto& edges = u.ball->edges();
  Eigen::VectorXd v(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k)
    v[k] = u.values[edges[k].head] - u.values[edges[k].tail];
  return EdgeFunction(u.ball, std::move(v));
}

GridFunction divergence(const EdgeFunction& alpha) {
  const auto& edges = alpha.ball->edges();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(alpha.ball->size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    v[edges[k].tail] += alpha.values[k];
    v[edges[k].head] -= alpha.values[k];
  }
  return GridFunction(alpha.ball, std::move(v));
}

HodgeResult hodge_decompose(const EdgeFunction& alpha, const HodgeOptions& opts) {
  const auto& ball = *alpha.ball;
  GridFunction div_a = divergence(alpha);

  // Unknowns on interior vertices only; boundary ring and exterior are 0.
  std::vector<VertexIndex> interior;
  std::vector<VertexIndex> to_local(ball.size(), -1);
  for (VertexIndex i = 0; i < ball.size(); ++i)
    if (ball.is_interior(i)) {
      to_local[i] = static_cast<VertexIndex>(interior.size());
      interior.push_back(i);
    }
  const int m = ball.num_generators();
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t a = 0; a < interior.size(); ++a) {
    const VertexIndex i = interior[a];
    trip.emplace_back(a, a, static_cast<double>(m));
    for (int g = 0; g < m; ++g) {
      VertexIndex j = ball.neighbor(i, g);
      if (j != cayley::kOutside && to_local[j] >= 0) trip.emplace_back(a, to_local[j], -1.0);
    }
  }
  Eigen::SparseMatrix<double> A(interior.size(), interior.size());  // -Delta on interior
  A.setFromTriplets(trip.begin(), trip.end());

  Eigen::VectorXd rhs(interior.size());
  for (std::size_t a = 0; a < interior.size(); ++a) rhs[a] = -div_a.values[interior[a]];

  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      cg;
  cg.setTolerance(opts.tol);
  cg.setMaxIterations(opts.max_iterations);
  cg.compute(A);
  Eigen::VectorXd x = cg.solve(rhs);
  if (cg.info() != Eigen::Success)
    throw NonConvergenceError("hodge_decompose: CG failed to reach tolerance");

  HodgeResult res;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(ball.size());
  for (std::size_t a = 0; a < interior.size(); ++a) f[interior[a]] = x[a];
  res.potential = GridFunction(alpha.ball, std::move(f));
  EdgeFunction gf = edge_gradient(res.potential);
  res.circulation = EdgeFunction(alpha.ball, alpha.values - gf.values);
  res.solve_residual = rhs.size() == 0 ? 0.0 : (A * x - rhs).norm();
  res.orthogonality = gf.values.dot(res.circulation.values);
  return res;
}

}  // namespace sobolev::calculus

namespace sobolev::pde {

using calculus::GridFunction;

GridFunction solve_poisson(const GridFunction& g, const PoissonOptions& opts) {
  Eigen::SparseMatrix<double> A = -calculus::laplacian_matrix(g.ball);
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      cg;
  cg.setTolerance(opts.tol);
  cg.setMaxIterations(opts.max_iterations);
  cg.compute(A);
  Eigen::VectorXd w = cg.solve(g.values);
  if (cg.info() != Eigen::Success)
    throw sobolev::NonConvergenceError("solve_poisson: CG failed to reach tolerance");
  return GridFunction(g.ball, std::move(w));
}

}  // namespace sobolev::pde
