#include "sobolev/heat.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <cmath>

#include "sobolev/errors.hpp"

namespace sobolev::calculus {

namespace {

// 10-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr int kGL = 10;
constexpr double kGLNodes[kGL] = {
    -0.9739065285171717, -0.8650633666889845, -0.6794095682990244, -0.4333953941292472,
    -0.1488743389816312, 0.1488743389816312,  0.4333953941292472,  0.6794095682990244,
    0.8650633666889845,  0.9739065285171717};
constexpr double kGLWeights[kGL] = {
    0.0666713443086881, 0.1494513491505806, 0.2190863625159820, 0.2692667193099963,
    0.2955242247147529, 0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
    0.1494513491505806, 0.0666713443086881};

// Lanczos tridiagonalization of -Delta_D with full reorthogonalization.
struct LanczosBasis {
  Eigen::MatrixXd V;
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;  // beta[j] couples cols j and j+1
  double unorm = 0.0;
  int m = 0;
};

LanczosBasis lanczos(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& u, int m) {
  const Eigen::Index n = u.size();
  LanczosBasis basis;
  basis.unorm = u.norm();
  if (basis.unorm == 0.0) return basis;
  m = std::min<int>(m, static_cast<int>(n));
  basis.V.resize(n, m);
  basis.alpha.resize(m);
  basis.beta = Eigen::VectorXd::Zero(m);
  basis.V.col(0) = u / basis.unorm;
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd w = A * basis.V.col(j);
    if (j > 0) w -= basis.beta[j - 1] * basis.V.col(j - 1);
    basis.alpha[j] = w.dot(basis.V.col(j));
    w -= basis.alpha[j] * basis.V.col(j);
    for (int i = 0; i <= j; ++i) w -= w.dot(basis.V.col(i)) * basis.V.col(i);
    const double b = w.norm();
    basis.m = j + 1;
    if (j + 1 == m || b < 1e-13) break;
    basis.beta[j] = b;
    basis.V.col(j + 1) = w / b;
  }
  return basis;
}

// f(-Delta) u through the Lanczos approximation.
Eigen::VectorXd lanczos_apply(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& u,
                              int m, const std::function<double(double)>& f) {
  LanczosBasis basis = lanczos(A, u, m);
  if (basis.m == 0) return Eigen::VectorXd::Zero(u.size());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(basis.m, basis.m);
  for (int j = 0; j < basis.m; ++j) {
    T(j, j) = basis.alpha[j];
    if (j + 1 < basis.m) T(j, j + 1) = T(j + 1, j) = basis.beta[j];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  Eigen::VectorXd fz = es.eigenvalues().unaryExpr([&](double z) { return f(z); });
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(basis.m);
  e1[0] = 1.0;
  Eigen::VectorXd y = es.eigenvectors() * fz.asDiagonal() * (es.eigenvectors().transpose() * e1);
  return basis.unorm * (basis.V.leftCols(basis.m) * y);
}

double boundary_fraction(const GridFunction& u) {
  const auto& ball = *u.ball;
  double outer = 0.0, total = 0.0;
  for (VertexIndex i = 0; i < ball.size(); ++i) {
    const double a = std::abs(u.values[i]);
    total += a;
    if (ball.distance(i) >= ball.radius() - 1) outer += a;
  }
  return total > 0.0 ? outer / total : 0.0;
}

}  // namespace

DenseSpectral::DenseSpectral(const BallPtr& ball) : ball_(ball) {
  Eigen::MatrixXd A = Eigen::MatrixXd(-laplacian_matrix(ball));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success)
    throw NonConvergenceError("DenseSpectral: eigendecomposition failed");
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
}

GridFunction DenseSpectral::apply(const GridFunction& u,
                                  const std::function<double(double)>& f) const {
  if (u.ball != ball_) throw UsageError("DenseSpectral: ball mismatch");
  Eigen::VectorXd c = evecs_.transpose() * u.values;
  for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= f(evals_[k]);
  return GridFunction(ball_, evecs_ * c);
}

GridFunction DenseSpectral::heat(const GridFunction& u, double t) const {
  return apply(u, [t](double lam) { return std::exp(-t * lam); });
}

GridFunction DenseSpectral::sqrt_op(const GridFunction& u) const {
  return apply(u, [](double lam) { return std::sqrt(std::max(lam, 0.0)); });
}

HeatResult heat_apply(const GridFunction& u, double t, const HeatOptions& opts) {
  if (t < 0.0) throw UsageError("heat_apply: t must be >= 0");
  HeatResult res;
  if (t == 0.0) {
    res.u = u;
    res.boundary_mass_fraction = boundary_fraction(u);
    return res;
  }
  if (u.ball->size() <= opts.dense_threshold) {
    DenseSpectral spec(u.ball);
    res.u = spec.heat(u, t);
  } else {
    auto A = laplacian_matrix(u.ball);
    A = (-A).eval();
    Eigen::VectorXd v =
        lanczos_apply(A, u.values, opts.krylov_dim, [t](double lam) { return std::exp(-t * lam); });
    res.u = GridFunction(u.ball, std::move(v));
  }
  res.boundary_mass_fraction = boundary_fraction(res.u);
  return res;
}

namespace {

// Scalar quadrature of (1/(2 sqrt(pi))) [ int_0^T (1 - e^{-t lam}) t^{-3/2} dt + 2/sqrt(T) ]
// with t = tau^2; approximates sqrt(lam).
struct HalfLapQuadrature {
  std::vector<double> taus;
  std::vector<double> weights;  // includes the factor 2 dtau and 1/(2 sqrt(pi))
  double t_max;

  explicit HalfLapQuadrature(const HalfLaplacianOptions& opts) : t_max(opts.t_max) {
    const double root_t = std::sqrt(opts.t_max);
    std::vector<double> cuts{0.0};
    double h = opts.panel_start;
    while (cuts.back() + h < root_t && static_cast<int>(cuts.size()) < opts.panels) {
      cuts.push_back(cuts.back() + h);
      h *= opts.panel_ratio;
    }
    cuts.push_back(root_t);
    const double norm = 1.0 / (2.0 * std::sqrt(M_PI));
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double a = cuts[k], b = cuts[k + 1];
      for (int i = 0; i < kGL; ++i) {
        taus.push_back(0.5 * (a + b) + 0.5 * (b - a) * kGLNodes[i]);
        weights.push_back(norm * 0.5 * (b - a) * kGLWeights[i]);
      }
    }
  }

  double eval(double lam) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
      const double tau = taus[i];
      // 2 (1 - e^{-tau^2 lam}) / tau^2, stable near tau = 0
      acc += weights[i] * (-2.0 * std::expm1(-tau * tau * lam) / (tau * tau));
    }
    acc += (1.0 / (2.0 * std::sqrt(M_PI))) * 2.0 / std::sqrt(t_max);
    return acc;
  }
};

}  // namespace

HalfLaplacianResult half_laplacian(const GridFunction& u, const HalfLaplacianOptions& opts) {
  HalfLaplacianResult res;
  const double unorm2 = u.values.norm();
  if (unorm2 == 0.0) {
    res.u = u;
    return res;
  }
  HalfLapQuadrature quad(opts);
  const auto f = [&quad](double lam) { return quad.eval(lam); };

  double heat_T_norm = 0.0;
  if (u.ball->size() <= opts.dense_threshold) {
    DenseSpectral spec(u.ball);
    res.u = spec.apply(u, f);
    heat_T_norm = spec.heat(u, opts.t_max).values.norm();
  } else {
    auto A = laplacian_matrix(u.ball);
    A = (-A).eval();
    res.u = GridFunction(u.ball, lanczos_apply(A, u.values, opts.krylov_dim, f));
    heat_T_norm = lanczos_apply(A, u.values, opts.krylov_dim, [&](double lam) {
                    return std::exp(-opts.t_max * lam);
                  }).norm();
  }
  // || (1/(2 sqrt(pi))) int_T^inf e^{t Delta} u t^{-3/2} dt ||_2
  res.tail_bound = heat_T_norm / (std::sqrt(M_PI) * std::sqrt(opts.t_max));
  if (res.tail_bound > opts.tail_tol * unorm2)
    throw NonConvergenceError("half_laplacian: quadrature tail bound " +
                              std::to_string(res.tail_bound) + " exceeds tolerance");
  return res;
}

}  // namespace sobolev::calculus
