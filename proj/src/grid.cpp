#include "sobolev/grid.hpp"

#include <cmath>

#include "sobolev/errors.hpp"

namespace sobolev::calculus {

GridFunction::GridFunction(BallPtr b, Eigen::VectorXd v) : ball(std::move(b)), values(std::move(v)) {
  if (!ball) throw UsageError("GridFunction: null ball");
  if (values.size() != ball->size())
    throw UsageError("GridFunction: value count does not match ball size");
  if (!values.allFinite()) throw UsageError("GridFunction: values must be finite");
}

GridFunction GridFunction::zero(BallPtr b) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(b->size());
  return GridFunction(std::move(b), std::move(v));
}

GridFunction GridFunction::delta(BallPtr b, VertexIndex at) {
  GridFunction u = zero(std::move(b));
  u.values[at] = 1.0;
  return u;
}

EdgeFunction::EdgeFunction(BallPtr b, Eigen::VectorXd v) : ball(std::move(b)), values(std::move(v)) {
  if (!ball) throw UsageError("EdgeFunction: null ball");
  if (values.size() != static_cast<Eigen::Index>(ball->edges().size()))
    throw UsageError("EdgeFunction: value count does not match edge count");
  if (!values.allFinite()) throw UsageError("EdgeFunction: values must be finite");
}

EdgeFunction EdgeFunction::zero(BallPtr b) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(b->edges().size());
  return EdgeFunction(std::move(b), std::move(v));
}

GridFunction embed(const GridFunction& u, const BallPtr& target) {
  if (target->spec() != u.ball->spec()) throw UsageError("embed: group specs differ");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(target->size());
  for (VertexIndex i = 0; i < u.ball->size(); ++i) {
    if (u.values[i] == 0.0) continue;
    auto j = target->index_of(u.ball->element(i));
    if (!j) throw UsageError("embed: target ball does not contain supp(u)");
    v[*j] = u.values[i];
  }
  return GridFunction(target, std::move(v));
}

double pairwise_sum(const Eigen::VectorXd& v) {
  // Fixed blocked pairwise reduction; deterministic for a given length.
  const Eigen::Index n = v.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const Eigen::Index half = n / 2;
  return pairwise_sum(v.head(half)) + pairwise_sum(v.tail(n - half));
}

double lp_norm(const GridFunction& u, double p) {
  if (p < 1.0) throw UsageError("lp_norm: p must be >= 1");
  Eigen::VectorXd t = u.values.array().abs().pow(p);
  return std::pow(pairwise_sum(t), 1.0 / p);
}

double sup_norm(const GridFunction& u) {
  return u.values.size() == 0 ? 0.0 : u.values.array().abs().maxCoeff();
}

}  // namespace sobolev::calculus
