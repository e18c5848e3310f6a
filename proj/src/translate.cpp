#include "sobolev/translate.hpp"

#include <cmath>

#include "sobolev/errors.hpp"

namespace sobolev::cayley {

TranslateResult translate_function(const calculus::GridFunction& u, const GroupElement& g) {
  const auto& ball = *u.ball;
  const auto& spec = ball.spec();
  if (static_cast<int>(g.size()) != spec.coord_dim())
    throw UsageError("translate_function: element dimension does not match spec");

  TranslateResult res;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(ball.size());
  // v(x) = u(g x): pull values from source vertex g x.
  for (VertexIndex i = 0; i < ball.size(); ++i) {
    GroupElement src = group_multiply(spec, g, ball.element(i));
    if (auto j = ball.index_of(src)) out[i] = u.values[*j];
  }
  // Mass of u at sources y whose destination g^{-1} y lies outside the ball.
  const GroupElement ginv = group_inverse(spec, g);
  double dropped = 0.0;
  for (VertexIndex j = 0; j < ball.size(); ++j) {
    if (u.values[j] == 0.0) continue;
    GroupElement dst = group_multiply(spec, ginv, ball.element(j));
    if (!ball.index_of(dst)) dropped += std::abs(u.values[j]);
  }
  res.function = calculus::GridFunction(u.ball, std::move(out));
  res.dropped_mass = dropped;
  return res;
}

}  // namespace sobolev::cayley
