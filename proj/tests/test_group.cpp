#include <doctest.h>

#include <random>
#include <set>

#include "sobolev/ball.hpp"
#include "sobolev/errors.hpp"
#include "sobolev/grid.hpp"
#include "sobolev/translate.hpp"

using namespace sobolev;
using namespace sobolev::cayley;

TEST_CASE("lattice group law is componentwise addition") {
  auto spec = GroupSpec::lattice(2);
  CHECK(group_multiply(spec, {1, 2}, {3, 4}) == GroupElement{4, 6});
  CHECK(group_multiply(spec, spec.identity(), {7, -3}) == GroupElement{7, -3});
  CHECK(group_inverse(spec, {5, -2}) == GroupElement{-5, 2});
}

TEST_CASE("heisenberg group law and associativity") {
  auto spec = GroupSpec::heisenberg();
  CHECK(group_multiply(spec, {1, 0, 0}, {0, 1, 0}) == GroupElement{1, 1, 1});
  CHECK(group_multiply(spec, spec.identity(), {4, 5, 6}) == GroupElement{4, 5, 6});

  // brute-force associativity and inverse law over a coordinate box
  for (std::int64_t a1 = -2; a1 <= 2; ++a1)
    for (std::int64_t b1 = -2; b1 <= 2; ++b1)
      for (std::int64_t c1 = -2; c1 <= 2; ++c1) {
        GroupElement x{a1, b1, c1};
        CHECK(group_multiply(spec, x, group_inverse(spec, x)) == spec.identity());
        for (std::int64_t a2 = -2; a2 <= 2; ++a2)
          for (std::int64_t b2 = -2; b2 <= 2; ++b2) {
            GroupElement y{a2, b2, 1};
            GroupElement z{-a2, 1, b2};
            auto lhs = group_multiply(spec, group_multiply(spec, x, y), z);
            auto rhs = group_multiply(spec, x, group_multiply(spec, y, z));
            CHECK(lhs == rhs);
          }
      }
}

TEST_CASE("generating sets are symmetric and exclude the identity") {
  for (auto spec : {GroupSpec::lattice(1), GroupSpec::lattice(3), GroupSpec::heisenberg()}) {
    auto gens = spec.generators();
    CHECK(static_cast<int>(gens.size()) == spec.num_generators());
    for (int g = 0; g < spec.num_generators(); ++g) {
      CHECK(gens[g] != spec.identity());
      CHECK(group_inverse(spec, gens[g]) == gens[spec.inverse_generator(g)]);
    }
  }
}

TEST_CASE("ball enumeration order for Z^1 radius 2") {
  auto ball = build_ball(GroupSpec::lattice(1), 2);
  REQUIRE(ball->size() == 5);
  CHECK(ball->element(0) == GroupElement{0});
  CHECK(ball->element(1) == GroupElement{-1});
  CHECK(ball->element(2) == GroupElement{1});
  CHECK(ball->element(3) == GroupElement{-2});
  CHECK(ball->element(4) == GroupElement{2});
}

TEST_CASE("ball sizes: Z^2 radius 2 has 13 elements, heisenberg radius 1 has 5") {
  CHECK(build_ball(GroupSpec::lattice(2), 2)->size() == 13);
  CHECK(build_ball(GroupSpec::heisenberg(), 1)->size() == 5);
}

TEST_CASE("adjacency is symmetric via inverse generators") {
  for (auto spec : {GroupSpec::lattice(2), GroupSpec::heisenberg()}) {
    auto ball = build_ball(spec, 4);
    for (VertexIndex i = 0; i < ball->size(); ++i)
      for (int g = 0; g < ball->num_generators(); ++g) {
        VertexIndex j = ball->neighbor(i, g);
        if (j != kOutside) CHECK(ball->neighbor(j, spec.inverse_generator(g)) == i);
      }
  }
}

TEST_CASE("distances increase by at most one along edges and start at zero") {
  auto ball = build_ball(GroupSpec::heisenberg(), 5);
  CHECK(ball->distance(0) == 0);
  for (VertexIndex i = 0; i < ball->size(); ++i)
    for (int g = 0; g < ball->num_generators(); ++g) {
      VertexIndex j = ball->neighbor(i, g);
      if (j != kOutside) CHECK(std::abs(ball->distance(i) - ball->distance(j)) <= 1);
    }
}

TEST_CASE("growth of Z^2 matches 2n^2+2n+1 against brute-force enumeration") {
  const int n_max = 20;
  auto g = growth_sequence(GroupSpec::lattice(2), n_max);
  for (int n = 0; n <= n_max; ++n) {
    // independent oracle: count the l^1 box directly
    std::int64_t count = 0;
    for (int x = -n; x <= n; ++x)
      for (int y = -n; y <= n; ++y)
        if (std::abs(x) + std::abs(y) <= n) ++count;
    CHECK(g.values[n] == count);
    if (n >= 1) CHECK(g.values[n] == 2 * n * n + 2 * n + 1);
  }
}

TEST_CASE("growth of Z^3 at radius 1 is 7") {
  auto g = growth_sequence(GroupSpec::lattice(3), 1);
  CHECK(g.values[1] == 7);
}

TEST_CASE("heisenberg growth exponent is near 4") {
  auto g = growth_sequence(GroupSpec::heisenberg(), 15);
  CHECK(g.fit_lo == 5);
  CHECK(g.fit_hi == 15);
  CHECK(g.fitted_dimension == doctest::Approx(4.0).epsilon(0.075));
}

TEST_CASE("vertex cap raises ResourceCapError") {
  CHECK_THROWS_AS(build_ball(GroupSpec::lattice(3), 10, 100), ResourceCapError);
}

TEST_CASE("translate_function: identity, delta shift, norm invariance, inverse") {
  auto spec = GroupSpec::lattice(1);
  auto ball = build_ball(spec, 6);
  auto u = calculus::GridFunction::delta(ball, *ball->index_of({3}));

  auto same = translate_function(u, spec.identity());
  CHECK(same.dropped_mass == 0.0);
  CHECK(same.function.values == u.values);

  auto shifted = translate_function(u, {3});
  CHECK(shifted.function.values[0] == 1.0);  // delta_3 pulled to the origin
  CHECK(shifted.dropped_mass == 0.0);

  // random interior-supported function: translate then translate back
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1, 1);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(ball->size());
  for (VertexIndex i = 0; i < ball->size(); ++i)
    if (ball->distance(i) <= 3) v[i] = dist(rng);
  calculus::GridFunction w(ball, v);
  for (double p : {1.0, 2.0, 7.0}) {
    auto fwd = translate_function(w, {2});
    CHECK(fwd.dropped_mass == 0.0);
    CHECK(calculus::lp_norm(fwd.function, p) ==
          doctest::Approx(calculus::lp_norm(w, p)).epsilon(1e-14));
    auto back = translate_function(fwd.function, {-2});
    for (VertexIndex i = 0; i < ball->size(); ++i)
      if (ball->distance(i) <= 3) CHECK(back.function.values[i] == w.values[i]);
  }
}

TEST_CASE("translate_function drops mass when support leaves the ball") {
  auto ball = build_ball(GroupSpec::lattice(1), 3);
  auto u = calculus::GridFunction::delta(ball, *ball->index_of({-3}));
  auto res = translate_function(u, {3});  // sends -3 to -6: outside
  CHECK(res.dropped_mass == 1.0);
}
