#include "sobolev/ball.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "sobolev/errors.hpp"

namespace sobolev::cayley {

namespace {

std::string pack_key(const GroupElement& e) {
  std::string key(e.size() * sizeof(std::int64_t), '\0');
  std::memcpy(key.data(), e.data(), key.size());
  return key;
}

}  // namespace

CayleyBall::CayleyBall(GroupSpec spec, int radius, std::vector<GroupElement> elements,
                       std::vector<VertexIndex> adjacency, std::vector<std::int32_t> distance)
    : spec_(spec),
      radius_(radius),
      num_gens_(spec.num_generators()),
      elements_(std::move(elements)),
      adjacency_(std::move(adjacency)),
      distance_(std::move(distance)) {
  index_.reserve(elements_.size() * 2);
  for (std::size_t i = 0; i < elements_.size(); ++i)
    index_.emplace(pack_key(elements_[i]), static_cast<VertexIndex>(i));
}

std::optional<VertexIndex> CayleyBall::index_of(const GroupElement& e) const {
  auto it = index_.find(pack_key(e));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::vector<Edge>& CayleyBall::edges() const {
  std::call_once(edges_once_, [this] {
    for (VertexIndex i = 0; i < size(); ++i)
      for (int g = 0; g < num_gens_; ++g) {
        VertexIndex j = neighbor(i, g);
        if (j != kOutside && j > i) edges_.push_back(Edge{i, j});
      }
  });
  return edges_;
}

BallPtr build_ball(const GroupSpec& spec, int radius, std::int64_t vertex_cap) {
  if (radius < 0) throw UsageError("build_ball: radius must be >= 0");
  const auto gens = spec.generators();

  std::unordered_map<std::string, std::int32_t> dist;
  std::vector<GroupElement> elements;
  std::vector<std::int32_t> distance;

  std::vector<GroupElement> frontier{spec.identity()};
  dist.emplace(pack_key(frontier[0]), 0);
  elements.push_back(frontier[0]);
  distance.push_back(0);

  for (int level = 1; level <= radius; ++level) {
    std::vector<GroupElement> next;
    for (const auto& x : frontier) {
      for (const auto& s : gens) {
        GroupElement y = group_multiply(spec, x, s);
        auto [it, inserted] = dist.emplace(pack_key(y), level);
        if (inserted) next.push_back(std::move(y));
      }
    }
    std::sort(next.begin(), next.end(), lex_less);
    if (static_cast<std::int64_t>(elements.size() + next.size()) > vertex_cap)
      throw ResourceCapError("build_ball: ball of radius " + std::to_string(radius) + " on " +
                             spec.name() + " exceeds vertex cap " + std::to_string(vertex_cap));
    for (auto& y : next) {
      elements.push_back(std::move(y));
      distance.push_back(level);
    }
    frontier = std::vector<GroupElement>(elements.end() - next.size(), elements.end());
  }

  const int m = spec.num_generators();
  std::vector<VertexIndex> adjacency(elements.size() * m, kOutside);
  std::unordered_map<std::string, VertexIndex> index;
  index.reserve(elements.size() * 2);
  for (std::size_t i = 0; i < elements.size(); ++i)
    index.emplace(pack_key(elements[i]), static_cast<VertexIndex>(i));
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (int g = 0; g < m; ++g) {
      GroupElement y = group_multiply(spec, elements[i], gens[g]);
      auto it = index.find(pack_key(y));
      adjacency[i * m + g] = (it == index.end()) ? kOutside : it->second;
    }
  }

  return std::make_shared<CayleyBall>(spec, radius, std::move(elements), std::move(adjacency),
                                      std::move(distance));
}

GrowthSequence growth_sequence(const GroupSpec& spec, int n_max, std::int64_t vertex_cap) {
  if (n_max < 1) throw UsageError("growth_sequence: n_max must be >= 1");
  auto ball = build_ball(spec, n_max, vertex_cap);
  GrowthSequence g;
  g.values.assign(n_max + 1, 0);
  for (VertexIndex i = 0; i < ball->size(); ++i) g.values[ball->distance(i)] += 1;
  for (int n = 1; n <= n_max; ++n) g.values[n] += g.values[n - 1];

  // Log-log least squares over the upper window [max(1, n_max/3), n_max].
  g.fit_lo = std::max(1, n_max / 3);
  g.fit_hi = n_max;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int n = g.fit_lo; n <= g.fit_hi; ++n) {
    const double x = std::log(static_cast<double>(n));
    const double y = std::log(static_cast<double>(g.values[n]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  g.fitted_dimension = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return g;
}

}  // namespace sobolev::cayley
