#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "sobolev/group.hpp"

namespace sobolev::cayley {

inline constexpr std::int64_t kDefaultVertexCap = 5'000'000;

// Index of a vertex inside a CayleyBall; kOutside marks edges leaving the
// truncation (the exterior carries an implicit value 0).
using VertexIndex = std::int32_t;
inline constexpr VertexIndex kOutside = -1;

struct Edge {
  VertexIndex tail;  // lower vertex index
  VertexIndex head;  // higher vertex index
};

// Finite truncation of a Cayley graph: the closed word-metric ball B_e(R),
// enumerated in (BFS level, lexicographic coordinates) order. Immutable after
// construction and safe to share across threads.
class CayleyBall {
 public:
  CayleyBall(GroupSpec spec, int radius, std::vector<GroupElement> elements,
             std::vector<VertexIndex> adjacency, std::vector<std::int32_t> distance);

  const GroupSpec& spec() const { return spec_; }
  int radius() const { return radius_; }
  std::int64_t size() const { return static_cast<std::int64_t>(elements_.size()); }
  int num_generators() const { return num_gens_; }

  const GroupElement& element(VertexIndex i) const { return elements_[i]; }
  const std::vector<GroupElement>& elements() const { return elements_; }
  std::int32_t distance(VertexIndex i) const { return distance_[i]; }

  // Neighbor of vertex i via generator g, or kOutside.
  VertexIndex neighbor(VertexIndex i, int g) const {
    return adjacency_[static_cast<std::size_t>(i) * num_gens_ + g];
  }

  // Index lookup by coordinates; nullopt if the element lies outside the ball.
  std::optional<VertexIndex> index_of(const GroupElement& e) const;

  // Vertices with distance <= radius-1; the boundary ring may be contaminated
  // by the truncation and is excluded from interior-only assertions.
  bool is_interior(VertexIndex i) const { return distance_[i] <= radius_ - 1; }

  // Oriented edges (tail < head), ordered by (tail, generator index).
  const std::vector<Edge>& edges() const;

 private:
  GroupSpec spec_;
  int radius_;
  int num_gens_;
  std::vector<GroupElement> elements_;
  std::vector<VertexIndex> adjacency_;  // size() * num_gens_
  std::vector<std::int32_t> distance_;
  std::unordered_map<std::string, VertexIndex> index_;

  mutable std::once_flag edges_once_;
  mutable std::vector<Edge> edges_;
};

using BallPtr = std::shared_ptr<const CayleyBall>;

// BFS enumeration of the closed ball of radius R around the identity.
// Throws ResourceCapError if the element count would exceed `vertex_cap`.
BallPtr build_ball(const GroupSpec& spec, int radius, std::int64_t vertex_cap = kDefaultVertexCap);

struct GrowthSequence {
  std::vector<std::int64_t> values;  // values[n] = beta_S(n), n = 0..n_max
  // Least-squares slope of log beta vs log n over [fit_lo, fit_hi]; empirical
  // homogeneous dimension.
  double fitted_dimension = 0.0;
  int fit_lo = 0;
  int fit_hi = 0;
};

GrowthSequence growth_sequence(const GroupSpec& spec, int n_max,
                               std::int64_t vertex_cap = kDefaultVertexCap);

}  // namespace sobolev::cayley
