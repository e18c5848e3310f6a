#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace sobolev::cayley {

// Group element in coordinates: length N for the integer lattice Z^N,
// length 3 for the discrete Heisenberg group.
using GroupElement = std::vector<std::int64_t>;

enum class GroupKind { IntegerLattice, Heisenberg3 };

// A finitely generated group together with its symmetric generating set.
// Lattice Z^N: generators are the 2N signed unit vectors.
// Heisenberg3: elements (a,b,c) with product
//   (a1,b1,c1)(a2,b2,c2) = (a1+a2, b1+b2, c1+c2+a1*b2),
// generators (+-1,0,0) and (0,+-1,0); growth degree 4.
struct GroupSpec {
  GroupKind kind = GroupKind::IntegerLattice;
  int lattice_dim = 3;  // used only for IntegerLattice

  static GroupSpec lattice(int n);
  static GroupSpec heisenberg();

  int coord_dim() const { return kind == GroupKind::IntegerLattice ? lattice_dim : 3; }
  // Homogeneous dimension N (growth degree): N for Z^N, 4 for Heisenberg3.
  int homogeneous_dim() const { return kind == GroupKind::IntegerLattice ? lattice_dim : 4; }
  int num_generators() const { return kind == GroupKind::IntegerLattice ? 2 * lattice_dim : 4; }

  std::vector<GroupElement> generators() const;
  GroupElement identity() const;
  // Index of s^{-1} within generators() for generator index g.
  int inverse_generator(int g) const;
  std::string name() const;

  bool operator==(const GroupSpec&) const = default;
};

GroupElement group_multiply(const GroupSpec& spec, const GroupElement& a, const GroupElement& b);
GroupElement group_inverse(const GroupSpec& spec, const GroupElement& a);

// Lexicographic comparison of coordinate tuples; ties broken nowhere else.
bool lex_less(const GroupElement& a, const GroupElement& b);

}  // namespace sobolev::cayley
