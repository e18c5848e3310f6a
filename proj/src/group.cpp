#include "sobolev/group.hpp"

#include "sobolev/errors.hpp"

namespace sobolev::cayley {

GroupSpec GroupSpec::lattice(int n) {
  if (n < 1) throw UsageError("lattice dimension must be >= 1, got " + std::to_string(n));
  GroupSpec s;
  s.kind = GroupKind::IntegerLattice;
  s.lattice_dim = n;
  return s;
}

GroupSpec GroupSpec::heisenberg() {
  GroupSpec s;
  s.kind = GroupKind::Heisenberg3;
  s.lattice_dim = 3;
  return s;
}

std::vector<GroupElement> GroupSpec::generators() const {
  std::vector<GroupElement> gens;
  if (kind == GroupKind::IntegerLattice) {
    gens.reserve(2 * lattice_dim);
    for (int i = 0; i < lattice_dim; ++i) {
      GroupElement plus(lattice_dim, 0), minus(lattice_dim, 0);
      plus[i] = 1;
      minus[i] = -1;
      gens.push_back(plus);
      gens.push_back(minus);
    }
  } else {
    gens = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
  }
  return gens;
}

GroupElement GroupSpec::identity() const { return GroupElement(coord_dim(), 0); }

int GroupSpec::inverse_generator(int g) const {
  // Generators are listed in (+,-) pairs for both group kinds.
  return (g % 2 == 0) ? g + 1 : g - 1;
}

std::string GroupSpec::name() const {
  if (kind == GroupKind::IntegerLattice) return "lattice" + std::to_string(lattice_dim);
  return "heisenberg";
}

GroupElement group_multiply(const GroupSpec& spec, const GroupElement& a, const GroupElement& b) {
  const int d = spec.coord_dim();
  if (static_cast<int>(a.size()) != d || static_cast<int>(b.size()) != d)
    throw UsageError("group_multiply: element dimension does not match spec");
  GroupElement out(d);
  if (spec.kind == GroupKind::IntegerLattice) {
    for (int i = 0; i < d; ++i) out[i] = a[i] + b[i];
  } else {
    out[0] = a[0] + b[0];
    out[1] = a[1] + b[1];
    out[2] = a[2] + b[2] + a[0] * b[1];
  }
  return out;
}

GroupElement group_inverse(const GroupSpec& spec, const GroupElement& a) {
  const int d = spec.coord_dim();
  if (static_cast<int>(a.size()) != d)
    throw UsageError("group_inverse: element dimension does not match spec");
  GroupElement out(d);
  if (spec.kind == GroupKind::IntegerLattice) {
    for (int i = 0; i < d; ++i) out[i] = -a[i];
  } else {
    out[0] = -a[0];
    out[1] = -a[1];
    out[2] = a[0] * a[1] - a[2];
  }
  return out;
}

bool lex_less(const GroupElement& a, const GroupElement& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace sobolev::cayley
