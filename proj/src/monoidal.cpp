#include "cohdiff/monoidal.hpp"

namespace cohdiff {

namespace {
using Opt = std::optional<Atom>;
}

Arrow sym() {
  return atom_map("sym", [](const Atom& a) -> Opt {
    if (!a.is_pair()) return std::nullopt;
    return Atom::pair(a.right(), a.left());
  });
}

Arrow assoc() {
  return atom_map("assoc", [](const Atom& a) -> Opt {
    if (!a.is_pair() || !a.left().is_pair()) return std::nullopt;
    return Atom::pair(a.left().left(), Atom::pair(a.left().right(), a.right()));
  });
}

Arrow assoc_inv() {
  return atom_map("assoc⁻¹", [](const Atom& a) -> Opt {
    if (!a.is_pair() || !a.right().is_pair()) return std::nullopt;
    return Atom::pair(Atom::pair(a.left(), a.right().left()), a.right().right());
  });
}

Arrow lunit() {
  return atom_map("λ", [](const Atom& a) -> Opt {
    if (!a.is_pair() || !(a.left() == Atom::star())) return std::nullopt;
    return a.right();
  });
}

Arrow lunit_inv() {
  return atom_map("λ⁻¹", [](const Atom& a) -> Opt { return Atom::pair(Atom::star(), a); });
}

Arrow runit() {
  return atom_map("ρ", [](const Atom& a) -> Opt {
    if (!a.is_pair() || !(a.right() == Atom::star())) return std::nullopt;
    return a.left();
  });
}

Arrow runit_inv() {
  return atom_map("ρ⁻¹", [](const Atom& a) -> Opt { return Atom::pair(a, Atom::star()); });
}

Arrow sym23() {
  return atom_map("sym23", [](const Atom& a) -> Opt {
    if (!a.is_pair() || !a.left().is_pair() || !a.right().is_pair()) return std::nullopt;
    return Atom::pair(Atom::pair(a.left().left(), a.right().left()),
                      Atom::pair(a.left().right(), a.right().right()));
  });
}

Arrow proj(int i) {
  return atom_map("p" + std::to_string(i), [i](const Atom& a) -> Opt {
    if (!a.is_tag() || a.index() != i) return std::nullopt;
    return a.inner();
  });
}

Arrow inj(int i) {
  return atom_map("in" + std::to_string(i), [i](const Atom& a) -> Opt { return Atom::tag(i, a); });
}

}  // namespace cohdiff
