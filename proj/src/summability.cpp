#include "cohdiff/summability.hpp"

#include <algorithm>
#include <functional>

#include "cohdiff/monoidal.hpp"

namespace cohdiff {

namespace {
using Opt = std::optional<Atom>;

const Atom& star_atom() {
  static const Atom s = Atom::star();
  return s;
}
}  // namespace

const char* sum_struct_name(SumStructName n) {
  switch (n) {
    case SumStructName::proj0: return "proj0";
    case SumStructName::proj1: return "proj1";
    case SumStructName::sigma: return "sigma";
    case SumStructName::inj0: return "inj0";
    case SumStructName::inj1: return "inj1";
    case SumStructName::flip: return "flip";
    case SumStructName::theta: return "theta";
    case SumStructName::strength: return "strength";
    case SumStructName::strength_sym: return "strength_sym";
    case SumStructName::smont: return "smont";
  }
  return "?";
}

Arrow s_proj(int i) { return proj(i).named("π" + std::to_string(i)); }

Arrow sigma() {
  return atom_map("σ", [](const Atom& a) -> Opt {
    if (!a.is_tag()) return std::nullopt;
    return a.inner();
  });
}

Arrow s_inj(int i) { return inj(i).named("ι" + std::to_string(i)); }

Arrow flip() {
  return atom_map("c", [](const Atom& a) -> Opt {
    if (!a.is_tag() || !a.inner().is_tag()) return std::nullopt;
    return Atom::tag(a.inner().index(), Atom::tag(a.index(), a.inner().inner()));
  });
}

Arrow theta() {
  return atom_map("θ", [](const Atom& a) -> Opt {
    if (!a.is_tag() || !a.inner().is_tag()) return std::nullopt;
    const int i = a.index(), j = a.inner().index();
    if (i == 1 && j == 1) return std::nullopt;
    return Atom::tag(i | j, a.inner().inner());
  });
}

Arrow sstr() {
  return atom_map("Sstr", [](const Atom& a) -> Opt {
    if (!a.is_pair() || !a.right().is_tag()) return std::nullopt;
    return Atom::tag(a.right().index(), Atom::pair(a.left(), a.right().inner()));
  });
}

Arrow sstr_sym() {
  return atom_map("Sstr'", [](const Atom& a) -> Opt {
    if (!a.is_pair() || !a.left().is_tag()) return std::nullopt;
    return Atom::tag(a.left().index(), Atom::pair(a.left().inner(), a.right()));
  });
}

Arrow smont() {
  return atom_map("Smont", [](const Atom& a) -> Opt {
    if (!a.is_pair() || !a.left().is_tag() || !a.right().is_tag()) return std::nullopt;
    const int k = a.left().index() + a.right().index();
    if (k > 1) return std::nullopt;
    return Atom::tag(k, Atom::pair(a.left().inner(), a.right().inner()));
  });
}

Arrow s_with() { return flip().named("⟨Sπ0,Sπ1⟩"); }

Arrow sfun_arrow(const Arrow& f) { return with_map(f, f).named("S(" + f.name() + ")"); }

Arrow sfun_curry() {
  return atom_map("S-fun", [](const Atom& a) -> Opt {
    if (!a.is_tag() || !a.inner().is_pair()) return std::nullopt;
    return Atom::pair(a.inner().left(), Atom::tag(a.index(), a.inner().right()));
  });
}

Arrow canon_to_limpl() {
  return atom_map("SE→(I⊸E)", [](const Atom& a) -> Opt {
    if (!a.is_tag()) return std::nullopt;
    return Atom::pair(Atom::tag(a.index(), star_atom()), a.inner());
  });
}

Arrow canon_from_limpl() {
  return atom_map("(I⊸E)→SE", [](const Atom& a) -> Opt {
    if (!a.is_pair() || !a.left().is_tag() || !(a.left().inner() == star_atom())) return std::nullopt;
    return Atom::tag(a.left().index(), a.right());
  });
}

Arrow w_point(int i) {
  return atom_map("w" + std::to_string(i), [i](const Atom& a) -> Opt {
    if (!(a == star_atom())) return std::nullopt;
    return Atom::tag(i, star_atom());
  });
}

Arrow delta_point() {
  return atom_image(
      "Δ",
      [](const Atom& a, AtomSet& out) {
        if (!(a == star_atom())) return;
        out.insert(Atom::tag(0, star_atom()));
        out.insert(Atom::tag(1, star_atom()));
      },
      [](int d) { return d; });
}

Arrow i_counit() {
  return atom_map("π0", [](const Atom& a) -> Opt {
    if (!(a == Atom::tag(0, star_atom()))) return std::nullopt;
    return star_atom();
  });
}

Arrow scmont() {
  return atom_image(
      "Scmont",
      [](const Atom& a, AtomSet& out) {
        const Atom t0 = Atom::tag(0, star_atom()), t1 = Atom::tag(1, star_atom());
        if (a == t0) {
          out.insert(Atom::pair(t0, t0));
        } else if (a == t1) {
          out.insert(Atom::pair(t1, t0));
          out.insert(Atom::pair(t0, t1));
        }
      },
      [](int d) { return d; });
}

Rel sfun_morphism(const Rel& s) {
  Rel out;
  out.src_label = "S " + s.src_label;
  out.tgt_label = "S " + s.tgt_label;
  for (const auto& [a, b] : s.pairs())
    for (int i = 0; i < 2; ++i) out.insert(Atom::tag(i, a), Atom::tag(i, b));
  return out;
}

std::pair<Space, Space> sum_struct_type(SumStructName n, const Space& e, const Space& f) {
  auto need_f = [&] {
    if (!f) throw std::invalid_argument(std::string(sum_struct_name(n)) + " needs a second space");
  };
  switch (n) {
    case SumStructName::proj0:
    case SumStructName::proj1:
    case SumStructName::sigma: return {sfun(e), e};
    case SumStructName::inj0:
    case SumStructName::inj1: return {e, sfun(e)};
    case SumStructName::flip: return {sfun(sfun(e)), sfun(sfun(e))};
    case SumStructName::theta: return {sfun(sfun(e)), sfun(e)};
    case SumStructName::strength: need_f(); return {tensor(e, sfun(f)), sfun(tensor(e, f))};
    case SumStructName::strength_sym: need_f(); return {tensor(sfun(e), f), sfun(tensor(e, f))};
    case SumStructName::smont: need_f(); return {tensor(sfun(e), sfun(f)), sfun(tensor(e, f))};
  }
  return {e, e};
}

namespace {
Arrow sum_struct_arrow(SumStructName n) {
  switch (n) {
    case SumStructName::proj0: return s_proj(0);
    case SumStructName::proj1: return s_proj(1);
    case SumStructName::sigma: return sigma();
    case SumStructName::inj0: return s_inj(0);
    case SumStructName::inj1: return s_inj(1);
    case SumStructName::flip: return flip();
    case SumStructName::theta: return theta();
    case SumStructName::strength: return sstr();
    case SumStructName::strength_sym: return sstr_sym();
    case SumStructName::smont: return smont();
  }
  return zero_arrow();
}
}  // namespace

Rel sum_structural(SumStructName n, const Space& e, const Budget& b, const Space& f) {
  auto [src, tgt] = sum_struct_type(n, e, f);
  Rel r = sum_struct_arrow(n).on(enumerate(src, b), b.max_degree);
  r.src_label = src->str();
  r.tgt_label = tgt->str();
  return r;
}

WitnessResult witness(const Rel& f0, const Rel& f1, const Space& x, const Space& y) {
  Rel w;
  w.src_label = x->str();
  w.tgt_label = "S " + y->str();
  for (const auto& [a, b] : f0.pairs()) w.insert(a, Atom::tag(0, b));
  for (const auto& [a, b] : f1.pairs()) w.insert(a, Atom::tag(1, b));
  auto chk = is_morphism(x, sfun(y), w);
  if (!chk) return NotSummable{chk.reason, chk.clash};
  return SummabilityWitness{std::move(w), f0, f1};
}

bool summable(const Rel& f0, const Rel& f1, const Space& x, const Space& y) {
  return std::holds_alternative<SummabilityWitness>(witness(f0, f1, x, y));
}

Rel sum(const Rel& f0, const Rel& f1, const Space& x, const Space& y) {
  auto r = witness(f0, f1, x, y);
  if (auto* n = std::get_if<NotSummable>(&r)) throw NotSummableError(*n);
  const Rel& w = std::get<SummabilityWitness>(r).witness;
  Rel out;
  out.src_label = x->str();
  out.tgt_label = y->str();
  for (const auto& [a, t] : w.pairs()) out.insert(a, t.inner());
  return out;
}

Rel nary_sum(const std::vector<Rel>& fs, const Space& x, const Space& y) {
  Rel acc;
  acc.src_label = x->str();
  acc.tgt_label = y->str();
  for (std::size_t k = 0; k < fs.size(); ++k) {
    try {
      acc = sum(acc, fs[k], x, y);
    } catch (const NotSummableError& e) {
      NotSummable info = e.info();
      info.reason = "prefix of length " + std::to_string(k + 1) + ": " + info.reason;
      throw NotSummableError(info);
    }
  }
  return acc;
}

bool nary_summable(const std::vector<Rel>& fs, const Space& x, const Space& y) {
  try {
    nary_sum(fs, x, y);
    return true;
  } catch (const NotSummableError&) {
    return false;
  }
}

namespace {
std::optional<Rel> try_sum(const std::vector<Rel>& fs, const Space& x, const Space& y) {
  try {
    return nary_sum(fs, x, y);
  } catch (const NotSummableError&) {
    return std::nullopt;
  }
}

void for_each_set_partition(std::size_t n,
                            const std::function<void(const std::vector<std::vector<std::size_t>>&)>& fn) {
  std::vector<std::size_t> block(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t nb) {
    if (i == n) {
      std::vector<std::vector<std::size_t>> parts(nb);
      for (std::size_t k = 0; k < n; ++k) parts[block[k]].push_back(k);
      fn(parts);
      return;
    }
    for (std::size_t b = 0; b <= nb; ++b) {
      block[i] = b;
      rec(i + 1, std::max(nb, b + 1));
    }
  };
  rec(0, 0);
}
}  // namespace

FamilyCheck family_invariance(const std::vector<Rel>& fs, const Space& x, const Space& y) {
  FamilyCheck res;
  const std::optional<Rel> base = try_sum(fs, x, y);
  auto fail = [&](std::string why) {
    if (res.ok) {
      res.ok = false;
      res.failure = std::move(why);
    }
  };
  std::vector<std::size_t> perm(fs.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  while (std::next_permutation(perm.begin(), perm.end())) {
    std::vector<Rel> gs;
    for (auto i : perm) gs.push_back(fs[i]);
    if (try_sum(gs, x, y) != base) fail("permutation changes the sum");
  }
  for_each_set_partition(fs.size(), [&](const std::vector<std::vector<std::size_t>>& parts) {
    std::vector<Rel> partial;
    bool blocks_ok = true;
    for (const auto& part : parts) {
      std::vector<Rel> sub;
      for (auto i : part) sub.push_back(fs[i]);
      auto s = try_sum(sub, x, y);
      if (!s) {
        blocks_ok = false;
        break;
      }
      partial.push_back(*s);
    }
    const std::optional<Rel> regrouped = blocks_ok ? try_sum(partial, x, y) : std::nullopt;
    if (regrouped.has_value() != base.has_value()) fail("regrouping changes summability");
    else if (base && *regrouped != *base) fail("regrouping changes the sum");
  });
  return res;
}

std::pair<Rel, Rel> canonical_iso(const Space& e, const Budget& b) {
  Rel to = canon_to_limpl().on(enumerate(sfun(e), b), b.max_degree);
  Rel from = to.inverse();
  to.src_label = from.tgt_label = "S " + e->str();
  to.tgt_label = from.src_label = "I ⊸ " + e->str();
  return {to, from};
}

}  // namespace cohdiff
