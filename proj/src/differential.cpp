#include "cohdiff/differential.hpp"

#include <algorithm>

#include "cohdiff/exponential.hpp"
#include "cohdiff/summability.hpp"

namespace cohdiff {

namespace {
using Opt = std::optional<Atom>;

Atom ipt(int i) { return Atom::tag(i, Atom::star()); }
}  // namespace

Arrow dbar() {
  return Arrow(
      "∂̄",
      [](const Atom& a, int bound, AtomSet& out) {
        std::vector<Atom> elems;
        if (a == ipt(0)) {
          for (int k = 0; k <= bound; ++k) {
            out.insert(Atom::mset(elems));
            elems.push_back(ipt(0));
          }
        } else if (a == ipt(1)) {
          elems.push_back(ipt(1));
          for (int k = 1; k <= bound; ++k) {
            out.insert(Atom::mset(elems));
            elems.push_back(ipt(0));
          }
        }
      },
      [](int) { return 0; });
}

Rel dbar_rel(const Budget& b) {
  Rel r = dbar().on({ipt(0), ipt(1)}, b.max_degree);
  r.src_label = "I";
  r.tgt_label = "!I";
  return r;
}

Arrow dtilde() { return then(tensor(id_arrow(), dbar()), m2()).named("∂̃"); }

Arrow ev(int arg_degree) {
  return atom_image(
      "ev",
      [](const Atom& a, AtomSet& out) {
        if (!a.is_pair() || !a.left().is_pair()) return;
        if (a.left().left() == a.right()) out.insert(a.left().right());
      },
      [arg_degree](int d) { return d + 2 * arg_degree; });
}

Arrow dpartial_arrow(const Space& e) {
  const Space be = e && e->kind == Kind::Coh ? bang(e) : nullptr;
  return Arrow(
      "∂",
      [be](const Atom& m, int bound, AtomSet& out) {
        if (!m.is_mset() || m.degree() > bound) return;
        std::vector<Atom> m0;
        std::optional<Atom> lin;
        for (const auto& x : m.ms().elements()) {
          if (!x.is_tag()) return;
          if (x.index() == 0) {
            m0.push_back(x.inner());
          } else {
            if (lin) return;
            lin = x.inner();
          }
        }
        if (!lin) {
          out.insert(Atom::tag(0, Atom::mset(std::move(m0))));
          return;
        }
        if (be && std::find(m0.begin(), m0.end(), *lin) != m0.end()) return;
        m0.push_back(*lin);
        Atom t = Atom::mset(std::move(m0));
        if (be && !in_web(be, t)) return;
        out.insert(Atom::tag(1, std::move(t)));
      },
      [](int d) { return d; });
}

Arrow dpartial_derived() {
  const Arrow body = then(dtilde(), bang(ev(0)));
  return Arrow(
      "∂(∂̄)",
      [body](const Atom& m, int bound, AtomSet& out) {
        if (!m.is_mset() || m.degree() > bound) return;
        std::vector<Atom> conv;
        for (const auto& x : m.ms().elements()) {
          if (!x.is_tag()) return;
          conv.push_back(Atom::pair(ipt(x.index()), x.inner()));
        }
        const Atom mc = Atom::mset(std::move(conv));
        for (int i = 0; i < 2; ++i)
          for (const auto& c : body.image(Atom::pair(mc, ipt(i)), bound)) out.insert(Atom::tag(i, c));
      },
      [](int d) { return d; });
}

Rel dpartial(const Space& e, const Budget& b) {
  Rel r = dpartial_arrow(e).on(enumerate(bang(sfun(e)), b), b.max_degree);
  r.src_label = "!S " + e->str();
  r.tgt_label = "S !" + e->str();
  return r;
}

Arrow dhat_arrow(const Arrow& f, const Space& e) {
  return then(dpartial_arrow(e), sfun_arrow(f)).named("D̂" + f.name());
}

namespace {
int max_target_degree(const Rel& f) {
  int d = 0;
  for (const auto& [a, c] : f.pairs()) d = std::max(d, c.degree());
  return d;
}
}  // namespace

Rel dhat(const Rel& f, const Space& e, const Budget& b) {
  Rel r = dhat_arrow(from_rel(f), e).on(enumerate(bang(sfun(e)), b), max_target_degree(f));
  r.src_label = "!S " + e->str();
  r.tgt_label = "S " + f.tgt_label;
  return r;
}

Arrow partial_strength(int arg) {
  return atom_map("Φ" + std::to_string(arg), [arg](const Atom& a) -> Opt {
    if (!a.is_tag()) return std::nullopt;
    if (a.index() == arg) {
      if (!a.inner().is_tag()) return std::nullopt;
      return Atom::tag(a.inner().index(), Atom::tag(arg, a.inner().inner()));
    }
    return Atom::tag(0, a);
  });
}

Arrow partial_derivative_arrow(const Arrow& f, int arg, const Space& x01) {
  return then(bang(partial_strength(arg)), dhat_arrow(f, x01));
}

Rel partial_derivative(const Rel& f, int arg, const Space& x0, const Space& x1, const Budget& b) {
  const Space src = arg == 0 ? with_(sfun(x0), x1) : with_(x0, sfun(x1));
  Rel r = partial_derivative_arrow(from_rel(f), arg, with_(x0, x1))
              .on(enumerate(bang(src), b), max_target_degree(f));
  r.src_label = "!(" + src->str() + ")";
  r.tgt_label = "S " + f.tgt_label;
  return r;
}

std::vector<Atom> local_web(const Space& e, const AtomSet& x) {
  std::vector<Atom> out;
  for (const auto& a : enumerate(e, Budget{})) {
    if (x.count(a)) continue;
    bool ok = true;
    for (const auto& y : x) ok = ok && coherent(e, a, y);
    if (ok) out.push_back(a);
  }
  return out;
}

Rel local_derivative(const Rel& s, const Space& e, const AtomSet& x) {
  const std::vector<Atom> lw = local_web(e, x);
  const AtomSet local(lw.begin(), lw.end());
  Rel out;
  out.src_label = e->str() + "_x";
  out.tgt_label = s.tgt_label;
  for (const auto& [m, b] : s.pairs()) {
    if (!m.is_mset()) continue;
    for (const auto& a : m.ms().support()) {
      if (!local.count(a)) continue;
      bool inside = true;
      for (const auto& y : m.ms().minus(a).support()) inside = inside && x.count(y);
      if (inside) out.insert(a, b);
    }
  }
  return out;
}

AtomSet fun_apply(const Rel& s, const AtomSet& x) {
  AtomSet out;
  for (const auto& [m, b] : s.pairs()) {
    if (!m.is_mset()) continue;
    bool inside = true;
    for (const auto& y : m.ms().support()) inside = inside && x.count(y);
    if (inside) out.insert(b);
  }
  return out;
}

std::vector<Rel> lafont_solutions(int max_degree) {
  const Space i_space = into(Kind::Rel);
  const Budget b{max_degree, 20000};
  const std::vector<Atom> targets = enumerate(bang(i_space), b);
  std::vector<AtomPair> cands;
  for (int i = 0; i < 2; ++i)
    for (const auto& t : targets) cands.emplace_back(ipt(i), t);
  if (cands.size() > 24) throw BudgetExceeded("lafont search space too large");
  const std::vector<Atom> dom{ipt(0), ipt(1)};
  const Arrow lhs_counit = id_arrow();
  const Arrow rhs_weak = i_counit();
  std::vector<Rel> sols;
  for (unsigned long mask = 0; mask < (1UL << cands.size()); ++mask) {
    Rel r;
    for (std::size_t k = 0; k < cands.size(); ++k)
      if (mask >> k & 1UL) r.insert(cands[k].first, cands[k].second);
    const Arrow d = from_rel(r, "δ");
    if (!arrows_equal_on(then(d, der()), lhs_counit, dom, max_degree).equal) continue;
    if (!arrows_equal_on(then(d, weak()), rhs_weak, dom, max_degree).equal) continue;
    if (!arrows_equal_on(then(d, contr()), then(scmont(), tensor(d, d)), dom, max_degree).equal)
      continue;
    r.src_label = "I";
    r.tgt_label = "!I";
    sols.push_back(std::move(r));
  }
  return sols;
}

}  // namespace cohdiff
