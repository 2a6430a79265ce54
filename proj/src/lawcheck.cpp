#include "cohdiff/lawcheck.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "cohdiff/differential.hpp"
#include "cohdiff/exponential.hpp"
#include "cohdiff/monoidal.hpp"
#include "cohdiff/summability.hpp"
#include "json.hpp"

namespace cohdiff {

namespace {
using Opt = std::optional<Atom>;

std::string letter_name(int i) {
  std::string s(1, static_cast<char>('a' + i % 26));
  if (i >= 26) s += std::to_string(i / 26);
  return s;
}

Arrow R(const Rel& r) { return from_rel(r); }

Rel on_web(const Arrow& f, const Space& src, const Budget& b) {
  return f.on(enumerate(src, b), b.max_degree);
}

Rel must_witness(const Rel& f0, const Rel& f1, const Space& x, const Space& y) {
  auto w = witness(f0, f1, x, y);
  if (auto* n = std::get_if<NotSummable>(&w)) throw NotSummableError(*n);
  return std::get<SummabilityWitness>(w).witness;
}

Rel proj_rel(int i, const Space& y, const Budget& b) {
  return sum_structural(i == 0 ? SumStructName::proj0 : SumStructName::proj1, y, b);
}

Arrow with_tensor_dist() {
  return atom_map("⟨π0⊗Y,π1⊗Y⟩", [](const Atom& a) -> Opt {
    if (!a.is_pair() || !a.left().is_tag()) return std::nullopt;
    return Atom::tag(a.left().index(), Atom::pair(a.left().inner(), a.right()));
  });
}

Arrow sfun_uncurry() {
  return atom_map("S-fun⁻¹", [](const Atom& a) -> Opt {
    if (!a.is_pair() || !a.right().is_tag()) return std::nullopt;
    return Atom::tag(a.right().index(), Atom::pair(a.left(), a.right().inner()));
  });
}

DiagramInstance eq(Space src, Arrow l, Arrow r, int bound = 0) {
  DiagramInstance d;
  d.source = std::move(src);
  d.left = std::move(l);
  d.right = std::move(r);
  d.bound = bound;
  return d;
}

std::vector<DiagramSpec> build_registry() {
  std::vector<DiagramSpec> v;
  auto add = [&](std::string name, std::string group, std::string statement, int objects,
                 std::function<DiagramInstance(DiagramCtx&)> build) {
    DiagramSpec s;
    s.name = std::move(name);
    s.group = std::move(group);
    s.statement = std::move(statement);
    s.objects = objects;
    s.build = std::move(build);
    v.push_back(std::move(s));
  };
  const Arrow id = id_arrow();

  // ---- summability ----
  add("joint-monicity", "joint-monicity", "f = ⟨⟨π0∘f, π1∘f⟩⟩ for f : X -> S Y", 2, [](DiagramCtx& c) {
    const Space x = c.x(0), y = c.x(1);
    const Rel f = c.morphism(x, sfun(y));
    const Rel w = must_witness(rel_compose(f, proj_rel(0, y, c.budget)),
                               rel_compose(f, proj_rel(1, y, c.budget)), x, y);
    return eq(x, R(f), R(w));
  });
  add("S-com", "S-com", "σ∘⟨⟨π1,π0⟩⟩ = σ", 1, [](DiagramCtx& c) {
    const Space x = c.x(0);
    const Rel sw = must_witness(proj_rel(1, x, c.budget), proj_rel(0, x, c.budget), sfun(x), x);
    auto d = eq(sfun(x), then(R(sw), sigma()), sigma());
    d.obligations.push_back({"⟨⟨π1,π0⟩⟩", sfun(x), sfun(x), R(sw)});
    return d;
  });
  add("S-zero", "S-zero", "σ∘⟨⟨f,0⟩⟩ = f", 2, [](DiagramCtx& c) {
    const Rel f = c.morphism(c.x(0), c.x(1));
    const Rel w = must_witness(f, Rel{}, c.x(0), c.x(1));
    return eq(c.x(0), then(R(w), sigma()), R(f));
  });
  add("S-zero-left", "S-zero", "σ∘⟨⟨0,f⟩⟩ = f", 2, [](DiagramCtx& c) {
    const Rel f = c.morphism(c.x(0), c.x(1));
    const Rel w = must_witness(Rel{}, f, c.x(0), c.x(1));
    return eq(c.x(0), then(R(w), sigma()), R(f));
  });
  add("S-wit", "S-wit", "⟨⟨f00,f01⟩⟩ and ⟨⟨f10,f11⟩⟩ are summable", 2, [](DiagramCtx& c) {
    const Space x = c.x(0), y = c.x(1);
    const Rel g = c.morphism(x, sfun(sfun(y)));
    Rel f[2][2];
    for (const auto& [a, t] : g.pairs()) f[t.index()][t.inner().index()].insert(a, t.inner().inner());
    const Rel w0 = must_witness(f[0][0], f[0][1], x, y);
    const Rel w1 = must_witness(f[1][0], f[1][1], x, y);
    must_witness(sum(f[0][0], f[0][1], x, y), sum(f[1][0], f[1][1], x, y), x, y);
    return eq(x, R(must_witness(w0, w1, x, sfun(y))), R(g));
  });
  add("S-ass", "S-ass", "S σ ∘ c = σ_S", 1, [](DiagramCtx& c) {
    return eq(sfun(sfun(c.x(0))), then(flip(), sfun_arrow(sigma())), sigma());
  });
  add("S-tensor", "S-tensor", "(f00⊗f1) + (f01⊗f1) = (f00+f01)⊗f1", 4, [](DiagramCtx& c) {
    const Space x0 = c.x(0), y0 = c.x(1), x1 = c.x(2), y1 = c.x(3);
    auto [f00, f01] = gen_summable_pair(*c.rng, x0, y0, c.budget);
    const Rel f1 = c.morphism(x1, y1);
    const Space src = tensor(x0, x1), tgt = tensor(y0, y1);
    const Rel l = sum(on_web(tensor(R(f00), R(f1)), src, c.budget),
                      on_web(tensor(R(f01), R(f1)), src, c.budget), src, tgt);
    return eq(src, R(l), tensor(R(sum(f00, f01, x0, y0)), R(f1)));
  });
  add("S-with-pairing", "S-with", "⟨Sπ0,Sπ1⟩ is the pairing of Sπ0 and Sπ1", 2, [](DiagramCtx& c) {
    const Space src = sfun(with_(c.x(0), c.x(1)));
    auto d = eq(src, s_with(), with_pair(sfun_arrow(proj(0)), sfun_arrow(proj(1))));
    d.obligations.push_back({"⟨Sπ0,Sπ1⟩", src, with_(sfun(c.x(0)), sfun(c.x(1))), s_with()});
    return d;
  });
  add("S-with-iso", "S-with", "⟨Sπ0,Sπ1⟩ has an inverse", 2, [](DiagramCtx& c) {
    const Space src = with_(sfun(c.x(0)), sfun(c.x(1)));
    auto d = eq(src, then(s_with(), s_with()), id_arrow());
    d.obligations.push_back({"⟨Sπ0,Sπ1⟩⁻¹", src, sfun(with_(c.x(0), c.x(1))), s_with()});
    return d;
  });
  add("S-preserves-sums", "S-sums", "S f0 + S f1 = S(f0+f1)", 2, [](DiagramCtx& c) {
    const Space x = c.x(0), y = c.x(1);
    auto [f0, f1] = gen_summable_pair(*c.rng, x, y, c.budget);
    const Rel l = sum(sfun_morphism(f0), sfun_morphism(f1), sfun(x), sfun(y));
    return eq(sfun(x), R(l), R(sfun_morphism(sum(f0, f1, x, y))));
  });

  // ---- monad ----
  add("monad-unit-left", "monad-laws", "θ∘ι0_S = id", 1,
      [](DiagramCtx& c) { return eq(sfun(c.x(0)), then(s_inj(0), theta()), id_arrow()); });
  add("monad-unit-right", "monad-laws", "θ∘S ι0 = id", 1, [](DiagramCtx& c) {
    return eq(sfun(c.x(0)), then(sfun_arrow(s_inj(0)), theta()), id_arrow());
  });
  add("monad-assoc", "monad-laws", "θ∘S θ = θ∘θ_S", 1, [](DiagramCtx& c) {
    return eq(sfun(sfun(sfun(c.x(0)))), then(sfun_arrow(theta()), theta()), then(theta(), theta()));
  });
  add("monad-natural", "monad-laws", "S f∘θ = θ∘SS f and S f∘ι0 = ι0∘f", 2, [](DiagramCtx& c) {
    const Rel f = c.morphism(c.x(0), c.x(1));
    const Arrow sf = sfun_arrow(R(f));
    return eq(sfun(sfun(c.x(0))), compose({sf, theta()}), compose({theta(), sfun_arrow(sf)}));
  });
  add("theta-flip", "theta-flip", "θ∘c = θ", 1,
      [](DiagramCtx& c) { return eq(sfun(sfun(c.x(0))), then(flip(), theta()), theta()); });

  // ---- strength ----
  add("strength-unit", "strength", "Sstr∘(X0⊗ι0) = ι0", 2, [](DiagramCtx& c) {
    return eq(tensor(c.x(0), c.x(1)), then(tensor(id_arrow(), s_inj(0)), sstr()), s_inj(0));
  });
  add("strength-mult", "strength", "θ∘S Sstr∘Sstr = Sstr∘(X0⊗θ)", 2, [](DiagramCtx& c) {
    return eq(tensor(c.x(0), sfun(sfun(c.x(1)))), compose({theta(), sfun_arrow(sstr()), sstr()}),
              then(tensor(id_arrow(), theta()), sstr()));
  });
  add("strength-comm", "strength", "S Sstr'∘Sstr = c∘S Sstr∘Sstr'", 2, [](DiagramCtx& c) {
    return eq(tensor(sfun(c.x(0)), sfun(c.x(1))), then(sstr(), sfun_arrow(sstr_sym())),
              compose({flip(), sfun_arrow(sstr()), sstr_sym()}));
  });
  add("strength-natural", "strength", "Sstr∘(f⊗S g) = S(f⊗g)∘Sstr", 4, [](DiagramCtx& c) {
    const Rel f = c.morphism(c.x(0), c.x(1)), g = c.morphism(c.x(2), c.x(3));
    return eq(tensor(c.x(0), sfun(c.x(2))), then(tensor(R(f), sfun_arrow(R(g))), sstr()),
              then(sstr(), sfun_arrow(tensor(R(f), R(g)))));
  });
  add("smont-sym", "smont-sym", "S γ∘Smont = Smont∘γ", 2, [](DiagramCtx& c) {
    return eq(tensor(sfun(c.x(0)), sfun(c.x(1))), then(smont(), sfun_arrow(sym())),
              then(sym(), smont()));
  });
  add("smont-def", "smont-sym", "Smont = θ∘S Sstr'∘Sstr", 2, [](DiagramCtx& c) {
    return eq(tensor(sfun(c.x(0)), sfun(c.x(1))), smont(),
              compose({theta(), sfun_arrow(sstr_sym()), sstr()}));
  });

  // ---- comonad and comonoid ----
  add("comonad-counit-left", "comonad", "der_!∘dig = id", 1,
      [](DiagramCtx& c) { return eq(bang(c.x(0)), then(dig(), der()), id_arrow()); });
  add("comonad-counit-right", "comonad", "!der∘dig = id", 1,
      [](DiagramCtx& c) { return eq(bang(c.x(0)), then(dig(), bang(der())), id_arrow()); });
  add("comonad-coassoc", "comonad", "dig_!∘dig = !dig∘dig", 1, [](DiagramCtx& c) {
    return eq(bang(c.x(0)), then(dig(), dig()), then(dig(), bang(dig())), 2 * c.budget.max_degree);
  });
  add("der-natural", "comonad", "f∘der = der∘!f", 2, [](DiagramCtx& c) {
    const Rel f = c.morphism(c.x(0), c.x(1));
    return eq(bang(c.x(0)), then(der(), R(f)), then(bang(R(f)), der()));
  });
  add("dig-natural", "comonad", "!!f∘dig = dig∘!f", 2, [](DiagramCtx& c) {
    const Rel f = c.morphism(c.x(0), c.x(1));
    return eq(bang(c.x(0)), then(dig(), bang(bang(R(f)))), then(bang(R(f)), dig()),
              2 * c.budget.max_degree);
  });
  add("comonoid-unit", "comonoid", "λ∘(weak⊗id)∘contr = id", 1, [](DiagramCtx& c) {
    return eq(bang(c.x(0)), compose({lunit(), tensor(weak(), id_arrow()), contr()}), id_arrow());
  });
  add("comonoid-comm", "comonoid", "γ∘contr = contr", 1,
      [](DiagramCtx& c) { return eq(bang(c.x(0)), then(contr(), sym()), contr()); });
  add("comonoid-assoc", "comonoid", "α∘(contr⊗id)∘contr = (id⊗contr)∘contr", 1, [](DiagramCtx& c) {
    return eq(bang(c.x(0)), compose({assoc(), tensor(contr(), id_arrow()), contr()}),
              then(contr(), tensor(id_arrow(), contr())));
  });

  // ---- Seely and lax monoidality ----
  add("seely2-iso", "seely", "seely2⁻¹∘seely2 = id and seely2 is a morphism", 2, [](DiagramCtx& c) {
    const Space src = tensor(bang(c.x(0)), bang(c.x(1)));
    const Space tgt = bang(with_(c.x(0), c.x(1)));
    auto d = eq(src, then(seely2(), seely2_inv()), id_arrow());
    d.obligations.push_back({"seely2", src, tgt, seely2()});
    d.obligations.push_back({"seely2⁻¹", tgt, src, seely2_inv()});
    return d;
  });
  add("seely2-iso-inv", "seely", "seely2∘seely2⁻¹ = id", 2, [](DiagramCtx& c) {
    return eq(bang(with_(c.x(0), c.x(1))), then(seely2_inv(), seely2()), id_arrow());
  });
  add("seely0-iso", "seely", "seely0⁻¹∘seely0 = id and seely0∘seely0⁻¹ = id", 0, [](DiagramCtx& c) {
    auto d = eq(bang(top(c.kind)), then(seely0_inv(), seely0()), id_arrow());
    d.obligations.push_back({"seely0", one(c.kind), bang(top(c.kind)), seely0()});
    d.obligations.push_back({"seely0∘seely0⁻¹", one(c.kind), one(c.kind), then(seely0(), seely0_inv())});
    return d;
  });
  add("seely-digg-comm", "seely-digg-comm", "Seelyt∘(dig⊗dig) = !⟨!π0,!π1⟩∘dig∘Seelyt", 2,
      [](DiagramCtx& c) {
        return eq(tensor(bang(c.x(0)), bang(c.x(1))), then(tensor(dig(), dig()), seely2()),
                  compose({bang(with_pair(bang(proj(0)), bang(proj(1)))), dig(), seely2()}),
                  2 * c.budget.max_degree);
      });
  add("seelyt-mont-commut-unit", "seelyt-mont-commut", "seely0∘λ∘(1⊗weak) = !0∘m2∘(seely0⊗!Y)", 1,
      [](DiagramCtx& c) {
        return eq(tensor(one(c.kind), bang(c.x(0))),
                  compose({seely0(), lunit(), tensor(id_arrow(), weak())}),
                  compose({bang_zero(), m2(), tensor(seely0(), id_arrow())}));
      });
  add("seelyt-mont-commut", "seelyt-mont-commut",
      "Seelyt∘(m2⊗m2)∘sym23∘(id⊗contr) = !⟨π0⊗Y,π1⊗Y⟩∘m2∘(Seelyt⊗!Y)", 3, [](DiagramCtx& c) {
        return eq(tensor(tensor(bang(c.x(0)), bang(c.x(1))), bang(c.x(2))),
                  compose({seely2(), tensor(m2(), m2()), sym23(), tensor(id_arrow(), contr())}),
                  compose({bang(with_tensor_dist()), m2(), tensor(seely2(), id_arrow())}));
      });
  add("m0-def", "lax-monoidal", "m0 = !seely0⁻¹∘dig∘seely0", 0, [](DiagramCtx& c) {
    return eq(one(c.kind), m0(), compose({bang(seely0_inv()), dig(), seely0()}));
  });
  add("m2-def", "lax-monoidal", "m2 = !(der⊗der)∘!seely2⁻¹∘dig∘seely2", 2, [](DiagramCtx& c) {
    return eq(tensor(bang(c.x(0)), bang(c.x(1))), m2(),
              compose({bang(tensor(der(), der())), bang(seely2_inv()), dig(), seely2()}));
  });
  add("weak-def", "lax-monoidal", "weak = seely0⁻¹∘!0", 1, [](DiagramCtx& c) {
    return eq(bang(c.x(0)), weak(), then(bang(zero_arrow()), seely0_inv()));
  });
  add("contr-def", "lax-monoidal", "contr = seely2⁻¹∘!⟨id,id⟩", 1, [](DiagramCtx& c) {
    return eq(bang(c.x(0)), contr(), then(bang(with_pair(id_arrow(), id_arrow())), seely2_inv()));
  });

  // ---- differentiation ----
  add("d-local", "d-local", "π0∘∂ = !π0", 1, [](DiagramCtx& c) {
    return eq(bang(sfun(c.x(0))), then(c.d(c.x(0)), s_proj(0)), bang(s_proj(0)));
  });
  add("d-lin-unit", "d-lin", "∂∘!ι0 = ι0", 1, [](DiagramCtx& c) {
    return eq(bang(c.x(0)), then(bang(s_inj(0)), c.d(c.x(0))), s_inj(0));
  });
  add("d-lin-theta", "d-lin", "θ∘S∂∘∂_S = ∂∘!θ", 1, [](DiagramCtx& c) {
    const Space x = c.x(0);
    return eq(bang(sfun(sfun(x))), compose({theta(), sfun_arrow(c.d(x)), c.d(sfun(x))}),
              then(bang(theta()), c.d(x)));
  });
  add("d-chain-der", "d-chain", "S der∘∂ = der_S", 1, [](DiagramCtx& c) {
    return eq(bang(sfun(c.x(0))), then(c.d(c.x(0)), sfun_arrow(der())), der());
  });
  add("d-chain-dig", "d-chain", "S dig∘∂ = ∂_!∘!∂∘dig", 1, [](DiagramCtx& c) {
    const Space x = c.x(0);
    return eq(bang(sfun(x)), then(c.d(x), sfun_arrow(dig())),
              compose({c.d(bang(x)), bang(c.d(x)), dig()}), 2 * c.budget.max_degree);
  });
  add("d-natural", "d-chain", "S!f∘∂ = ∂∘!S f", 2, [](DiagramCtx& c) {
    const Rel f = c.morphism(c.x(0), c.x(1));
    return eq(bang(sfun(c.x(0))), then(c.d(c.x(0)), sfun_arrow(bang(R(f)))),
              then(bang(sfun_arrow(R(f))), c.d(c.x(1))));
  });
  add("d-with-top", "d-with", "S seely0⁻¹∘∂_⊤ = ι0∘seely0⁻¹∘!0", 0, [](DiagramCtx& c) {
    const Space t = top(c.kind);
    return eq(bang(sfun(t)), then(c.d(t), sfun_arrow(seely0_inv())),
              compose({s_inj(0), seely0_inv(), bang(zero_arrow())}));
  });
  add("d-with", "d-with", "S seely2⁻¹∘∂_& = Smont∘(∂⊗∂)∘seely2⁻¹∘!⟨Sπ0,Sπ1⟩", 2, [](DiagramCtx& c) {
    const Space x0 = c.x(0), x1 = c.x(1);
    return eq(bang(sfun(with_(x0, x1))), then(c.d(with_(x0, x1)), sfun_arrow(seely2_inv())),
              compose({smont(), tensor(c.d(x0), c.d(x1)), seely2_inv(), bang(s_with())}));
  });
  add("leibniz-weak", "leibniz", "S weak∘∂ = ι0∘weak", 1, [](DiagramCtx& c) {
    return eq(bang(sfun(c.x(0))), then(c.d(c.x(0)), sfun_arrow(weak())), then(weak(), s_inj(0)));
  });
  add("leibniz-contr", "leibniz", "S contr∘∂ = Smont∘(∂⊗∂)∘contr", 1, [](DiagramCtx& c) {
    const Space x = c.x(0);
    return eq(bang(sfun(x)), then(c.d(x), sfun_arrow(contr())),
              compose({smont(), tensor(c.d(x), c.d(x)), contr()}));
  });
  add("d-schwarz", "d-schwarz", "c∘S∂∘∂_S = S∂∘∂_S∘!c", 1, [](DiagramCtx& c) {
    const Space x = c.x(0);
    return eq(bang(sfun(sfun(x))), compose({flip(), sfun_arrow(c.d(x)), c.d(sfun(x))}),
              compose({sfun_arrow(c.d(x)), c.d(sfun(x)), bang(flip())}));
  });
  add("d-from-dbar", "d-presentations", "∂ = curry(!ev∘m2∘(id⊗∂̄))", 1, [](DiagramCtx& c) {
    return eq(bang(sfun(c.x(0))), c.d(c.x(0)), dpartial_derived());
  });
  add("d-is-morphism", "d-presentations", "∂ ∈ Cl(!S X ⊸ S!X)", 1, [](DiagramCtx& c) {
    const Space x = c.x(0);
    auto d = eq(bang(sfun(x)), c.d(x), c.d(x));
    d.obligations.push_back({"∂", bang(sfun(x)), sfun(bang(x)), c.d(x)});
    return d;
  });
  add("dhat-functorial", "dhat", "D̂(g∘̂f) = D̂g∘̂D̂f", 3, [](DiagramCtx& c) {
    const Space x = c.x(0), y = c.x(1), z = c.x(2);
    const Rel f = c.morphism(bang(x), y, 0.3), g = c.morphism(bang(y), z, 0.3);
    const Rel gf = kleisli_compose(f, g, c.budget, c.kind == Kind::Coh ? x : nullptr);
    const Arrow dhf = then(c.d(x), sfun_arrow(R(f)));
    const Arrow dhg = then(c.d(y), sfun_arrow(R(g)));
    return eq(bang(sfun(x)), then(c.d(x), sfun_arrow(R(gf))), compose({dhg, bang(dhf), dig()}));
  });
  add("dhat-iota", "dhat", "D̂f∘̂ι0ᴰ = ι0ᴰ∘̂f", 2, [](DiagramCtx& c) {
    const Rel f = c.morphism(bang(c.x(0)), c.x(1), 0.3);
    return eq(bang(c.x(0)), compose({sfun_arrow(R(f)), c.d(c.x(0)), bang(s_inj(0))}),
              then(R(f), s_inj(0)));
  });
  add("dhat-theta", "dhat", "D̂f∘̂θᴰ = θᴰ∘̂D̂D̂f", 2, [](DiagramCtx& c) {
    const Space x = c.x(0);
    const Rel f = c.morphism(bang(x), c.x(1), 0.3);
    const Arrow sf = sfun_arrow(R(f));
    return eq(bang(sfun(sfun(x))), compose({sf, c.d(x), bang(theta())}),
              compose({theta(), sfun_arrow(sf), sfun_arrow(c.d(x)), c.d(sfun(x))}));
  });
  add("partial-derivatives-sum", "dhat", "π1∘D̂f = π1∘D̂0 f + π1∘D̂1 f", 3, [](DiagramCtx& c) {
    const Space x0 = c.x(0), x1 = c.x(1), x01 = with_(x0, x1);
    const Rel f = c.morphism(bang(x01), c.x(2), 0.3);
    const Space d01 = c.kind == Kind::Coh ? x01 : nullptr;
    const Arrow total = compose({s_proj(1), sfun_arrow(R(f)), c.d(x01), bang(s_with())});
    const Arrow p0 = compose({s_proj(1), partial_derivative_arrow(R(f), 0, d01),
                              bang(with_map(id_arrow(), s_proj(0)))});
    const Arrow p1 = compose({s_proj(1), partial_derivative_arrow(R(f), 1, d01),
                              bang(with_map(s_proj(0), id_arrow()))});
    return eq(bang(with_(sfun(x0), sfun(x1))), total, unite(p0, p1));
  });
  add("dtilde-mon-tens", "dtilde-mon-tens", "m2∘(!X0⊗∂̃) = ∂̃∘(m2⊗I), up to associators", 2,
      [](DiagramCtx& c) {
        const Space src = tensor(tensor(bang(c.x(0)), bang(c.x(1))), into(c.kind));
        return eq(src, compose({bang(assoc_inv()), m2(), tensor(id_arrow(), dtilde()), assoc()}),
                  then(tensor(m2(), id_arrow()), dtilde()));
      });

  // ---- the coalgebra ∂̄ and the comonoid on I ----
  add("dbar-coalgebra-counit", "dbar-coalgebra", "der∘∂̄ = id", 0,
      [](DiagramCtx& c) { return eq(into(c.kind), then(dbar(), der()), id_arrow()); });
  add("dbar-coalgebra-coassoc", "dbar-coalgebra", "dig∘∂̄ = !∂̄∘∂̄", 0, [](DiagramCtx& c) {
    return eq(into(c.kind), then(dbar(), dig()), then(dbar(), bang(dbar())), 2 * c.budget.max_degree);
  });
  add("dbar-is-morphism", "dbar-coalgebra", "∂̄ ∈ Cl(I ⊸ !I)", 0, [](DiagramCtx& c) {
    auto d = eq(into(c.kind), dbar(), dbar());
    d.obligations.push_back({"∂̄", into(c.kind), bang(into(c.kind)), dbar()});
    return d;
  });
  add("dbar-local", "dbar-local", "∂̄∘w0 = !w0∘m0", 0, [](DiagramCtx& c) {
    return eq(one(c.kind), then(w_point(0), dbar()), then(m0(), bang(w_point(0))));
  });
  add("dbar-lin-counit", "dbar-lin", "!π0∘∂̄ = m0∘π0", 0, [](DiagramCtx& c) {
    return eq(into(c.kind), then(dbar(), bang(i_counit())), then(i_counit(), m0()));
  });
  add("dbar-lin-scmont", "dbar-lin", "!Scmont∘∂̄ = m2∘(∂̄⊗∂̄)∘Scmont", 0, [](DiagramCtx& c) {
    return eq(into(c.kind), then(dbar(), bang(scmont())),
              compose({m2(), tensor(dbar(), dbar()), scmont()}));
  });
  add("lafont-weak", "lafont", "weak∘∂̄ = π0", 0,
      [](DiagramCtx& c) { return eq(into(c.kind), then(dbar(), weak()), i_counit()); });
  add("lafont-contr", "lafont", "contr∘∂̄ = (∂̄⊗∂̄)∘Scmont", 0, [](DiagramCtx& c) {
    return eq(into(c.kind), then(dbar(), contr()), then(scmont(), tensor(dbar(), dbar())));
  });
  add("I-comonoid-unit", "I-comonoid", "λ∘(π0⊗I)∘Scmont = id", 0, [](DiagramCtx& c) {
    return eq(into(c.kind), compose({lunit(), tensor(i_counit(), id_arrow()), scmont()}), id_arrow());
  });
  add("I-comonoid-unit-right", "I-comonoid", "ρ∘(I⊗π0)∘Scmont = id", 0, [](DiagramCtx& c) {
    return eq(into(c.kind), compose({runit(), tensor(id_arrow(), i_counit()), scmont()}), id_arrow());
  });
  add("I-comonoid-comm", "I-comonoid", "γ∘Scmont = Scmont", 0,
      [](DiagramCtx& c) { return eq(into(c.kind), then(scmont(), sym()), scmont()); });
  add("I-comonoid-assoc", "I-comonoid", "α∘(Scmont⊗I)∘Scmont = (I⊗Scmont)∘Scmont", 0,
      [](DiagramCtx& c) {
        auto d = eq(into(c.kind), compose({assoc(), tensor(scmont(), id_arrow()), scmont()}),
                    then(scmont(), tensor(id_arrow(), scmont())));
        d.obligations.push_back({"Scmont", into(c.kind), tensor(into(c.kind), into(c.kind)), scmont()});
        return d;
      });

  // ---- closed case ----
  add("S-fun-iso", "S-fun-iso", "S(X⊸Y) ≅ (X⊸S Y)", 2, [](DiagramCtx& c) {
    const Space src = sfun(limpl(c.x(0), c.x(1))), tgt = limpl(c.x(0), sfun(c.x(1)));
    auto d = eq(src, then(sfun_curry(), sfun_uncurry()), id_arrow());
    d.obligations.push_back({"S-fun", src, tgt, sfun_curry()});
    d.obligations.push_back({"S-fun⁻¹", tgt, src, sfun_uncurry()});
    return d;
  });
  add("S-fun-iso-inv", "S-fun-iso", "(X⊸S Y) -> S(X⊸Y) -> (X⊸S Y) = id", 2, [](DiagramCtx& c) {
    return eq(limpl(c.x(0), sfun(c.x(1))), then(sfun_uncurry(), sfun_curry()), id_arrow());
  });

  std::sort(v.begin(), v.end(), [](const DiagramSpec& a, const DiagramSpec& b) { return a.name < b.name; });
  (void)id;
  return v;
}

std::string images_str(const AtomSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& a : s) {
    if (!first) out += ", ";
    first = false;
    out += a.str();
  }
  return out + "}";
}

std::string space_desc(const Space& e) {
  if (e->con != SpaceNode::Con::Base) return e->str();
  std::string out = e->str() + "=" + images_str(AtomSet(e->atoms.begin(), e->atoms.end()));
  std::vector<std::string> rel;
  for (const auto& [p, v] : e->strict)
    if (!(p.second < p.first))
      rel.push_back((v == Verdict::StrictCoh ? "+" : "-") + std::string("(") + p.first.str() + "," +
                    p.second.str() + ")");
  if (!rel.empty()) {
    out += " ";
    for (const auto& r : rel) out += r;
  }
  return out;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) h = (h ^ ch) * 1099511628211ULL;
  return h;
}

}  // namespace

Space gen_space(std::uint64_t seed, const GenParams& params) {
  std::mt19937_64 rng(seed);
  std::vector<Atom> w;
  for (int i = 0; i < params.web_size; ++i) w.push_back(Atom::base(letter_name(i)));
  std::uniform_int_distribution<int> pick(0, 2);
  std::vector<AtomPair> scoh, sincoh;
  for (int i = 0; i < params.web_size; ++i)
    for (int j = i; j < params.web_size; ++j) {
      const int v = pick(rng);
      if (params.kind == Kind::Coh && i == j) continue;
      if (params.kind == Kind::Coh) {
        if (v != 0) scoh.emplace_back(w[i], w[j]);
        continue;
      }
      if (v == 0) scoh.emplace_back(w[i], w[j]);
      if (v == 1) sincoh.emplace_back(w[i], w[j]);
    }
  if (params.kind == Kind::Rel) sincoh.clear();
  return base_space(params.kind, "E", w, scoh, params.kind == Kind::Nucs ? sincoh : std::vector<AtomPair>{});
}

Rel gen_morphism(std::mt19937_64& rng, const Space& x, const Space& y, const Budget& b, double density) {
  const auto xs = enumerate(x, b);
  const auto ys = enumerate(y, b);
  std::vector<Atom> cands;
  for (const auto& a : xs)
    for (const auto& c : ys) cands.push_back(Atom::pair(a, c));
  std::shuffle(cands.begin(), cands.end(), rng);
  std::bernoulli_distribution keep(density);
  const Space xy = limpl(x, y);
  const bool rel = x->kind == Kind::Rel;
  std::vector<Atom> chosen;
  for (const auto& p : cands) {
    if (!keep(rng)) continue;
    bool ok = rel || coherent(xy, p, p);
    for (std::size_t i = 0; ok && !rel && i < chosen.size(); ++i) ok = coherent(xy, p, chosen[i]);
    if (ok) chosen.push_back(p);
  }
  Rel r;
  r.src_label = x->str();
  r.tgt_label = y->str();
  for (const auto& p : chosen) r.insert(p.left(), p.right());
  return r;
}

std::pair<Rel, Rel> gen_summable_pair(std::mt19937_64& rng, const Space& x, const Space& y,
                                      const Budget& b) {
  const auto strategy = rng() % 3;
  if (strategy == 0) {
    Rel f = gen_morphism(rng, x, y, b);
    if (rng() % 2) return {f, Rel{}};
    return {Rel{}, f};
  }
  if (strategy == 2) {
    for (int attempt = 0; attempt < 20; ++attempt) {
      Rel f0 = gen_morphism(rng, x, y, b, 0.3), f1 = gen_morphism(rng, x, y, b, 0.3);
      if (summable(f0, f1, x, y)) return {f0, f1};
    }
  }
  const Rel g = gen_morphism(rng, x, sfun(y), b);
  return {rel_compose(g, proj_rel(0, y, b)), rel_compose(g, proj_rel(1, y, b))};
}

Arrow DiagramCtx::d(const Space& e) const {
  const Arrow base = dpartial_arrow(kind == Kind::Coh ? e : nullptr);
  if (!mutation.drop_dpartial_pair) return base;
  const auto web = enumerate(e, budget);
  if (web.empty()) return base;
  const Atom victim = Atom::mset(std::vector<Atom>{Atom::tag(1, web.front())});
  return Arrow(
      "∂(mutated)",
      [base, victim](const Atom& m, int bound, AtomSet& out) {
        if (m == victim) return;
        base.image_into(m, bound, out);
      },
      [](int d) { return d; });
}

Rel DiagramCtx::morphism(const Space& a, const Space& b, double density) const {
  return gen_morphism(*rng, a, b, budget, density);
}

const std::vector<DiagramSpec>& diagram_registry() {
  static const std::vector<DiagramSpec> reg = build_registry();
  return reg;
}

const DiagramSpec* find_diagram(const std::string& name) {
  for (const auto& s : diagram_registry())
    if (s.name == name) return &s;
  return nullptr;
}

const std::vector<std::string>& required_groups() {
  static const std::vector<std::string> g{
      "joint-monicity", "S-com",     "S-zero",         "S-wit",          "S-ass",
      "S-tensor",       "S-with",    "monad-laws",     "theta-flip",     "strength",
      "smont-sym",      "comonad",   "comonoid",       "seely-digg-comm", "seelyt-mont-commut",
      "d-local",        "d-lin",     "d-chain",        "d-with",         "d-schwarz",
      "leibniz",        "dbar-coalgebra", "dbar-local", "dbar-lin",      "dtilde-mon-tens",
      "I-comonoid",     "S-fun-iso"};
  return g;
}

CheckReport run_diagram(const DiagramSpec& diag, Kind model, const RunOptions& opt) {
  CheckReport rep;
  rep.diagram = diag.name;
  rep.model = model;
  rep.seed = opt.seed;
  rep.trials = opt.trials;
  if (std::find(diag.kinds.begin(), diag.kinds.end(), model) == diag.kinds.end()) {
    rep.skipped = true;
    return rep;
  }
  const int out_bound_default = opt.budget.max_degree;
  for (int t = 0; t < opt.trials; ++t) {
    std::uint64_t s = mix(mix(mix(opt.seed, name_hash(diag.name)), static_cast<std::uint64_t>(model)),
                          static_cast<std::uint64_t>(t));
    std::mt19937_64 rng(s);
    DiagramCtx ctx{model, opt.budget, &rng, opt.mutation, {}};
    for (int i = 0; i < diag.objects; ++i) {
      GenParams p;
      p.kind = model;
      p.web_size = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::max(1, opt.web_size)));
      ctx.objects.push_back(gen_space(rng(), p));
    }
    auto objects_str = [&] {
      std::string o;
      for (const auto& e : ctx.objects) o += (o.empty() ? "" : "; ") + space_desc(e);
      return o;
    };
    ++rep.trials_run;
    try {
      const DiagramInstance inst = diag.build(ctx);
      const int bound = inst.bound > 0 ? inst.bound : out_bound_default;
      const auto dom = enumerate(inst.source, opt.budget);
      for (const auto& ob : inst.obligations) {
        const Rel r = ob.arrow.on(enumerate(ob.src, opt.budget), opt.budget.max_degree);
        auto chk = is_morphism(ob.src, ob.tgt, r);
        if (!chk) {
          rep.passed = false;
          rep.error = ob.what + " is not a morphism: " + chk.reason;
          rep.counterexample = Counterexample{t, "", "", "", objects_str()};
          return rep;
        }
      }
      auto res = arrows_equal_on(inst.left, inst.right, dom, bound);
      if (!res.equal) {
        rep.passed = false;
        rep.counterexample = Counterexample{t, res.witness->str(), images_str(res.left_image),
                                            images_str(res.right_image), objects_str()};
        return rep;
      }
    } catch (const std::exception& e) {
      rep.passed = false;
      rep.error = e.what();
      rep.counterexample = Counterexample{t, "", "", "", objects_str()};
      return rep;
    }
  }
  return rep;
}

std::vector<CheckReport> run_all(Kind model, const RunOptions& opt, const std::vector<std::string>& only) {
  std::vector<CheckReport> out;
  for (const auto& diag : diagram_registry()) {
    if (!only.empty() && std::find(only.begin(), only.end(), diag.name) == only.end() &&
        std::find(only.begin(), only.end(), diag.group) == only.end())
      continue;
    out.push_back(run_diagram(diag, model, opt));
  }
  return out;
}

std::string report_line(const CheckReport& r) {
  std::ostringstream os;
  os << (r.skipped ? "SKIP" : r.passed ? "PASS" : "FAIL") << ' ' << r.diagram << ' ' << kind_name(r.model)
     << " trials=" << r.trials_run << '/' << r.trials << " seed=" << r.seed;
  if (!r.passed) {
    if (r.counterexample) {
      const auto& c = *r.counterexample;
      os << " trial=" << c.trial;
      if (!c.input.empty()) os << " input=" << c.input << " left=" << c.left_image << " right=" << c.right_image;
      os << " objects=[" << c.objects << "]";
    }
    if (!r.error.empty()) os << " error=" << r.error;
  }
  return os.str();
}

std::string text_report(const std::vector<CheckReport>& rs) {
  std::string out;
  int failed = 0;
  for (const auto& r : rs) {
    out += report_line(r) + "\n";
    if (!r.passed) ++failed;
  }
  out += std::to_string(rs.size() - static_cast<std::size_t>(failed)) + "/" + std::to_string(rs.size()) +
         " diagrams passed\n";
  return out;
}

std::string json_summary(const std::vector<CheckReport>& rs, const RunOptions& opt) {
  nlohmann::ordered_json j;
  j["seed"] = opt.seed;
  j["trials"] = opt.trials;
  j["max_degree"] = opt.budget.max_degree;
  j["max_atoms"] = opt.budget.max_atoms;
  j["web_size"] = opt.web_size;
  int failed = 0;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rs) {
    nlohmann::ordered_json e;
    e["diagram"] = r.diagram;
    e["model"] = kind_name(r.model);
    e["status"] = r.skipped ? "skip" : r.passed ? "pass" : "fail";
    e["trials_run"] = r.trials_run;
    if (r.counterexample) {
      e["counterexample"] = {{"trial", r.counterexample->trial},
                             {"input", r.counterexample->input},
                             {"left", r.counterexample->left_image},
                             {"right", r.counterexample->right_image},
                             {"objects", r.counterexample->objects}};
    }
    if (!r.error.empty()) e["error"] = r.error;
    if (!r.passed) ++failed;
    arr.push_back(std::move(e));
  }
  j["results"] = std::move(arr);
  j["passed"] = static_cast<int>(rs.size()) - failed;
  j["failed"] = failed;
  return j.dump(2) + "\n";
}

}  // namespace cohdiff
