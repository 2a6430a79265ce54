#include "cohdiff/denot.hpp"

#include <algorithm>
#include <functional>

namespace cohdiff::denot {

using calc::Op;

Atom nat_atom(int n) { return Atom::base(std::to_string(n)); }

Space interp_type(const Ty& a, const SemEnv& env) {
  if (a.is_any()) throw Untypable("no interpretation for an unconstrained type");
  if (a.is_arrow()) return limpl(bang(interp_type(a.dom(), env)), interp_type(a.cod(), env));
  std::vector<Atom> atoms;
  std::vector<AtomPair> incoh;
  for (int n = 0; n <= env.nat_bound; ++n) atoms.push_back(nat_atom(n));
  if (env.kind == Kind::Nucs)
    for (const auto& x : atoms)
      for (const auto& y : atoms)
        if (x < y) incoh.emplace_back(x, y);
  Space s = base_space(env.kind, "N", atoms, {}, incoh);
  for (int d = 0; d < a.depth(); ++d) s = sfun(s);
  return s;
}

Space interp_context(const Ctx& ctx, const SemEnv& env) {
  Space s = top(env.kind);
  for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) s = with_(interp_type(it->second, env), s);
  return s;
}

Atom ctx_atom(std::size_t k, const Atom& a) {
  Atom r = Atom::tag(0, a);
  for (std::size_t j = 0; j < k; ++j) r = Atom::tag(1, r);
  return r;
}

Atom ground_tag(int i, const Atom& a) {
  if (a.is_pair()) return Atom::pair(a.left(), ground_tag(i, a.right()));
  return Atom::tag(i, a);
}

Rel restrict_degree(const Rel& r, int d) {
  Rel out;
  for (const auto& [g, t] : r.pairs())
    if (g.degree() <= d && t.degree() <= d) out.insert(g, t);
  return out;
}

namespace {
using TagFn = std::function<std::optional<Atom>(const Atom&)>;

// Applies f to the tag stack at depth d of the ground of a.
std::optional<Atom> at_ground(const Atom& a, int d, const TagFn& f) {
  if (a.is_pair()) {
    auto r = at_ground(a.right(), d, f);
    if (!r) return std::nullopt;
    return Atom::pair(a.left(), *r);
  }
  if (d == 0) return f(a);
  if (!a.is_tag()) return std::nullopt;
  auto r = at_ground(a.inner(), d - 1, f);
  if (!r) return std::nullopt;
  return Atom::tag(a.index(), *r);
}

std::optional<Atom> two_tags(const Atom& a, int& i, int& j) {
  if (!a.is_tag() || !a.inner().is_tag()) return std::nullopt;
  i = a.index();
  j = a.inner().index();
  return a.inner().inner();
}

TagFn tag_fn(Op op, int index) {
  switch (op) {
    case Op::Proj:
      return [index](const Atom& a) -> std::optional<Atom> {
        if (a.is_tag() && a.index() == index) return a.inner();
        return std::nullopt;
      };
    case Op::Inj: return [index](const Atom& a) -> std::optional<Atom> { return Atom::tag(index, a); };
    case Op::Sigma:
      return [](const Atom& a) -> std::optional<Atom> {
        int i = 0, j = 0;
        auto r = two_tags(a, i, j);
        if (!r || (i == 1 && j == 1)) return std::nullopt;
        return Atom::tag(i + j, *r);
      };
    default:  // Flip
      return [](const Atom& a) -> std::optional<Atom> {
        int i = 0, j = 0;
        auto r = two_tags(a, i, j);
        if (!r) return std::nullopt;
        return Atom::tag(j, Atom::tag(i, *r));
      };
  }
}

int ctx_index(const Atom& a, Atom& payload) {
  int k = 0;
  const Atom* p = &a;
  while (p->index() == 1) {
    p = &p->inner();
    ++k;
  }
  payload = p->inner();
  return k;
}

class Interp {
 public:
  Interp(const SemEnv& env, int degree) : env_(env), deg_(degree) {}

  Rel eval(Ctx& ctx, const Term& m) {
    switch (m->op) {
      case Op::Var: {
        std::size_t k = ctx.size();
        while (k > 0 && ctx[k - 1].first != m->var) --k;
        if (k == 0) throw Untypable("unbound variable " + m->var);
        Rel r;
        for (const auto& a : web(ctx[k - 1].second, deg_ - 1))
          r.insert(Atom::mset({ctx_atom(k - 1, a)}), a);
        return r;
      }
      case Op::Abs: {
        const std::size_t n = ctx.size();
        ctx.emplace_back(m->var, m->ty);
        Rel body;
        try {
          body = eval(ctx, m->a);
        } catch (...) {
          ctx.pop_back();
          throw;
        }
        ctx.pop_back();
        Rel r;
        for (const auto& [g, b] : body.pairs()) {
          std::vector<Atom> rest, arg;
          for (const auto& e : g.ms().elements()) {
            Atom payload;
            if (static_cast<std::size_t>(ctx_index(e, payload)) == n)
              arg.push_back(payload);
            else
              rest.push_back(e);
          }
          keep(r, Atom::mset(rest), Atom::pair(Atom::mset(arg), b));
        }
        return r;
      }
      case Op::App: return apply(eval(ctx, m->a), eval(ctx, m->b));
      case Op::D: {
        const Rel f = eval(ctx, m->a);
        Rel r;
        for (const auto& [g, t] : f.pairs()) {
          const Multiset& ms = t.left().ms();
          const Atom& b = t.right();
          keep(r, g, Atom::pair(Atom::mset(tag_all(ms.elements())), ground_tag(0, b)));
          for (const auto& a : ms.support()) {
            std::vector<Atom> m1 = tag_all(ms.minus(a).elements());
            m1.push_back(ground_tag(1, a));
            keep(r, g, Atom::pair(Atom::mset(m1), ground_tag(1, b)));
          }
        }
        return r;
      }
      case Op::Proj:
      case Op::Inj:
      case Op::Sigma:
      case Op::Flip: {
        const Rel f = eval(ctx, m->a);
        const TagFn fn = tag_fn(m->op, m->index);
        Rel r;
        for (const auto& [g, t] : f.pairs())
          if (auto u = at_ground(t, m->depth, fn)) keep(r, g, *u);
        return r;
      }
      case Op::Zero: return {};
      case Op::Plus: return eval(ctx, m->a).unite(eval(ctx, m->b));
      case Op::Num: {
        Rel r;
        if (m->n <= env_.nat_bound) r.insert(Atom::mset(Multiset{}), nat_atom(m->n));
        return r;
      }
      case Op::Succ: {
        Rel r;
        for (int n = 0; n < env_.nat_bound; ++n)
          keep(r, Atom::mset(Multiset{}), Atom::pair(Atom::mset({nat_atom(n)}), nat_atom(n + 1)));
        return r;
      }
      case Op::If0: {
        Rel r;
        const Atom none = Atom::mset(Multiset{});
        for (int n = 0; n <= env_.nat_bound; ++n)
          for (int v = 0; v <= env_.nat_bound; ++v) {
            const Atom one = Atom::mset({nat_atom(v)});
            const Atom branches = n == 0 ? Atom::pair(one, Atom::pair(none, nat_atom(v)))
                                         : Atom::pair(none, Atom::pair(one, nat_atom(v)));
            keep(r, none, Atom::pair(Atom::mset({nat_atom(n)}), branches));
          }
        return r;
      }
      case Op::Fix: {
        const Rel f = eval(ctx, m->a);
        Rel x;
        for (int k = 0; k < 10000; ++k) {
          Rel y = apply(f, x);
          if (y == x) return x;
          x = std::move(y);
        }
        throw std::runtime_error("fixpoint iteration did not stabilize");
      }
    }
    return {};
  }

 private:
  const SemEnv& env_;
  int deg_;
  std::map<std::pair<std::string, int>, std::vector<Atom>> webs_;

  const std::vector<Atom>& web(const Ty& t, int d) {
    auto key = std::make_pair(t.str(), d);
    auto it = webs_.find(key);
    if (it != webs_.end()) return it->second;
    std::vector<Atom> w;
    if (d >= 0) w = enumerate(interp_type(t, env_), Budget{d, 2000000});
    return webs_.emplace(key, std::move(w)).first->second;
  }

  void keep(Rel& r, const Atom& g, const Atom& t) const {
    if (g.degree() <= deg_ && t.degree() <= deg_) r.insert(g, t);
  }

  static std::vector<Atom> tag_all(const std::vector<Atom>& xs) {
    std::vector<Atom> out;
    for (const auto& x : xs) out.push_back(ground_tag(0, x));
    return out;
  }

  // Kleisli application: (g0 + g1 + ... + gk, b) for (g0, ([a1..ak], b)) in f and (gj, aj) in x.
  Rel apply(const Rel& f, const Rel& x) {
    std::map<Atom, std::vector<Atom>> by_target;
    for (const auto& [g, a] : x.pairs()) by_target[a].push_back(g);
    Rel r;
    for (const auto& [g0, t] : f.pairs()) {
      const std::vector<Atom> args = t.left().ms().elements();
      std::function<void(std::size_t, const Multiset&)> go = [&](std::size_t j, const Multiset& acc) {
        if (Atom::mset(acc).degree() > deg_) return;
        if (j == args.size()) {
          keep(r, Atom::mset(acc), t.right());
          return;
        }
        auto it = by_target.find(args[j]);
        if (it == by_target.end()) return;
        for (const auto& g : it->second) go(j + 1, acc.plus(g.ms()));
      };
      go(0, g0.ms());
    }
    return r;
  }
};

Rel eval_at(const Ctx& ctx, const Term& m, const SemEnv& env, int degree) {
  Ctx c = ctx;
  return Interp(env, degree).eval(c, m);
}
}  // namespace

SemRel interp_term(const Ctx& ctx, const Term& m, const SemEnv& env) {
  Ty t;
  try {
    t = calc::typecheck(ctx, m);
  } catch (const calc::TypeError& e) {
    throw Untypable(e.what());
  }
  return {t, eval_at(ctx, m, env, env.degree)};
}

SemCompare sem_equal(const Ctx& ctx, const Term& m, const Term& n, const SemEnv& env, int max_slack) {
  SemCompare out;
  for (int slack = 0; slack <= max_slack; ++slack) {
    const int d = env.degree + slack;
    const Rel l = restrict_degree(eval_at(ctx, m, env, d), env.degree);
    const Rel r = restrict_degree(eval_at(ctx, n, env, d), env.degree);
    out.internal_degree = d;
    out.equal = l == r;
    out.witness.reset();
    if (out.equal) return out;
    for (const auto& p : l.pairs())
      if (!r.contains(p.first, p.second)) {
        out.witness = p;
        out.witness_in_left = true;
        break;
      }
    if (!out.witness)
      for (const auto& p : r.pairs())
        if (!l.contains(p.first, p.second)) {
          out.witness = p;
          break;
        }
  }
  return out;
}

SoundnessViolation::SoundnessViolation(Violation v)
    : std::runtime_error("rule " + v.rule + " changes the semantics at (" + v.pair.first.str() + ", " +
                         v.pair.second.str() + "): " + calc::show(v.before) + " -> " + calc::show(v.after)),
      violation(std::move(v)) {}

int max_numeral(const Term& m) {
  int r = m->op == Op::Num ? m->n : -1;
  if (m->a) r = std::max(r, max_numeral(m->a));
  if (m->b) r = std::max(r, max_numeral(m->b));
  return r;
}

SoundnessReport soundness_check(const Term& m, const SemEnv& env, int fuel, const Ctx& ctx, int max_slack) {
  SoundnessReport rep;
  Term cur = m;
  for (;;) {
    auto s = calc::step(cur, ctx);
    if (!s) break;
    if (rep.steps == fuel) {
      rep.fuel_exhausted = true;
      break;
    }
    ++rep.steps;
    ++rep.rule_counts[s->rule];
    if (std::max(max_numeral(cur), max_numeral(s->term)) > env.nat_bound) {
      ++rep.out_of_range;
      cur = s->term;
      continue;
    }
    const SemCompare c = sem_equal(ctx, cur, s->term, env, max_slack);
    if (!c.equal) {
      Violation v;
      v.step = rep.steps;
      v.rule = s->rule;
      v.before = cur;
      v.after = s->term;
      v.pair = *c.witness;
      v.in_before = c.witness_in_left;
      rep.violations.push_back(std::move(v));
    }
    cur = s->term;
  }
  rep.last = cur;
  return rep;
}

SoundnessReport assert_sound(const Term& m, const SemEnv& env, int fuel, const Ctx& ctx) {
  SoundnessReport rep = soundness_check(m, env, fuel, ctx);
  if (!rep.ok()) throw SoundnessViolation(rep.violations.front());
  return rep;
}

}  // namespace cohdiff::denot
