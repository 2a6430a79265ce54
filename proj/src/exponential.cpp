#include "cohdiff/exponential.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace cohdiff {

namespace {
using Opt = std::optional<Atom>;
}

const char* structural_name(StructuralMapName n) {
  switch (n) {
    case StructuralMapName::der: return "der";
    case StructuralMapName::dig: return "dig";
    case StructuralMapName::weak: return "weak";
    case StructuralMapName::contr: return "contr";
    case StructuralMapName::seely0: return "seely0";
    case StructuralMapName::seely0_inv: return "seely0_inv";
    case StructuralMapName::seely2: return "seely2";
    case StructuralMapName::seely2_inv: return "seely2_inv";
    case StructuralMapName::m0: return "m0";
    case StructuralMapName::m2: return "m2";
  }
  return "?";
}

std::vector<std::vector<Multiset>> mset_partitions(const Multiset& m) {
  const std::vector<Atom> elems = m.elements();
  const std::size_t n = elems.size();
  std::set<std::vector<Multiset>> seen;
  std::vector<int> block(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int nblocks) {
    if (i == n) {
      std::vector<std::vector<Atom>> parts(static_cast<std::size_t>(nblocks));
      for (std::size_t k = 0; k < n; ++k) parts[static_cast<std::size_t>(block[k])].push_back(elems[k]);
      std::vector<Multiset> ms;
      ms.reserve(parts.size());
      for (auto& p : parts) ms.push_back(Multiset::of(std::move(p)));
      std::sort(ms.begin(), ms.end());
      seen.insert(std::move(ms));
      return;
    }
    for (int b = 0; b <= nblocks; ++b) {
      // identical neighbours: keep block indices non-decreasing to cut duplicates
      if (i > 0 && elems[i] == elems[i - 1] && b < block[i - 1]) continue;
      block[i] = b;
      rec(i + 1, std::max(nblocks, b + 1));
    }
  };
  rec(0, 0);
  return {seen.begin(), seen.end()};
}

Arrow der() {
  return atom_image(
      "der",
      [](const Atom& a, AtomSet& out) {
        if (a.is_mset() && a.ms().size() == 1) out.insert(a.ms().entries()[0].first);
      },
      [](int d) { return d + 1; });
}

Arrow dig() {
  return Arrow(
      "dig",
      [](const Atom& a, int bound, AtomSet& out) {
        if (!a.is_mset()) return;
        const int base = a.degree();
        if (base > bound) return;
        for (const auto& parts : mset_partitions(a.ms())) {
          const int p = static_cast<int>(parts.size());
          std::vector<Atom> elems;
          for (const auto& part : parts) elems.push_back(Atom::mset(part));
          for (int extra = 0; base + p + extra <= bound; ++extra) {
            out.insert(Atom::mset(elems));
            elems.push_back(Atom::mset(Multiset{}));
          }
        }
      },
      [](int d) { return d; });
}

Arrow weak() {
  return atom_image(
      "weak",
      [](const Atom& a, AtomSet& out) {
        if (a.is_mset() && a.ms().empty()) out.insert(Atom::star());
      },
      [](int) { return 0; });
}

Arrow bang_zero() {
  return atom_image(
      "!0",
      [](const Atom& a, AtomSet& out) {
        if (a.is_mset() && a.ms().empty()) out.insert(a);
      },
      [](int) { return 0; });
}

Arrow contr() {
  return atom_image(
      "contr",
      [](const Atom& a, AtomSet& out) {
        if (!a.is_mset()) return;
        const auto& es = a.ms().entries();
        std::vector<int> take(es.size(), 0);
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
          if (i == es.size()) {
            std::vector<Multiset::Entry> l, r;
            for (std::size_t k = 0; k < es.size(); ++k) {
              l.emplace_back(es[k].first, take[k]);
              r.emplace_back(es[k].first, es[k].second - take[k]);
            }
            out.insert(Atom::pair(Atom::mset(Multiset::from_entries(l)),
                                  Atom::mset(Multiset::from_entries(r))));
            return;
          }
          for (int t = 0; t <= es[i].second; ++t) {
            take[i] = t;
            rec(i + 1);
          }
        };
        rec(0);
      },
      [](int d) { return d; });
}

Arrow seely0() {
  return atom_image(
      "seely0",
      [](const Atom& a, AtomSet& out) {
        if (a == Atom::star()) out.insert(Atom::mset(Multiset{}));
      },
      [](int) { return 0; });
}

Arrow seely0_inv() {
  return atom_image(
      "seely0⁻¹",
      [](const Atom& a, AtomSet& out) {
        if (a.is_mset() && a.ms().empty()) out.insert(Atom::star());
      },
      [](int) { return 0; });
}

Arrow seely2() {
  return atom_map("seely2", [](const Atom& a) -> Opt {
    if (!a.is_pair() || !a.left().is_mset() || !a.right().is_mset()) return std::nullopt;
    std::vector<Atom> elems;
    for (const auto& x : a.left().ms().elements()) elems.push_back(Atom::tag(0, x));
    for (const auto& x : a.right().ms().elements()) elems.push_back(Atom::tag(1, x));
    return Atom::mset(std::move(elems));
  });
}

Arrow seely2_inv() {
  return atom_map("seely2⁻¹", [](const Atom& a) -> Opt {
    if (!a.is_mset()) return std::nullopt;
    std::vector<Atom> l, r;
    for (const auto& x : a.ms().elements()) {
      if (!x.is_tag()) return std::nullopt;
      (x.index() == 0 ? l : r).push_back(x.inner());
    }
    return Atom::pair(Atom::mset(std::move(l)), Atom::mset(std::move(r)));
  });
}

Arrow m0() {
  return Arrow(
      "m0",
      [](const Atom& a, int bound, AtomSet& out) {
        if (!(a == Atom::star())) return;
        std::vector<Atom> elems;
        for (int k = 0; k <= bound; ++k) {
          out.insert(Atom::mset(elems));
          elems.push_back(Atom::star());
        }
      },
      [](int) { return 0; });
}

Arrow m2() {
  return atom_image(
      "m2",
      [](const Atom& a, AtomSet& out) {
        if (!a.is_pair() || !a.left().is_mset() || !a.right().is_mset()) return;
        const auto xs = a.left().ms().elements();
        auto ys = a.right().ms().elements();
        if (xs.size() != ys.size()) return;
        do {
          std::vector<Atom> zs;
          zs.reserve(xs.size());
          for (std::size_t i = 0; i < xs.size(); ++i) zs.push_back(Atom::pair(xs[i], ys[i]));
          out.insert(Atom::mset(std::move(zs)));
        } while (std::next_permutation(ys.begin(), ys.end()));
      },
      [](int d) { return 2 * d; });
}

Arrow structural_arrow(StructuralMapName n) {
  switch (n) {
    case StructuralMapName::der: return der();
    case StructuralMapName::dig: return dig();
    case StructuralMapName::weak: return weak();
    case StructuralMapName::contr: return contr();
    case StructuralMapName::seely0: return seely0();
    case StructuralMapName::seely0_inv: return seely0_inv();
    case StructuralMapName::seely2: return seely2();
    case StructuralMapName::seely2_inv: return seely2_inv();
    case StructuralMapName::m0: return m0();
    case StructuralMapName::m2: return m2();
  }
  return zero_arrow();
}

std::pair<Space, Space> structural_type(StructuralMapName n, const Space& e, const Space& f) {
  const Kind k = e->kind;
  auto need_f = [&] {
    if (!f) throw std::invalid_argument(std::string(structural_name(n)) + " needs a second space");
  };
  switch (n) {
    case StructuralMapName::der: return {bang(e), e};
    case StructuralMapName::dig: return {bang(e), bang(bang(e))};
    case StructuralMapName::weak: return {bang(e), one(k)};
    case StructuralMapName::contr: return {bang(e), tensor(bang(e), bang(e))};
    case StructuralMapName::seely0: return {one(k), bang(top(k))};
    case StructuralMapName::seely0_inv: return {bang(top(k)), one(k)};
    case StructuralMapName::seely2: need_f(); return {tensor(bang(e), bang(f)), bang(with_(e, f))};
    case StructuralMapName::seely2_inv: need_f(); return {bang(with_(e, f)), tensor(bang(e), bang(f))};
    case StructuralMapName::m0: return {one(k), bang(one(k))};
    case StructuralMapName::m2: need_f(); return {tensor(bang(e), bang(f)), bang(tensor(e, f))};
  }
  return {e, e};
}

Rel bang_morphism(const Rel& s, const Space& e, const Budget& b) {
  Rel r = bang(from_rel(s)).on(enumerate(bang(e), b), b.max_degree);
  r.src_label = "!" + s.src_label;
  r.tgt_label = "!" + s.tgt_label;
  return r;
}

Rel structural(StructuralMapName n, const Space& e, const Budget& b, const Space& f) {
  auto [src, tgt] = structural_type(n, e, f);
  Rel r = structural_arrow(n).on(enumerate(src, b), b.max_degree);
  r.src_label = src->str();
  r.tgt_label = tgt->str();
  return r;
}

namespace {

// All ways to pick, for each element of beta (with multiplicity), one preimage, summed.
void sum_preimages(const Multiset& beta, const std::map<Atom, std::vector<Multiset>>& pre, int bound,
                   const std::function<void(const Multiset&)>& fn) {
  const auto& es = beta.entries();
  std::vector<std::vector<Multiset>> opts;
  for (const auto& [x, k] : es) {
    auto it = pre.find(x);
    if (it == pre.end()) return;
    std::vector<Atom> base;
    for (const auto& m : it->second) base.push_back(Atom::mset(m));
    std::vector<Multiset> sums;
    for_each_multiset(base, k, [&](const std::vector<Atom>& pick) {
      Multiset acc;
      for (const auto& p : pick) acc = acc.plus(p.ms());
      if (Atom::mset(acc).degree() <= bound) sums.push_back(std::move(acc));
    });
    if (sums.empty()) return;
    opts.push_back(std::move(sums));
  }
  std::function<void(std::size_t, const Multiset&)> rec = [&](std::size_t i, const Multiset& acc) {
    if (Atom::mset(acc).degree() > bound) return;
    if (i == opts.size()) {
      fn(acc);
      return;
    }
    for (const auto& m : opts[i]) rec(i + 1, acc.plus(m));
  };
  rec(0, Multiset{});
}

}  // namespace

Rel kleisli_compose(const Rel& s, const Rel& t, const Budget& b, const Space& e) {
  std::map<Atom, std::vector<Multiset>> pre;
  for (const auto& [m, y] : s.pairs())
    if (m.is_mset()) pre[y].push_back(m.ms());
  const Space be = e ? bang(e) : nullptr;
  Rel out;
  out.src_label = s.src_label;
  out.tgt_label = t.tgt_label;
  for (const auto& [beta, c] : t.pairs()) {
    if (!beta.is_mset()) continue;
    sum_preimages(beta.ms(), pre, b.max_degree, [&](const Multiset& m) {
      Atom src = Atom::mset(m);
      if (be && !in_web(be, src)) return;
      out.insert(src, c);
    });
  }
  return out;
}

Rel promotion(const Rel& s, const Budget& b) {
  std::vector<AtomPair> ps(s.pairs().begin(), s.pairs().end());
  Rel out;
  out.src_label = s.src_label;
  out.tgt_label = "!" + s.tgt_label;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t, int)> rec = [&](std::size_t from, int tgt_used) {
    Multiset src;
    std::vector<Atom> tgts;
    for (auto i : pick) {
      src = src.plus(ps[i].first.ms());
      tgts.push_back(ps[i].second);
    }
    Atom sa = Atom::mset(src);
    if (sa.degree() <= b.max_degree) out.insert(sa, Atom::mset(std::move(tgts)));
    for (std::size_t i = from; i < ps.size(); ++i) {
      if (!ps[i].first.is_mset()) continue;
      const int cost = ps[i].second.degree() + 1;
      if (tgt_used + cost > b.max_degree) continue;
      pick.push_back(i);
      rec(i, tgt_used + cost);
      pick.pop_back();
    }
  };
  rec(0, 0);
  return out;
}

}  // namespace cohdiff
