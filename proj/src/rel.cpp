#include "cohdiff/rel.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace cohdiff {

AtomSet Rel::image(const Atom& a) const {
  AtomSet out;
  // Base("") is the least atom.
  for (auto it = pairs_.lower_bound({a, Atom::base("")}); it != pairs_.end() && it->first == a;
       ++it)
    out.insert(it->second);
  return out;
}

AtomSet Rel::sources() const {
  AtomSet out;
  for (const auto& p : pairs_) out.insert(p.first);
  return out;
}

AtomSet Rel::targets() const {
  AtomSet out;
  for (const auto& p : pairs_) out.insert(p.second);
  return out;
}

int Rel::max_source_degree() const {
  int d = 0;
  for (const auto& p : pairs_) d = std::max(d, p.first.degree());
  return d;
}

Rel Rel::unite(const Rel& o) const {
  Rel r = *this;
  r.pairs_.insert(o.pairs_.begin(), o.pairs_.end());
  return r;
}

Rel Rel::intersect(const Rel& o) const {
  Rel r;
  r.src_label = src_label;
  r.tgt_label = tgt_label;
  std::set_intersection(pairs_.begin(), pairs_.end(), o.pairs_.begin(), o.pairs_.end(),
                        std::inserter(r.pairs_, r.pairs_.end()));
  return r;
}

Rel Rel::inverse() const {
  Rel r;
  r.src_label = tgt_label;
  r.tgt_label = src_label;
  for (const auto& [a, b] : pairs_) r.insert(b, a);
  return r;
}

Rel identity_on(const std::vector<Atom>& web) {
  Rel r;
  for (const auto& a : web) r.insert(a, a);
  return r;
}

Rel rel_compose(const Rel& s, const Rel& t) {
  std::map<Atom, std::vector<Atom>> by_src;
  for (const auto& [b, c] : t.pairs()) by_src[b].push_back(c);
  Rel out;
  out.src_label = s.src_label;
  out.tgt_label = t.tgt_label;
  for (const auto& [a, b] : s.pairs()) {
    auto it = by_src.find(b);
    if (it == by_src.end()) continue;
    for (const auto& c : it->second) out.insert(a, c);
  }
  return out;
}

EqualOnResult rel_equal_on(const Rel& f, const Rel& g, const std::vector<Atom>& domain) {
  EqualOnResult res;
  for (const auto& a : domain) {
    AtomSet fi = f.image(a);
    AtomSet gi = g.image(a);
    if (fi != gi) {
      res.equal = false;
      res.witness = a;
      res.left_image = std::move(fi);
      res.right_image = std::move(gi);
      return res;
    }
  }
  return res;
}

std::string write_rel(const Rel& r) {
  std::ostringstream os;
  for (const auto& [a, b] : r.pairs()) os << a.str() << " \xE2\x86\xA6 " << b.str() << "\n";
  return os.str();
}

Rel read_rel(const std::string& text) {
  Rel r;
  std::istringstream is(text);
  std::string line;
  std::size_t offset = 0;
  while (std::getline(is, line)) {
    const std::size_t line_start = offset;
    offset += line.size() + 1;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    AtomReader rd(line);
    if (rd.at_end()) continue;
    try {
      Atom a = rd.read();
      if (!rd.eat("\xE2\x86\xA6") && !rd.eat("->")) throw ParseError("expected '\xE2\x86\xA6'", rd.pos());
      Atom b = rd.read();
      if (!rd.at_end()) throw ParseError("trailing input", rd.pos());
      r.insert(std::move(a), std::move(b));
    } catch (const ParseError& e) {
      throw ParseError(std::string("relation line: ") + e.what(), line_start + e.pos());
    }
  }
  return r;
}

// ---- web shapes ----

WebShapePtr WebShape::finite(std::vector<Atom> atoms) {
  auto w = std::make_shared<WebShape>();
  w->con = Con::Finite;
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  w->atoms = std::move(atoms);
  return w;
}

WebShapePtr WebShape::pair(WebShapePtr l, WebShapePtr r) {
  auto w = std::make_shared<WebShape>();
  w->con = Con::Pair;
  w->l = std::move(l);
  w->r = std::move(r);
  return w;
}

WebShapePtr WebShape::tagged(WebShapePtr l, WebShapePtr r) {
  auto w = std::make_shared<WebShape>();
  w->con = Con::Tagged;
  w->l = std::move(l);
  w->r = std::move(r);
  return w;
}

WebShapePtr WebShape::multisets(WebShapePtr e, std::function<bool(const std::vector<Atom>&)> admit) {
  auto w = std::make_shared<WebShape>();
  w->con = Con::Multisets;
  w->l = std::move(e);
  w->admit = std::move(admit);
  return w;
}

void for_each_multiset(const std::vector<Atom>& base, int n,
                       const std::function<void(const std::vector<Atom>&)>& fn) {
  std::vector<Atom> cur;
  std::function<void(std::size_t, int)> rec = [&](std::size_t from, int left) {
    if (left == 0) {
      fn(cur);
      return;
    }
    for (std::size_t i = from; i < base.size(); ++i) {
      cur.push_back(base[i]);
      rec(i, left - 1);
      cur.pop_back();
    }
  };
  rec(0, n);
}

namespace {

struct Enumerator {
  const Budget& budget;
  long produced = 0;

  void charge(std::size_t n) {
    produced += static_cast<long>(n);
    if (produced > budget.max_atoms)
      throw BudgetExceeded("web enumeration exceeded max_atoms=" +
                           std::to_string(budget.max_atoms));
  }

  // Atoms of degree <= d, sorted.
  std::vector<Atom> run(const WebShape& w, int d) {
    std::vector<Atom> out;
    switch (w.con) {
      case WebShape::Con::Finite:
        for (const auto& a : w.atoms)
          if (a.degree() <= d) out.push_back(a);
        break;
      case WebShape::Con::Pair: {
        auto ls = run(*w.l, d);
        auto rs = run(*w.r, d);
        for (const auto& a : ls)
          for (const auto& b : rs)
            if (a.degree() + b.degree() <= d) out.push_back(Atom::pair(a, b));
        break;
      }
      case WebShape::Con::Tagged: {
        for (const auto& a : run(*w.l, d)) out.push_back(Atom::tag(0, a));
        for (const auto& a : run(*w.r, d)) out.push_back(Atom::tag(1, a));
        break;
      }
      case WebShape::Con::Multisets: {
        if (d < 1) {
          out.push_back(Atom::mset(Multiset{}));
          break;
        }
        auto base = run(*w.l, d - 1);
        std::vector<Atom> cur;
        std::function<void(std::size_t, int)> rec = [&](std::size_t from, int left) {
          if (!w.admit || w.admit(cur)) {
            out.push_back(Atom::mset(Multiset::of(cur)));
            charge(1);
          } else {
            return;  // supersets of an inadmissible support stay inadmissible
          }
          for (std::size_t i = from; i < base.size(); ++i) {
            const int cost = base[i].degree() + 1;
            if (cost > left) continue;
            cur.push_back(base[i]);
            rec(i, left - cost);
            cur.pop_back();
          }
        };
        rec(0, d);
        break;
      }
    }
    if (w.con != WebShape::Con::Multisets) charge(out.size());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

}  // namespace

std::vector<Atom> enumerate_web(const WebShape& w, const Budget& budget) {
  if (budget.max_degree < 0) throw std::invalid_argument("enumerate_web: negative max_degree");
  Enumerator e{budget};
  return e.run(w, budget.max_degree);
}

}  // namespace cohdiff
