#include "cohdiff/space.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace cohdiff {

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Coh: return "coh";
    case Kind::Nucs: return "nucs";
    case Kind::Rel: return "rel";
  }
  return "?";
}

Kind parse_kind(const std::string& s) {
  if (s == "coh") return Kind::Coh;
  if (s == "nucs") return Kind::Nucs;
  if (s == "rel") return Kind::Rel;
  throw std::invalid_argument("unknown model kind '" + s + "' (expected coh, nucs or rel)");
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::StrictCoh: return "strictly coherent";
    case Verdict::Neutral: return "neutral";
    case Verdict::StrictIncoh: return "strictly incoherent";
  }
  return "?";
}

std::string SpaceNode::str() const {
  auto par = [](const Space& s) {
    const bool atomic = s->con == Con::Base || s->con == Con::One || s->con == Con::Top ||
                        s->con == Con::Bang || s->con == Con::Dual;
    return atomic ? s->str() : "(" + s->str() + ")";
  };
  switch (con) {
    case Con::Base: return name;
    case Con::One: return "1";
    case Con::Top: return "T";
    case Con::Tensor: return par(l) + " (x) " + par(r);
    case Con::With: return par(l) + " & " + par(r);
    case Con::Plus: return par(l) + " (+) " + par(r);
    case Con::Limpl: return par(l) + " -o " + par(r);
    case Con::Dual: return "~" + par(l);
    case Con::S: return "S " + par(l);
    case Con::Bang: return "!" + par(l);
  }
  return "?";
}

namespace {

Space make(Kind k, SpaceNode::Con c, Space l = nullptr, Space r = nullptr) {
  if (l && l->kind != k) throw std::invalid_argument("mixing spaces of different kinds");
  if (r && r->kind != k) throw std::invalid_argument("mixing spaces of different kinds");
  auto n = std::make_shared<SpaceNode>();
  n->kind = k;
  n->con = c;
  n->l = std::move(l);
  n->r = std::move(r);
  return n;
}

Verdict swap(Verdict v) {
  if (v == Verdict::StrictCoh) return Verdict::StrictIncoh;
  if (v == Verdict::StrictIncoh) return Verdict::StrictCoh;
  return v;
}

bool is_coh(Verdict v) { return v != Verdict::StrictIncoh; }

Verdict from_flags(bool coh, bool neu) {
  if (neu) return Verdict::Neutral;
  return coh ? Verdict::StrictCoh : Verdict::StrictIncoh;
}

// Perfect matching between the elements of m and m' along neutral pairs.
bool neutral_matching(const Space& e, const std::vector<Atom>& xs, const std::vector<Atom>& ys) {
  if (xs.size() != ys.size()) return false;
  const std::size_t n = xs.size();
  std::vector<std::vector<int>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (verdict(e, xs[i], ys[j]) == Verdict::Neutral) adj[i].push_back(static_cast<int>(j));
  std::vector<int> match(n, -1);
  std::function<bool(int, std::vector<char>&)> aug = [&](int u, std::vector<char>& seen) {
    for (int v : adj[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      if (match[v] < 0 || aug(match[v], seen)) {
        match[v] = u;
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<char> seen(n, 0);
    if (!aug(static_cast<int>(i), seen)) return false;
  }
  return true;
}

}  // namespace

Space base_space(Kind k, std::string name, std::vector<Atom> atoms,
                 const std::vector<AtomPair>& scoh, const std::vector<AtomPair>& sincoh) {
  auto n = std::make_shared<SpaceNode>();
  n->kind = k;
  n->con = SpaceNode::Con::Base;
  n->name = std::move(name);
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  n->atoms = atoms;
  auto member = [&](const Atom& a) { return std::binary_search(atoms.begin(), atoms.end(), a); };
  auto put = [&](const AtomPair& p, Verdict v) {
    if (!member(p.first) || !member(p.second))
      throw MalformedAtom("coherence entry outside the web of " + n->name + ": (" +
                          p.first.str() + "," + p.second.str() + ")");
    for (const AtomPair& q : {p, AtomPair{p.second, p.first}}) {
      auto it = n->strict.find(q);
      if (it != n->strict.end() && it->second != v)
        throw std::invalid_argument("strict coherence and strict incoherence overlap on (" +
                                    q.first.str() + "," + q.second.str() + ") in " + n->name);
      n->strict[q] = v;
    }
  };
  if (k == Kind::Rel) return n;
  if (k == Kind::Coh) {
    // Off-diagonal pairs not listed as coherent are strictly incoherent.
    for (const auto& p : scoh)
      if (!(p.first == p.second)) put(p, Verdict::StrictCoh);
    for (const auto& a : atoms)
      for (const auto& b : atoms)
        if (!(a == b) && !n->strict.count({a, b})) n->strict[{a, b}] = Verdict::StrictIncoh;
    return n;
  }
  for (const auto& p : scoh) put(p, Verdict::StrictCoh);
  for (const auto& p : sincoh) put(p, Verdict::StrictIncoh);
  return n;
}

Space one(Kind k) { return make(k, SpaceNode::Con::One); }
Space top(Kind k) { return make(k, SpaceNode::Con::Top); }
Space tensor(const Space& e, const Space& f) { return make(e->kind, SpaceNode::Con::Tensor, e, f); }
Space with_(const Space& e, const Space& f) { return make(e->kind, SpaceNode::Con::With, e, f); }
Space plus(const Space& e, const Space& f) { return make(e->kind, SpaceNode::Con::Plus, e, f); }
Space limpl(const Space& e, const Space& f) { return make(e->kind, SpaceNode::Con::Limpl, e, f); }
Space dual(const Space& e) {
  if (e->con == SpaceNode::Con::Dual) return e->l;
  return make(e->kind, SpaceNode::Con::Dual, e);
}
Space sfun(const Space& e) { return make(e->kind, SpaceNode::Con::S, e); }
Space bang(const Space& e) { return make(e->kind, SpaceNode::Con::Bang, e); }
Space into(Kind k) { return with_(one(k), one(k)); }
Space boolean(Kind k) { return plus(one(k), one(k)); }

Verdict verdict(const Space& e, const Atom& a, const Atom& b) {
  using Con = SpaceNode::Con;
  if (e->kind == Kind::Rel) {
    if (!in_web(e, a) || !in_web(e, b)) throw MalformedAtom("atom outside the web of " + e->str());
    return Verdict::Neutral;
  }
  switch (e->con) {
    case Con::Base: {
      if (!std::binary_search(e->atoms.begin(), e->atoms.end(), a) ||
          !std::binary_search(e->atoms.begin(), e->atoms.end(), b))
        throw MalformedAtom("atom outside the web of " + e->name);
      auto it = e->strict.find({a, b});
      return it == e->strict.end() ? Verdict::Neutral : it->second;
    }
    case Con::One:
      if (!(a == Atom::star()) || !(b == Atom::star())) throw MalformedAtom("1 has only *");
      return Verdict::Neutral;
    case Con::Top:
      throw MalformedAtom("T has an empty web");
    case Con::Tensor: {
      if (!a.is_pair() || !b.is_pair()) throw MalformedAtom("expected a pair in " + e->str());
      const Verdict v0 = verdict(e->l, a.left(), b.left());
      const Verdict v1 = verdict(e->r, a.right(), b.right());
      return from_flags(is_coh(v0) && is_coh(v1),
                        v0 == Verdict::Neutral && v1 == Verdict::Neutral);
    }
    case Con::Limpl: {
      if (!a.is_pair() || !b.is_pair()) throw MalformedAtom("expected a pair in " + e->str());
      const Verdict ve = verdict(e->l, a.left(), b.left());
      const Verdict vf = verdict(e->r, a.right(), b.right());
      const bool neu = ve == Verdict::Neutral && vf == Verdict::Neutral;
      const bool coh =
          !is_coh(ve) || (is_coh(vf) && (vf != Verdict::Neutral || ve == Verdict::Neutral));
      return from_flags(coh, neu);
    }
    case Con::With:
    case Con::Plus: {
      if (!a.is_tag() || !b.is_tag()) throw MalformedAtom("expected a tagged atom in " + e->str());
      const Space& ca = a.index() == 0 ? e->l : e->r;
      const Space& cb = b.index() == 0 ? e->l : e->r;
      if (a.index() != b.index()) {
        if (!in_web(ca, a.inner()) || !in_web(cb, b.inner()))
          throw MalformedAtom("atom outside the web of " + e->str());
        return e->con == Con::With ? Verdict::StrictCoh : Verdict::StrictIncoh;
      }
      return verdict(ca, a.inner(), b.inner());
    }
    case Con::Dual:
      return swap(verdict(e->l, a, b));
    case Con::S: {
      if (!a.is_tag() || !b.is_tag()) throw MalformedAtom("expected a tagged atom in " + e->str());
      const Verdict v = verdict(e->l, a.inner(), b.inner());
      const bool same = a.index() == b.index();
      const bool neu = same && v == Verdict::Neutral;
      const bool coh = is_coh(v) && (v != Verdict::Neutral || same);
      return from_flags(coh, neu);
    }
    case Con::Bang: {
      if (!a.is_mset() || !b.is_mset()) throw MalformedAtom("expected a multiset in " + e->str());
      if (e->kind == Kind::Coh && (!in_web(e, a) || !in_web(e, b)))
        throw MalformedAtom("not a multiclique of " + e->l->str());
      const auto xs = a.ms().support();
      const auto ys = b.ms().support();
      bool coh = true;
      for (const auto& x : xs)
        for (const auto& y : ys)
          if (!is_coh(verdict(e->l, x, y))) coh = false;
      if (!coh) return Verdict::StrictIncoh;
      const bool neu = neutral_matching(e->l, a.ms().elements(), b.ms().elements());
      return from_flags(true, neu);
    }
  }
  return Verdict::Neutral;
}

bool coherent(const Space& e, const Atom& a, const Atom& b) {
  return verdict(e, a, b) != Verdict::StrictIncoh;
}

bool strictly_coherent(const Space& e, const Atom& a, const Atom& b) {
  return verdict(e, a, b) == Verdict::StrictCoh;
}

bool in_web(const Space& e, const Atom& a) {
  using Con = SpaceNode::Con;
  switch (e->con) {
    case Con::Base:
      return std::binary_search(e->atoms.begin(), e->atoms.end(), a);
    case Con::One:
      return a == Atom::star();
    case Con::Top:
      return false;
    case Con::Tensor:
    case Con::Limpl:
      return a.is_pair() && in_web(e->l, a.left()) && in_web(e->r, a.right());
    case Con::With:
    case Con::Plus:
      return a.is_tag() && in_web(a.index() == 0 ? e->l : e->r, a.inner());
    case Con::S:
      return a.is_tag() && in_web(e->l, a.inner());
    case Con::Dual:
      return in_web(e->l, a);
    case Con::Bang: {
      if (!a.is_mset()) return false;
      const auto sup = a.ms().support();
      for (const auto& x : sup)
        if (!in_web(e->l, x)) return false;
      if (e->kind != Kind::Coh) return true;
      for (std::size_t i = 0; i < sup.size(); ++i)
        for (std::size_t j = i + 1; j < sup.size(); ++j)
          if (!coherent(e->l, sup[i], sup[j])) return false;
      return true;
    }
  }
  return false;
}

WebShapePtr web_shape(const Space& e) {
  using Con = SpaceNode::Con;
  switch (e->con) {
    case Con::Base: return WebShape::finite(e->atoms);
    case Con::One: return WebShape::finite({Atom::star()});
    case Con::Top: return WebShape::finite({});
    case Con::Tensor:
    case Con::Limpl: return WebShape::pair(web_shape(e->l), web_shape(e->r));
    case Con::With:
    case Con::Plus: return WebShape::tagged(web_shape(e->l), web_shape(e->r));
    case Con::S: {
      auto w = web_shape(e->l);
      return WebShape::tagged(w, w);
    }
    case Con::Dual: return web_shape(e->l);
    case Con::Bang: {
      if (e->kind != Kind::Coh) return WebShape::multisets(web_shape(e->l));
      Space inner = e->l;
      return WebShape::multisets(web_shape(inner), [inner](const std::vector<Atom>& elems) {
        // elems is sorted with repetition; check the support pairwise (new element last)
        if (elems.size() < 2) return true;
        const Atom& last = elems.back();
        for (std::size_t i = 0; i + 1 < elems.size(); ++i)
          if (!coherent(inner, elems[i], last)) return false;
        return true;
      });
    }
  }
  return WebShape::finite({});
}

std::vector<Atom> enumerate(const Space& e, const Budget& b) {
  return enumerate_web(*web_shape(e), b);
}

bool is_clique(const Space& e, const std::vector<Atom>& x) {
  if (e->kind == Kind::Rel) return true;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i; j < x.size(); ++j)
      if (!coherent(e, x[i], x[j])) return false;
  return true;
}

bool is_clique(const Space& e, const AtomSet& x) {
  return is_clique(e, std::vector<Atom>(x.begin(), x.end()));
}

MorphismCheck is_morphism(const Space& e, const Space& f, const Rel& s) {
  MorphismCheck res;
  if (e->kind == Kind::Rel) return res;
  for (const auto& [a, b] : s.pairs()) {
    if (!in_web(e, a) || !in_web(f, b)) {
      res.ok = false;
      res.reason = "pair (" + a.str() + "," + b.str() + ") outside the webs";
      return res;
    }
  }
  const Space ef = limpl(e, f);
  std::vector<Atom> atoms;
  for (const auto& [a, b] : s.pairs()) atoms.push_back(Atom::pair(a, b));
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i; j < atoms.size(); ++j)
      if (!coherent(ef, atoms[i], atoms[j])) {
        res.ok = false;
        res.reason = "incoherent pairs " + atoms[i].str() + " and " + atoms[j].str();
        res.clash = std::make_pair(AtomPair{atoms[i].left(), atoms[i].right()},
                                   AtomPair{atoms[j].left(), atoms[j].right()});
        return res;
      }
  return res;
}

AtomSet matapp(const Rel& s, const AtomSet& x) {
  AtomSet out;
  for (const auto& [a, b] : s.pairs())
    if (x.count(a)) out.insert(b);
  return out;
}

// ---- text formats ----

namespace {

std::vector<Atom> read_atom_list(AtomReader& rd) {
  std::vector<Atom> out;
  if (!rd.eat("{")) throw ParseError("expected '{'", rd.pos());
  if (rd.eat("}")) return out;
  for (;;) {
    out.push_back(rd.read());
    if (rd.eat("}")) break;
    if (!rd.eat(",")) throw ParseError("expected ',' or '}'", rd.pos());
  }
  return out;
}

std::vector<AtomPair> to_pairs(const std::vector<Atom>& xs, std::size_t pos) {
  std::vector<AtomPair> out;
  for (const auto& x : xs) {
    if (!x.is_pair()) throw ParseError("coherence entries must be pairs (a,b)", pos);
    out.emplace_back(x.left(), x.right());
  }
  return out;
}

std::string read_word(AtomReader& rd, std::string_view s) {
  rd.skip_ws();
  std::size_t p = rd.pos();
  std::size_t q = p;
  while (q < s.size() && (std::isalnum(static_cast<unsigned char>(s[q])) || s[q] == '_')) ++q;
  std::string w(s.substr(p, q - p));
  rd = AtomReader(s, q);
  return w;
}

}  // namespace

std::map<std::string, Space> parse_space_file(const std::string& text) {
  std::map<std::string, Space> out;
  std::string cleaned;
  {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
      auto h = line.find('#');
      if (h != std::string::npos) line.erase(h);
      cleaned += line + "\n";
    }
  }
  std::string_view s(cleaned);
  AtomReader rd(s);
  while (!rd.at_end()) {
    if (read_word(rd, s) != "space") throw ParseError("expected 'space'", rd.pos());
    std::string name = read_word(rd, s);
    if (name.empty()) throw ParseError("expected space name", rd.pos());
    if (read_word(rd, s) != "kind" || !rd.eat("=")) throw ParseError("expected kind=", rd.pos());
    std::string kind = read_word(rd, s);
    Kind k;
    try {
      k = parse_kind(kind);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), rd.pos());
    }
    std::vector<Atom> atoms;
    std::vector<AtomPair> scoh, sincoh;
    bool have_atoms = false;
    for (;;) {
      AtomReader save = rd;
      std::string field = read_word(rd, s);
      if (field == "atoms") {
        atoms = read_atom_list(rd);
        have_atoms = true;
      } else if (field == "scoh") {
        scoh = to_pairs(read_atom_list(rd), rd.pos());
      } else if (field == "sincoh") {
        sincoh = to_pairs(read_atom_list(rd), rd.pos());
      } else {
        rd = save;
        break;
      }
    }
    if (!have_atoms) throw ParseError("space " + name + " lacks atoms{...}", rd.pos());
    if (k == Kind::Coh && !sincoh.empty())
      throw ParseError("sincoh{...} is only meaningful for nucs spaces", rd.pos());
    out[name] = base_space(k, name, atoms, scoh, sincoh);
  }
  return out;
}

namespace {

struct ExprParser {
  std::string_view s;
  std::size_t pos = 0;
  const std::map<std::string, Space>& env;
  Kind kind;

  void ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(std::string_view t) {
    ws();
    if (s.substr(pos, t.size()) == t) {
      pos += t.size();
      return true;
    }
    return false;
  }

  Space parse_limpl() {
    Space a = parse_additive();
    if (eat("-o")) return limpl(a, parse_limpl());
    return a;
  }
  Space parse_additive() {
    Space a = parse_tensor();
    for (;;) {
      if (eat("(+)")) a = plus(a, parse_tensor());
      else if (eat("&")) a = with_(a, parse_tensor());
      else return a;
    }
  }
  Space parse_tensor() {
    Space a = parse_prefix();
    while (eat("(x)")) a = tensor(a, parse_prefix());
    return a;
  }
  Space parse_prefix() {
    ws();
    if (eat("!")) return bang(parse_prefix());
    if (eat("~")) return dual(parse_prefix());
    if (pos + 1 < s.size() && s[pos] == 'S' &&
        (std::isspace(static_cast<unsigned char>(s[pos + 1])) || s[pos + 1] == '(' ||
         s[pos + 1] == '!' || s[pos + 1] == '~')) {
      ++pos;
      return sfun(parse_prefix());
    }
    return parse_atom_space();
  }
  Space parse_atom_space() {
    ws();
    if (pos < s.size() && s[pos] == '(' && s.substr(pos, 3) != "(x)" && s.substr(pos, 3) != "(+)") {
      ++pos;
      Space a = parse_limpl();
      if (!eat(")")) throw ParseError("expected ')'", pos);
      return a;
    }
    std::size_t q = pos;
    while (q < s.size() && (std::isalnum(static_cast<unsigned char>(s[q])) || s[q] == '_')) ++q;
    if (q == pos) throw ParseError("expected a space", pos);
    std::string w(s.substr(pos, q - pos));
    pos = q;
    if (w == "1") return one(kind);
    if (w == "T") return top(kind);
    if (w == "I") return into(kind);
    if (w == "Bool") return boolean(kind);
    auto it = env.find(w);
    if (it == env.end()) throw ParseError("unknown space '" + w + "'", pos);
    if (it->second->kind != kind)
      throw ParseError("space '" + w + "' is declared with kind=" + kind_name(it->second->kind),
                       pos);
    return it->second;
  }
};

}  // namespace

Space parse_space_expr(const std::string& text, const std::map<std::string, Space>& env, Kind k) {
  ExprParser p{text, 0, env, k};
  Space e = p.parse_limpl();
  p.ws();
  if (p.pos != text.size()) throw ParseError("trailing input in space expression", p.pos);
  return e;
}

}  // namespace cohdiff
