#include <random>

#include "cohdiff/exponential.hpp"
#include "cohdiff/summability.hpp"
#include "doctest.h"

using namespace cohdiff;

namespace {
Atom A(const char* s) { return parse_atom(s); }
const Budget B{3, 20000};

std::vector<Atom> letters(int n) {
  std::vector<Atom> w;
  for (int i = 0; i < n; ++i) w.push_back(Atom::base(std::string(1, char('a' + i))));
  return w;
}

Space random_space(std::mt19937& g, Kind k, int n) {
  const auto w = letters(n);
  std::uniform_int_distribution<int> pick(0, 2);
  std::vector<AtomPair> scoh, sincoh;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const int v = pick(g);
      if (k == Kind::Coh && i == j) continue;
      if (v == 0) scoh.emplace_back(w[i], w[j]);
      if (v == 1 && k == Kind::Nucs) sincoh.emplace_back(w[i], w[j]);
    }
  return base_space(k, "E", w, scoh, sincoh);
}

std::vector<AtomSet> all_cliques(const Space& e) {
  const auto w = enumerate(e, B);
  std::vector<AtomSet> out;
  for (unsigned mask = 0; mask < (1u << w.size()); ++mask) {
    AtomSet x;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (mask >> i & 1u) x.insert(w[i]);
    if (is_clique(e, x)) out.push_back(x);
  }
  return out;
}

Rel point(const AtomSet& x) {
  Rel r;
  for (const auto& a : x) r.insert(Atom::star(), a);
  return r;
}

Rel random_morphism(std::mt19937& g, const Space& x, const Space& y) {
  std::vector<Atom> pairs;
  for (const auto& a : enumerate(x, B))
    for (const auto& b : enumerate(y, B)) pairs.push_back(Atom::pair(a, b));
  std::shuffle(pairs.begin(), pairs.end(), g);
  const Space xy = limpl(x, y);
  std::vector<Atom> chosen;
  for (const auto& p : pairs) {
    bool ok = coherent(xy, p, p);
    for (const auto& q : chosen) ok = ok && coherent(xy, p, q);
    if (ok && g() % 2) chosen.push_back(p);
  }
  Rel r;
  for (const auto& p : chosen) r.insert(p.left(), p.right());
  return r;
}
}  // namespace

TEST_CASE("sfun_morphism") {
  const auto w = letters(2);
  CHECK(sfun_morphism(identity_on(w)) == identity_on(enumerate(sfun(base_space(Kind::Rel, "E", w, {})), B)));
  CHECK(sfun_morphism(Rel{}).empty());
  CHECK(sfun_morphism(Rel{{A("a"), A("b")}}) == Rel{{A("0·a"), A("0·b")}, {A("1·a"), A("1·b")}});
}

TEST_CASE("sum_structural") {
  const Space one_c = one(Kind::Coh);
  CHECK(sum_structural(SumStructName::proj0, one_c, B) == Rel{{A("0·*"), A("*")}});
  CHECK(sum_structural(SumStructName::sigma, one_c, B) == Rel{{A("0·*"), A("*")}, {A("1·*"), A("*")}});
  const Rel c = sum_structural(SumStructName::flip, one_c, B);
  CHECK(c.size() == 4);
  CHECK(c.contains(A("0·1·*"), A("1·0·*")));
  CHECK(c.contains(A("1·1·*"), A("1·1·*")));
  for (Kind k : {Kind::Coh, Kind::Nucs}) {
    std::mt19937 g(1);
    const Space e = random_space(g, k, 3);
    for (int i = 0; i <= static_cast<int>(SumStructName::smont); ++i) {
      const auto n = static_cast<SumStructName>(i);
      auto [src, tgt] = sum_struct_type(n, e, e);
      CAPTURE(sum_struct_name(n));
      auto chk = is_morphism(src, tgt, sum_structural(n, e, B, e));
      CHECK_MESSAGE(chk.ok, chk.reason);
    }
  }
}

TEST_CASE("closed forms against their definitions") {
  std::mt19937 g(4);
  for (Kind k : {Kind::Coh, Kind::Nucs, Kind::Rel}) {
    const Space e = random_space(g, k, 3);
    const Space sse = sfun(sfun(e));
    const Rel p0 = sum_structural(SumStructName::proj0, sfun(e), B);
    const Rel p1 = sum_structural(SumStructName::proj1, sfun(e), B);
    const Rel q0 = sum_structural(SumStructName::proj0, e, B);
    const Rel q1 = sum_structural(SumStructName::proj1, e, B);
    // θ = ⟨⟨π0∘π0, π1∘π0 + π0∘π1⟩⟩
    const Rel second = sum(rel_compose(p0, q1), rel_compose(p1, q0), sse, e);
    auto w = witness(rel_compose(p0, q0), second, sse, e);
    REQUIRE(std::holds_alternative<SummabilityWitness>(w));
    CHECK(std::get<SummabilityWitness>(w).witness == sum_structural(SumStructName::theta, e, B));
    // c is characterized by π_i∘π_j∘c = π_j∘π_i
    const Rel c = sum_structural(SumStructName::flip, e, B);
    const Rel ps[2] = {p0, p1}, qs[2] = {q0, q1};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(rel_compose(rel_compose(c, ps[j]), qs[i]) == rel_compose(ps[i], qs[j]));
    // Smont = θ ∘ S(Sstr') ∘ Sstr
    const auto dom = enumerate(tensor(sfun(e), sfun(e)), B);
    CHECK(arrows_equal_on(smont(), compose({theta(), sfun_arrow(sstr_sym()), sstr()}), dom, 3).equal);
  }
}

TEST_CASE("witness and sum") {
  const Space one_c = one(Kind::Coh);
  const Rel f{{A("*"), A("*")}};
  CHECK(summable(f, Rel{}, one_c, one_c));
  CHECK(sum(f, Rel{}, one_c, one_c) == f);
  auto r = witness(f, f, one_c, one_c);
  REQUIRE(std::holds_alternative<NotSummable>(r));
  CHECK(std::get<NotSummable>(r).clash.has_value());
  CHECK_THROWS_AS(sum(f, f, one_c, one_c), NotSummableError);

  std::mt19937 g(9);
  for (Kind k : {Kind::Coh, Kind::Nucs, Kind::Rel}) {
    const Space e = random_space(g, k, 3);
    const Rel p0 = sum_structural(SumStructName::proj0, e, B);
    const Rel p1 = sum_structural(SumStructName::proj1, e, B);
    auto w = witness(p0, p1, sfun(e), e);
    REQUIRE(std::holds_alternative<SummabilityWitness>(w));
    CHECK(std::get<SummabilityWitness>(w).witness == identity_on(enumerate(sfun(e), B)));
  }
}

TEST_CASE("COH summability is disjointness plus a morphism union") {
  std::mt19937 g(12);
  for (int trial = 0; trial < 200; ++trial) {
    const Space x = random_space(g, Kind::Coh, 2), y = random_space(g, Kind::Coh, 3);
    const Rel f0 = random_morphism(g, x, y), f1 = random_morphism(g, x, y);
    const bool disjoint = f0.intersect(f1).empty();
    const bool oracle = disjoint && is_morphism(x, y, f0.unite(f1)).ok;
    CHECK(summable(f0, f1, x, y) == oracle);
    if (oracle) CHECK(sum(f0, f1, x, y) == f0.unite(f1));
  }
}

TEST_CASE("NUCS summability of cliques is pointwise strict coherence") {
  std::mt19937 g(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Space e = random_space(g, Kind::Nucs, 3);
    const Space one_n = one(Kind::Nucs);
    const auto cl = all_cliques(e);
    for (const auto& x0 : cl)
      for (const auto& x1 : cl) {
        bool oracle = true;
        for (const auto& a0 : x0)
          for (const auto& a1 : x1) oracle = oracle && strictly_coherent(e, a0, a1);
        CHECK(summable(point(x0), point(x1), one_n, e) == oracle);
      }
  }
  // a strictly coherent with itself: {a} + {a} is defined and equals {a}.
  const Space e = base_space(Kind::Nucs, "E", {A("a")}, {{A("a"), A("a")}});
  const Rel xa = point({A("a")});
  CHECK(summable(xa, xa, one(Kind::Nucs), e));
  CHECK(sum(xa, xa, one(Kind::Nucs), e) == xa);
}

TEST_CASE("sum is commutative and componentwise") {
  std::mt19937 g(21);
  for (Kind k : {Kind::Coh, Kind::Nucs, Kind::Rel}) {
    const Space e = random_space(g, k, 3);
    const Space se = sfun(e), one_k = one(k);
    const auto cl = all_cliques(se);
    int checked = 0;
    for (const auto& u : cl)
      for (const auto& v : cl) {
        const Rel f = point(u), h = point(v);
        if (!summable(f, h, one_k, se)) continue;
        CHECK(summable(h, f, one_k, se));
        CHECK(sum(f, h, one_k, se) == sum(h, f, one_k, se));
        // ⟨⟨f00,f01⟩⟩ + ⟨⟨f10,f11⟩⟩ = ⟨⟨f00+f10, f01+f11⟩⟩
        const Rel p0 = sum_structural(SumStructName::proj0, e, B);
        const Rel p1 = sum_structural(SumStructName::proj1, e, B);
        const Rel s = sum(f, h, one_k, se);
        CHECK(rel_compose(s, p0) == sum(rel_compose(f, p0), rel_compose(h, p0), one_k, e));
        CHECK(rel_compose(s, p1) == sum(rel_compose(f, p1), rel_compose(h, p1), one_k, e));
        ++checked;
      }
    CHECK(checked > 0);
  }
}

TEST_CASE("n-ary sums") {
  const Space one_c = one(Kind::Coh);
  CHECK(nary_sum({}, one_c, one_c).empty());
  const Rel f{{A("*"), A("*")}};
  CHECK(nary_sum({f}, one_c, one_c) == f);
  CHECK_FALSE(nary_summable({f, Rel{}, f}, one_c, one_c));
  try {
    nary_sum({f, Rel{}, f}, one_c, one_c);
  } catch (const NotSummableError& e) {
    CHECK(std::string(e.what()).find("length 3") != std::string::npos);
  }
  std::mt19937 g(31);
  for (Kind k : {Kind::Coh, Kind::Nucs}) {
    const Space e = random_space(g, k, 3);
    const auto cl = all_cliques(e);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Rel> fs;
      for (int i = 0; i < 3; ++i) fs.push_back(point(cl[g() % cl.size()]));
      auto chk = family_invariance(fs, one(k), e);
      CHECK_MESSAGE(chk.ok, chk.failure);
    }
  }
}

TEST_CASE("canonical presentation S E = I -o E") {
  std::mt19937 g(41);
  for (Kind k : {Kind::Coh, Kind::Nucs}) {
    const Space e = random_space(g, k, 3);
    auto [to, from] = canonical_iso(e, B);
    CHECK(rel_compose(to, from) == identity_on(enumerate(sfun(e), B)));
    CHECK(rel_compose(from, to) == identity_on(enumerate(limpl(into(k), e), B)));
    CHECK(is_morphism(sfun(e), limpl(into(k), e), to));
    CHECK(is_morphism(limpl(into(k), e), sfun(e), from));
    // π_i through the iso is evaluation at w_i.
    for (int i = 0; i < 2; ++i) {
      Rel ev_i;
      for (const auto& [a, b] : from.pairs())
        if (a.left().index() == i) ev_i.insert(a, a.right());
      CHECK(rel_compose(from, sum_structural(i == 0 ? SumStructName::proj0 : SumStructName::proj1, e, B)) ==
            ev_i);
    }
  }
  // w0, w1 are jointly epic: morphisms I -> F are determined by their composites with w0, w1.
  const Space i_c = into(Kind::Coh);
  const Space f = base_space(Kind::Coh, "F", letters(2), {{A("a"), A("b")}});
  std::vector<Rel> homs;
  const auto src = enumerate(i_c, B);
  const auto tgt = enumerate(f, B);
  for (unsigned mask = 0; mask < 16u; ++mask) {
    Rel r;
    for (unsigned k = 0; k < 4; ++k)
      if (mask >> k & 1u) r.insert(src[k / 2], tgt[k % 2]);
    if (is_morphism(i_c, f, r)) homs.push_back(r);
  }
  const Rel w0 = w_point(0).on({Atom::star()}, 0), w1 = w_point(1).on({Atom::star()}, 0);
  for (const auto& h : homs)
    for (const auto& h2 : homs)
      if (rel_compose(w0, h) == rel_compose(w0, h2) && rel_compose(w1, h) == rel_compose(w1, h2))
        CHECK(h == h2);
}
