#include <random>

#include "cohdiff/differential.hpp"
#include "cohdiff/exponential.hpp"
#include "cohdiff/lawcheck.hpp"
#include "cohdiff/summability.hpp"
#include "doctest.h"

using namespace cohdiff;

namespace {
Atom A(const char* s) { return parse_atom(s); }
const Budget B{3, 20000};

Rel rel_of(std::initializer_list<std::pair<const char*, const char*>> ps) {
  Rel r;
  for (const auto& [a, b] : ps) r.insert(A(a), A(b));
  return r;
}

// Sources of a relation on !S E rewritten as pairs (m0,m1).
Rel pair_form(const Rel& r) {
  const Arrow s2 = seely2_inv();
  Rel out;
  for (const auto& [m, t] : r.pairs())
    for (const auto& p : s2.image(m, 100)) out.insert(p, t);
  return out;
}

Space single(Kind k, const char* name, const char* atom) {
  return base_space(k, name, {A(atom)}, {});
}

// Cliques of S E as sets of tagged atoms, at most n atoms.
std::vector<AtomSet> small_cliques(const Space& e, std::size_t n) {
  const auto w = enumerate(e, B);
  std::vector<AtomSet> out;
  for (unsigned mask = 0; mask < (1u << w.size()); ++mask) {
    AtomSet x;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (mask >> i & 1u) x.insert(w[i]);
    if (x.size() <= n && is_clique(e, x)) out.push_back(x);
  }
  return out;
}
}  // namespace

TEST_CASE("dbar is the displayed relation") {
  const Rel expected = rel_of({{"0·*", "[]"},
                               {"0·*", "[0·*]"},
                               {"0·*", "[0·*,0·*]"},
                               {"0·*", "[0·*,0·*,0·*]"},
                               {"1·*", "[1·*]"},
                               {"1·*", "[0·*,1·*]"},
                               {"1·*", "[0·*,0·*,1·*]"}});
  CHECK(dbar_rel(B) == expected);
  CHECK(dbar_rel(B).contains(A("1·*"), A("[1·*]")));
  CHECK_FALSE(dbar_rel(Budget{4, 20000}).contains(A("1·*"), A("[1·*,1·*]")));
  for (Kind k : {Kind::Coh, Kind::Nucs, Kind::Rel}) CHECK(is_morphism(into(k), bang(into(k)), dbar_rel(B)));
}

TEST_CASE("dpartial on a one-atom web") {
  const Budget b2{2, 20000};
  const Space e = single(Kind::Coh, "E", "a");
  const Rel expected = rel_of({{"([],[])", "0·[]"},
                               {"([a],[])", "0·[a]"},
                               {"([a,a],[])", "0·[a,a]"},
                               {"([],[a])", "1·[a]"}});
  CHECK(pair_form(dpartial(e, b2)) == expected);
  CHECK_FALSE(pair_form(dpartial(e, B)).contains(A("([a],[a])"), A("1·[a,a]")));

  const Space n = single(Kind::Nucs, "E", "a");
  CHECK(pair_form(dpartial(n, B)).contains(A("([a],[a])"), A("1·[a,a]")));
  CHECK(pair_form(dpartial(base_space(Kind::Rel, "E", {A("a")}, {}), B))
            .contains(A("([a],[a])"), A("1·[a,a]")));
}

TEST_CASE("dpartial: first clause and morphism property") {
  std::mt19937_64 rng(7);
  for (Kind k : {Kind::Coh, Kind::Nucs, Kind::Rel})
    for (int t = 0; t < 10; ++t) {
      GenParams p;
      p.kind = k;
      p.web_size = 1 + t % 3;
      const Space e = gen_space(rng(), p);
      const Rel d = dpartial(e, B);
      for (const auto& m0 : enumerate(bang(e), B)) {
        Multiset tagged;
        for (const auto& a : m0.ms().elements()) tagged = tagged.plus(Atom::tag(0, a));
        CHECK(d.image(Atom::mset(tagged)) == AtomSet{Atom::tag(0, m0)});
      }
      CHECK(is_morphism(bang(sfun(e)), sfun(bang(e)), d));
      CHECK(arrows_equal_on(dpartial_arrow(k == Kind::Coh ? e : nullptr), dpartial_derived(),
                            enumerate(bang(sfun(e)), B), B.max_degree)
                .equal);
    }
}

TEST_CASE("Taylor contrast between COH and NUCS") {
  for (Kind k : {Kind::Coh, Kind::Nucs}) {
    CAPTURE(std::string(kind_name(k)));
    const Space e = single(k, "E", "a");
    const Rel s = rel_of({{"[a]", "b"}});
    const Rel s2 = rel_of({{"[a,a]", "b"}});
    CHECK(pair_form(dhat(s, e, B)) == rel_of({{"([a],[])", "0·b"}, {"([],[a])", "1·b"}}));
    if (k == Kind::Coh)
      CHECK(pair_form(dhat(s2, e, B)) == rel_of({{"([a,a],[])", "0·b"}}));
    else
      CHECK(pair_form(dhat(s2, e, B)) == rel_of({{"([a,a],[])", "0·b"}, {"([a],[a])", "1·b"}}));
    CHECK(fun_apply(s, {A("a")}) == fun_apply(s2, {A("a")}));
  }
}

TEST_CASE("Fun of the derivative is the pair (Fun s(x), local derivative applied to u)") {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int t = 0; t < 30; ++t) {
    GenParams p;
    p.kind = Kind::Coh;
    p.web_size = 1 + static_cast<int>(rng() % 3);
    const Space e = gen_space(rng(), p);
    p.web_size = 1 + static_cast<int>(rng() % 3);
    const Space f = gen_space(rng(), p);
    const Rel s = gen_morphism(rng, bang(e), f, B, 0.4);
    REQUIRE(is_morphism(bang(e), f, s));
    const Rel ds = dhat(s, e, B);
    for (const auto& xu : small_cliques(sfun(e), 3)) {
      AtomSet x, u;
      for (const auto& t2 : xu) (t2.index() == 0 ? x : u).insert(t2.inner());
      AtomSet expected;
      for (const auto& b : fun_apply(s, x)) expected.insert(Atom::tag(0, b));
      for (const auto& b : matapp(local_derivative(s, e, x), u)) expected.insert(Atom::tag(1, b));
      CAPTURE(write_rel(s));
      CHECK(fun_apply(ds, xu) == expected);
      ++checked;
    }
  }
  CHECK(checked > 30);
}

TEST_CASE("local derivative") {
  const Space e = single(Kind::Coh, "E", "a");
  CHECK(local_derivative(rel_of({{"[a]", "b"}}), e, {}) == rel_of({{"a", "b"}}));
  // a lies in x, so it is not in the web of the local space at x.
  CHECK(local_derivative(rel_of({{"[a,a]", "b"}}), e, {A("a")}).pairs().empty());
  CHECK(local_derivative(rel_of({{"[a,a]", "b"}}), e, {}).pairs().empty());

  const Space e2 = base_space(Kind::Coh, "E", {A("a"), A("c")}, {{A("a"), A("c")}});
  CHECK(local_derivative(rel_of({{"[a,c]", "b"}}), e2, {A("a")}) == rel_of({{"c", "b"}}));
  CHECK(local_web(e2, {A("a")}) == std::vector<Atom>{A("c")});
}

TEST_CASE("partial derivatives") {
  const Space x0 = single(Kind::Rel, "X", "a"), x1 = single(Kind::Rel, "Y", "c");
  // f = der ∘ !π0 : !(X&Y) -> X
  const Rel f = rel_of({{"[0·a]", "a"}});
  const Rel d0 = partial_derivative(f, 0, x0, x1, B);
  CHECK(d0.contains(A("[0·1·a]"), A("1·a")));
  CHECK(d0.contains(A("[0·0·a]"), A("0·a")));
  for (const auto& [m, t] : d0.pairs()) CHECK(m.degree() <= 3);
  const Rel d1 = partial_derivative(f, 1, x0, x1, B);
  for (const auto& [m, t] : d1.pairs()) CHECK(t.index() == 0);
  CHECK(d1.contains(A("[0·a]"), A("0·a")));
}

TEST_CASE("dhat equals S f after the closed-form dpartial") {
  const Space e = single(Kind::Nucs, "E", "a");
  const Rel s = rel_of({{"[a,a]", "b"}, {"[]", "c"}});
  const Rel ds = dhat(s, e, B);
  CHECK(ds == rel_compose(dpartial(e, B), sfun_morphism(s)));
}

TEST_CASE("Lafont uniqueness at degree 2") {
  const auto sols = lafont_solutions(2);
  REQUIRE(sols.size() == 1);
  CHECK(sols.front() == dbar_rel(Budget{2, 20000}));
  CHECK(sols.front() == rel_of({{"0·*", "[]"},
                                {"0·*", "[0·*]"},
                                {"0·*", "[0·*,0·*]"},
                                {"1·*", "[1·*]"},
                                {"1·*", "[0·*,1·*]"}}));
}

TEST_CASE("lawcheck mutation of dpartial is detected") {
  RunOptions o;
  o.trials = 20;
  o.mutation.drop_dpartial_pair = true;
  const auto r = run_diagram(*find_diagram("d-chain-der"), Kind::Coh, o);
  CHECK_FALSE(r.passed);
  REQUIRE(r.counterexample);
  CHECK(r.counterexample->input.find("1·") != std::string::npos);
}
