#include <random>

#include "cohdiff/rel.hpp"
#include "cohdiff/space.hpp"
#include "doctest.h"

using namespace cohdiff;

namespace {
Atom A(const char* s) { return parse_atom(s); }
Multiset M(const char* s) { return parse_atom(s).ms(); }

Rel random_rel(std::mt19937& g, const std::vector<Atom>& w) {
  Rel r;
  std::bernoulli_distribution coin(0.3);
  for (const auto& a : w)
    for (const auto& b : w)
      if (coin(g)) r.insert(a, b);
  return r;
}
}  // namespace

TEST_CASE("mset_sum") {
  CHECK(mset_sum(M("[a]"), M("[a,b]")) == M("[a,a,b]"));
  CHECK(mset_sum(Multiset{}, M("[a,b]")) == M("[a,b]"));
  CHECK(mset_sum(M("[a]"), M("[b]")) == mset_sum(M("[b]"), M("[a]")));
  const Multiset x = M("[a,[b]]"), y = M("[c,c]"), z = M("[a]");
  CHECK(mset_sum(mset_sum(x, y), z) == mset_sum(x, mset_sum(y, z)));
  CHECK(mset_sum(x, y).size() == x.size() + y.size());
  CHECK(Atom::mset(mset_sum(x, y)).degree() == Atom::mset(x).degree() + Atom::mset(y).degree());
}

TEST_CASE("atom syntax round-trips") {
  for (const char* s : {"*", "a", "0·a", "1·(a,b)", "[]", "[a,a,b]", "([*],1·[x',0·*])"}) {
    const std::string str = s;
    CAPTURE(str);
    CHECK(A(s).str() == s);
    CHECK(parse_atom(A(s).str()) == A(s));
  }
  CHECK(A("0.a") == A("0·a"));
  CHECK(A("[b,a]") == A("[a,b]"));
  CHECK(A("[[*],*]").degree() == 3);
  CHECK_THROWS_AS(parse_atom("(a,"), ParseError);
  CHECK_THROWS_AS(parse_atom("2·a"), ParseError);
}

TEST_CASE("rel_compose") {
  CHECK(rel_compose(Rel{{A("a"), A("b")}}, Rel{{A("b"), A("c")}}) == Rel{{A("a"), A("c")}});
  CHECK(rel_compose(Rel{}, Rel{{A("b"), A("c")}}).empty());
  Rel s{{A("a"), A("b")}, {A("a"), A("b'")}};
  Rel t{{A("b"), A("c")}, {A("b'"), A("c")}};
  CHECK(rel_compose(s, t) == Rel{{A("a"), A("c")}});
}

TEST_CASE("rel_compose is associative with identities") {
  std::mt19937 g(7);
  const std::vector<Atom> w{A("a"), A("b"), A("c"), A("d"), A("e")};
  for (int trial = 0; trial < 50; ++trial) {
    Rel r = random_rel(g, w), s = random_rel(g, w), t = random_rel(g, w);
    CHECK(rel_compose(rel_compose(r, s), t) == rel_compose(r, rel_compose(s, t)));
    CHECK(rel_compose(identity_on(w), r) == r);
    CHECK(rel_compose(r, identity_on(w)) == r);
  }
}

TEST_CASE("enumerate_web") {
  const Budget d2{2, 1000};
  CHECK(enumerate(bang(one(Kind::Rel)), d2) == std::vector<Atom>{A("[]"), A("[*]"), A("[*,*]")});
  CHECK(enumerate(into(Kind::Coh), d2) == std::vector<Atom>{A("0·*"), A("1·*")});
  CHECK(enumerate(bang(into(Kind::Nucs)), Budget{1, 1000}) ==
        std::vector<Atom>{A("[]"), A("[0·*]"), A("[1·*]")});
  CHECK_THROWS_AS(enumerate(bang(bang(into(Kind::Rel))), Budget{6, 50}), BudgetExceeded);
}

TEST_CASE("enumerate_web is monotone in the degree") {
  const Space e = base_space(Kind::Nucs, "E", {A("a"), A("b")}, {{A("a"), A("b")}});
  for (const Space& w : {bang(e), bang(sfun(e)), tensor(bang(e), bang(e)), bang(bang(e))}) {
    for (int d = 0; d < 3; ++d) {
      auto small = enumerate(w, Budget{d, 20000});
      auto big = enumerate(w, Budget{d + 1, 20000});
      CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
      for (const auto& a : big)
        if (a.degree() <= d) CHECK(std::binary_search(small.begin(), small.end(), a));
    }
  }
}

TEST_CASE("rel_equal_on") {
  Rel f{{A("a"), A("b")}};
  CHECK(rel_equal_on(f, f, {A("a")}).equal);
  auto r = rel_equal_on(f, Rel{}, {A("a")});
  CHECK_FALSE(r.equal);
  CHECK(*r.witness == A("a"));
  CHECK(r.left_image == AtomSet{A("b")});
  CHECK(r.right_image.empty());
  CHECK(rel_equal_on(Rel{{A("c"), A("b")}}, Rel{}, {A("a")}).equal);
}

TEST_CASE("relation text format") {
  Rel r{{A("[a,a]"), A("b")}, {A("*"), A("0·(a,b)")}};
  CHECK(read_rel(write_rel(r)) == r);
  CHECK(read_rel("# comment\n[a] -> b\n\n") == Rel{{A("[a]"), A("b")}});
}
