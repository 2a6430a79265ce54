#include <random>

#include "cohdiff/denot.hpp"
#include "doctest.h"

using namespace cohdiff;
using namespace cohdiff::calc;
using namespace cohdiff::denot;

namespace {
Term P(const char* s) { return parse_term(s); }
Atom A(const char* s) { return parse_atom(s); }

Rel rel_of(std::initializer_list<std::pair<const char*, const char*>> ps) {
  Rel r;
  for (const auto& [a, b] : ps) r.insert(A(a), A(b));
  return r;
}

Ty gen_type(std::mt19937_64& rng) {
  switch (rng() % 4) {
    case 0: return Ty::nat(0);
    case 1: return Ty::nat(1);
    case 2: return Ty::arrow(Ty::nat(0), Ty::nat(1));
    default: return Ty::arrow(Ty::nat(1), Ty::nat(0));
  }
}
}  // namespace

TEST_CASE("type interpretation") {
  const SemEnv env;
  const Budget b{3, 100000};
  CHECK(enumerate(interp_type(Ty::nat(0), env), b) == std::vector<Atom>{A("0"), A("1"), A("2"), A("3")});
  const auto n1 = enumerate(interp_type(Ty::nat(1), env), b);
  CHECK(n1.size() == 8);
  for (int i = 0; i < 2; ++i)
    for (int n = 0; n <= 3; ++n)
      CHECK(std::count(n1.begin(), n1.end(), Atom::tag(i, nat_atom(n))) == 1);

  const auto arrow = enumerate(interp_type(parse_type("i -> i"), env), Budget{1, 1000});
  CHECK(arrow.size() == 4 + 16);
  for (const auto& a : arrow) {
    REQUIRE(a.is_pair());
    CHECK(a.left().is_mset());
  }
  CHECK(enumerate(interp_type(diff(parse_type("i -> i")), env), b) ==
        enumerate(interp_type(parse_type("i -> i1"), env), b));

  // NUCS: distinct naturals are strictly incoherent
  const Space n = interp_type(Ty::nat(0), env);
  CHECK(verdict(n, A("0"), A("1")) == Verdict::StrictIncoh);
  CHECK(interp_type(Ty::nat(0), SemEnv{Kind::Rel, 3, 3})->kind == Kind::Rel);
  CHECK(ctx_atom(2, A("a")) == A("1·1·0·a"));
}

TEST_CASE("term interpretation examples") {
  const SemEnv env;
  CHECK(interp_term({}, P("\\x:i. x"), env).rel ==
        rel_of({{"[]", "([0],0)"}, {"[]", "([1],1)"}, {"[]", "([2],2)"}, {"[]", "([3],3)"}}));

  Rel id1;
  for (int i = 0; i < 2; ++i)
    for (int n = 0; n <= 3; ++n) {
      const Atom a = Atom::tag(i, nat_atom(n));
      id1.insert(Atom::mset(Multiset{}), Atom::pair(Atom::mset({a}), a));
    }
  CHECK(interp_term({}, P("D (\\x:i. x)"), env).rel == id1);

  CHECK(interp_term({}, P("#2"), env).rel == rel_of({{"[]", "2"}}));
  CHECK(interp_term({}, P("succ #2"), env).rel == rel_of({{"[]", "3"}}));
  CHECK(interp_term({}, P("succ #3"), env).rel.empty());
  CHECK(interp_term({}, P("if0 #0 #1 #2"), env).rel == rel_of({{"[]", "1"}}));
  CHECK(interp_term({}, P("if0 #3 #1 #2"), env).rel == rel_of({{"[]", "2"}}));
  CHECK(interp_term({}, P("0"), env).rel.empty());
  CHECK(interp_term({}, P("fix (\\x:i. x)"), env).rel.empty());
  CHECK(interp_term({}, P("fix (\\x:i. #1)"), env).rel == rel_of({{"[]", "1"}}));
  CHECK(interp_term({{"x", Ty::nat(0)}}, P("x"), env).rel ==
        rel_of({{"[0·0]", "0"}, {"[0·1]", "1"}, {"[0·2]", "2"}, {"[0·3]", "3"}}));
  CHECK(interp_term({}, P("pi1^0 (iota1^0 #2)"), env).rel == rel_of({{"[]", "2"}}));
  CHECK(interp_term({}, P("sigma^0 (iota1^0 (iota1^0 #2))"), env).rel.empty());
  CHECK(interp_term({}, P("sigma^0 (iota1^0 (iota0^0 #2))"), env).rel == rel_of({{"[]", "1·2"}}));
  CHECK(interp_term({}, P("c^0 (iota1^0 (iota0^0 #2))"), env).rel == rel_of({{"[]", "0·1·2"}}));
  // derivative of a function using its argument twice
  SemEnv env4;
  env4.degree = 4;
  const Rel d2 = interp_term({}, P("D (\\f:i -> i. f (f #0))"), env4).rel;
  CHECK(d2.contains(A("[]"), A("([([0],0·1),([1],1·2)],1·2)")));
  CHECK(d2.contains(A("[]"), A("([([0],1·1),([1],0·2)],1·2)")));
  CHECK(d2.contains(A("[]"), A("([([0],0·1),([1],0·2)],0·2)")));
  CHECK_FALSE(d2.contains(A("[]"), A("([([0],1·1),([1],1·2)],1·2)")));
  CHECK_THROWS_AS(interp_term({}, P("x + y"), env), Untypable);
}

TEST_CASE("the pi1 sigma decomposition holds semantically") {
  const SemEnv env;
  std::mt19937_64 rng(8);
  int nonempty = 0;
  for (int k = 0; k < 40; ++k) {
    const Term m = random_term(rng, {}, Ty::nat(2), 6);
    const Term l = proj(1, 0, sigma(0, m));
    const Term a = proj(1, 0, proj(0, 0, m)), b = proj(0, 0, proj(1, 0, m));
    CAPTURE(show(m));
    CHECK(sem_equal({}, l, plus(a, b, l), env).equal);
    if (!interp_term({}, l, env).rel.empty()) {
      ++nonempty;
      // dropping either summand is visible
      CHECK_FALSE((sem_equal({}, l, a, env).equal && sem_equal({}, l, b, env).equal));
    }
  }
  CHECK(nonempty > 5);
}

TEST_CASE("ground terms denote at most one natural and are NUCS morphisms") {
  const SemEnv env;
  std::mt19937_64 rng(31);
  int defined = 0;
  for (int k = 0; k < 150; ++k) {
    const Term m = random_term(rng, {}, Ty::nat(0), 9);
    const Rel r = interp_term({}, m, env).rel;
    CAPTURE(show(m));
    CHECK(r.size() <= 1);
    defined += r.size() == 1;
  }
  CHECK(defined > 20);

  for (int k = 0; k < 60; ++k) {
    const Ty t = gen_type(rng);
    const Ctx ctx{{"x", Ty::nat(0)}};
    const Term m = random_term(rng, ctx, t, 7);
    const Rel r = interp_term(ctx, m, env).rel;
    CAPTURE(show(m));
    CHECK(is_morphism(bang(interp_context(ctx, env)), interp_type(t, env), r));
  }
}

TEST_CASE("semantics at degree d is the restriction of degree d+1") {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 40; ++k) {
    const Ty t = gen_type(rng);
    const Term m = random_term(rng, {}, t, 7);
    CAPTURE(show(m));
    for (int d = 1; d <= 2; ++d) {
      SemEnv lo, hi;
      lo.degree = d;
      hi.degree = d + 1;
      const Rel a = interp_term({}, m, lo).rel;
      const Rel b = restrict_degree(interp_term({}, m, hi).rel, d);
      // truncation can only lose pairs; pairs present at d survive at d+1
      for (const auto& [g, x] : a.pairs()) CHECK(b.contains(g, x));
    }
  }
}

TEST_CASE("reduction is sound on a generated corpus") {
  const SemEnv env;
  std::mt19937_64 rng(1);
  std::map<std::string, int> rules;
  int steps = 0, skipped = 0;
  for (int k = 0; k < 60; ++k) {
    const Term m = random_term(rng, {}, gen_type(rng), 8);
    const SoundnessReport rep = soundness_check(m, env, 40);
    CAPTURE(show(m));
    for (const auto& v : rep.violations) {
      CAPTURE(v.rule);
      CAPTURE(show(v.before));
      CAPTURE(show(v.after));
      FAIL_CHECK("soundness violation");
    }
    for (const auto& [r, c] : rep.rule_counts) rules[r] += c;
    steps += rep.steps;
    skipped += rep.out_of_range;
  }
  CHECK(steps > 300);
  CHECK(skipped * 10 < steps);
  for (const char* r : {"beta", "D-lambda", "pi-iota", "lin-plus", "pi-app"}) CHECK(rules[r] > 0);
}

TEST_CASE("a wrong rule is caught") {
  const SemEnv env;
  const Term l = P("pi0^0 (iota0^0 #1)");
  CHECK(sem_equal({}, l, P("#1"), env).equal);
  const SemCompare c = sem_equal({}, l, P("#2"), env);
  CHECK_FALSE(c.equal);
  REQUIRE(c.witness);
  CHECK(c.witness->second == nat_atom(1));
  CHECK(c.witness_in_left);
  Violation v;
  v.rule = "bogus";
  v.before = l;
  v.after = P("#2");
  v.pair = *c.witness;
  CHECK(std::string(SoundnessViolation(v).what()).find("bogus") != std::string::npos);
}
