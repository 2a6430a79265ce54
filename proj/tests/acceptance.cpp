// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "cohdiff/denot.hpp"
#include "cohdiff/differential.hpp"
#include "cohdiff/exponential.hpp"
#include "cohdiff/lawcheck.hpp"
#include "cohdiff/summability.hpp"

using namespace cohdiff;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " failed: " << what << ";";
    }
  }
};

Atom A(const char* s) { return parse_atom(s); }

Rel rel_of(std::initializer_list<std::pair<const char*, const char*>> ps) {
  Rel r;
  for (const auto& [a, b] : ps) r.insert(A(a), A(b));
  return r;
}

Rel pair_form(const Rel& r) {
  const Arrow s2 = seely2_inv();
  Rel out;
  for (const auto& [m, t] : r.pairs())
    for (const auto& p : s2.image(m, 100)) out.insert(p, t);
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void criterion1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  RunOptions opt;  // 100 trials, web <= 4, degree <= 3
  int diagrams = 0, failed = 0;
  for (Kind k : {Kind::Coh, Kind::Nucs, Kind::Rel})
    for (const auto& r : run_all(k, opt)) {
      ++diagrams;
      if (!r.passed) {
        ++failed;
        o.require(false, report_line(r));
      }
    }
  const double secs = seconds_since(t0);
  o.require(secs < 60.0, "runtime " + std::to_string(secs) + " s");
  o.detail << " " << diagrams << " diagram runs, " << failed << " failures, " << secs << " s;";

  RunOptions bad = opt;
  bad.mutation.drop_dpartial_pair = true;
  for (Kind k : {Kind::Coh, Kind::Nucs, Kind::Rel}) {
    const CheckReport r = run_diagram(*find_diagram("d-chain-der"), k, bad);
    o.require(!r.passed && r.counterexample.has_value(),
              std::string("mutated d not caught in ") + kind_name(k));
  }
  o.detail << " mutation of d caught in all models;";
}

void criterion2(Outcome& o) {
  const Space e = base_space(Kind::Coh, "E", {A("a")}, {});
  const Rel expected = rel_of({{"([],[])", "0·[]"},
                               {"([a],[])", "0·[a]"},
                               {"([a,a],[])", "0·[a,a]"},
                               {"([],[a])", "1·[a]"}});
  o.require(pair_form(dpartial(e, Budget{2, 20000})) == expected, "dpartial on E={a}");
  const Rel dbar3 = rel_of({{"0·*", "[]"},
                            {"0·*", "[0·*]"},
                            {"0·*", "[0·*,0·*]"},
                            {"0·*", "[0·*,0·*,0·*]"},
                            {"1·*", "[1·*]"},
                            {"1·*", "[0·*,1·*]"},
                            {"1·*", "[0·*,0·*,1·*]"}});
  o.require(dbar_rel(Budget{3, 20000}) == dbar3, "dbar at degree 3");
}

void criterion3(Outcome& o) {
  const Budget b{3, 20000};
  const Rel s = rel_of({{"[a]", "b"}}), s2 = rel_of({{"[a,a]", "b"}});
  const Rel ds = rel_of({{"([a],[])", "0·b"}, {"([],[a])", "1·b"}});
  const Space coh = base_space(Kind::Coh, "E", {A("a")}, {});
  const Space nucs = base_space(Kind::Nucs, "E", {A("a")}, {});
  o.require(pair_form(dhat(s, coh, b)) == ds, "COH Ds");
  o.require(pair_form(dhat(s2, coh, b)) == rel_of({{"([a,a],[])", "0·b"}}), "COH Ds'");
  o.require(pair_form(dhat(s, nucs, b)) == ds, "NUCS Ds");
  o.require(pair_form(dhat(s2, nucs, b)) == rel_of({{"([a,a],[])", "0·b"}, {"([a],[a])", "1·b"}}), "NUCS Ds'");
}

std::vector<AtomSet> cliques_upto(const Space& e, std::size_t n, const Budget& b) {
  const auto w = enumerate(e, b);
  std::vector<AtomSet> out;
  for (unsigned mask = 0; mask < (1u << w.size()); ++mask) {
    AtomSet x;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (mask >> i & 1u) x.insert(w[i]);
    if (x.size() <= n && is_clique(e, x)) out.push_back(x);
  }
  return out;
}

void criterion4(Outcome& o) {
  const Budget b{3, 20000};
  std::mt19937_64 rng(2024);
  int pairs = 0;
  for (int t = 0; t < 30; ++t) {
    GenParams p;
    p.kind = Kind::Coh;
    p.web_size = 1 + static_cast<int>(rng() % 3);
    const Space e = gen_space(rng(), p);
    p.web_size = 1 + static_cast<int>(rng() % 3);
    const Space f = gen_space(rng(), p);
    const Rel s = gen_morphism(rng, bang(e), f, b, 0.4);
    o.require(static_cast<bool>(is_morphism(bang(e), f, s)), "generated morphism");
    const Rel ds = dhat(s, e, b);
    for (const auto& xu : cliques_upto(sfun(e), 3, b)) {
      AtomSet x, u;
      for (const auto& a : xu) (a.index() == 0 ? x : u).insert(a.inner());
      AtomSet expected;
      for (const auto& c : fun_apply(s, x)) expected.insert(Atom::tag(0, c));
      for (const auto& c : matapp(local_derivative(s, e, x), u)) expected.insert(Atom::tag(1, c));
      if (fun_apply(ds, xu) != expected) o.require(false, "Fun(Ds) at s = " + write_rel(s));
      ++pairs;
    }
  }
  o.detail << " 30 morphisms, " << pairs << " clique pairs;";
}

void criterion5(Outcome& o) {
  const auto sols = lafont_solutions(2);
  o.require(sols.size() == 1, std::to_string(sols.size()) + " solutions");
  if (!sols.empty()) o.require(sols.front() == dbar_rel(Budget{2, 20000}), "solution differs from dbar");
}

calc::Ty corpus_type(std::mt19937_64& rng) {
  switch (rng() % 4) {
    case 0: return calc::Ty::nat(0);
    case 1: return calc::Ty::nat(1);
    case 2: return calc::Ty::arrow(calc::Ty::nat(0), calc::Ty::nat(1));
    default: return calc::Ty::arrow(calc::Ty::nat(1), calc::Ty::nat(0));
  }
}

// One closed term per rule at least.
const char* const kRuleCorpus[] = {
    "(\\x:i. succ x) #1",
    "D (\\x:i. x) (iota1^0 #2)",
    "pi1^0 (D (\\x:i. succ (succ x)) (iota1^0 #1))",
    "pi0^0 (D (\\x:i. succ x) (iota0^0 #1))",
    "pi0^0 (\\x:i. iota1^0 x)",
    "pi1^0 ((\\x:i. iota1^0 x) #1)",
    "pi0^0 (sigma^0 (iota0^1 (iota0^0 #1)))",
    "pi1^0 (sigma^0 (iota0^1 (iota1^0 #2)))",
    "pi1^0 (sigma^0 (iota1^1 (iota0^0 #2)))",
    "(fix (\\f:i -> i. \\x:i. if0 x #0 (f #0))) #2",
    "if0 #0 #1 #2",
    "if0 #3 #1 #2",
    "iota1^0 (\\x:i. x)",
    "iota1^0 ((\\x:i. x) #1)",
    "sigma^0 (\\x:i. iota0^0 (iota1^0 x))",
    "sigma^0 ((\\x:i2. x) (iota0^1 (iota1^0 #1)))",
    "c^0 (\\x:i2. x)",
    "c^0 ((\\x:i2. x) (iota0^0 (iota1^0 #1)))",
    "pi0^0 (c^0 (iota1^0 (iota0^0 #1)))",
    "pi1^1 (c^0 (iota1^0 (iota0^0 #1)))",
    "pi0^0 (c^1 (iota1^0 (iota0^0 (iota1^0 #1))))",
    "pi1^2 (c^0 (iota1^0 (iota0^0 (iota1^0 #1))))",
    "pi1^1 (sigma^0 (iota1^2 (iota0^0 (iota1^0 #3))))",
    "pi0^0 (sigma^1 (iota1^0 (iota0^1 (iota1^0 #3))))",
    "pi1^1 (iota0^0 (iota1^0 #2))",
    "pi1^0 (iota0^1 (iota1^0 #2))",
    "D (iota0^0 succ) (iota1^0 #1)",
    "D (pi1^0 (\\x:i. iota1^0 x)) (iota1^0 #2)",
    "0 #1",
    "(\\x:i. 0) #1",
    "(pi0^0 (\\x:i1. x) + pi1^0 (\\x:i1. x)) (iota1^0 #1)",
    "(\\m:i1 -> i2. pi1^0 (sigma^0 (m (iota1^0 #1)))) (D (\\x:i. iota0^0 x))",
    "(\\f:i -> i. pi1^0 (D (\\x:i. f (f x)) (iota1^0 #1))) succ",
};

void criterion6(Outcome& o) {
  using namespace calc;
  // subject reduction on 200 generated terms
  std::mt19937_64 rng(6);
  int sr_steps = 0, sr_fail = 0;
  std::vector<Term> corpus;
  for (int k = 0; k < 200; ++k) {
    const Ty t = corpus_type(rng);
    Term m = random_term(rng, {}, t, 10);
    corpus.push_back(m);
    o.require(has_type({}, m, t), "generated term untyped: " + show(m));
    for (int s = 0; s < 80; ++s) {
      auto st = step(m);
      if (!st) break;
      ++sr_steps;
      if (!has_type({}, st->term, t)) {
        ++sr_fail;
        o.require(false, "subject reduction: " + show(m) + " -" + st->rule + "-> " + show(st->term));
      }
      m = st->term;
    }
  }
  o.detail << " subject reduction: 200 terms, " << sr_steps << " steps, " << sr_fail << " failures;";

  bool rejected = false;
  try {
    typecheck({{"x", Ty::nat(0)}, {"y", Ty::nat(0)}}, parse_term("x + y"));
  } catch (const TypeError&) {
    rejected = true;
  }
  o.require(rejected, "x + y was typed");

  o.require(alpha_eq(normalize(parse_term("D (\\x:i. x)"), 10), parse_term("\\y:i1. y")), "D(\\x.x)");
  o.require(alpha_eq(normalize(parse_term("D (\\x:i -> i. x)"), 10), parse_term("\\y:i -> i1. y")),
            "D(\\x.x) at arrow type");

  denot::SemEnv env;  // nats <= 3, degree <= 3
  std::map<std::string, int> counts;
  int violations = 0, steps = 0, skipped = 0;
  auto run = [&](const Term& m, const denot::SemEnv& e) {
    const denot::SoundnessReport rep = denot::soundness_check(m, e, 40);
    for (const auto& [r, c] : rep.rule_counts) counts[r] += c;
    steps += rep.steps;
    skipped += rep.out_of_range;
    for (const auto& v : rep.violations) {
      ++violations;
      o.require(false, "rule " + v.rule + " unsound at " + show(v.before));
    }
  };
  for (const char* s : kRuleCorpus) {
    const Term m = parse_term(s);
    o.require(has_type({}, m, typecheck({}, m)), std::string("corpus term untyped: ") + s);
    run(m, env);
    denot::SemEnv rel = env;
    rel.kind = Kind::Rel;
    run(m, rel);
  }
  for (const auto& m : corpus) run(m, env);
  std::vector<std::string> rules = core_rules();
  rules.insert(rules.end(), extension_rules().begin(), extension_rules().end());
  for (const auto& r : rules) o.require(counts[r] > 0, "rule " + r + " never exercised");
  o.detail << " soundness: " << rules.size() << " rules, " << steps << " steps (" << skipped
           << " with numerals above the bound), " << violations << " violations;";
}

Rel point(const AtomSet& x) {
  Rel r;
  for (const auto& a : x) r.insert(Atom::star(), a);
  return r;
}

// Every space of the kind on a web of n atoms.
std::vector<Space> all_spaces(Kind k, int n) {
  std::vector<Atom> atoms;
  for (int i = 0; i < n; ++i) atoms.push_back(Atom::base(std::string(1, static_cast<char>('a' + i))));
  std::vector<AtomPair> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(atoms[i], atoms[j]);
  const int choices = k == Kind::Coh ? 2 : 3;
  int total = 1;
  for (std::size_t i = 0; i < pairs.size(); ++i) total *= choices;
  std::vector<Space> out;
  for (int code = 0; code < total; ++code) {
    std::vector<AtomPair> scoh, sincoh;
    int c = code;
    for (const auto& p : pairs) {
      const int v = c % choices;
      c /= choices;
      if (v == 1) scoh.push_back(p);
      if (v == 2) sincoh.push_back(p);
    }
    out.push_back(base_space(k, "E", atoms, scoh, sincoh));
  }
  return out;
}

void criterion7(Outcome& o) {
  int families = 0, summable = 0;
  for (Kind k : {Kind::Coh, Kind::Nucs})
    for (int n = 1; n <= 3; ++n)
      for (const Space& e : all_spaces(k, n)) {
        const auto cl = cliques_upto(e, 3, Budget{3, 20000});
        std::vector<Rel> pts;
        for (const auto& x : cl) pts.push_back(point(x));
        // multisets of points; order is covered by the permutation check itself
        for (int size : {3, 4}) {
          std::vector<std::size_t> idx(static_cast<std::size_t>(size), 0);
          std::function<void(std::size_t, std::size_t)> go = [&](std::size_t pos, std::size_t from) {
            if (pos == idx.size()) {
              std::vector<Rel> fs;
              for (auto i : idx) fs.push_back(pts[i]);
              const FamilyCheck chk = family_invariance(fs, one(k), e);
              ++families;
              summable += nary_summable(fs, one(k), e);
              if (!chk.ok) o.require(false, chk.failure);
              return;
            }
            for (std::size_t i = from; i < pts.size(); ++i) {
              idx[pos] = i;
              go(pos + 1, i);
            }
          };
          go(0, 0);
        }
      }
  o.detail << " " << families << " families, " << summable << " summable;";
  o.require(summable > 0, "no summable family");
}

}  // namespace

int main() {
  const std::pair<int, std::function<void(Outcome&)>> criteria[] = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
      {5, criterion5}, {6, criterion6}, {7, criterion7}};
  bool all = true;
  for (const auto& [n, fn] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    all = all && o.pass;
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << " (" << seconds_since(t0) << " s)"
              << o.detail.str() << std::endl;
  }
  return all ? 0 : 1;
}
