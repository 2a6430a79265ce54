// Truncated relational semantics of the calculus (REL and NUCS) and the soundness oracle.
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cohdiff/calculus.hpp"
#include "cohdiff/space.hpp"

namespace cohdiff::denot {

using calc::Ctx;
using calc::Term;
using calc::Ty;

struct SemEnv {
  Kind kind = Kind::Nucs;  // Nucs or Rel
  int nat_bound = 3;       // ⟦Nat 0⟧ = {0..nat_bound}, flat
  int degree = 3;          // sources and targets kept up to this degree
};

/// ⟦Nat d⟧ = S^d N, ⟦A => B⟧ = !⟦A⟧ -o ⟦B⟧.
Space interp_type(const Ty& a, const SemEnv& env);
/// ⟦x0:A0, ..., xn:An⟧ = A0 & (A1 & (... & (An & T))).
Space interp_context(const Ctx& ctx, const SemEnv& env);
/// The atom of the context space carrying a in component k.
Atom ctx_atom(std::size_t k, const Atom& a);
Atom nat_atom(int n);

/// Adds tag i at the ground of a type atom (through the codomains of arrows).
Atom ground_tag(int i, const Atom& a);

struct SemRel {
  Ty type;
  Rel rel;  // !⟦Γ⟧ -> ⟦A⟧
};

class Untypable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ⟦Γ ⊢ M⟧ with every pair of degree <= env.degree on both sides.
SemRel interp_term(const Ctx& ctx, const Term& m, const SemEnv& env);

/// Pairs whose source and target both have degree <= d.
Rel restrict_degree(const Rel& r, int d);

struct SemCompare {
  bool equal = true;
  std::optional<AtomPair> witness;  // in exactly one of the two relations
  bool witness_in_left = false;
  int internal_degree = 0;          // the degree the verdict was reached at
};

/// Compares ⟦M⟧ and ⟦N⟧ restricted to env.degree. Both are computed at internal degree
/// env.degree + slack; a difference is confirmed only if it survives slack up to max_slack.
SemCompare sem_equal(const Ctx& ctx, const Term& m, const Term& n, const SemEnv& env,
                     int max_slack = 4);

struct Violation {
  int step = 0;
  std::string rule;
  Term before, after;
  AtomPair pair;
  bool in_before = false;
};

struct SoundnessReport {
  int steps = 0;
  int out_of_range = 0;  // steps not compared: a numeral above nat_bound occurs
  bool fuel_exhausted = false;
  Term last;
  std::map<std::string, int> rule_counts;
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

class SoundnessViolation : public std::runtime_error {
 public:
  explicit SoundnessViolation(Violation v);
  Violation violation;
};

/// Largest numeral occurring in m, -1 if none.
int max_numeral(const Term& m);

/// Reduces m step by step and compares the semantics of each step's two sides. Steps
/// where either side mentions a numeral above env.nat_bound are counted, not compared.
SoundnessReport soundness_check(const Term& m, const SemEnv& env, int fuel = 100,
                                const Ctx& ctx = {}, int max_slack = 4);
/// soundness_check, throwing SoundnessViolation on the first violation.
SoundnessReport assert_sound(const Term& m, const SemEnv& env, int fuel = 100, const Ctx& ctx = {});

}  // namespace cohdiff::denot
