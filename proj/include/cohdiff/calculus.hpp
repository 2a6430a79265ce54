// The coherent differential λ-calculus: types, terms, typing, ∂-let, the linear
// rewriting ⇝ and the reduction →.
//
// Concrete syntax:
//   \x:T. M    M N    D M    pi0^d M    pi1^d M    iota0^d M    iota1^d M
//   sigma^d M    c^d M    0    M + N    fix M    #n    succ    if0
// Types: i (ground), i<d> for D^d i (i1, i2, ...), A -> B, D A.
// Line comments start with "--".
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cohdiff::calc {

struct TyNode;

class Ty {
 public:
  enum class Kind { Nat, Arrow, Any };

  Ty();  // Any
  static Ty nat(int depth);
  static Ty arrow(Ty a, Ty b);
  static Ty any();

  Kind kind() const;
  bool is_nat() const { return kind() == Kind::Nat; }
  bool is_arrow() const { return kind() == Kind::Arrow; }
  bool is_any() const { return kind() == Kind::Any; }
  int depth() const;  // Nat only
  Ty dom() const;
  Ty cod() const;

  std::string str() const;
  friend bool operator==(const Ty& a, const Ty& b);

 private:
  explicit Ty(std::shared_ptr<const TyNode> n) : n_(std::move(n)) {}
  std::shared_ptr<const TyNode> n_;
};

/// D^k A: D(Nat d) = Nat(d+1), D(A => B) = A => D B.
Ty diff(const Ty& a, int k = 1);
/// Number of D layers available at the ground of a type; Any has unboundedly many.
int layers(const Ty& a);
/// Removes one D layer; requires layers(a) >= 1.
Ty undiff(const Ty& a);
/// Most general common instance; Any matches everything.
std::optional<Ty> unify(const Ty& a, const Ty& b);
/// a is an instance of pattern.
bool instance_of(const Ty& a, const Ty& pattern);

enum class Op { Var, Abs, App, D, Proj, Inj, Sigma, Flip, Zero, Plus, Num, Succ, If0, Fix };

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  Op op = Op::Zero;
  std::string var;  // Var, Abs
  Ty ty;            // Abs
  int index = 0;    // Proj, Inj
  int depth = 0;    // Proj, Inj, Sigma, Flip
  int n = 0;        // Num
  Term a, b;
  // Plus only: the sum this one was produced from by reduction. Summands are reduced
  // independently afterwards; the certificate keeps the schema-typed original.
  Term cert;
};

Term var(std::string x);
Term abs(std::string x, Ty t, Term body);
Term app(Term m, Term n);
Term app(Term m, std::initializer_list<Term> args);
Term dif(Term m);
Term proj(int i, int d, Term m);
Term inj(int i, int d, Term m);
Term sigma(int d, Term m);
Term flip(int d, Term m);
Term zero();
Term plus(Term m, Term n, Term cert = nullptr);
Term num(int n);
Term succ();
Term if0();
Term fix(Term m);

class TermParseError : public std::runtime_error {
 public:
  TermParseError(const std::string& msg, int line, int col);
  int line, col;
};

Term parse_term(const std::string& text);
Ty parse_type(const std::string& text);
std::string show(const Term& m);

bool alpha_eq(const Term& m, const Term& n);
std::set<std::string> free_vars(const Term& m);
std::string fresh(const std::string& base, const std::set<std::string>& avoid);
/// Capture-avoiding m[n/x].
Term subst(const Term& m, const std::string& x, const Term& n);
std::size_t term_size(const Term& m);
bool has_plus(const Term& m);

using Ctx = std::vector<std::pair<std::string, Ty>>;

class TypeError : public std::runtime_error {
 public:
  TypeError(std::string rule, const std::string& msg);
  std::string rule;
};

/// The type of m, Any-instantiable parts left as Any (0 has type Any). Throws TypeError.
Ty typecheck(const Ctx& ctx, const Term& m);
bool has_type(const Ctx& ctx, const Term& m, const Ty& t);

/// ∂let x <- n in m. ctx types the free variables of m (x included); it is only
/// consulted for fix.
Term dlet(const std::string& x, const Term& n, const Term& m, const Ctx& ctx = {});

struct Step {
  Term term;
  std::string rule;
};

/// One outermost-first ⇝ rewrite.
std::optional<Term> linear_step(const Term& m);
std::optional<Step> linear_step_named(const Term& m);
/// ⇝ normal form.
Term linear_normal_form(const Term& m);

/// One → step: ⇝ first, then the leftmost-outermost redex.
std::optional<Step> step(const Term& m, const Ctx& ctx = {});

class FuelExhausted : public std::runtime_error {
 public:
  FuelExhausted(int fuel, Term last);
  int fuel;
  Term last;
};

Term normalize(const Term& m, int fuel, const std::function<void(const Step&)>& on_step = {},
               const Ctx& ctx = {});

/// Rule names reported by step: the core rules, then the constants, commutations and
/// other extensions.
const std::vector<std::string>& core_rules();
const std::vector<std::string>& extension_rules();

/// A random term of type t in ctx; size bounds the construct count roughly.
Term random_term(std::mt19937_64& rng, const Ctx& ctx, const Ty& t, int size);

}  // namespace cohdiff::calc
