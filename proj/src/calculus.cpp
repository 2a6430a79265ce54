#include "cohdiff/calculus.hpp"

#include <algorithm>
#include <cctype>
#include <climits>

namespace cohdiff::calc {

// ---------------------------------------------------------------- types

struct TyNode {
  Ty::Kind kind = Ty::Kind::Any;
  int depth = 0;
  std::shared_ptr<const TyNode> dom, cod;
};

namespace {
const std::shared_ptr<const TyNode>& any_node() {
  static const auto n = std::make_shared<const TyNode>();
  return n;
}
}  // namespace

Ty::Ty() : n_(any_node()) {}

Ty Ty::nat(int depth) {
  auto n = std::make_shared<TyNode>();
  n->kind = Kind::Nat;
  n->depth = depth;
  return Ty(std::move(n));
}

Ty Ty::arrow(Ty a, Ty b) {
  auto n = std::make_shared<TyNode>();
  n->kind = Kind::Arrow;
  n->dom = a.n_;
  n->cod = b.n_;
  return Ty(std::move(n));
}

Ty Ty::any() { return Ty(); }
Ty::Kind Ty::kind() const { return n_->kind; }
int Ty::depth() const { return n_->depth; }
Ty Ty::dom() const { return Ty(n_->dom); }
Ty Ty::cod() const { return Ty(n_->cod); }

std::string Ty::str() const {
  switch (kind()) {
    case Kind::Any: return "_";
    case Kind::Nat: return depth() == 0 ? "i" : "i" + std::to_string(depth());
    case Kind::Arrow: {
      const Ty d = dom();
      const std::string l = d.is_arrow() ? "(" + d.str() + ")" : d.str();
      return l + " -> " + cod().str();
    }
  }
  return "?";
}

bool operator==(const Ty& a, const Ty& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Ty::Kind::Any: return true;
    case Ty::Kind::Nat: return a.depth() == b.depth();
    case Ty::Kind::Arrow: return a.dom() == b.dom() && a.cod() == b.cod();
  }
  return false;
}

Ty diff(const Ty& a, int k) {
  if (k == 0 || a.is_any()) return a;
  if (a.is_nat()) return Ty::nat(a.depth() + k);
  return Ty::arrow(a.dom(), diff(a.cod(), k));
}

int layers(const Ty& a) {
  if (a.is_any()) return INT_MAX / 2;
  if (a.is_nat()) return a.depth();
  return layers(a.cod());
}

Ty undiff(const Ty& a) {
  if (a.is_any()) return a;
  if (a.is_nat()) {
    if (a.depth() == 0) throw std::logic_error("undiff of ground type");
    return Ty::nat(a.depth() - 1);
  }
  return Ty::arrow(a.dom(), undiff(a.cod()));
}

std::optional<Ty> unify(const Ty& a, const Ty& b) {
  if (a.is_any()) return b;
  if (b.is_any()) return a;
  if (a.kind() != b.kind()) return std::nullopt;
  if (a.is_nat()) return a.depth() == b.depth() ? std::optional<Ty>(a) : std::nullopt;
  auto d = unify(a.dom(), b.dom());
  auto c = unify(a.cod(), b.cod());
  if (!d || !c) return std::nullopt;
  return Ty::arrow(*d, *c);
}

bool instance_of(const Ty& a, const Ty& pattern) {
  if (pattern.is_any()) return true;
  if (a.kind() != pattern.kind()) return false;
  if (a.is_nat()) return a.depth() == pattern.depth();
  return instance_of(a.dom(), pattern.dom()) && instance_of(a.cod(), pattern.cod());
}

// ---------------------------------------------------------------- terms

namespace {
Term mk(TermNode n) { return std::make_shared<const TermNode>(std::move(n)); }

Term with_a(const Term& m, Term a) {
  TermNode n = *m;
  n.a = std::move(a);
  return mk(std::move(n));
}

Term with_b(const Term& m, Term b) {
  TermNode n = *m;
  n.b = std::move(b);
  return mk(std::move(n));
}

// Rebuilds m with child 0 (a) or 1 (b) replaced. A sum whose summand is rewritten keeps
// its pre-rewrite form as certificate.
Term rebuild(const Term& m, int which, Term c, bool certify) {
  if (m->op == Op::Plus) {
    Term cert = certify ? (m->cert ? m->cert : plus(m->a, m->b)) : nullptr;
    return which == 0 ? plus(std::move(c), m->b, cert) : plus(m->a, std::move(c), cert);
  }
  return which == 0 ? with_a(m, std::move(c)) : with_b(m, std::move(c));
}

bool is_unary_op(Op op) {
  return op == Op::D || op == Op::Proj || op == Op::Inj || op == Op::Sigma || op == Op::Flip;
}
}  // namespace

Term var(std::string x) {
  TermNode n;
  n.op = Op::Var;
  n.var = std::move(x);
  return mk(std::move(n));
}

Term abs(std::string x, Ty t, Term body) {
  TermNode n;
  n.op = Op::Abs;
  n.var = std::move(x);
  n.ty = std::move(t);
  n.a = std::move(body);
  return mk(std::move(n));
}

Term app(Term m, Term a) {
  TermNode n;
  n.op = Op::App;
  n.a = std::move(m);
  n.b = std::move(a);
  return mk(std::move(n));
}

Term app(Term m, std::initializer_list<Term> args) {
  for (const auto& a : args) m = app(m, a);
  return m;
}

namespace {
Term unary(Op op, int i, int d, Term m) {
  TermNode n;
  n.op = op;
  n.index = i;
  n.depth = d;
  n.a = std::move(m);
  return mk(std::move(n));
}

Term leaf(Op op) {
  TermNode n;
  n.op = op;
  return mk(std::move(n));
}
}  // namespace

Term dif(Term m) { return unary(Op::D, 0, 0, std::move(m)); }
Term proj(int i, int d, Term m) { return unary(Op::Proj, i, d, std::move(m)); }
Term inj(int i, int d, Term m) { return unary(Op::Inj, i, d, std::move(m)); }
Term sigma(int d, Term m) { return unary(Op::Sigma, 0, d, std::move(m)); }
Term flip(int d, Term m) { return unary(Op::Flip, 0, d, std::move(m)); }
Term zero() { return leaf(Op::Zero); }
Term succ() { return leaf(Op::Succ); }
Term if0() { return leaf(Op::If0); }
Term fix(Term m) { return unary(Op::Fix, 0, 0, std::move(m)); }

Term plus(Term m, Term a, Term cert) {
  TermNode n;
  n.op = Op::Plus;
  n.a = std::move(m);
  n.b = std::move(a);
  n.cert = std::move(cert);
  return mk(std::move(n));
}

Term num(int v) {
  TermNode n;
  n.op = Op::Num;
  n.n = v;
  return mk(std::move(n));
}

// ---------------------------------------------------------------- parser

TermParseError::TermParseError(const std::string& msg, int l, int c)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), col(c) {}

namespace {
struct Token {
  enum Kind { Ident, Number, Hash, Sym, End } kind = End;
  std::string text;
  int line = 1, col = 1;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto adv = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < s.size()) {
    const char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      adv(1);
      continue;
    }
    if (ch == '-' && i + 1 < s.size() && s[i + 1] == '-') {
      while (i < s.size() && s[i] != '\n') adv(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
        ++j;
      t.kind = Token::Ident;
      t.text = s.substr(i, j - i);
      adv(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      t.kind = Token::Number;
      t.text = s.substr(i, j - i);
      adv(j - i);
    } else if (ch == '#') {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j == i + 1) throw TermParseError("expected digits after #", line, col);
      t.kind = Token::Hash;
      t.text = s.substr(i + 1, j - i - 1);
      adv(j - i);
    } else if (ch == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      t.kind = Token::Sym;
      t.text = "->";
      adv(2);
    } else if (std::string("\\:.()+^").find(ch) != std::string::npos) {
      t.kind = Token::Sym;
      t.text = std::string(1, ch);
      adv(1);
    } else {
      throw TermParseError(std::string("unexpected character '") + ch + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : toks_(lex(s)) {}

  Term whole_term() {
    Term t = term();
    expect_end();
    return t;
  }

  Ty whole_type() {
    Ty t = type();
    expect_end();
    return t;
  }

 private:
  std::vector<Token> toks_;
  std::size_t p_ = 0;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(p_ + k, toks_.size() - 1)]; }
  bool is_sym(const char* s, std::size_t k = 0) const {
    return peek(k).kind == Token::Sym && peek(k).text == s;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw TermParseError(msg, peek().line, peek().col); }
  void expect_sym(const char* s) {
    if (!is_sym(s)) fail(std::string("expected '") + s + "'");
    ++p_;
  }
  void expect_end() {
    if (peek().kind != Token::End) fail("unexpected '" + peek().text + "'");
  }
  int number() {
    if (peek().kind != Token::Number) fail("expected a number");
    return std::stoi(toks_[p_++].text);
  }

  // Types: arrow := prefix ('->' arrow)?; prefix := 'D' prefix | atom
  Ty type() {
    Ty l = type_prefix();
    if (is_sym("->")) {
      ++p_;
      return Ty::arrow(l, type());
    }
    return l;
  }
  Ty type_prefix() {
    if (peek().kind == Token::Ident && peek().text == "D") {
      ++p_;
      return diff(type_prefix());
    }
    if (is_sym("(")) {
      ++p_;
      Ty t = type();
      expect_sym(")");
      return t;
    }
    if (peek().kind == Token::Ident && peek().text[0] == 'i') {
      const std::string& s = peek().text;
      if (s == "i") {
        ++p_;
        return Ty::nat(0);
      }
      if (std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        ++p_;
        return Ty::nat(std::stoi(s.substr(1)));
      }
    }
    fail("expected a type");
  }

  static bool depth_op(const std::string& s) {
    return s == "pi0" || s == "pi1" || s == "iota0" || s == "iota1" || s == "sigma" || s == "c";
  }

  bool starts_operand() const {
    const Token& t = peek();
    return t.kind == Token::Ident || t.kind == Token::Number || t.kind == Token::Hash || is_sym("(");
  }

  Term term() {
    if (is_sym("\\")) return lambda();
    Term l = application();
    while (is_sym("+")) {
      ++p_;
      if (is_sym("\\")) return plus(l, lambda());
      l = plus(l, application());
    }
    return l;
  }

  Term lambda() {
    expect_sym("\\");
    if (peek().kind != Token::Ident) fail("expected a variable");
    std::string x = toks_[p_++].text;
    expect_sym(":");
    Ty t = type();
    expect_sym(".");
    return abs(std::move(x), std::move(t), term());
  }

  Term application() {
    Term f = prefix();
    while (true) {
      if (is_sym("\\")) return app(f, lambda());
      if (!starts_operand()) return f;
      f = app(f, prefix());
    }
  }

  Term prefix() {
    if (peek().kind == Token::Ident) {
      const std::string s = peek().text;
      if (s == "D") {
        ++p_;
        return dif(prefix());
      }
      if (s == "fix") {
        ++p_;
        return fix(prefix());
      }
      if (depth_op(s) && is_sym("^", 1)) {
        p_ += 2;
        const int d = number();
        Term m = prefix();
        if (s == "pi0") return proj(0, d, m);
        if (s == "pi1") return proj(1, d, m);
        if (s == "iota0") return inj(0, d, m);
        if (s == "iota1") return inj(1, d, m);
        if (s == "sigma") return sigma(d, m);
        return flip(d, m);
      }
    }
    return atom();
  }

  Term atom() {
    const Token& t = peek();
    if (t.kind == Token::Ident) {
      ++p_;
      if (t.text == "succ") return succ();
      if (t.text == "if0") return if0();
      if (t.text == "D" || t.text == "fix") fail("'" + t.text + "' needs an operand");
      return var(t.text);
    }
    if (t.kind == Token::Number) {
      if (t.text != "0") fail("numerals are written #n; 0 is the zero term");
      ++p_;
      return zero();
    }
    if (t.kind == Token::Hash) {
      ++p_;
      return num(std::stoi(t.text));
    }
    if (is_sym("(")) {
      ++p_;
      Term m = term();
      expect_sym(")");
      return m;
    }
    fail(t.kind == Token::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
  }
};
}  // namespace

Term parse_term(const std::string& text) { return Parser(text).whole_term(); }
Ty parse_type(const std::string& text) { return Parser(text).whole_type(); }

// ---------------------------------------------------------------- printer

namespace {
enum Level { kTop = 0, kSum = 1, kApp = 2, kArg = 3 };

std::string paren(const std::string& s, bool p) { return p ? "(" + s + ")" : s; }

std::string show_at(const Term& m, int lvl) {
  switch (m->op) {
    case Op::Var: return m->var;
    case Op::Zero: return "0";
    case Op::Num: return "#" + std::to_string(m->n);
    case Op::Succ: return "succ";
    case Op::If0: return "if0";
    case Op::Abs:
      return paren("\\" + m->var + ":" + m->ty.str() + ". " + show_at(m->a, kTop), lvl > kTop);
    case Op::Plus: return paren(show_at(m->a, kSum) + " + " + show_at(m->b, kApp), lvl > kSum);
    case Op::App: return paren(show_at(m->a, kApp) + " " + show_at(m->b, kArg), lvl > kApp);
    case Op::D: return paren("D " + show_at(m->a, kArg), lvl > kApp);
    case Op::Fix: return paren("fix " + show_at(m->a, kArg), lvl > kApp);
    case Op::Proj:
    case Op::Inj:
    case Op::Sigma:
    case Op::Flip: {
      std::string name = m->op == Op::Proj ? "pi" + std::to_string(m->index)
                         : m->op == Op::Inj ? "iota" + std::to_string(m->index)
                         : m->op == Op::Sigma ? "sigma"
                                              : "c";
      return paren(name + "^" + std::to_string(m->depth) + " " + show_at(m->a, kArg), lvl > kApp);
    }
  }
  return "?";
}
}  // namespace

std::string show(const Term& m) { return show_at(m, kTop); }

// ---------------------------------------------------------------- variables

namespace {
bool alpha_eq_in(const Term& m, const Term& n, std::vector<std::string>& bm, std::vector<std::string>& bn) {
  if (m->op != n->op) return false;
  switch (m->op) {
    case Op::Var: {
      auto im = std::find(bm.rbegin(), bm.rend(), m->var);
      auto in = std::find(bn.rbegin(), bn.rend(), n->var);
      const bool fm = im == bm.rend(), fn = in == bn.rend();
      if (fm || fn) return fm && fn && m->var == n->var;
      return std::distance(bm.rbegin(), im) == std::distance(bn.rbegin(), in);
    }
    case Op::Abs: {
      if (!(m->ty == n->ty)) return false;
      bm.push_back(m->var);
      bn.push_back(n->var);
      const bool r = alpha_eq_in(m->a, n->a, bm, bn);
      bm.pop_back();
      bn.pop_back();
      return r;
    }
    case Op::Zero:
    case Op::Succ:
    case Op::If0: return true;
    case Op::Num: return m->n == n->n;
    case Op::App:
    case Op::Plus: return alpha_eq_in(m->a, n->a, bm, bn) && alpha_eq_in(m->b, n->b, bm, bn);
    default:
      return m->index == n->index && m->depth == n->depth && alpha_eq_in(m->a, n->a, bm, bn);
  }
}

void collect_free(const Term& m, std::vector<std::string>& bound, std::set<std::string>& out) {
  switch (m->op) {
    case Op::Var:
      if (std::find(bound.begin(), bound.end(), m->var) == bound.end()) out.insert(m->var);
      return;
    case Op::Abs:
      bound.push_back(m->var);
      collect_free(m->a, bound, out);
      bound.pop_back();
      return;
    default:
      if (m->a) collect_free(m->a, bound, out);
      if (m->b) collect_free(m->b, bound, out);
      if (m->cert) collect_free(m->cert, bound, out);
  }
}
}  // namespace

bool alpha_eq(const Term& m, const Term& n) {
  std::vector<std::string> bm, bn;
  return alpha_eq_in(m, n, bm, bn);
}

std::set<std::string> free_vars(const Term& m) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free(m, bound, out);
  return out;
}

std::string fresh(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int k = 1;; ++k) {
    std::string c = base + std::to_string(k);
    if (!avoid.count(c)) return c;
  }
}

Term subst(const Term& m, const std::string& x, const Term& n) {
  switch (m->op) {
    case Op::Var: return m->var == x ? n : m;
    case Op::Zero:
    case Op::Num:
    case Op::Succ:
    case Op::If0: return m;
    case Op::Abs: {
      if (m->var == x) return m;
      const auto fb = free_vars(m->a);
      if (!fb.count(x)) return m;
      const auto fn = free_vars(n);
      if (fn.count(m->var)) {
        std::set<std::string> avoid = fn;
        avoid.insert(fb.begin(), fb.end());
        avoid.insert(x);
        const std::string z = fresh(m->var, avoid);
        return abs(z, m->ty, subst(subst(m->a, m->var, var(z)), x, n));
      }
      return abs(m->var, m->ty, subst(m->a, x, n));
    }
    case Op::Plus:
      return plus(subst(m->a, x, n), subst(m->b, x, n), m->cert ? subst(m->cert, x, n) : nullptr);
    case Op::App: return app(subst(m->a, x, n), subst(m->b, x, n));
    default: return with_a(m, subst(m->a, x, n));
  }
}

std::size_t term_size(const Term& m) {
  std::size_t s = 1;
  if (m->a) s += term_size(m->a);
  if (m->b) s += term_size(m->b);
  return s;
}

bool has_plus(const Term& m) {
  if (m->op == Op::Plus) return true;
  return (m->a && has_plus(m->a)) || (m->b && has_plus(m->b));
}

// ---------------------------------------------------------------- ⇝

namespace {
// The linear position of a construct: λ body, function side of application, unary ops.
bool has_linear_child(const Term& m) {
  return m->op == Op::Abs || m->op == Op::App || is_unary_op(m->op);
}

std::optional<Step> lin_root(const Term& m, bool certify) {
  if (!has_linear_child(m)) return std::nullopt;
  const Term& c = m->a;
  if (c->op == Op::Zero) return Step{zero(), "lin-zero"};
  if (c->op != Op::Plus) return std::nullopt;
  Term cert;
  if (certify) {
    const Term q = c->cert ? c->cert : plus(c->a, c->b);
    cert = plus(with_a(m, q->a), with_a(m, q->b));
  }
  return Step{plus(with_a(m, c->a), with_a(m, c->b), cert), "lin-plus"};
}

std::optional<Step> lin_search(const Term& m, bool certify) {
  if (auto r = lin_root(m, certify)) return r;
  if (m->a) {
    if (auto r = lin_search(m->a, certify)) return Step{rebuild(m, 0, r->term, certify), r->rule};
  }
  if (m->b) {
    if (auto r = lin_search(m->b, certify)) return Step{rebuild(m, 1, r->term, certify), r->rule};
  }
  return std::nullopt;
}

Term lnf_plain(Term m) {
  while (auto s = lin_search(m, false)) m = s->term;
  return m;
}
}  // namespace

std::optional<Step> linear_step_named(const Term& m) { return lin_search(m, true); }

std::optional<Term> linear_step(const Term& m) {
  if (auto s = lin_search(m, true)) return s->term;
  return std::nullopt;
}

Term linear_normal_form(const Term& m) {
  Term t = m;
  while (auto s = lin_search(t, true)) t = s->term;
  return t;
}

// ---------------------------------------------------------------- typing

TypeError::TypeError(std::string r, const std::string& msg)
    : std::runtime_error(r + ": " + msg), rule(std::move(r)) {}

namespace {
Ty synth(Ctx& ctx, const Term& m);
Ty plus_type(Ctx& ctx, const Term& l, const Term& r);

bool same_head(const Term& l, const Term& r) {
  if (l->op != r->op || !has_linear_child(l)) return false;
  switch (l->op) {
    case Op::Abs: return l->ty == r->ty;
    case Op::App: return alpha_eq(l->b, r->b);
    case Op::D: return true;
    default: return l->index == r->index && l->depth == r->depth;
  }
}

Term factor(const Term& m);

Term factor_sum(const Term& l0, const Term& r0) {
  Term l = l0->op == Op::Plus ? factor(l0) : l0;
  Term r = r0->op == Op::Plus ? factor(r0) : r0;
  if (l->op == Op::Zero) return r;
  if (r->op == Op::Zero) return l;
  if (!same_head(l, r)) return plus(l, r);
  if (l->op == Op::Abs && l->var != r->var) {
    std::set<std::string> avoid = free_vars(l->a);
    const auto fr = free_vars(r->a);
    avoid.insert(fr.begin(), fr.end());
    const std::string z = fresh(l->var, avoid);
    return abs(z, l->ty, factor_sum(subst(l->a, l->var, var(z)), subst(r->a, r->var, var(z))));
  }
  return with_a(l, factor_sum(l->a, r->a));
}

// Pulls common linear heads back out of a sum: the inverse of ⇝ on the sum spine.
Term factor(const Term& m) { return factor_sum(m->a, m->b); }

Ty need_layers(const Ty& t, int k, const char* rule, const Term& m) {
  if (layers(t) < k)
    throw TypeError(rule, show(m) + " needs a type with at least " + std::to_string(k) +
                              " derivative layers, got " + t.str());
  return t;
}

Ty direct_sum(Ctx& ctx, const Term& l, const Term& r) {
  if (l->op == Op::Zero) return synth(ctx, r);
  if (r->op == Op::Zero) return synth(ctx, l);
  if (l->op == Op::Proj && r->op == Op::Proj && l->depth == r->depth) {
    const int d = l->depth;
    if (l->index == 0 && r->index == 1 && alpha_eq(l->a, r->a)) {
      const Ty t = need_layers(synth(ctx, l->a), d + 1, "sum-proj", l);
      return undiff(t);
    }
    if (l->index == 1 && r->index == 0) {
      const Ty t = need_layers(plus_type(ctx, l->a, r->a), d + 1, "sum-swap", l);
      return undiff(t);
    }
  }
  throw TypeError("sum", "no sum rule types " + show(plus(l, r)));
}

Ty plus_type(Ctx& ctx, const Term& l, const Term& r) {
  const Term f = factor_sum(lnf_plain(l), lnf_plain(r));
  if (f->op != Op::Plus) return synth(ctx, f);
  return direct_sum(ctx, f->a, f->b);
}

Ty synth(Ctx& ctx, const Term& m) {
  switch (m->op) {
    case Op::Var:
      for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
        if (it->first == m->var) return it->second;
      throw TypeError("var", "unbound variable " + m->var);
    case Op::Abs: {
      ctx.emplace_back(m->var, m->ty);
      Ty b;
      try {
        b = synth(ctx, m->a);
      } catch (...) {
        ctx.pop_back();
        throw;
      }
      ctx.pop_back();
      return Ty::arrow(m->ty, b);
    }
    case Op::App: {
      const Ty f = synth(ctx, m->a);
      const Ty x = synth(ctx, m->b);
      if (f.is_any()) return f;
      if (!f.is_arrow()) throw TypeError("app", show(m->a) + " has non-function type " + f.str());
      if (!unify(f.dom(), x))
        throw TypeError("app", "argument " + show(m->b) + " : " + x.str() + " but " + f.dom().str() +
                                   " expected");
      return f.cod();
    }
    case Op::D: {
      const Ty f = synth(ctx, m->a);
      if (f.is_any()) return f;
      if (!f.is_arrow()) throw TypeError("D", show(m->a) + " has non-function type " + f.str());
      return Ty::arrow(diff(f.dom()), diff(f.cod()));
    }
    case Op::Proj: return undiff(need_layers(synth(ctx, m->a), m->depth + 1, "proj", m));
    case Op::Inj: return diff(need_layers(synth(ctx, m->a), m->depth, "inj", m));
    case Op::Sigma: return undiff(need_layers(synth(ctx, m->a), m->depth + 2, "sigma", m));
    case Op::Flip: return need_layers(synth(ctx, m->a), m->depth + 2, "flip", m);
    case Op::Zero: return Ty::any();
    case Op::Plus: {
      if (!m->cert) return plus_type(ctx, m->a, m->b);
      const Ty t = plus_type(ctx, m->cert->a, m->cert->b);
      auto u = unify(t, synth(ctx, m->a));
      if (u) u = unify(*u, synth(ctx, m->b));
      if (!u) throw TypeError("sum", "summands of " + show(m) + " left the type of their origin");
      return *u;
    }
    case Op::Num: return Ty::nat(0);
    case Op::Succ: return Ty::arrow(Ty::nat(0), Ty::nat(0));
    case Op::If0:
      return Ty::arrow(Ty::nat(0), Ty::arrow(Ty::nat(0), Ty::arrow(Ty::nat(0), Ty::nat(0))));
    case Op::Fix: {
      const Ty f = synth(ctx, m->a);
      if (f.is_any()) return f;
      std::optional<Ty> u;
      if (f.is_arrow()) u = unify(f.dom(), f.cod());
      if (!u) throw TypeError("fix", show(m->a) + " : " + f.str() + " is not an endomorphism type");
      return *u;
    }
  }
  throw TypeError("term", "unknown construct");
}
}  // namespace

Ty typecheck(const Ctx& ctx, const Term& m) {
  Ctx c = ctx;
  return synth(c, m);
}

bool has_type(const Ctx& ctx, const Term& m, const Ty& t) {
  try {
    return instance_of(t, typecheck(ctx, m));
  } catch (const TypeError&) {
    return false;
  }
}

// ---------------------------------------------------------------- ∂-let

Term dlet(const std::string& x, const Term& n, const Term& m, const Ctx& ctx) {
  switch (m->op) {
    case Op::Var: return m->var == x ? n : inj(0, 0, m);
    case Op::Num:
    case Op::Succ:
    case Op::If0: return inj(0, 0, m);
    case Op::Zero: return m;
    case Op::Abs: {
      std::string y = m->var;
      Term body = m->a;
      const auto fn = free_vars(n);
      if (y == x || fn.count(y)) {
        std::set<std::string> avoid = fn;
        const auto fb = free_vars(body);
        avoid.insert(fb.begin(), fb.end());
        avoid.insert(x);
        const std::string z = fresh(y, avoid);
        body = subst(body, y, var(z));
        y = z;
      }
      Ctx c = ctx;
      c.emplace_back(y, m->ty);
      return abs(y, m->ty, dlet(x, n, body, c));
    }
    case Op::D: return flip(0, dif(dlet(x, n, m->a, ctx)));
    case Op::App: return sigma(0, app(dif(dlet(x, n, m->a, ctx)), dlet(x, n, m->b, ctx)));
    case Op::Plus:
      return plus(dlet(x, n, m->a, ctx), dlet(x, n, m->b, ctx), m->cert ? dlet(x, n, m->cert, ctx) : nullptr);
    case Op::Proj: return proj(m->index, m->depth + 1, dlet(x, n, m->a, ctx));
    case Op::Inj: return inj(m->index, m->depth + 1, dlet(x, n, m->a, ctx));
    case Op::Sigma: return sigma(m->depth + 1, dlet(x, n, m->a, ctx));
    case Op::Flip: return flip(m->depth + 1, dlet(x, n, m->a, ctx));
    case Op::Fix: {
      const Ty f = typecheck(ctx, m->a);
      std::optional<Ty> b;
      if (f.is_any()) return zero();
      if (f.is_arrow()) b = unify(f.dom(), f.cod());
      if (!b || b->is_any()) throw TypeError("fix", "cannot type the body of " + show(m) + " for dlet");
      std::set<std::string> avoid = free_vars(n);
      const auto fm = free_vars(m->a);
      avoid.insert(fm.begin(), fm.end());
      avoid.insert(x);
      const std::string y = fresh("y", avoid);
      return fix(abs(y, diff(*b), sigma(0, app(dif(dlet(x, n, m->a, ctx)), var(y)))));
    }
  }
  return m;
}

// ---------------------------------------------------------------- →

namespace {
std::optional<Step> red_root(const Term& m, const Ctx& ctx) {
  switch (m->op) {
    case Op::App: {
      const Term& f = m->a;
      if (f->op == Op::Abs) return Step{subst(f->a, f->var, m->b), "beta"};
      if (f->op == Op::Succ && m->b->op == Op::Num) return Step{num(m->b->n + 1), "succ"};
      if (f->op == Op::App && f->a->op == Op::App && f->a->a->op == Op::If0 && f->a->b->op == Op::Num)
        return Step{f->a->b->n == 0 ? f->b : m->b, f->a->b->n == 0 ? "if0-zero" : "if0-succ"};
      return std::nullopt;
    }
    case Op::D: {
      const Term& f = m->a;
      if (f->op == Op::Proj || f->op == Op::Inj || f->op == Op::Sigma || f->op == Op::Flip) {
        TermNode n = *f;
        n.depth = f->depth + 1;
        n.a = dif(f->a);
        return Step{mk(std::move(n)), "D-op"};
      }
      if (f->op != Op::Abs) return std::nullopt;
      std::set<std::string> avoid = free_vars(f->a);
      avoid.erase(f->var);
      const std::string y = fresh("y", avoid);
      Ctx c = ctx;
      c.emplace_back(y, diff(f->ty));
      c.emplace_back(f->var, f->ty);
      return Step{abs(y, diff(f->ty), dlet(f->var, var(y), f->a, c)), "D-lambda"};
    }
    case Op::Fix: return Step{app(m->a, m), "fix"};
    case Op::Plus:
      if (m->a->op == Op::Zero) return Step{m->b, "sum-zero"};
      if (m->b->op == Op::Zero) return Step{m->a, "sum-zero"};
      return std::nullopt;
    case Op::Proj: {
      const Term& c = m->a;
      const int i = m->index, d = m->depth;
      if (d == 0 && c->op == Op::D && c->a->op == Op::Succ) {
        const std::string y = "y";
        return Step{abs(y, Ty::nat(1), app(succ(), proj(i, 0, var(y)))), "pi-D-succ"};
      }
      switch (c->op) {
        case Op::Abs: return Step{abs(c->var, c->ty, proj(i, d, c->a)), "pi-lambda"};
        case Op::App: return Step{app(proj(i, d, c->a), c->b), "pi-app"};
        case Op::Inj:
          if (c->depth == d) return Step{c->index == i ? c->a : zero(), "pi-iota"};
          if (d < c->depth) return Step{inj(c->index, c->depth - 1, proj(i, d, c->a)), "pi-iota-commute"};
          return Step{inj(c->index, c->depth, proj(i, d - 1, c->a)), "pi-iota-commute"};
        case Op::Sigma:
          if (c->depth == d) {
            if (i == 0) return Step{proj(0, d, proj(0, d, c->a)), "pi0-sigma"};
            Term s = plus(proj(1, d, proj(0, d, c->a)), proj(0, d, proj(1, d, c->a)));
            return Step{plus(s->a, s->b, s), "pi1-sigma"};
          }
          if (d < c->depth) return Step{sigma(c->depth - 1, proj(i, d, c->a)), "pi-sigma-commute"};
          return Step{sigma(c->depth, proj(i, d + 1, c->a)), "pi-sigma-commute"};
        case Op::Flip: {
          const int e = c->depth;
          if (d == e) return Step{proj(i, e + 1, c->a), "pi-flip"};
          if (d == e + 1) return Step{proj(i, e, c->a), "pi-flip"};
          if (d < e) return Step{flip(e - 1, proj(i, d, c->a)), "pi-flip"};
          return Step{flip(e, proj(i, d, c->a)), "pi-flip"};
        }
        default: return std::nullopt;
      }
    }
    case Op::Inj:
    case Op::Sigma:
    case Op::Flip: {
      const Term& c = m->a;
      const std::string base = m->op == Op::Inj ? "iota" : m->op == Op::Sigma ? "sigma" : "flip";
      if (c->op == Op::Abs) return Step{abs(c->var, c->ty, with_a(m, c->a)), base + "-lambda"};
      if (c->op == Op::App) return Step{app(with_a(m, c->a), c->b), base + "-app"};
      return std::nullopt;
    }
    default: return std::nullopt;
  }
}

std::optional<Step> red_search(const Term& m, Ctx& ctx) {
  if (auto r = red_root(m, ctx)) return r;
  if (m->op == Op::Abs) {
    ctx.emplace_back(m->var, m->ty);
    auto r = red_search(m->a, ctx);
    ctx.pop_back();
    if (r) return Step{with_a(m, r->term), r->rule};
    return std::nullopt;
  }
  if (m->a) {
    if (auto r = red_search(m->a, ctx)) return Step{rebuild(m, 0, r->term, true), r->rule};
  }
  if (m->b) {
    if (auto r = red_search(m->b, ctx)) return Step{rebuild(m, 1, r->term, true), r->rule};
  }
  return std::nullopt;
}
}  // namespace

std::optional<Step> step(const Term& m, const Ctx& ctx) {
  if (auto s = lin_search(m, true)) return s;
  Ctx c = ctx;
  return red_search(m, c);
}

FuelExhausted::FuelExhausted(int f, Term l)
    : std::runtime_error("fuel exhausted after " + std::to_string(f) + " steps"), fuel(f), last(std::move(l)) {}

Term normalize(const Term& m, int fuel, const std::function<void(const Step&)>& on_step, const Ctx& ctx) {
  Term t = m;
  for (int k = 0; k < fuel; ++k) {
    auto s = step(t, ctx);
    if (!s) return t;
    if (on_step) on_step(*s);
    t = s->term;
  }
  if (step(t, ctx)) throw FuelExhausted(fuel, t);
  return t;
}

const std::vector<std::string>& core_rules() {
  static const std::vector<std::string> r{"lin-plus",  "lin-zero",  "beta",      "D-lambda", "pi-lambda",
                                          "pi-app",    "pi-iota",   "pi0-sigma", "pi1-sigma", "fix"};
  return r;
}

const std::vector<std::string>& extension_rules() {
  static const std::vector<std::string> r{
      "succ",      "if0-zero",    "if0-succ",        "iota-lambda",      "iota-app", "sigma-lambda",
      "sigma-app", "flip-lambda", "flip-app",        "pi-iota-commute",  "pi-sigma-commute",
      "pi-flip",   "sum-zero",    "D-op",            "pi-D-succ"};
  return r;
}

// ---------------------------------------------------------------- generator

namespace {
struct Gen {
  std::mt19937_64& rng;
  int counter = 0;
  static constexpr int kMaxLayers = 2;

  int pick(int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }
  bool coin(int percent) { return pick(100) < percent; }

  std::string fresh_name(const Ctx& ctx) {
    std::set<std::string> avoid;
    for (const auto& [x, t] : ctx) avoid.insert(x);
    static const char* names[] = {"x", "y", "z", "u", "v", "w"};
    return fresh(names[pick(6)], avoid);
  }

  Ty small_type() {
    switch (pick(6)) {
      case 0:
      case 1:
      case 2: return Ty::nat(0);
      case 3:
      case 4: return Ty::nat(1);
      default: return Ty::arrow(Ty::nat(0), Ty::nat(0));
    }
  }

  Term leaf(const Ctx& ctx, const Ty& t) {
    std::vector<Term> vars;
    for (const auto& [x, tx] : ctx)
      if (tx == t) vars.push_back(var(x));
    if (!vars.empty() && coin(60)) return vars[static_cast<std::size_t>(pick(static_cast<int>(vars.size())))];
    if (t.is_arrow()) {
      const std::string x = fresh_name(ctx);
      Ctx c = ctx;
      c.emplace_back(x, t.dom());
      return abs(x, t.dom(), leaf(c, t.cod()));
    }
    if (coin(5)) return zero();
    if (t.depth() == 0) return num(pick(4));
    return inj(pick(2), pick(t.depth()), leaf(ctx, undiff(t)));
  }

  Term gen(const Ctx& ctx, const Ty& t, int size) {
    if (size <= 0) return leaf(ctx, t);
    const int l = layers(t);
    for (int attempt = 0; attempt < 20; ++attempt) {
      switch (pick(13)) {
        case 0: {
          const Ty a = small_type();
          return app(gen(ctx, Ty::arrow(a, t), size / 2), gen(ctx, a, size / 2));
        }
        case 1: {  // β-redex
          const Ty a = small_type();
          const std::string x = fresh_name(ctx);
          Ctx c = ctx;
          c.emplace_back(x, a);
          return app(abs(x, a, gen(c, t, size - 2)), gen(ctx, a, size / 2));
        }
        case 2:
          if (t.is_arrow()) {
            const std::string x = fresh_name(ctx);
            Ctx c = ctx;
            c.emplace_back(x, t.dom());
            return abs(x, t.dom(), gen(c, t.cod(), size - 1));
          }
          break;
        case 3:
          if (t.is_arrow() && layers(t.dom()) >= 1 && layers(t.cod()) >= 1)
            return dif(gen(ctx, Ty::arrow(undiff(t.dom()), undiff(t.cod())), size - 1));
          break;
        case 4:
          if (l + 1 <= kMaxLayers) return proj(pick(2), pick(l + 1), gen(ctx, diff(t), size - 1));
          break;
        case 5:
          if (l >= 1) return inj(pick(2), pick(l), gen(ctx, undiff(t), size - 1));
          break;
        case 6:
          if (l >= 1 && l + 1 <= kMaxLayers) return sigma(pick(l), gen(ctx, diff(t), size - 1));
          break;
        case 7:
          if (l >= 2) return flip(pick(l - 1), gen(ctx, t, size - 1));
          break;
        case 8:
          if (l + 1 <= kMaxLayers) {
            const int d = pick(l + 1);
            const Term m = gen(ctx, diff(t), size - 1);
            return plus(proj(0, d, m), proj(1, d, m));
          }
          break;
        case 9:
          if (t == Ty::nat(0)) return app(succ(), gen(ctx, t, size - 1));
          break;
        case 10:
          if (t == Ty::nat(0))
            return app(if0(), {gen(ctx, t, size / 3), gen(ctx, t, size / 3), gen(ctx, t, size / 3)});
          break;
        case 11:
          if (coin(30)) {
            const std::string f = fresh_name(ctx);
            Ctx c = ctx;
            c.emplace_back(f, t);
            return fix(abs(f, t, gen(c, t, size - 1)));
          }
          break;
        case 12: {  // derivative of an abstraction applied to an argument
          if (l >= 1 && l + 1 <= kMaxLayers) {
            const Ty a = coin(50) ? Ty::nat(0) : Ty::nat(1);
            const Ty b = undiff(t);
            const std::string x = fresh_name(ctx);
            Ctx c = ctx;
            c.emplace_back(x, a);
            return app(dif(abs(x, a, gen(c, b, size - 2))), gen(ctx, diff(a), size / 2));
          }
          break;
        }
      }
    }
    return leaf(ctx, t);
  }
};
}  // namespace

Term random_term(std::mt19937_64& rng, const Ctx& ctx, const Ty& t, int size) {
  Gen g{rng};
  return g.gen(ctx, t, size);
}

}  // namespace cohdiff::calc
