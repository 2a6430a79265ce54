// Relations between webs, truncation budgets and web enumeration.
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cohdiff/atom.hpp"

namespace cohdiff {

struct Budget {
  int max_degree = 3;
  long max_atoms = 20000;
};

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

using AtomPair = std::pair<Atom, Atom>;

/// A finite set of atom pairs.
class Rel {
 public:
  Rel() = default;
  Rel(std::initializer_list<AtomPair> ps) : pairs_(ps) {}
  explicit Rel(std::set<AtomPair> ps) : pairs_(std::move(ps)) {}

  std::string src_label;
  std::string tgt_label;

  const std::set<AtomPair>& pairs() const { return pairs_; }
  bool empty() const { return pairs_.empty(); }
  std::size_t size() const { return pairs_.size(); }
  bool contains(const Atom& a, const Atom& b) const { return pairs_.count({a, b}) > 0; }
  void insert(Atom a, Atom b) { pairs_.emplace(std::move(a), std::move(b)); }

  AtomSet image(const Atom& a) const;
  AtomSet sources() const;
  AtomSet targets() const;
  int max_source_degree() const;

  Rel unite(const Rel& o) const;
  Rel intersect(const Rel& o) const;
  Rel inverse() const;

  friend bool operator==(const Rel& a, const Rel& b) { return a.pairs_ == b.pairs_; }

 private:
  std::set<AtomPair> pairs_;
};

Rel identity_on(const std::vector<Atom>& web);

/// {(a,c) | (a,b) in s, (b,c) in t}
Rel rel_compose(const Rel& s, const Rel& t);

struct EqualOnResult {
  bool equal = true;
  std::optional<Atom> witness;
  AtomSet left_image;
  AtomSet right_image;
  explicit operator bool() const { return equal; }
};

EqualOnResult rel_equal_on(const Rel& f, const Rel& g, const std::vector<Atom>& domain);

/// One `a ↦ b` per line; `->` is accepted when reading. Blank lines and `#` comments skipped.
std::string write_rel(const Rel& r);
Rel read_rel(const std::string& text);

/// Shape of a web, enough to enumerate it.
struct WebShape;
using WebShapePtr = std::shared_ptr<const WebShape>;

struct WebShape {
  enum class Con { Finite, Pair, Tagged, Multisets };
  Con con = Con::Finite;
  std::vector<Atom> atoms;  // Finite
  WebShapePtr l, r;         // Pair: l,r; Tagged: tag 0 -> l, tag 1 -> r; Multisets: l
  // Multisets: optional admission test on the support (multicliques).
  std::function<bool(const std::vector<Atom>&)> admit;

  static WebShapePtr finite(std::vector<Atom> atoms);
  static WebShapePtr pair(WebShapePtr l, WebShapePtr r);
  static WebShapePtr tagged(WebShapePtr l, WebShapePtr r);
  static WebShapePtr multisets(WebShapePtr e,
                               std::function<bool(const std::vector<Atom>&)> admit = {});
};

/// Atoms of the web with nested degree <= budget.max_degree, in ascending order.
/// Throws BudgetExceeded beyond budget.max_atoms.
std::vector<Atom> enumerate_web(const WebShape& w, const Budget& budget);

/// Multisets of size n over `base` (with repetition), as sorted element lists.
void for_each_multiset(const std::vector<Atom>& base, int n,
                       const std::function<void(const std::vector<Atom>&)>& fn);

}  // namespace cohdiff
