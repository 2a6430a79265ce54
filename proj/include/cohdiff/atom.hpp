// Web elements and finite multisets.
#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cohdiff {

class Atom;

/// Finite multiset of atoms, kept sorted with positive counts.
class Multiset {
 public:
  using Entry = std::pair<Atom, int>;

  Multiset() = default;
  static Multiset of(std::vector<Atom> elems);
  static Multiset from_entries(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  int size() const;  // cardinality, #m
  bool empty() const { return entries_.empty(); }
  int count(const Atom& a) const;
  std::vector<Atom> support() const;
  std::vector<Atom> elements() const;  // with repetition, sorted

  Multiset plus(const Multiset& o) const;
  Multiset plus(const Atom& a) const;
  // m - [a]; requires a in m
  Multiset minus(const Atom& a) const;

  friend bool operator==(const Multiset& a, const Multiset& b);
  friend std::strong_ordering operator<=>(const Multiset& a, const Multiset& b);

 private:
  std::vector<Entry> entries_;
};

Multiset mset_sum(const Multiset& m0, const Multiset& m1);

/// A web element: base symbol, tagged atom (i,a), pair (a,b) or multiset.
class Atom {
 public:
  enum class Kind : unsigned char { Base, Tag, Pair, MSet };

  Atom();  // the unit element *
  static Atom base(std::string sym);
  static Atom star() { return Atom(); }
  static Atom tag(int i, Atom inner);
  static Atom pair(Atom l, Atom r);
  static Atom mset(Multiset m);
  static Atom mset(std::vector<Atom> elems) { return mset(Multiset::of(std::move(elems))); }

  Kind kind() const { return n_->kind; }
  bool is_base() const { return n_->kind == Kind::Base; }
  bool is_tag() const { return n_->kind == Kind::Tag; }
  bool is_pair() const { return n_->kind == Kind::Pair; }
  bool is_mset() const { return n_->kind == Kind::MSet; }

  const std::string& symbol() const;
  int index() const;            // tag index
  const Atom& inner() const;    // tag payload
  const Atom& left() const;
  const Atom& right() const;
  const Multiset& ms() const;

  /// Multiset degree counted through nesting.
  int degree() const { return n_->degree; }
  std::size_t hash() const { return n_->hash; }

  std::string str() const;

  friend bool operator==(const Atom& a, const Atom& b);
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);

 private:
  struct Node {
    Kind kind = Kind::Base;
    int tag = 0;
    int degree = 0;
    std::size_t hash = 0;
    std::string sym;
    std::vector<Atom> kids;  // tag: 1, pair: 2
    Multiset ms;
  };
  explicit Atom(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

struct AtomHash {
  std::size_t operator()(const Atom& a) const { return a.hash(); }
};

using AtomSet = std::set<Atom>;

class MalformedAtom : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at offset " + std::to_string(pos)), pos_(pos) {}
  std::size_t pos() const { return pos_; }

 private:
  std::size_t pos_;
};

/// Parses `*`, symbols, `0·a` / `1·a` (also `0.a`), `(a,b)`, `[a,a,b]`.
Atom parse_atom(std::string_view text);

// Used by the relation and space readers.
class AtomReader {
 public:
  explicit AtomReader(std::string_view s, std::size_t pos = 0) : s_(s), pos_(pos) {}
  Atom read();
  void skip_ws();
  bool at_end();
  std::size_t pos() const { return pos_; }
  bool eat(std::string_view tok);

 private:
  std::string_view s_;
  std::size_t pos_;
};

}  // namespace cohdiff
