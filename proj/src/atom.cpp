#include "cohdiff/atom.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace cohdiff {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

const std::string kMiddleDot = "\xC2\xB7";

}  // namespace

// ---- Multiset ----

Multiset Multiset::of(std::vector<Atom> elems) {
  std::sort(elems.begin(), elems.end());
  Multiset m;
  for (auto& a : elems) {
    if (!m.entries_.empty() && m.entries_.back().first == a)
      ++m.entries_.back().second;
    else
      m.entries_.emplace_back(std::move(a), 1);
  }
  return m;
}

Multiset Multiset::from_entries(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& x, const Entry& y) { return x.first < y.first; });
  Multiset m;
  for (auto& [a, k] : entries) {
    if (k <= 0) continue;
    if (!m.entries_.empty() && m.entries_.back().first == a)
      m.entries_.back().second += k;
    else
      m.entries_.emplace_back(std::move(a), k);
  }
  return m;
}

int Multiset::size() const {
  int n = 0;
  for (const auto& e : entries_) n += e.second;
  return n;
}

int Multiset::count(const Atom& a) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), a,
                             [](const Entry& e, const Atom& x) { return e.first < x; });
  return (it != entries_.end() && it->first == a) ? it->second : 0;
}

std::vector<Atom> Multiset::support() const {
  std::vector<Atom> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

std::vector<Atom> Multiset::elements() const {
  std::vector<Atom> out;
  for (const auto& [a, k] : entries_)
    for (int i = 0; i < k; ++i) out.push_back(a);
  return out;
}

Multiset Multiset::plus(const Multiset& o) const {
  Multiset r;
  r.entries_.reserve(entries_.size() + o.entries_.size());
  auto i = entries_.begin();
  auto j = o.entries_.begin();
  while (i != entries_.end() || j != o.entries_.end()) {
    if (j == o.entries_.end() || (i != entries_.end() && i->first < j->first)) {
      r.entries_.push_back(*i++);
    } else if (i == entries_.end() || j->first < i->first) {
      r.entries_.push_back(*j++);
    } else {
      r.entries_.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  return r;
}

Multiset Multiset::plus(const Atom& a) const {
  Multiset r = *this;
  auto it = std::lower_bound(r.entries_.begin(), r.entries_.end(), a,
                             [](const Entry& e, const Atom& x) { return e.first < x; });
  if (it != r.entries_.end() && it->first == a)
    ++it->second;
  else
    r.entries_.insert(it, Entry{a, 1});
  return r;
}

Multiset Multiset::minus(const Atom& a) const {
  Multiset r = *this;
  auto it = std::lower_bound(r.entries_.begin(), r.entries_.end(), a,
                             [](const Entry& e, const Atom& x) { return e.first < x; });
  if (it == r.entries_.end() || !(it->first == a))
    throw std::invalid_argument("Multiset::minus: element not present");
  if (--it->second == 0) r.entries_.erase(it);
  return r;
}

bool operator==(const Multiset& a, const Multiset& b) { return a.entries_ == b.entries_; }

std::strong_ordering operator<=>(const Multiset& a, const Multiset& b) {
  const auto n = std::min(a.entries_.size(), b.entries_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.entries_[i].first <=> b.entries_[i].first; c != 0) return c;
    if (auto c = a.entries_[i].second <=> b.entries_[i].second; c != 0) return c;
  }
  return a.entries_.size() <=> b.entries_.size();
}

Multiset mset_sum(const Multiset& m0, const Multiset& m1) { return m0.plus(m1); }

// ---- Atom ----

Atom::Atom() {
  static const std::shared_ptr<const Node> star = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Base;
    n->sym = "*";
    n->hash = std::hash<std::string>{}(n->sym);
    return std::shared_ptr<const Node>(n);
  }();
  n_ = star;
}

Atom Atom::base(std::string sym) {
  if (sym == "*") return Atom();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Base;
  n->sym = std::move(sym);
  n->hash = std::hash<std::string>{}(n->sym);
  return Atom(std::move(n));
}

Atom Atom::tag(int i, Atom inner) {
  if (i != 0 && i != 1) throw MalformedAtom("tag index must be 0 or 1");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Tag;
  n->tag = i;
  n->degree = inner.degree();
  n->hash = mix(mix(0x51, static_cast<std::size_t>(i)), inner.hash());
  n->kids.push_back(std::move(inner));
  return Atom(std::move(n));
}

Atom Atom::pair(Atom l, Atom r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pair;
  n->degree = l.degree() + r.degree();
  n->hash = mix(mix(0x77, l.hash()), r.hash());
  n->kids.push_back(std::move(l));
  n->kids.push_back(std::move(r));
  return Atom(std::move(n));
}

Atom Atom::mset(Multiset m) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::MSet;
  std::size_t h = 0x1234;
  int d = 0;
  for (const auto& [a, k] : m.entries()) {
    d += k * (a.degree() + 1);
    h = mix(mix(h, a.hash()), static_cast<std::size_t>(k));
  }
  n->degree = d;
  n->hash = h;
  n->ms = std::move(m);
  return Atom(std::move(n));
}

const std::string& Atom::symbol() const {
  if (n_->kind != Kind::Base) throw MalformedAtom("not a base atom: " + str());
  return n_->sym;
}

int Atom::index() const {
  if (n_->kind != Kind::Tag) throw MalformedAtom("not a tagged atom: " + str());
  return n_->tag;
}

const Atom& Atom::inner() const {
  if (n_->kind != Kind::Tag) throw MalformedAtom("not a tagged atom: " + str());
  return n_->kids[0];
}

const Atom& Atom::left() const {
  if (n_->kind != Kind::Pair) throw MalformedAtom("not a pair atom: " + str());
  return n_->kids[0];
}

const Atom& Atom::right() const {
  if (n_->kind != Kind::Pair) throw MalformedAtom("not a pair atom: " + str());
  return n_->kids[1];
}

const Multiset& Atom::ms() const {
  if (n_->kind != Kind::MSet) throw MalformedAtom("not a multiset atom: " + str());
  return n_->ms;
}

bool operator==(const Atom& a, const Atom& b) {
  if (a.n_ == b.n_) return true;
  if (a.n_->hash != b.n_->hash || a.n_->kind != b.n_->kind) return false;
  return (a <=> b) == 0;
}

std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
  if (a.n_ == b.n_) return std::strong_ordering::equal;
  const auto& x = *a.n_;
  const auto& y = *b.n_;
  if (x.kind != y.kind) return x.kind <=> y.kind;
  switch (x.kind) {
    case Atom::Kind::Base:
      return x.sym.compare(y.sym) <=> 0;
    case Atom::Kind::Tag:
      if (x.tag != y.tag) return x.tag <=> y.tag;
      return x.kids[0] <=> y.kids[0];
    case Atom::Kind::Pair:
      if (auto c = x.kids[0] <=> y.kids[0]; c != 0) return c;
      return x.kids[1] <=> y.kids[1];
    case Atom::Kind::MSet:
      return x.ms <=> y.ms;
  }
  return std::strong_ordering::equal;
}

std::string Atom::str() const {
  switch (n_->kind) {
    case Kind::Base:
      return n_->sym;
    case Kind::Tag:
      return std::to_string(n_->tag) + kMiddleDot + n_->kids[0].str();
    case Kind::Pair:
      return "(" + n_->kids[0].str() + "," + n_->kids[1].str() + ")";
    case Kind::MSet: {
      std::string s = "[";
      bool first = true;
      for (const auto& a : n_->ms.elements()) {
        if (!first) s += ",";
        first = false;
        s += a.str();
      }
      return s + "]";
    }
  }
  return "?";
}

// ---- parsing ----

void AtomReader::skip_ws() {
  while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
}

bool AtomReader::at_end() {
  skip_ws();
  return pos_ >= s_.size();
}

bool AtomReader::eat(std::string_view tok) {
  skip_ws();
  if (s_.substr(pos_, tok.size()) == tok) {
    pos_ += tok.size();
    return true;
  }
  return false;
}

Atom AtomReader::read() {
  skip_ws();
  if (pos_ >= s_.size()) throw ParseError("expected atom", pos_);
  const char c = s_[pos_];
  if (c == '*') {
    ++pos_;
    return Atom::star();
  }
  if (c == '(') {
    ++pos_;
    Atom l = read();
    if (!eat(",")) throw ParseError("expected ','", pos_);
    Atom r = read();
    if (!eat(")")) throw ParseError("expected ')'", pos_);
    return Atom::pair(std::move(l), std::move(r));
  }
  if (c == '[') {
    ++pos_;
    std::vector<Atom> elems;
    if (eat("]")) return Atom::mset(Multiset::of(std::move(elems)));
    for (;;) {
      elems.push_back(read());
      if (eat("]")) break;
      if (!eat(",")) throw ParseError("expected ',' or ']'", pos_);
    }
    return Atom::mset(Multiset::of(std::move(elems)));
  }
  auto is_sym = [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\'';
  };
  if (!is_sym(c)) throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  const std::size_t start = pos_;
  while (pos_ < s_.size() && is_sym(s_[pos_])) ++pos_;
  std::string sym(s_.substr(start, pos_ - start));
  const bool digit = sym == "0" || sym == "1";
  if (digit && s_.substr(pos_, kMiddleDot.size()) == kMiddleDot) {
    pos_ += kMiddleDot.size();
    return Atom::tag(sym[0] - '0', read());
  }
  if (digit && pos_ < s_.size() && s_[pos_] == '.') {
    ++pos_;
    return Atom::tag(sym[0] - '0', read());
  }
  return Atom::base(std::move(sym));
}

Atom parse_atom(std::string_view text) {
  AtomReader r(text);
  Atom a = r.read();
  if (!r.at_end()) throw ParseError("trailing input after atom", r.pos());
  return a;
}

}  // namespace cohdiff
