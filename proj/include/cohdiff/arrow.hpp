// Relations given by their image function, for composites over infinite webs.
//
// img(a, D) must return exactly {b | (a,b) in f, degree(b) <= D}.
// lift(D) bounds the degree of any source whose image meets degree <= D;
// composition uses it to evaluate the inner map just deep enough.
#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cohdiff/rel.hpp"

namespace cohdiff {

using ImageFn = std::function<void(const Atom& a, int bound, AtomSet& out)>;
using LiftFn = std::function<int(int)>;

class Arrow {
 public:
  Arrow() = default;
  Arrow(std::string name, ImageFn img, LiftFn lift);

  const std::string& name() const { return name_; }
  AtomSet image(const Atom& a, int bound) const;
  void image_into(const Atom& a, int bound, AtomSet& out) const { (*img_)(a, bound, out); }
  int lift(int bound) const { return (*lift_)(bound); }

  /// Pairs (a,b) for a in domain and degree(b) <= bound.
  Rel on(const std::vector<Atom>& domain, int bound) const;

  Arrow named(std::string n) const;

 private:
  std::string name_;
  std::shared_ptr<const ImageFn> img_;
  std::shared_ptr<const LiftFn> lift_;
};

/// Atom-level total bijection or partial function; degree preserving (lift = id).
Arrow atom_map(std::string name, std::function<std::optional<Atom>(const Atom&)> fn);
/// Finite-image map; lift given explicitly.
Arrow atom_image(std::string name, std::function<void(const Atom&, AtomSet&)> fn, LiftFn lift);

Arrow from_rel(const Rel& r, std::string name = "rel");
Arrow id_arrow();
Arrow zero_arrow();

/// g after f.
Arrow then(const Arrow& f, const Arrow& g);
Arrow compose(std::initializer_list<Arrow> right_to_left);  // compose({h, g, f}) = h∘g∘f
Arrow tensor(const Arrow& f, const Arrow& g);
/// Tag-preserving: (i,a) -> (i, f_i a).
Arrow with_map(const Arrow& f0, const Arrow& f1);
/// Pairing into a tagged web: a -> (0, f0 a) ∪ (1, f1 a).
Arrow with_pair(const Arrow& f0, const Arrow& f1);
/// Set union of images (the sum in all three models).
Arrow unite(const Arrow& f, const Arrow& g);
/// Multiset lifting [a1..an] -> [b1..bn].
Arrow bang(const Arrow& f);

struct ArrowEqual {
  bool equal = true;
  std::optional<Atom> witness;
  AtomSet left_image;
  AtomSet right_image;
};

ArrowEqual arrows_equal_on(const Arrow& f, const Arrow& g, const std::vector<Atom>& domain,
                           int bound);

}  // namespace cohdiff
