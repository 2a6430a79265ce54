#include "cohdiff/arrow.hpp"

#include <algorithm>
#include <map>

namespace cohdiff {

Arrow::Arrow(std::string name, ImageFn img, LiftFn lift)
    : name_(std::move(name)),
      img_(std::make_shared<const ImageFn>(std::move(img))),
      lift_(std::make_shared<const LiftFn>(std::move(lift))) {}

AtomSet Arrow::image(const Atom& a, int bound) const {
  AtomSet out;
  (*img_)(a, bound, out);
  return out;
}

Rel Arrow::on(const std::vector<Atom>& domain, int bound) const {
  Rel r;
  for (const auto& a : domain)
    for (const auto& b : image(a, bound)) r.insert(a, b);
  return r;
}

Arrow Arrow::named(std::string n) const {
  Arrow c = *this;
  c.name_ = std::move(n);
  return c;
}

Arrow atom_map(std::string name, std::function<std::optional<Atom>(const Atom&)> fn) {
  return Arrow(
      std::move(name),
      [fn = std::move(fn)](const Atom& a, int bound, AtomSet& out) {
        if (auto b = fn(a); b && b->degree() <= bound) out.insert(std::move(*b));
      },
      [](int d) { return d; });
}

Arrow atom_image(std::string name, std::function<void(const Atom&, AtomSet&)> fn, LiftFn lift) {
  return Arrow(
      std::move(name),
      [fn = std::move(fn)](const Atom& a, int bound, AtomSet& out) {
        AtomSet tmp;
        fn(a, tmp);
        for (const auto& b : tmp)
          if (b.degree() <= bound) out.insert(b);
      },
      std::move(lift));
}

Arrow from_rel(const Rel& r, std::string name) {
  auto idx = std::make_shared<std::map<Atom, std::vector<Atom>>>();
  for (const auto& [a, b] : r.pairs()) (*idx)[a].push_back(b);
  const int maxsrc = r.max_source_degree();
  return Arrow(
      std::move(name),
      [idx](const Atom& a, int bound, AtomSet& out) {
        auto it = idx->find(a);
        if (it == idx->end()) return;
        for (const auto& b : it->second)
          if (b.degree() <= bound) out.insert(b);
      },
      [maxsrc](int) { return maxsrc; });
}

Arrow id_arrow() {
  return atom_map("id", [](const Atom& a) { return std::optional<Atom>(a); });
}

Arrow zero_arrow() {
  return Arrow("0", [](const Atom&, int, AtomSet&) {}, [](int) { return 0; });
}

Arrow then(const Arrow& f, const Arrow& g) {
  return Arrow(
      g.name() + "∘" + f.name(),
      [f, g](const Atom& a, int bound, AtomSet& out) {
        if (bound < 0) return;
        for (const auto& b : f.image(a, g.lift(bound))) g.image_into(b, bound, out);
      },
      [f, g](int d) { return f.lift(g.lift(d)); });
}

Arrow compose(std::initializer_list<Arrow> right_to_left) {
  std::vector<Arrow> v(right_to_left);
  if (v.empty()) return id_arrow();
  Arrow acc = v.back();
  for (auto it = v.rbegin() + 1; it != v.rend(); ++it) acc = then(acc, *it);
  return acc;
}

Arrow tensor(const Arrow& f, const Arrow& g) {
  return Arrow(
      "(" + f.name() + "⊗" + g.name() + ")",
      [f, g](const Atom& a, int bound, AtomSet& out) {
        if (!a.is_pair() || bound < 0) return;
        AtomSet ls = f.image(a.left(), bound);
        if (ls.empty()) return;
        AtomSet rs = g.image(a.right(), bound);
        for (const auto& c : ls)
          for (const auto& d : rs)
            if (c.degree() + d.degree() <= bound) out.insert(Atom::pair(c, d));
      },
      [f, g](int d) { return f.lift(d) + g.lift(d); });
}

Arrow with_map(const Arrow& f0, const Arrow& f1) {
  return Arrow(
      "(" + f0.name() + "&" + f1.name() + ")",
      [f0, f1](const Atom& a, int bound, AtomSet& out) {
        if (!a.is_tag()) return;
        const Arrow& f = a.index() == 0 ? f0 : f1;
        for (const auto& b : f.image(a.inner(), bound)) out.insert(Atom::tag(a.index(), b));
      },
      [f0, f1](int d) { return std::max(f0.lift(d), f1.lift(d)); });
}

Arrow with_pair(const Arrow& f0, const Arrow& f1) {
  return Arrow(
      "<" + f0.name() + "," + f1.name() + ">",
      [f0, f1](const Atom& a, int bound, AtomSet& out) {
        for (const auto& b : f0.image(a, bound)) out.insert(Atom::tag(0, b));
        for (const auto& b : f1.image(a, bound)) out.insert(Atom::tag(1, b));
      },
      [f0, f1](int d) { return std::max(f0.lift(d), f1.lift(d)); });
}

Arrow unite(const Arrow& f, const Arrow& g) {
  return Arrow(
      "(" + f.name() + "+" + g.name() + ")",
      [f, g](const Atom& a, int bound, AtomSet& out) {
        f.image_into(a, bound, out);
        g.image_into(a, bound, out);
      },
      [f, g](int d) { return std::max(f.lift(d), g.lift(d)); });
}

namespace {

struct Choice {
  std::vector<Atom> elems;
  int cost = 0;  // sum of (degree+1)
};

}  // namespace

Arrow bang(const Arrow& f) {
  return Arrow(
      "!" + f.name(),
      [f](const Atom& a, int bound, AtomSet& out) {
        if (!a.is_mset()) return;
        const Multiset& m = a.ms();
        const int n = m.size();
        if (n > bound) return;
        // For each distinct element with multiplicity k: all k-multisets of images.
        std::vector<std::vector<Choice>> options;
        for (const auto& [x, k] : m.entries()) {
          AtomSet img = f.image(x, bound - n);
          if (img.empty()) return;
          std::vector<Atom> base(img.begin(), img.end());
          std::vector<Choice> opts;
          for_each_multiset(base, k, [&](const std::vector<Atom>& pick) {
            Choice c;
            c.elems = pick;
            for (const auto& b : pick) c.cost += b.degree() + 1;
            if (c.cost <= bound) opts.push_back(std::move(c));
          });
          if (opts.empty()) return;
          options.push_back(std::move(opts));
        }
        std::vector<Atom> cur;
        std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
          if (i == options.size()) {
            out.insert(Atom::mset(Multiset::of(cur)));
            return;
          }
          for (const auto& c : options[i]) {
            if (used + c.cost > bound) continue;
            const auto mark = cur.size();
            cur.insert(cur.end(), c.elems.begin(), c.elems.end());
            rec(i + 1, used + c.cost);
            cur.resize(mark);
          }
        };
        rec(0, 0);
      },
      [f](int d) {
        int best = 0;
        for (int n = 1; n <= d; ++n) best = std::max(best, n + n * f.lift(d - n));
        return best;
      });
}

ArrowEqual arrows_equal_on(const Arrow& f, const Arrow& g, const std::vector<Atom>& domain,
                           int bound) {
  ArrowEqual res;
  for (const auto& a : domain) {
    AtomSet fi = f.image(a, bound);
    AtomSet gi = g.image(a, bound);
    if (fi != gi) {
      res.equal = false;
      res.witness = a;
      res.left_image = std::move(fi);
      res.right_image = std::move(gi);
      return res;
    }
  }
  return res;
}

}  // namespace cohdiff
