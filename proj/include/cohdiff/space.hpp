// Coherence spaces (COH), non-uniform coherence spaces (NUCS) and bare webs (REL).
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cohdiff/rel.hpp"

namespace cohdiff {

enum class Kind { Coh, Nucs, Rel };
enum class Verdict { StrictCoh, Neutral, StrictIncoh };

const char* kind_name(Kind k);
Kind parse_kind(const std::string& s);
const char* verdict_name(Verdict v);

class SpaceNode;
using Space = std::shared_ptr<const SpaceNode>;

class SpaceNode {
 public:
  enum class Con { Base, One, Top, Tensor, With, Plus, Limpl, Dual, S, Bang };

  Kind kind = Kind::Coh;
  Con con = Con::Base;
  std::string name;  // base spaces
  Space l, r;
  std::vector<Atom> atoms;              // base web, sorted
  std::map<AtomPair, Verdict> strict;   // base: non-neutral off-table entries, both orders

  std::string str() const;
};

Space base_space(Kind k, std::string name, std::vector<Atom> atoms,
                 const std::vector<AtomPair>& scoh, const std::vector<AtomPair>& sincoh = {});
Space one(Kind k);
Space top(Kind k);
Space tensor(const Space& e, const Space& f);
Space with_(const Space& e, const Space& f);
Space plus(const Space& e, const Space& f);
Space limpl(const Space& e, const Space& f);
Space dual(const Space& e);
Space sfun(const Space& e);
Space bang(const Space& e);
/// I = 1 & 1
Space into(Kind k);
/// Bool = 1 ⊕ 1 in COH, ~(1 & 1) in NUCS/REL.
Space boolean(Kind k);

/// Throws MalformedAtom if an atom does not have the web's shape.
Verdict verdict(const Space& e, const Atom& a, const Atom& b);
bool coherent(const Space& e, const Atom& a, const Atom& b);
bool strictly_coherent(const Space& e, const Atom& a, const Atom& b);

bool in_web(const Space& e, const Atom& a);
WebShapePtr web_shape(const Space& e);
std::vector<Atom> enumerate(const Space& e, const Budget& b);

bool is_clique(const Space& e, const std::vector<Atom>& x);
bool is_clique(const Space& e, const AtomSet& x);

struct MorphismCheck {
  bool ok = true;
  std::string reason;
  std::optional<std::pair<AtomPair, AtomPair>> clash;  // first incoherent pair of pairs
  explicit operator bool() const { return ok; }
};

/// s in Cl(E ⊸ F); REL accepts every relation.
MorphismCheck is_morphism(const Space& e, const Space& f, const Rel& s);

AtomSet matapp(const Rel& s, const AtomSet& x);

// ---- text formats ----

/// Reads `space <name> kind=coh|nucs|rel atoms{...} scoh{...} [sincoh{...}]` declarations.
std::map<std::string, Space> parse_space_file(const std::string& text);

/// Expressions over named spaces: `!E`, `S E`, `E (x) F`, `E & F`, `E (+) F`, `E -o F`, `~E`,
/// plus the constants `1`, `T`, `I` and `Bool` of the given kind.
Space parse_space_expr(const std::string& text, const std::map<std::string, Space>& env, Kind k);

}  // namespace cohdiff
