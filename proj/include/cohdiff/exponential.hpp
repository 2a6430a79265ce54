// The resource comonad !: functor, der/dig, Seely isos, weakening, contraction,
// lax monoidality and Kleisli composition.
#pragma once

#include <string>

#include "cohdiff/arrow.hpp"
#include "cohdiff/space.hpp"

namespace cohdiff {

enum class StructuralMapName { der, dig, weak, contr, seely0, seely0_inv, seely2, seely2_inv, m0, m2 };

const char* structural_name(StructuralMapName n);

Arrow der();        // [a] -> a
Arrow dig();        // m -> [m1,...,mn], m = m1+...+mn, empty parts allowed
Arrow weak();       // [] -> *
Arrow contr();      // m -> (m1,m2), m = m1+m2
Arrow seely0();     // * -> []
Arrow seely0_inv(); // [] -> *
Arrow seely2();     // ([a..],[b..]) -> [0·a..,1·b..]
Arrow seely2_inv();
Arrow m0();         // * -> k[*]
Arrow m2();         // ([a1..an],[b1..bn]) -> [(a1,b1)..(an,bn)]
Arrow bang_zero();  // !0 : [] -> []

Arrow structural_arrow(StructuralMapName n);

/// Source and target spaces of a structural map.
std::pair<Space, Space> structural_type(StructuralMapName n, const Space& e, const Space& f);

/// !s restricted to the enumerated web of !E.
Rel bang_morphism(const Rel& s, const Space& e, const Budget& b);

/// The structural map on all source atoms within budget, targets of degree <= max_degree.
/// F is needed only by seely2, seely2_inv and m2.
Rel structural(StructuralMapName n, const Space& e, const Budget& b, const Space& f = nullptr);

/// t∘s in the Kleisli category, s : !E -> F, t : !F -> G, sources of degree <= max_degree.
/// If E is given (COH), sums outside Web !E are dropped.
Rel kleisli_compose(const Rel& s, const Rel& t, const Budget& b, const Space& e = nullptr);

/// !s∘dig, sources and targets of degree <= max_degree.
Rel promotion(const Rel& s, const Budget& b);

/// Multiset partitions of m into nonempty parts, each as a sorted list of parts.
std::vector<std::vector<Multiset>> mset_partitions(const Multiset& m);

}  // namespace cohdiff
