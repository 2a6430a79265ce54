// Differentiation: the coalgebra ∂̄ : I -> !I, ∂̃ : !X⊗I -> !(X⊗I), ∂ : !S X -> S !X,
// the Kleisli derivative D̂, partial derivatives and local derivatives of stable functions.
//
// Atoms of !S E are multisets of tagged atoms; seely2_inv turns them into pairs (m0,m1).
#pragma once

#include <vector>

#include "cohdiff/arrow.hpp"
#include "cohdiff/space.hpp"

namespace cohdiff {

/// {(0,k[0])} ∪ {(1,k[0]+[1])}, the same in every model.
Arrow dbar();
Rel dbar_rel(const Budget& b);

/// m2 ∘ (id ⊗ ∂̄)
Arrow dtilde();

/// (X ⊸ Y) ⊗ X -> Y, ((a,b),a) -> b. arg_degree bounds the degree of X atoms.
Arrow ev(int arg_degree);

/// Closed form of ∂_E. In COH (e given, kind Coh) the provisos a ∉ Supp m0 and
/// m0+[a] ∈ Web !E are checked; otherwise there are none.
Arrow dpartial_arrow(const Space& e = nullptr);

/// ∂_E recovered from ∂̄: the i-component of m is !ev ∘ m2 ∘ (id ⊗ ∂̄) applied to (m',(i,*)),
/// m' obtained from m by (j,a) -> ((j,*),a).
Arrow dpartial_derived();

/// ∂_E on the enumerated web of !S E.
Rel dpartial(const Space& e, const Budget& b);

/// D̂f = Sf ∘ ∂_E on the enumerated web of !S E.
Rel dhat(const Rel& f, const Space& e, const Budget& b);
Arrow dhat_arrow(const Arrow& f, const Space& e = nullptr);

/// Linear &-strength with a summable argument, as a map X0 & S X1 -> S(X0 & X1)
/// (arg = 1) or S X0 & X1 -> S(X0 & X1) (arg = 0).
Arrow partial_strength(int arg);

/// D̂f composed with the strength for argument `arg`; f : !(X0 & X1) -> Y.
Rel partial_derivative(const Rel& f, int arg, const Space& x0, const Space& x1, const Budget& b);
Arrow partial_derivative_arrow(const Arrow& f, int arg, const Space& x01 = nullptr);

/// Web of the local space E_x: atoms outside x coherent with all of x.
std::vector<Atom> local_web(const Space& e, const AtomSet& x);

/// ∂s(x)/∂x = {(a,b) | a ∈ Web E_x, (m+[a],b) ∈ s, Supp m ⊆ x}.
Rel local_derivative(const Rel& s, const Space& e, const AtomSet& x);

/// Fun s(x) = {b | (m,b) ∈ s, Supp m ⊆ x} for a Kleisli morphism s.
AtomSet fun_apply(const Rel& s, const AtomSet& x);

/// Relations δ : I -> !I with targets of degree <= max_degree satisfying
/// der∘δ = id, weak∘δ = π0 and contr∘δ = (δ⊗δ)∘Scmont, up to that degree.
std::vector<Rel> lafont_solutions(int max_degree);

}  // namespace cohdiff
