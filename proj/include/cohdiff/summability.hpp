// The summability functor S X = {0,1} x Web X: projections, sum, witnesses, the monad
// (ι0, θ), the flip, tensor strengths and the canonical presentation S X = (1&1 ⊸ X).
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cohdiff/arrow.hpp"
#include "cohdiff/space.hpp"

namespace cohdiff {

enum class SumStructName { proj0, proj1, sigma, inj0, inj1, flip, theta, strength, strength_sym, smont };

const char* sum_struct_name(SumStructName n);

Arrow s_proj(int i);   // (i,a) -> a
Arrow sigma();         // (i,a) -> a, both i
Arrow s_inj(int i);    // a -> (i,a)
Arrow flip();          // (i,(j,a)) -> (j,(i,a))
Arrow theta();         // (i,(j,a)) -> (i|j, a), undefined at (1,1)
Arrow sstr();          // X0 ⊗ S X1 -> S(X0⊗X1): (a,(i,b)) -> (i,(a,b))
Arrow sstr_sym();      // S X0 ⊗ X1 -> S(X0⊗X1): ((i,a),b) -> (i,(a,b))
Arrow smont();         // S X0 ⊗ S X1 -> S(X0⊗X1): ((i,a),(j,b)) -> (i+j,(a,b)), i+j <= 1
Arrow s_with();        // S(X0&X1) -> S X0 & S X1: (i,(j,a)) -> (j,(i,a))
Arrow sfun_arrow(const Arrow& f);  // S f

/// S(X ⊸ Y) -> (X ⊸ S Y): (i,(a,b)) -> (a,(i,b)).
Arrow sfun_curry();

/// S X -> (I ⊸ X) and back: (i,a) <-> ((i,*),a).
Arrow canon_to_limpl();
Arrow canon_from_limpl();

// Points and the comonoid on I = 1 & 1.
Arrow w_point(int i);  // 1 -> I: * -> (i,*)
Arrow delta_point();   // 1 -> I: * -> (0,*),(1,*)
Arrow i_counit();      // I -> 1: (0,*) -> *
Arrow scmont();        // I -> I⊗I: 0 -> (0,0); 1 -> (1,0),(0,1)

/// {((i,a),(i,b)) | (a,b) in s}
Rel sfun_morphism(const Rel& s);

/// The named map on the enumerated source web within budget. F is used by the
/// strengths and smont.
Rel sum_structural(SumStructName n, const Space& e, const Budget& b, const Space& f = nullptr);
std::pair<Space, Space> sum_struct_type(SumStructName n, const Space& e, const Space& f);

struct SummabilityWitness {
  Rel witness;  // X -> S Y
  Rel f0, f1;
};

struct NotSummable {
  std::string reason;
  std::optional<std::pair<AtomPair, AtomPair>> clash;  // offending pairs of the witness
};

using WitnessResult = std::variant<SummabilityWitness, NotSummable>;

/// ⟨⟨f0,f1⟩⟩ = {(a,(i,b)) | (a,b) in f_i}, provided it is a morphism X -> S Y.
WitnessResult witness(const Rel& f0, const Rel& f1, const Space& x, const Space& y);
bool summable(const Rel& f0, const Rel& f1, const Space& x, const Space& y);

class NotSummableError : public std::runtime_error {
 public:
  explicit NotSummableError(NotSummable n)
      : std::runtime_error("not summable: " + n.reason), info_(std::move(n)) {}
  const NotSummable& info() const { return info_; }

 private:
  NotSummable info_;
};

/// σ∘⟨⟨f0,f1⟩⟩; throws NotSummableError.
Rel sum(const Rel& f0, const Rel& f1, const Space& x, const Space& y);

/// Left-nested: (((f1+f2)+f3)+...). Throws NotSummableError at the failing prefix.
Rel nary_sum(const std::vector<Rel>& fs, const Space& x, const Space& y);
bool nary_summable(const std::vector<Rel>& fs, const Space& x, const Space& y);

struct FamilyCheck {
  bool ok = true;
  std::string failure;
};

/// Checks that summability and the sum of fs are unchanged under every permutation and
/// every regrouping into pairwise disjoint blocks.
FamilyCheck family_invariance(const std::vector<Rel>& fs, const Space& x, const Space& y);

/// S E -> (I ⊸ E) and its inverse on the enumerated web of S E.
std::pair<Rel, Rel> canonical_iso(const Space& e, const Budget& b);

}  // namespace cohdiff
