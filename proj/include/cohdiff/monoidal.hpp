// Symmetric monoidal and cartesian plumbing on atoms.
#pragma once

#include "cohdiff/arrow.hpp"

namespace cohdiff {

Arrow sym();               // (a,b) -> (b,a)
Arrow assoc();             // ((a,b),c) -> (a,(b,c))
Arrow assoc_inv();         // (a,(b,c)) -> ((a,b),c)
Arrow lunit();             // (*,a) -> a
Arrow lunit_inv();         // a -> (*,a)
Arrow runit();             // (a,*) -> a
Arrow runit_inv();         // a -> (a,*)
Arrow sym23();             // ((a,b),(c,d)) -> ((a,c),(b,d))
Arrow proj(int i);         // X0 & X1 -> Xi, (i,a) -> a
Arrow inj(int i);          // a -> (i,a)

}  // namespace cohdiff
