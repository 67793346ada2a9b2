#pragma once

#include "stab/builders.hpp"
#include "stab/derivation.hpp"

namespace stab {

// Rewrites on derivations: commuting and deleting rules or inserting
// weakenings, keeping the conclusion judgment (up to recorded context junk).

// Remove an assumption not free in the subject.
Deriv strip_unused(const Deriv& d, const std::string& x);
// Remove every assumption not free in the subject; records what was dropped.
Deriv strip_all_unused(const Deriv& d, Ctx* dropped = nullptr);

// Rewrite a derivation of G |- \x.M : s -> A so it ends with LollyI.
Deriv expose_arrow_intro(const Deriv& d, FreshGen& fg);
// Rewrite a derivation of G |- M : forall a. A so it ends with ForallI.
Deriv expose_forall_intro(const Deriv& d, FreshGen& fg);

// For d proving D |- N : !mu, produce `inner` proving D° |- N : mu such that
// promote(inner) plus re-weakening `dropped` recovers d's conclusion.
struct SpCore {
  Deriv inner;
  Ctx dropped;
};
SpCore expose_sp(const Deriv& d, FreshGen& fg);

// Substitute the free type variable alpha by the linear type a everywhere.
Deriv instantiate_tyvar(const Deriv& d, const std::string& alpha, const Type& a);

// The substitution lemma, constructively: from main proving G, x:mu |- M : s
// and arg proving D |- N : mu (G # D), build G, D |- M[N/x] : s.
// For r >= rank(main): space_weight(result, r) <= space_weight(main, r) +
// space_weight(arg, r).
Deriv subst_derivation(const Deriv& main, const Deriv& arg, const std::string& x,
                       FreshGen* fg = nullptr);

// Subject reduction: a derivation of the reduct at the addressed redex, with
// the same conclusion context and type.
Deriv subject_reduce(const Deriv& d, const RedexPosition& at, FreshGen* fg = nullptr);

}  // namespace stab
