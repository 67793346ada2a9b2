#pragma once

#include <utility>
#include <vector>

#include "stab/derivation.hpp"

namespace stab::build {

// Combinators assembling derivations rule by rule.  Each checks the side
// conditions it needs and throws stab::Error when misused, so a finished
// construction validates by construction.

Deriv ax(const std::string& x, const Type& a);  // a linear
Deriv blit(int bit);

Deriv weaken(Deriv d, const std::string& x, const Type& a);  // (w), a linear
// (w) followed by unary (m) lifts, so assumptions of any bang depth can be
// introduced unused.
Deriv weaken_any(Deriv d, const std::string& x, const Type& sigma);

// LollyI discharging x (which must be assumed in d's context).
Deriv lam_(Deriv d, const std::string& x);
Deriv app_(Deriv f, Deriv a);  // LollyE

// BE; premises are first padded to the union context.
Deriv if3(Deriv test, Deriv then0, Deriv else1);

Deriv promote(Deriv d);  // sp
// (m): merge assumptions xs (same type sigma) into target x:!sigma.
Deriv merge(Deriv d, const std::vector<std::string>& xs, const std::string& x);
// Unary (m) in place: x:sigma becomes x:!sigma.
Deriv lift(Deriv d, const std::string& x);

Deriv gen(Deriv d, const std::string& alpha);   // ForallI
Deriv inst(Deriv d, const Type& a);             // ForallE, a linear

// Pad every derivation to the union of all contexts (types must agree on
// shared variables); used for additive sharing at BE.
std::vector<Deriv> equalize(std::vector<Deriv> ds);

// --- tensor sugar, macro-expanded into plain lambda terms ---------------
// <M1,...,Mk>            = \p. p M1 ... Mk
// tensor(s1,...,sk)      = forall a. (s1 -> ... -> sk -> a) -> a
// let z be (x1..xk) in N = z (\x1...xk. N)

Type tensor(const std::vector<Type>& comps);

// Multiplicative pair/tuple intro; component contexts must be disjoint.
Deriv tuple(std::vector<Deriv> comps, FreshGen& fg);

// Tuple elimination; missing binds are weakened into the body automatically.
Deriv letp(Deriv scrutinee, const std::vector<std::pair<std::string, Type>>& binds,
           Deriv body);

Deriv proj(Deriv pair, int which);  // 1 or 2, for binary tensors

// \z. fs[0](fs[1](... fs[n-1](z)))  -- n-ary composition of one-argumentماps
Deriv compose_chain(std::vector<Deriv> fs, FreshGen& fg);

// Boolean connectives as term macros over derivations (additive contexts):
//   and: if M then (if N then 0 else 1) else 1
//   or:  if M then 0 else (if N then 0 else 1)
//   not: if M then 1 else 0
Deriv and_(Deriv m, Deriv n);
Deriv or_(Deriv m, Deriv n);
Deriv not_(Deriv m);

Deriv rename_free(const Deriv& d, const std::string& from, const std::string& to);
Deriv freshen_free(const Deriv& d, FreshGen& fg,
                   std::map<std::string, std::string>* renaming = nullptr);

}  // namespace stab::build
