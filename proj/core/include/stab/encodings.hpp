#pragma once

#include <cstdint>
#include <vector>

#include "stab/builders.hpp"
#include "stab/derivation.hpp"

namespace stab::enc {

struct Encoded {
  Term term;
  Deriv deriv;
};

// Indexed data types:
//   N_i = forall a. !^i (a -> a) -> a -> a
//   S_i = forall a. !^i (B -> a -> a) -> a -> a
Type nat_type(int i);
Type str_type(int i);
Type bool_pair();  // B (x) B

// Church numeral n at N_i (degree-0 derivation).
Encoded church(uint64_t n, int i = 1);

// suc : N_i -> N_{i+1}
Encoded suc_term(int i);
// add : N_i -> N_j -> N_{max(i,j)+1}
Encoded add_term(int i, int j);
// mul : N_i -> !^i N_j -> N_{i+j}
Encoded mul_term(int i, int j);

struct PolySpec {
  std::vector<uint64_t> coeffs;  // coeffs[k] multiplies n^k
  int degree() const;
  uint64_t eval(uint64_t n) const;
};

// P : !^{deg} N -> N_{2 deg + 1}, derivation degree = deg.
Encoded poly_term(const PolySpec& p);
// Same, with the leading monomial padded so the effective degree is at least
// min_degree (zero coefficients are kept definable).
Encoded poly_term_min(const PolySpec& p, int min_degree);

// \c z. c b0 (c b1 (... z)) at S_i (degree-0 derivation).
Encoded bool_string(const std::vector<int>& bits, int i = 1);
// len : S_i -> N_i
Encoded len_term(int i = 1);

Encoded and_term();  // B -> B -> B
Encoded or_term();
Encoded not_term();
// alpha : B2 -> B2 -> B2 -> B2, typable without any modality.
Encoded alpha3_term();

// The alpha combinator over derivations with a shared (additive) context:
//   alpha(A, m1, m2) = A ; alpha(R, ...) = R
//   alpha(and, m1, m2) = m1 and m2 ; alpha(or, ...) = m1 or m2
// acting on the second component of kind pairs.
Deriv alpha_d(Deriv m0, Deriv m1, Deriv m2, FreshGen& fg);

// term-level macros (no derivations)
Term and_m(Term a, Term b);
Term or_m(Term a, Term b);
Term not_m(Term a);
Term tuple_m(const std::vector<Term>& comps);
Term proj_m(Term pair, int which);

}  // namespace stab::enc
