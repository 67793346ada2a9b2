#pragma once

#include <string>

#include "stab/term.hpp"
#include "stab/type.hpp"

namespace stab {

// Surface grammar:
//   term ::= '\' ident+ '.' term
//          | 'if' term 'then' term 'else' term
//          | atom+                         (application, left-associative)
//   atom ::= ident | '0' | '1' | '(' term ')'
// Identifiers are [A-Za-z_][A-Za-z0-9_']* with an optional '#' digit suffix
// (the shape fresh names take).  A unicode lambda is accepted for '\'.
Term parse_term(const std::string& src);

// Type syntax: 'B', lowercase type variables, '->' (right-assoc), '!' prefix,
// 'forall a. A', parentheses.
Type parse_type(const std::string& src);

}  // namespace stab
