#pragma once

#include <memory>
#include <set>
#include <string>

namespace stab {

// STA_B types.  Linear types:  A ::= B | a | sigma -> A | forall a. A
// Types:                   sigma ::= A | !sigma
// Arrow codomains and forall bodies are linear by construction.

struct TypeNode;
using Type = std::shared_ptr<const TypeNode>;

enum class TypeKind { Ground, TVar, Arrow, Forall, Bang };

struct TypeNode {
  TypeKind kind;
  std::string name;  // TVar / Forall binder
  Type a, b;         // Arrow: a=domain, b=codomain; Forall: a=body; Bang: a=inner
};

Type ground();                           // B
Type tvar(const std::string& name);
Type arrow(Type domain, Type codomain);  // codomain must be linear
Type forall(const std::string& binder, Type body);  // body must be linear
Type bang(Type inner);
Type bang_n(Type inner, int n);

bool is_linear(const Type& t);
int bang_depth(const Type& t);
Type strip_bangs(const Type& t);

std::set<std::string> free_tyvars(const Type& t);

// Capture-free substitution of the linear type a for tyvar alpha.
Type subst_type(const Type& t, const Type& a, const std::string& alpha);

bool type_equal(const Type& s, const Type& t);  // alpha-equivalence

std::string to_string(const Type& t);

}  // namespace stab
