#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stab/term.hpp"
#include "stab/type.hpp"

namespace stab {

// A typing context: variable -> type, all variables distinct.  std::map keeps
// the serialized form sorted by name.
using Ctx = std::map<std::string, Type>;

bool ctx_equal(const Ctx& a, const Ctx& b);
bool ctx_disjoint(const Ctx& a, const Ctx& b);
Ctx ctx_union(const Ctx& a, const Ctx& b);  // throws on clash

enum class Rule { Ax, B0I, B1I, W, LollyI, LollyE, M, Sp, ForallI, ForallE, BE };

const char* rule_name(Rule r);
Rule rule_from_name(const std::string& s);

// Explicit typing derivations.  Trees are immutable and shared.
struct DerivNode;
using Deriv = std::shared_ptr<const DerivNode>;

struct DerivNode {
  Rule rule;
  Ctx ctx;
  Term subject;
  Type type;
  std::vector<Deriv> premises;

  // Rule-specific payload.
  std::string w_var;                  // W: added assumption
  Type w_type;                        // W
  std::vector<std::string> m_merged;  // M: merged variables, in order
  std::string m_target;               // M
  Type inst_type;                     // ForallE: instantiating linear type
  std::string gen_var;                // ForallI: generalized tyvar
};

Deriv make_deriv(DerivNode n);

// Rule-by-rule validation of every node.  Throws RuleViolation naming the
// offending rule and side condition.
void validate(const Deriv& d);
bool try_validate(const Deriv& d, std::string* why = nullptr);

// Maximal nesting of (sp) applications.
uint64_t degree(const Deriv& d);

// max(r, 1) where r is the maximal number of merged variables of an (m) node
// occurring free in its premise subject.
uint64_t rank(const Deriv& d);

// The space weight d(Pi, r):
//   Ax, B0I, B1I: 1;  LollyI: +1;  sp: *r;  LollyE: sum + 1;
//   BE: max of the three premises + 1;  every other rule passes through.
uint64_t space_weight(const Deriv& d, uint64_t r);

// Height of variable x in d (the induction measure of the substitution
// lemma); x must occur in the conclusion context.
uint64_t var_height(const Deriv& d, const std::string& x);

// Structured tree serialization: one JSON object per node with fields
// rule / ctx / term / type / payload / premises.
std::string deriv_to_json(const Deriv& d, int indent = -1);
Deriv deriv_from_json(const std::string& text);

std::string to_string(const Ctx& c);

}  // namespace stab
