#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace stab {

// Terms of the boolean lambda calculus:
//   M ::= x | 0 | 1 | \x. M | M M | if M then M else M
// The literal 0 denotes "true", 1 denotes "false".
// Nodes are immutable and shared; `size` is cached at construction.

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

enum class TermKind { Var, Bool, Lam, App, If };

struct TermNode {
  TermKind kind;
  std::string name;   // Var name or Lam binder
  int bit = 0;        // Bool: 0 or 1
  Term a, b, c;       // Lam: a=body; App: a=fun, b=arg; If: a=test, b=then, c=else
  uint64_t size_ = 1;
};

Term var(const std::string& name);
Term lit(int bit);
Term lam(const std::string& binder, Term body);
Term app(Term fun, Term arg);
Term app(Term fun, const std::vector<Term>& args);
Term if_(Term test, Term then0, Term else1);

uint64_t size(const Term& t);
std::set<std::string> free_vars(const Term& t);
bool is_closed(const Term& t);

uint64_t count_occurrences(const std::string& x, const Term& t);
// Occurrence count where the three branches of a conditional contribute
// their maximum instead of their sum.
uint64_t sliced_occurrences(const std::string& x, const Term& t);

/// Deterministic fresh-name source: base "x" yields "x#1", "x#2", ...
/// An existing "#k" suffix on the base is stripped first.
class FreshGen {
 public:
  std::string fresh(const std::string& base);
  uint64_t next = 1;
};

// Capture-free substitution of n for every free occurrence of x in t.
// Binders are renamed with `fresh` only when capture would occur; when no
// generator is supplied a collision-free suffix is derived from both terms.
Term subst(const Term& t, const Term& n, const std::string& x, FreshGen* fresh = nullptr);

bool alpha_equal(const Term& s, const Term& t);

// Child selectors addressing a subterm from the root.
enum class Sel { Fun, Arg, Body, Test, Then, Else };
using RedexPosition = std::vector<Sel>;

Term subterm_at(const Term& t, const RedexPosition& p);
bool is_redex(const Term& t);

// One beta/delta step at the addressed redex; throws NotARedex otherwise.
Term step(const Term& t, const RedexPosition& p, FreshGen* fresh = nullptr);

std::optional<RedexPosition> leftmost_redex(const Term& t);

struct NormalizeResult {
  Term term;
  uint64_t steps = 0;
  bool finished = true;  // false: fuel ran out, `term` is the last reached
};

constexpr uint64_t kDefaultFuel = 1000000;

// Leftmost-outermost reduction to normal form, at most `fuel` steps.
NormalizeResult normalize(const Term& t, uint64_t fuel = kDefaultFuel);

// As normalize, but throws FuelExhausted instead of returning partial results.
Term normalize_or_throw(const Term& t, uint64_t fuel = kDefaultFuel);

std::string to_string(const Term& t);

// Head-spine view: t == app(head, spine...), head not an App.
struct SpineView {
  Term head;
  std::vector<Term> spine;
};
SpineView spine_view(const Term& t);

}  // namespace stab
