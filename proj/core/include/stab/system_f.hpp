#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stab/term.hpp"
#include "stab/type.hpp"

namespace stab {

// Target of the forgetful translation: pure lambda terms and System F types.

struct FTermNode;
using FTerm = std::shared_ptr<const FTermNode>;

enum class FTermKind { Var, Lam, App };

struct FTermNode {
  FTermKind kind;
  std::string name;
  FTerm a, b;  // Lam: a=body; App: a=fun, b=arg
};

FTerm fvar(const std::string& name);
FTerm flam(const std::string& binder, FTerm body);
FTerm fapp(FTerm fun, FTerm arg);

struct FTypeNode;
using FType = std::shared_ptr<const FTypeNode>;

enum class FTypeKind { Var, Arrow, Forall };

struct FTypeNode {
  FTypeKind kind;
  std::string name;
  FType a, b;
};

FType ftvar(const std::string& name);
FType farrow(FType dom, FType cod);
FType fforall(const std::string& binder, FType body);

bool alpha_equal(const FTerm& s, const FTerm& t);
std::string to_string(const FTerm& t);
std::string to_string(const FType& t);

// The forgetful map: bangs erased, B becomes forall a. a => a => a, booleans
// become Church booleans, conditionals become application.
FType translate_type(const Type& t);
FTerm translate_term(const Term& t);

std::optional<RedexPosition> f_leftmost_redex(const FTerm& t);
FTerm f_step(const FTerm& t, const RedexPosition& p);
FTerm f_normalize(const FTerm& t, uint64_t fuel = kDefaultFuel);

// For a redex of t at `at`, the number k of beta steps the translation takes
// to simulate it: 1 for beta redexes, 2 for delta redexes.  Verified by
// stepping the image at the mapped position; throws SimulationFailure if the
// diagram does not commute.
uint64_t check_simulation(const Term& t, const RedexPosition& at);

}  // namespace stab
