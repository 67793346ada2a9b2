#include "stab/system_f.hpp"

#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "stab/errors.hpp"

namespace stab {

FTerm fvar(const std::string& name) {
  auto n = std::make_shared<FTermNode>();
  n->kind = FTermKind::Var;
  n->name = name;
  return n;
}

FTerm flam(const std::string& binder, FTerm body) {
  auto n = std::make_shared<FTermNode>();
  n->kind = FTermKind::Lam;
  n->name = binder;
  n->a = std::move(body);
  return n;
}

FTerm fapp(FTerm fun, FTerm arg) {
  auto n = std::make_shared<FTermNode>();
  n->kind = FTermKind::App;
  n->a = std::move(fun);
  n->b = std::move(arg);
  return n;
}

FType ftvar(const std::string& name) {
  auto n = std::make_shared<FTypeNode>();
  n->kind = FTypeKind::Var;
  n->name = name;
  return n;
}

FType farrow(FType dom, FType cod) {
  auto n = std::make_shared<FTypeNode>();
  n->kind = FTypeKind::Arrow;
  n->a = std::move(dom);
  n->b = std::move(cod);
  return n;
}

FType fforall(const std::string& binder, FType body) {
  auto n = std::make_shared<FTypeNode>();
  n->kind = FTypeKind::Forall;
  n->name = binder;
  n->a = std::move(body);
  return n;
}

static void f_free(const FTerm& t, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (t->kind) {
    case FTermKind::Var:
      if (!bound.count(t->name)) out.insert(t->name);
      return;
    case FTermKind::Lam: {
      bool added = bound.insert(t->name).second;
      f_free(t->a, bound, out);
      if (added) bound.erase(t->name);
      return;
    }
    case FTermKind::App:
      f_free(t->a, bound, out);
      f_free(t->b, bound, out);
      return;
  }
}

static std::set<std::string> f_free_vars(const FTerm& t) {
  std::set<std::string> bound, out;
  f_free(t, bound, out);
  return out;
}

static FTerm f_subst(const FTerm& t, const FTerm& n, const std::string& x,
                     const std::set<std::string>& avoid, uint64_t& counter) {
  switch (t->kind) {
    case FTermKind::Var:
      return t->name == x ? n : t;
    case FTermKind::Lam: {
      if (t->name == x) return t;
      if (avoid.count(t->name)) {
        std::string y = t->name + "~" + std::to_string(counter++);
        FTerm body = f_subst(t->a, fvar(y), t->name, {}, counter);
        return flam(y, f_subst(body, n, x, avoid, counter));
      }
      return flam(t->name, f_subst(t->a, n, x, avoid, counter));
    }
    case FTermKind::App:
      return fapp(f_subst(t->a, n, x, avoid, counter), f_subst(t->b, n, x, avoid, counter));
  }
  return t;
}

static bool f_alpha(const FTerm& s, const FTerm& t, std::map<std::string, std::string>& sm,
                    std::map<std::string, std::string>& tm, uint64_t& depth) {
  if (s->kind != t->kind) return false;
  switch (s->kind) {
    case FTermKind::Var: {
      auto i = sm.find(s->name), j = tm.find(t->name);
      if ((i == sm.end()) != (j == tm.end())) return false;
      if (i == sm.end()) return s->name == t->name;
      return i->second == j->second;
    }
    case FTermKind::Lam: {
      std::string tag = "@" + std::to_string(depth++);
      auto si = sm.find(s->name), ti = tm.find(t->name);
      std::string so = si != sm.end() ? si->second : "";
      std::string to = ti != tm.end() ? ti->second : "";
      sm[s->name] = tag;
      tm[t->name] = tag;
      bool ok = f_alpha(s->a, t->a, sm, tm, depth);
      if (!so.empty()) sm[s->name] = so; else sm.erase(s->name);
      if (!to.empty()) tm[t->name] = to; else tm.erase(t->name);
      return ok;
    }
    case FTermKind::App:
      return f_alpha(s->a, t->a, sm, tm, depth) && f_alpha(s->b, t->b, sm, tm, depth);
  }
  return false;
}

bool alpha_equal(const FTerm& s, const FTerm& t) {
  std::map<std::string, std::string> sm, tm;
  uint64_t depth = 0;
  return f_alpha(s, t, sm, tm, depth);
}

std::string to_string(const FTerm& t) {
  std::ostringstream os;
  std::function<void(const FTerm&, bool)> go = [&](const FTerm& u, bool atom) {
    switch (u->kind) {
      case FTermKind::Var:
        os << u->name;
        return;
      case FTermKind::Lam:
        if (atom) os << '(';
        os << '\\' << u->name << ". ";
        go(u->a, false);
        if (atom) os << ')';
        return;
      case FTermKind::App: {
        if (atom) os << '(';
        go(u->a, u->a->kind == FTermKind::Lam);
        os << ' ';
        go(u->b, u->b->kind != FTermKind::Var);
        if (atom) os << ')';
        return;
      }
    }
  };
  go(t, false);
  return os.str();
}

std::string to_string(const FType& t) {
  std::ostringstream os;
  std::function<void(const FType&, bool)> go = [&](const FType& u, bool atom) {
    switch (u->kind) {
      case FTypeKind::Var:
        os << u->name;
        return;
      case FTypeKind::Arrow:
        if (atom) os << '(';
        go(u->a, true);
        os << " => ";
        go(u->b, false);
        if (atom) os << ')';
        return;
      case FTypeKind::Forall:
        if (atom) os << '(';
        os << "forall " << u->name << ". ";
        go(u->a, false);
        if (atom) os << ')';
        return;
    }
  };
  go(t, false);
  return os.str();
}

FType translate_type(const Type& t) {
  switch (t->kind) {
    case TypeKind::Ground:
      return fforall("a", farrow(ftvar("a"), farrow(ftvar("a"), ftvar("a"))));
    case TypeKind::TVar:
      return ftvar(t->name);
    case TypeKind::Arrow:
      return farrow(translate_type(t->a), translate_type(t->b));
    case TypeKind::Forall:
      return fforall(t->name, translate_type(t->a));
    case TypeKind::Bang:
      return translate_type(t->a);
  }
  throw Error("translate_type: unreachable");
}

FTerm translate_term(const Term& t) {
  switch (t->kind) {
    case TermKind::Var:
      return fvar(t->name);
    case TermKind::Bool:
      // 0 |-> \x y. x ; 1 |-> \x y. y
      return t->bit == 0 ? flam("x", flam("y", fvar("x")))
                         : flam("x", flam("y", fvar("y")));
    case TermKind::Lam:
      return flam(t->name, translate_term(t->a));
    case TermKind::App:
      return fapp(translate_term(t->a), translate_term(t->b));
    case TermKind::If:
      return fapp(fapp(translate_term(t->a), translate_term(t->b)), translate_term(t->c));
  }
  throw Error("translate_term: unreachable");
}

static bool f_find_leftmost(const FTerm& t, RedexPosition& acc) {
  if (t->kind == FTermKind::App && t->a->kind == FTermKind::Lam) return true;
  switch (t->kind) {
    case FTermKind::Var:
      return false;
    case FTermKind::Lam:
      acc.push_back(Sel::Body);
      if (f_find_leftmost(t->a, acc)) return true;
      acc.pop_back();
      return false;
    case FTermKind::App:
      acc.push_back(Sel::Fun);
      if (f_find_leftmost(t->a, acc)) return true;
      acc.pop_back();
      acc.push_back(Sel::Arg);
      if (f_find_leftmost(t->b, acc)) return true;
      acc.pop_back();
      return false;
  }
  return false;
}

std::optional<RedexPosition> f_leftmost_redex(const FTerm& t) {
  RedexPosition p;
  if (f_find_leftmost(t, p)) return p;
  return std::nullopt;
}

static FTerm f_step_rec(const FTerm& t, const RedexPosition& p, size_t i, uint64_t& counter) {
  if (i == p.size()) {
    if (t->kind != FTermKind::App || t->a->kind != FTermKind::Lam)
      throw NotARedex("no beta redex at position");
    return f_subst(t->a->a, t->b, t->a->name, f_free_vars(t->b), counter);
  }
  switch (p[i]) {
    case Sel::Fun:
      if (t->kind != FTermKind::App) throw NotARedex("bad position");
      return fapp(f_step_rec(t->a, p, i + 1, counter), t->b);
    case Sel::Arg:
      if (t->kind != FTermKind::App) throw NotARedex("bad position");
      return fapp(t->a, f_step_rec(t->b, p, i + 1, counter));
    case Sel::Body:
      if (t->kind != FTermKind::Lam) throw NotARedex("bad position");
      return flam(t->name, f_step_rec(t->a, p, i + 1, counter));
    default:
      throw NotARedex("bad selector for a pure lambda term");
  }
}

FTerm f_step(const FTerm& t, const RedexPosition& p) {
  uint64_t counter = 0;
  return f_step_rec(t, p, 0, counter);
}

FTerm f_normalize(const FTerm& t, uint64_t fuel) {
  FTerm cur = t;
  for (uint64_t i = 0; i < fuel; ++i) {
    auto p = f_leftmost_redex(cur);
    if (!p) return cur;
    cur = f_step(cur, *p);
  }
  if (!f_leftmost_redex(cur)) return cur;
  throw FuelExhausted("f_normalize: fuel exhausted");
}

// Map a source position to the image position: the translation is
// structure-preserving except for conditionals, which become two nested
// applications  (if a then b else c)* = ((a*) (b*)) (c*).
static RedexPosition map_position(const Term& t, const RedexPosition& p) {
  RedexPosition out;
  Term cur = t;
  for (Sel s : p) {
    switch (cur->kind) {
      case TermKind::If:
        if (s == Sel::Test) {
          out.push_back(Sel::Fun);
          out.push_back(Sel::Fun);
          cur = cur->a;
        } else if (s == Sel::Then) {
          out.push_back(Sel::Fun);
          out.push_back(Sel::Arg);
          cur = cur->b;
        } else if (s == Sel::Else) {
          out.push_back(Sel::Arg);
          cur = cur->c;
        } else {
          throw Error("map_position: selector does not match term");
        }
        break;
      case TermKind::App:
        out.push_back(s);
        cur = s == Sel::Fun ? cur->a : cur->b;
        break;
      case TermKind::Lam:
        out.push_back(Sel::Body);
        cur = cur->a;
        break;
      default:
        throw Error("map_position: selector does not match term");
    }
  }
  return out;
}

uint64_t check_simulation(const Term& t, const RedexPosition& at) {
  Term redex = subterm_at(t, at);
  if (!is_redex(redex)) throw NotARedex("check_simulation: no redex at position");
  Term reduct = step(t, at);
  FTerm image = translate_term(t);
  FTerm target = translate_term(reduct);
  RedexPosition fp = map_position(t, at);
  FTerm cur = image;
  uint64_t k;
  if (redex->kind == TermKind::App) {
    cur = f_step(cur, fp);
    k = 1;
  } else {
    // (if b then M else N)* = (b* M*) N*: first contract b* M*, then the rest
    RedexPosition inner = fp;
    inner.push_back(Sel::Fun);
    cur = f_step(cur, inner);
    cur = f_step(cur, fp);
    k = 2;
  }
  if (!alpha_equal(cur, target))
    throw SimulationFailure("translated reduct does not match after " + std::to_string(k) +
                            " steps");
  return k;
}

}  // namespace stab
