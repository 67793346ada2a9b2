#include "stab/type.hpp"

#include <cassert>
#include <map>
#include <sstream>

#include "stab/errors.hpp"

namespace stab {

Type ground() {
  static Type b = [] {
    auto n = std::make_shared<TypeNode>();
    n->kind = TypeKind::Ground;
    return Type(n);
  }();
  return b;
}

Type tvar(const std::string& name) {
  assert(!name.empty());
  auto n = std::make_shared<TypeNode>();
  n->kind = TypeKind::TVar;
  n->name = name;
  return n;
}

Type arrow(Type domain, Type codomain) {
  if (!is_linear(codomain)) throw Error("arrow codomain must be linear: " + to_string(codomain));
  auto n = std::make_shared<TypeNode>();
  n->kind = TypeKind::Arrow;
  n->a = std::move(domain);
  n->b = std::move(codomain);
  return n;
}

Type forall(const std::string& binder, Type body) {
  if (!is_linear(body)) throw Error("forall body must be linear: " + to_string(body));
  auto n = std::make_shared<TypeNode>();
  n->kind = TypeKind::Forall;
  n->name = binder;
  n->a = std::move(body);
  return n;
}

Type bang(Type inner) {
  auto n = std::make_shared<TypeNode>();
  n->kind = TypeKind::Bang;
  n->a = std::move(inner);
  return n;
}

Type bang_n(Type inner, int n) {
  Type t = std::move(inner);
  for (int i = 0; i < n; ++i) t = bang(t);
  return t;
}

bool is_linear(const Type& t) { return t->kind != TypeKind::Bang; }

int bang_depth(const Type& t) {
  int d = 0;
  const TypeNode* cur = t.get();
  while (cur->kind == TypeKind::Bang) {
    ++d;
    cur = cur->a.get();
  }
  return d;
}

Type strip_bangs(const Type& t) {
  Type cur = t;
  while (cur->kind == TypeKind::Bang) cur = cur->a;
  return cur;
}

static void ftv_rec(const Type& t, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (t->kind) {
    case TypeKind::Ground:
      return;
    case TypeKind::TVar:
      if (!bound.count(t->name)) out.insert(t->name);
      return;
    case TypeKind::Arrow:
      ftv_rec(t->a, bound, out);
      ftv_rec(t->b, bound, out);
      return;
    case TypeKind::Forall: {
      bool added = bound.insert(t->name).second;
      ftv_rec(t->a, bound, out);
      if (added) bound.erase(t->name);
      return;
    }
    case TypeKind::Bang:
      ftv_rec(t->a, bound, out);
      return;
  }
}

std::set<std::string> free_tyvars(const Type& t) {
  std::set<std::string> bound, out;
  ftv_rec(t, bound, out);
  return out;
}

static Type subst_rec(const Type& t, const Type& a, const std::string& alpha,
                      const std::set<std::string>& avoid, int& counter) {
  switch (t->kind) {
    case TypeKind::Ground:
      return t;
    case TypeKind::TVar:
      return t->name == alpha ? a : t;
    case TypeKind::Arrow:
      return arrow(subst_rec(t->a, a, alpha, avoid, counter),
                   subst_rec(t->b, a, alpha, avoid, counter));
    case TypeKind::Forall: {
      if (t->name == alpha) return t;
      if (avoid.count(t->name)) {
        std::string fresh;
        do {
          fresh = t->name + "_" + std::to_string(counter++);
        } while (avoid.count(fresh));
        Type body = subst_rec(t->a, tvar(fresh), t->name, {}, counter);
        return forall(fresh, subst_rec(body, a, alpha, avoid, counter));
      }
      return forall(t->name, subst_rec(t->a, a, alpha, avoid, counter));
    }
    case TypeKind::Bang:
      return bang(subst_rec(t->a, a, alpha, avoid, counter));
  }
  return t;
}

Type subst_type(const Type& t, const Type& a, const std::string& alpha) {
  int counter = 0;
  return subst_rec(t, a, alpha, free_tyvars(a), counter);
}

static bool eq_rec(const Type& s, const Type& t, std::map<std::string, std::string>& sm,
                   std::map<std::string, std::string>& tm, int& depth) {
  if (s->kind != t->kind) return false;
  switch (s->kind) {
    case TypeKind::Ground:
      return true;
    case TypeKind::TVar: {
      auto i = sm.find(s->name), j = tm.find(t->name);
      if ((i == sm.end()) != (j == tm.end())) return false;
      if (i == sm.end()) return s->name == t->name;
      return i->second == j->second;
    }
    case TypeKind::Arrow:
      return eq_rec(s->a, t->a, sm, tm, depth) && eq_rec(s->b, t->b, sm, tm, depth);
    case TypeKind::Forall: {
      std::string tag = "@" + std::to_string(depth++);
      auto si = sm.find(s->name), ti = tm.find(t->name);
      std::string so = si != sm.end() ? si->second : "";
      std::string to = ti != tm.end() ? ti->second : "";
      sm[s->name] = tag;
      tm[t->name] = tag;
      bool ok = eq_rec(s->a, t->a, sm, tm, depth);
      if (!so.empty()) sm[s->name] = so; else sm.erase(s->name);
      if (!to.empty()) tm[t->name] = to; else tm.erase(t->name);
      return ok;
    }
    case TypeKind::Bang:
      return eq_rec(s->a, t->a, sm, tm, depth);
  }
  return false;
}

bool type_equal(const Type& s, const Type& t) {
  std::map<std::string, std::string> sm, tm;
  int depth = 0;
  return eq_rec(s, t, sm, tm, depth);
}

// Text syntax: B, tyvars, "->" right-associative, "!" prefix, "forall a. A".
static void print(const Type& t, std::ostream& os, bool atom_pos) {
  switch (t->kind) {
    case TypeKind::Ground:
      os << 'B';
      return;
    case TypeKind::TVar:
      os << t->name;
      return;
    case TypeKind::Arrow: {
      if (atom_pos) os << '(';
      bool dom_paren = t->a->kind == TypeKind::Arrow || t->a->kind == TypeKind::Forall;
      if (dom_paren) os << '(';
      print(t->a, os, false);
      if (dom_paren) os << ')';
      os << " -> ";
      print(t->b, os, false);
      if (atom_pos) os << ')';
      return;
    }
    case TypeKind::Forall:
      if (atom_pos) os << '(';
      os << "forall " << t->name << ". ";
      print(t->a, os, false);
      if (atom_pos) os << ')';
      return;
    case TypeKind::Bang:
      os << '!';
      print(t->a, os, true);
      return;
  }
}

std::string to_string(const Type& t) {
  std::ostringstream os;
  print(t, os, false);
  return os.str();
}

}  // namespace stab
