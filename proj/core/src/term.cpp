#include "stab/term.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <sstream>

#include "stab/errors.hpp"

namespace stab {

Term var(const std::string& name) {
  assert(!name.empty());
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Var;
  n->name = name;
  n->size_ = 1;
  return n;
}

Term lit(int bit) {
  assert(bit == 0 || bit == 1);
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Bool;
  n->bit = bit;
  n->size_ = 1;
  return n;
}

Term lam(const std::string& binder, Term body) {
  assert(!binder.empty() && body);
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Lam;
  n->name = binder;
  n->size_ = body->size_ + 1;
  n->a = std::move(body);
  return n;
}

Term app(Term fun, Term arg) {
  assert(fun && arg);
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::App;
  n->size_ = fun->size_ + arg->size_;
  n->a = std::move(fun);
  n->b = std::move(arg);
  return n;
}

Term app(Term fun, const std::vector<Term>& args) {
  Term t = std::move(fun);
  for (const auto& a : args) t = app(t, a);
  return t;
}

Term if_(Term test, Term then0, Term else1) {
  assert(test && then0 && else1);
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::If;
  n->size_ = test->size_ + then0->size_ + else1->size_ + 1;
  n->a = std::move(test);
  n->b = std::move(then0);
  n->c = std::move(else1);
  return n;
}

uint64_t size(const Term& t) { return t->size_; }

static void collect_free(const Term& t, std::set<std::string>& bound,
                         std::set<std::string>& out) {
  switch (t->kind) {
    case TermKind::Var:
      if (!bound.count(t->name)) out.insert(t->name);
      break;
    case TermKind::Bool:
      break;
    case TermKind::Lam: {
      bool added = bound.insert(t->name).second;
      collect_free(t->a, bound, out);
      if (added) bound.erase(t->name);
      break;
    }
    case TermKind::App:
      collect_free(t->a, bound, out);
      collect_free(t->b, bound, out);
      break;
    case TermKind::If:
      collect_free(t->a, bound, out);
      collect_free(t->b, bound, out);
      collect_free(t->c, bound, out);
      break;
  }
}

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> bound, out;
  collect_free(t, bound, out);
  return out;
}

bool is_closed(const Term& t) { return free_vars(t).empty(); }

uint64_t count_occurrences(const std::string& x, const Term& t) {
  switch (t->kind) {
    case TermKind::Var:
      return t->name == x ? 1 : 0;
    case TermKind::Bool:
      return 0;
    case TermKind::Lam:
      return t->name == x ? 0 : count_occurrences(x, t->a);
    case TermKind::App:
      return count_occurrences(x, t->a) + count_occurrences(x, t->b);
    case TermKind::If:
      return count_occurrences(x, t->a) + count_occurrences(x, t->b) +
             count_occurrences(x, t->c);
  }
  return 0;
}

uint64_t sliced_occurrences(const std::string& x, const Term& t) {
  switch (t->kind) {
    case TermKind::Var:
      return t->name == x ? 1 : 0;
    case TermKind::Bool:
      return 0;
    case TermKind::Lam:
      return t->name == x ? 0 : sliced_occurrences(x, t->a);
    case TermKind::App:
      return sliced_occurrences(x, t->a) + sliced_occurrences(x, t->b);
    case TermKind::If:
      return std::max({sliced_occurrences(x, t->a), sliced_occurrences(x, t->b),
                       sliced_occurrences(x, t->c)});
  }
  return 0;
}

static std::string base_of(const std::string& name) {
  auto pos = name.rfind('#');
  if (pos == std::string::npos || pos == 0) return name;
  for (size_t i = pos + 1; i < name.size(); ++i)
    if (!isdigit(static_cast<unsigned char>(name[i]))) return name;
  if (pos + 1 == name.size()) return name;
  return name.substr(0, pos);
}

std::string FreshGen::fresh(const std::string& base) {
  return base_of(base) + "#" + std::to_string(next++);
}

// Largest "#k" suffix appearing anywhere in t, so ad-hoc fresh names can
// avoid every variable of both terms involved in a substitution.
static uint64_t max_suffix(const Term& t) {
  uint64_t m = 0;
  std::function<void(const Term&)> go = [&](const Term& u) {
    auto scan = [&](const std::string& nm) {
      auto pos = nm.rfind('#');
      if (pos == std::string::npos || pos + 1 >= nm.size()) return;
      uint64_t v = 0;
      for (size_t i = pos + 1; i < nm.size(); ++i) {
        if (!isdigit(static_cast<unsigned char>(nm[i]))) return;
        v = v * 10 + (nm[i] - '0');
      }
      m = std::max(m, v);
    };
    if (u->kind == TermKind::Var || u->kind == TermKind::Lam) scan(u->name);
    if (u->a) go(u->a);
    if (u->b) go(u->b);
    if (u->c) go(u->c);
  };
  go(t);
  return m;
}

static Term subst_rec(const Term& t, const Term& n, const std::string& x,
                      const std::set<std::string>& avoid, FreshGen& fresh) {
  switch (t->kind) {
    case TermKind::Var:
      return t->name == x ? n : t;
    case TermKind::Bool:
      return t;
    case TermKind::Lam: {
      if (t->name == x) return t;  // bound occurrence, untouched
      if (avoid.count(t->name) && count_occurrences(x, t->a) > 0) {
        // binder would capture a free variable of n: rename it first
        std::string y = fresh.fresh(t->name);
        Term body = subst_rec(t->a, var(y), t->name, {}, fresh);
        return lam(y, subst_rec(body, n, x, avoid, fresh));
      }
      return lam(t->name, subst_rec(t->a, n, x, avoid, fresh));
    }
    case TermKind::App:
      return app(subst_rec(t->a, n, x, avoid, fresh),
                 subst_rec(t->b, n, x, avoid, fresh));
    case TermKind::If:
      return if_(subst_rec(t->a, n, x, avoid, fresh),
                 subst_rec(t->b, n, x, avoid, fresh),
                 subst_rec(t->c, n, x, avoid, fresh));
  }
  return t;
}

Term subst(const Term& t, const Term& n, const std::string& x, FreshGen* fresh) {
  FreshGen local;
  if (!fresh) {
    local.next = std::max(max_suffix(t), max_suffix(n)) + 1;
    fresh = &local;
  }
  return subst_rec(t, n, x, free_vars(n), *fresh);
}

static bool alpha_rec(const Term& s, const Term& t,
                      std::map<std::string, std::string>& sm,
                      std::map<std::string, std::string>& tm, uint64_t& depth) {
  if (s->kind != t->kind) return false;
  switch (s->kind) {
    case TermKind::Var: {
      auto i = sm.find(s->name), j = tm.find(t->name);
      if ((i == sm.end()) != (j == tm.end())) return false;
      if (i == sm.end()) return s->name == t->name;  // both free
      return i->second == j->second;
    }
    case TermKind::Bool:
      return s->bit == t->bit;
    case TermKind::Lam: {
      std::string tag = "@" + std::to_string(depth++);
      auto si = sm.find(s->name), ti = tm.find(t->name);
      std::optional<std::string> so, to;
      if (si != sm.end()) so = si->second;
      if (ti != tm.end()) to = ti->second;
      sm[s->name] = tag;
      tm[t->name] = tag;
      bool ok = alpha_rec(s->a, t->a, sm, tm, depth);
      if (so) sm[s->name] = *so; else sm.erase(s->name);
      if (to) tm[t->name] = *to; else tm.erase(t->name);
      return ok;
    }
    case TermKind::App:
      return alpha_rec(s->a, t->a, sm, tm, depth) &&
             alpha_rec(s->b, t->b, sm, tm, depth);
    case TermKind::If:
      return alpha_rec(s->a, t->a, sm, tm, depth) &&
             alpha_rec(s->b, t->b, sm, tm, depth) &&
             alpha_rec(s->c, t->c, sm, tm, depth);
  }
  return false;
}

bool alpha_equal(const Term& s, const Term& t) {
  std::map<std::string, std::string> sm, tm;
  uint64_t depth = 0;
  return alpha_rec(s, t, sm, tm, depth);
}

Term subterm_at(const Term& t, const RedexPosition& p) {
  Term cur = t;
  for (Sel s : p) {
    switch (s) {
      case Sel::Fun:
        if (cur->kind != TermKind::App) throw NotARedex("position does not address a subterm");
        cur = cur->a;
        break;
      case Sel::Arg:
        if (cur->kind != TermKind::App) throw NotARedex("position does not address a subterm");
        cur = cur->b;
        break;
      case Sel::Body:
        if (cur->kind != TermKind::Lam) throw NotARedex("position does not address a subterm");
        cur = cur->a;
        break;
      case Sel::Test:
        if (cur->kind != TermKind::If) throw NotARedex("position does not address a subterm");
        cur = cur->a;
        break;
      case Sel::Then:
        if (cur->kind != TermKind::If) throw NotARedex("position does not address a subterm");
        cur = cur->b;
        break;
      case Sel::Else:
        if (cur->kind != TermKind::If) throw NotARedex("position does not address a subterm");
        cur = cur->c;
        break;
    }
  }
  return cur;
}

bool is_redex(const Term& t) {
  if (t->kind == TermKind::App && t->a->kind == TermKind::Lam) return true;
  if (t->kind == TermKind::If && t->a->kind == TermKind::Bool) return true;
  return false;
}

static Term contract(const Term& t, FreshGen* fresh) {
  if (t->kind == TermKind::App && t->a->kind == TermKind::Lam)
    return subst(t->a->a, t->b, t->a->name, fresh);
  if (t->kind == TermKind::If && t->a->kind == TermKind::Bool)
    return t->a->bit == 0 ? t->b : t->c;
  throw NotARedex("no beta/delta redex at position");
}

static Term step_rec(const Term& t, const RedexPosition& p, size_t i, FreshGen* fresh) {
  if (i == p.size()) return contract(t, fresh);
  switch (p[i]) {
    case Sel::Fun:
      if (t->kind != TermKind::App) throw NotARedex("bad position");
      return app(step_rec(t->a, p, i + 1, fresh), t->b);
    case Sel::Arg:
      if (t->kind != TermKind::App) throw NotARedex("bad position");
      return app(t->a, step_rec(t->b, p, i + 1, fresh));
    case Sel::Body:
      if (t->kind != TermKind::Lam) throw NotARedex("bad position");
      return lam(t->name, step_rec(t->a, p, i + 1, fresh));
    case Sel::Test:
      if (t->kind != TermKind::If) throw NotARedex("bad position");
      return if_(step_rec(t->a, p, i + 1, fresh), t->b, t->c);
    case Sel::Then:
      if (t->kind != TermKind::If) throw NotARedex("bad position");
      return if_(t->a, step_rec(t->b, p, i + 1, fresh), t->c);
    case Sel::Else:
      if (t->kind != TermKind::If) throw NotARedex("bad position");
      return if_(t->a, t->b, step_rec(t->c, p, i + 1, fresh));
  }
  throw NotARedex("bad position");
}

Term step(const Term& t, const RedexPosition& p, FreshGen* fresh) {
  return step_rec(t, p, 0, fresh);
}

// Leftmost-outermost: outermost first, ties broken left to right in the
// textual order of children.
static bool find_leftmost(const Term& t, RedexPosition& acc) {
  if (is_redex(t)) return true;
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Bool:
      return false;
    case TermKind::Lam:
      acc.push_back(Sel::Body);
      if (find_leftmost(t->a, acc)) return true;
      acc.pop_back();
      return false;
    case TermKind::App:
      acc.push_back(Sel::Fun);
      if (find_leftmost(t->a, acc)) return true;
      acc.pop_back();
      acc.push_back(Sel::Arg);
      if (find_leftmost(t->b, acc)) return true;
      acc.pop_back();
      return false;
    case TermKind::If:
      acc.push_back(Sel::Test);
      if (find_leftmost(t->a, acc)) return true;
      acc.pop_back();
      acc.push_back(Sel::Then);
      if (find_leftmost(t->b, acc)) return true;
      acc.pop_back();
      acc.push_back(Sel::Else);
      if (find_leftmost(t->c, acc)) return true;
      acc.pop_back();
      return false;
  }
  return false;
}

std::optional<RedexPosition> leftmost_redex(const Term& t) {
  RedexPosition p;
  if (find_leftmost(t, p)) return p;
  return std::nullopt;
}

NormalizeResult normalize(const Term& t, uint64_t fuel) {
  NormalizeResult r;
  r.term = t;
  FreshGen fresh;
  fresh.next = max_suffix(t) + 1;
  while (true) {
    auto p = leftmost_redex(r.term);
    if (!p) return r;
    if (r.steps >= fuel) {
      r.finished = false;
      return r;
    }
    r.term = step(r.term, *p, &fresh);
    ++r.steps;
  }
}

Term normalize_or_throw(const Term& t, uint64_t fuel) {
  auto r = normalize(t, fuel);
  if (!r.finished) throw FuelExhausted("normalize: fuel exhausted, last term: " + to_string(r.term));
  return r.term;
}

// Printer. Abstractions and conditionals extend as far right as possible;
// they are parenthesised in argument position and, for clarity, in the
// test/then slots of a conditional.
namespace {

void print(const Term& t, std::ostream& os, bool atom_pos, bool guard_pos);

void print_app_child(const Term& t, std::ostream& os, bool arg) {
  bool needs = (arg && t->kind == TermKind::App) || t->kind == TermKind::Lam ||
               t->kind == TermKind::If;
  if (needs) {
    os << '(';
    print(t, os, false, false);
    os << ')';
  } else {
    print(t, os, true, false);
  }
}

void print(const Term& t, std::ostream& os, bool atom_pos, bool guard_pos) {
  switch (t->kind) {
    case TermKind::Var:
      os << t->name;
      return;
    case TermKind::Bool:
      os << t->bit;
      return;
    case TermKind::Lam:
      if (atom_pos || guard_pos) os << '(';
      os << '\\' << t->name << ". ";
      print(t->a, os, false, false);
      if (atom_pos || guard_pos) os << ')';
      return;
    case TermKind::App:
      if (guard_pos) os << '(';
      print_app_child(t->a, os, false);
      os << ' ';
      print_app_child(t->b, os, true);
      if (guard_pos) os << ')';
      return;
    case TermKind::If:
      if (atom_pos || guard_pos) os << '(';
      os << "if ";
      print(t->a, os, false, true);
      os << " then ";
      print(t->b, os, false, true);
      os << " else ";
      print(t->c, os, false, false);
      if (atom_pos || guard_pos) os << ')';
      return;
  }
}

}  // namespace

std::string to_string(const Term& t) {
  std::ostringstream os;
  print(t, os, false, false);
  return os.str();
}

SpineView spine_view(const Term& t) {
  SpineView v;
  Term cur = t;
  while (cur->kind == TermKind::App) {
    v.spine.push_back(cur->b);
    cur = cur->a;
  }
  v.head = cur;
  std::reverse(v.spine.begin(), v.spine.end());
  return v;
}

}  // namespace stab
