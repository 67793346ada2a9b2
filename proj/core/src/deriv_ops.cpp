#include "stab/deriv_ops.hpp"

#include <algorithm>

#include "stab/errors.hpp"

namespace stab {

using namespace build;

namespace {

Deriv rebuild_if(const Deriv& d, Deriv t, Deriv n0, Deriv n1) {
  DerivNode n;
  n.rule = Rule::BE;
  n.ctx = t->ctx;
  n.subject = if_(t->subject, n0->subject, n1->subject);
  n.type = n0->type;
  n.premises = {std::move(t), std::move(n0), std::move(n1)};
  (void)d;
  return make_deriv(std::move(n));
}

}  // namespace

Deriv strip_unused(const Deriv& d, const std::string& x) {
  if (!d->ctx.count(x)) throw Error("strip_unused: " + x + " not assumed");
  if (count_occurrences(x, d->subject) > 0)
    throw Error("strip_unused: " + x + " occurs in the subject");
  switch (d->rule) {
    case Rule::W:
      if (d->w_var == x) return d->premises[0];
      return weaken(strip_unused(d->premises[0], x), d->w_var, d->w_type);
    case Rule::M: {
      if (d->m_target == x) {
        Deriv cur = d->premises[0];
        for (const auto& xi : d->m_merged) cur = strip_unused(cur, xi);
        return cur;
      }
      return merge(strip_unused(d->premises[0], x), d->m_merged, d->m_target);
    }
    case Rule::Sp:
      return promote(strip_unused(d->premises[0], x));
    case Rule::LollyI:
      return lam_(strip_unused(d->premises[0], x), d->subject->name);
    case Rule::LollyE: {
      Deriv f = d->premises[0], a = d->premises[1];
      if (f->ctx.count(x)) f = strip_unused(f, x);
      else a = strip_unused(a, x);
      return app_(std::move(f), std::move(a));
    }
    case Rule::BE:
      return rebuild_if(d, strip_unused(d->premises[0], x), strip_unused(d->premises[1], x),
                        strip_unused(d->premises[2], x));
    case Rule::ForallI:
      return gen(strip_unused(d->premises[0], x), d->type->name);
    case Rule::ForallE:
      return inst(strip_unused(d->premises[0], x), d->inst_type);
    case Rule::Ax:
    case Rule::B0I:
    case Rule::B1I:
      throw Error("strip_unused: axiom cannot lose its assumption");
  }
  throw Error("strip_unused: unreachable");
}

Deriv strip_all_unused(const Deriv& d, Ctx* dropped) {
  Deriv cur = d;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [k, v] : cur->ctx) {
      if (count_occurrences(k, cur->subject) == 0) {
        if (dropped) dropped->emplace(k, v);
        cur = strip_unused(cur, k);
        changed = true;
        break;
      }
    }
  }
  return cur;
}

Deriv instantiate_tyvar(const Deriv& d, const std::string& alpha, const Type& a) {
  if (d->rule == Rule::ForallI && d->type->kind == TypeKind::Forall &&
      d->type->name == alpha) {
    return d;  // alpha is bound from here down
  }
  DerivNode n = *d;
  Ctx ctx;
  for (const auto& [k, v] : d->ctx) ctx.emplace(k, subst_type(v, a, alpha));
  n.ctx = std::move(ctx);
  n.type = subst_type(d->type, a, alpha);
  if (n.w_type) n.w_type = subst_type(n.w_type, a, alpha);
  if (n.inst_type) n.inst_type = subst_type(n.inst_type, a, alpha);
  n.premises.clear();
  for (const auto& p : d->premises) n.premises.push_back(instantiate_tyvar(p, alpha, a));
  if (d->rule == Rule::ForallI) {
    // renaming the generalized variable if the instantiation captures it
    const std::string& g = d->type->name;
    if (free_tyvars(a).count(g)) {
      std::string g2 = g + "_r";
      while (free_tyvars(a).count(g2) || free_tyvars(d->type).count(g2)) g2 += "r";
      Deriv p2 = instantiate_tyvar(d->premises[0], g, tvar(g2));
      p2 = instantiate_tyvar(p2, alpha, a);
      return gen(p2, g2);
    }
    return gen(n.premises[0], g);
  }
  return make_deriv(std::move(n));
}

Deriv expose_forall_intro(const Deriv& d, FreshGen& fg) {
  if (d->type->kind != TypeKind::Forall) throw Error("expose_forall_intro: not a forall");
  switch (d->rule) {
    case Rule::ForallI:
      return d;
    case Rule::W: {
      Deriv e = expose_forall_intro(d->premises[0], fg);
      return gen(weaken(e->premises[0], d->w_var, d->w_type), e->type->name);
    }
    case Rule::M: {
      Deriv e = expose_forall_intro(d->premises[0], fg);
      return gen(merge(e->premises[0], d->m_merged, d->m_target), e->type->name);
    }
    case Rule::ForallE: {
      Deriv e = expose_forall_intro(d->premises[0], fg);
      Deriv body = instantiate_tyvar(e->premises[0], e->type->name, d->inst_type);
      return expose_forall_intro(body, fg);
    }
    case Rule::Ax: {
      // x : forall a.A |- x : forall a.A; re-derive through a fresh binder
      throw Error("expose_forall_intro: axiom conclusion, nothing to commute");
    }
    default:
      throw Error("expose_forall_intro: unexpected rule " + std::string(rule_name(d->rule)));
  }
}

Deriv expose_arrow_intro(const Deriv& d, FreshGen& fg) {
  if (d->subject->kind != TermKind::Lam) throw Error("expose_arrow_intro: subject not a lambda");
  if (d->type->kind != TypeKind::Arrow) throw Error("expose_arrow_intro: type not an arrow");
  switch (d->rule) {
    case Rule::LollyI:
      return d;
    case Rule::W: {
      Deriv e = expose_arrow_intro(d->premises[0], fg);
      Deriv p = e->premises[0];
      std::string binder = e->subject->name;
      if (binder == d->w_var) {
        std::string b2 = fg.fresh(binder);
        p = rename_free(p, binder, b2);
        binder = b2;
      }
      return lam_(weaken(p, d->w_var, d->w_type), binder);
    }
    case Rule::M: {
      Deriv e = expose_arrow_intro(d->premises[0], fg);
      Deriv p = e->premises[0];
      std::string binder = e->subject->name;
      bool clash = d->m_target == binder;
      for (const auto& xi : d->m_merged) clash = clash || xi == binder;
      if (clash) {
        std::string b2 = fg.fresh(binder);
        p = rename_free(p, binder, b2);
        binder = b2;
      }
      return lam_(merge(p, d->m_merged, d->m_target), binder);
    }
    case Rule::ForallE: {
      Deriv e = expose_forall_intro(d->premises[0], fg);
      Deriv body = instantiate_tyvar(e->premises[0], e->type->name, d->inst_type);
      return expose_arrow_intro(body, fg);
    }
    default:
      throw Error("expose_arrow_intro: unexpected rule " + std::string(rule_name(d->rule)));
  }
}

namespace {

// Core of the Generation-lemma rewrite for banged conclusions; every context
// variable is assumed free in the subject.
Deriv expose_sp_stripped(const Deriv& d, FreshGen& fg) {
  switch (d->rule) {
    case Rule::Sp:
      return d->premises[0];
    case Rule::M: {
      Deriv premise = d->premises[0];
      std::vector<std::string> free_merged;
      for (const auto& xi : d->m_merged) {
        if (count_occurrences(xi, premise->subject) > 0) {
          free_merged.push_back(xi);
        } else {
          premise = strip_unused(premise, xi);
        }
      }
      if (free_merged.empty()) throw Error("expose_sp: merge target free but no copy is");
      SpCore core = expose_sp(premise, fg);
      if (!core.dropped.empty()) throw Error("expose_sp: residual junk below a merge");
      for (const auto& xi : free_merged)
        if (!core.inner->ctx.count(xi))
          throw ShapeMismatch("expose_sp: merged variable " + xi + " not banged in premise");
      return merge(core.inner, free_merged, d->m_target);
    }
    default:
      throw ShapeMismatch("expose_sp: derivation of a banged type ends in " +
                          std::string(rule_name(d->rule)));
  }
}

}  // namespace

SpCore expose_sp(const Deriv& d, FreshGen& fg) {
  if (d->type->kind != TypeKind::Bang) throw Error("expose_sp: type is not banged");
  SpCore out;
  Deriv d0 = strip_all_unused(d, &out.dropped);
  out.inner = expose_sp_stripped(d0, fg);
  return out;
}

namespace {

Deriv weaken_ctx(Deriv d, const Ctx& extra) {
  for (const auto& [k, v] : extra) d = weaken_any(std::move(d), k, v);
  return d;
}

Deriv subst_rec(const Deriv& main, const Deriv& arg, const std::string& x, FreshGen& fg,
                int depth);

// (m) node merging x itself: splice one fresh copy of the sp-core per free
// merged variable, then re-merge the copies' contexts.
Deriv subst_merge_case(const Deriv& main, const Deriv& arg, FreshGen& fg, int depth) {
  SpCore core = expose_sp(arg, fg);
  Deriv premise = main->premises[0];
  std::vector<std::string> free_merged;
  for (const auto& xi : main->m_merged) {
    if (count_occurrences(xi, premise->subject) > 0) free_merged.push_back(xi);
    else premise = strip_unused(premise, xi);
  }
  std::sort(free_merged.begin(), free_merged.end(),
            [&](const std::string& a, const std::string& b) {
              return var_height(main->premises[0], a) > var_height(main->premises[0], b);
            });
  std::vector<std::map<std::string, std::string>> renamings;
  Deriv cur = premise;
  for (const auto& xi : free_merged) {
    std::map<std::string, std::string> ren;
    Deriv copy = freshen_free(core.inner, fg, &ren);
    renamings.push_back(ren);
    cur = subst_rec(cur, copy, xi, fg, depth + 1);
  }
  // merge each copied context family back to its original name
  for (const auto& [orig, ty] : core.inner->ctx) {
    std::vector<std::string> family;
    for (const auto& ren : renamings) family.push_back(ren.at(orig));
    cur = merge(cur, family, orig);
  }
  return weaken_ctx(cur, core.dropped);
}

Deriv subst_rec(const Deriv& main, const Deriv& arg, const std::string& x, FreshGen& fg,
                int depth) {
  if (depth > 5000) throw Error("subst_derivation: recursion limit hit");
  auto it = main->ctx.find(x);
  if (it == main->ctx.end()) throw Error("subst_derivation: " + x + " not assumed");
  if (!type_equal(it->second, arg->type))
    throw ShapeMismatch("subst_derivation: assumption " + to_string(it->second) +
                        " vs argument " + to_string(arg->type));
  // variable introduced by weakening somewhere: discard the argument
  if (count_occurrences(x, main->subject) == 0)
    return weaken_ctx(strip_unused(main, x), arg->ctx);

  switch (main->rule) {
    case Rule::Ax:
      return arg;
    case Rule::W:
      return weaken(subst_rec(main->premises[0], arg, x, fg, depth + 1), main->w_var,
                    main->w_type);
    case Rule::LollyI: {
      Deriv premise = main->premises[0];
      std::string binder = main->subject->name;
      if (arg->ctx.count(binder)) {
        std::string b2 = fg.fresh(binder);
        premise = rename_free(premise, binder, b2);
        binder = b2;
      }
      return lam_(subst_rec(premise, arg, x, fg, depth + 1), binder);
    }
    case Rule::LollyE: {
      Deriv f = main->premises[0], a = main->premises[1];
      if (f->ctx.count(x)) f = subst_rec(f, arg, x, fg, depth + 1);
      else a = subst_rec(a, arg, x, fg, depth + 1);
      return app_(std::move(f), std::move(a));
    }
    case Rule::BE: {
      Deriv t = subst_rec(main->premises[0], arg, x, fg, depth + 1);
      Deriv n0 = subst_rec(main->premises[1], arg, x, fg, depth + 1);
      Deriv n1 = subst_rec(main->premises[2], arg, x, fg, depth + 1);
      return rebuild_if(main, std::move(t), std::move(n0), std::move(n1));
    }
    case Rule::ForallI: {
      Deriv r = subst_rec(main->premises[0], arg, x, fg, depth + 1);
      const std::string& g = main->type->name;
      bool clash = false;
      for (const auto& [k, v] : r->ctx) clash = clash || free_tyvars(v).count(g);
      if (clash) {
        std::string g2 = g + "_r";
        auto taken = [&](const std::string& cand) {
          for (const auto& [k, v] : r->ctx)
            if (free_tyvars(v).count(cand)) return true;
          return free_tyvars(r->type).count(cand) > 0;
        };
        while (taken(g2)) g2 += "r";
        r = instantiate_tyvar(r, g, tvar(g2));
        return gen(r, g2);
      }
      return gen(r, g);
    }
    case Rule::ForallE:
      return inst(subst_rec(main->premises[0], arg, x, fg, depth + 1), main->inst_type);
    case Rule::Sp: {
      SpCore core = expose_sp(arg, fg);
      Deriv r = subst_rec(main->premises[0], core.inner, x, fg, depth + 1);
      return weaken_ctx(promote(std::move(r)), core.dropped);
    }
    case Rule::M: {
      if (main->m_target == x) return subst_merge_case(main, arg, fg, depth);
      // pre-rename merged variables that collide with the argument context
      Deriv premise = main->premises[0];
      std::vector<std::string> merged = main->m_merged;
      for (auto& xi : merged) {
        if (arg->ctx.count(xi)) {
          std::string x2 = fg.fresh(xi);
          premise = rename_free(premise, xi, x2);
          xi = x2;
        }
      }
      Deriv r = subst_rec(premise, arg, x, fg, depth + 1);
      return merge(std::move(r), merged, main->m_target);
    }
    case Rule::B0I:
    case Rule::B1I:
      throw Error("subst_derivation: boolean introduction has no assumptions");
  }
  throw Error("subst_derivation: unreachable");
}

}  // namespace

Deriv subst_derivation(const Deriv& main, const Deriv& arg, const std::string& x,
                       FreshGen* fg) {
  FreshGen local;
  if (!fg) {
    local.next = 1u << 20;  // clear of machine-generated names in practice
    fg = &local;
  }
  if (!ctx_disjoint(main->ctx, arg->ctx)) {
    Ctx rest = main->ctx;
    rest.erase(x);
    if (!ctx_disjoint(rest, arg->ctx))
      throw Error("subst_derivation: contexts not disjoint");
  }
  return subst_rec(main, arg, x, *fg, 0);
}

namespace {

Deriv reduce_rec(const Deriv& d, const RedexPosition& pos, size_t i, FreshGen& fg) {
  switch (d->rule) {
    case Rule::W:
      return weaken(reduce_rec(d->premises[0], pos, i, fg), d->w_var, d->w_type);
    case Rule::M:
      return merge(reduce_rec(d->premises[0], pos, i, fg), d->m_merged, d->m_target);
    case Rule::Sp:
      return promote(reduce_rec(d->premises[0], pos, i, fg));
    case Rule::ForallI:
      return gen(reduce_rec(d->premises[0], pos, i, fg), d->type->name);
    case Rule::ForallE:
      return inst(reduce_rec(d->premises[0], pos, i, fg), d->inst_type);
    case Rule::LollyI:
      if (i >= pos.size() || pos[i] != Sel::Body) throw NotARedex("position under abstraction");
      return lam_(reduce_rec(d->premises[0], pos, i + 1, fg), d->subject->name);
    case Rule::LollyE: {
      if (i == pos.size()) {
        // head beta redex
        if (d->premises[0]->subject->kind != TermKind::Lam)
          throw NotARedex("application head is not an abstraction");
        Deriv lamd = expose_arrow_intro(d->premises[0], fg);
        const std::string& binder = lamd->subject->name;
        Deriv body = lamd->premises[0];
        if (d->premises[1]->ctx.count(binder)) {
          std::string b2 = fg.fresh(binder);
          body = rename_free(body, binder, b2);
          return subst_derivation(body, d->premises[1], b2, &fg);
        }
        return subst_derivation(body, d->premises[1], binder, &fg);
      }
      if (pos[i] == Sel::Fun)
        return app_(reduce_rec(d->premises[0], pos, i + 1, fg), d->premises[1]);
      if (pos[i] == Sel::Arg)
        return app_(d->premises[0], reduce_rec(d->premises[1], pos, i + 1, fg));
      throw NotARedex("bad position at application");
    }
    case Rule::BE: {
      if (i == pos.size()) {
        const Term& test = d->subject->a;
        if (test->kind != TermKind::Bool) throw NotARedex("conditional test is not a literal");
        return test->bit == 0 ? d->premises[1] : d->premises[2];
      }
      if (pos[i] == Sel::Test)
        return rebuild_if(d, reduce_rec(d->premises[0], pos, i + 1, fg), d->premises[1],
                          d->premises[2]);
      if (pos[i] == Sel::Then)
        return rebuild_if(d, d->premises[0], reduce_rec(d->premises[1], pos, i + 1, fg),
                          d->premises[2]);
      if (pos[i] == Sel::Else)
        return rebuild_if(d, d->premises[0], d->premises[1],
                          reduce_rec(d->premises[2], pos, i + 1, fg));
      throw NotARedex("bad position at conditional");
    }
    case Rule::Ax:
    case Rule::B0I:
    case Rule::B1I:
      throw NotARedex("no redex at position");
  }
  throw NotARedex("unreachable");
}

}  // namespace

Deriv subject_reduce(const Deriv& d, const RedexPosition& at, FreshGen* fg) {
  FreshGen local;
  if (!fg) {
    local.next = 1u << 20;
    fg = &local;
  }
  return reduce_rec(d, at, 0, *fg);
}

}  // namespace stab
