#include "stab/builders.hpp"

#include <algorithm>

#include "stab/errors.hpp"

namespace stab::build {

Deriv ax(const std::string& x, const Type& a) {
  if (!is_linear(a)) throw Error("ax: type must be linear");
  DerivNode n;
  n.rule = Rule::Ax;
  n.ctx.emplace(x, a);
  n.subject = var(x);
  n.type = a;
  return make_deriv(std::move(n));
}

Deriv blit(int bit) {
  DerivNode n;
  n.rule = bit == 0 ? Rule::B0I : Rule::B1I;
  n.subject = lit(bit);
  n.type = ground();
  return make_deriv(std::move(n));
}

Deriv weaken(Deriv d, const std::string& x, const Type& a) {
  if (!is_linear(a)) throw Error("weaken: assumption must be linear");
  if (d->ctx.count(x)) throw Error("weaken: " + x + " already assumed");
  DerivNode n;
  n.rule = Rule::W;
  n.ctx = d->ctx;
  n.ctx.emplace(x, a);
  n.subject = d->subject;
  n.type = d->type;
  n.w_var = x;
  n.w_type = a;
  n.premises = {std::move(d)};
  return make_deriv(std::move(n));
}

Deriv lift(Deriv d, const std::string& x) {
  auto it = d->ctx.find(x);
  if (it == d->ctx.end()) throw Error("lift: " + x + " not assumed");
  Type lifted = bang(it->second);
  DerivNode n;
  n.rule = Rule::M;
  n.ctx = d->ctx;
  n.ctx[x] = lifted;
  n.subject = d->subject;
  n.type = d->type;
  n.m_merged = {x};
  n.m_target = x;
  n.premises = {std::move(d)};
  return make_deriv(std::move(n));
}

Deriv weaken_any(Deriv d, const std::string& x, const Type& sigma) {
  int depth = bang_depth(sigma);
  d = weaken(std::move(d), x, strip_bangs(sigma));
  for (int i = 0; i < depth; ++i) d = lift(std::move(d), x);
  return d;
}

Deriv lam_(Deriv d, const std::string& x) {
  auto it = d->ctx.find(x);
  if (it == d->ctx.end()) throw Error("lam: binder " + x + " not assumed in body");
  if (!is_linear(d->type)) throw Error("lam: body type must be linear");
  DerivNode n;
  n.rule = Rule::LollyI;
  n.ctx = d->ctx;
  n.ctx.erase(x);
  n.subject = lam(x, d->subject);
  n.type = arrow(it->second, d->type);
  n.premises = {std::move(d)};
  return make_deriv(std::move(n));
}

Deriv app_(Deriv f, Deriv a) {
  if (f->type->kind != TypeKind::Arrow)
    throw Error("app: function type is not an arrow: " + to_string(f->type));
  if (!type_equal(f->type->a, a->type))
    throw Error("app: argument type mismatch: want " + to_string(f->type->a) + ", got " +
                to_string(a->type));
  if (!ctx_disjoint(f->ctx, a->ctx)) throw Error("app: contexts not disjoint");
  DerivNode n;
  n.rule = Rule::LollyE;
  n.ctx = ctx_union(f->ctx, a->ctx);
  n.subject = app(f->subject, a->subject);
  n.type = f->type->b;
  n.premises = {std::move(f), std::move(a)};
  return make_deriv(std::move(n));
}

std::vector<Deriv> equalize(std::vector<Deriv> ds) {
  Ctx all;
  for (const auto& d : ds) {
    for (const auto& [k, v] : d->ctx) {
      auto it = all.find(k);
      if (it == all.end()) {
        all.emplace(k, v);
      } else if (!type_equal(it->second, v)) {
        throw Error("equalize: variable " + k + " assumed at two types");
      }
    }
  }
  for (auto& d : ds) {
    for (const auto& [k, v] : all)
      if (!d->ctx.count(k)) d = weaken_any(std::move(d), k, v);
  }
  return ds;
}

Deriv if3(Deriv test, Deriv then0, Deriv else1) {
  auto eq = equalize({std::move(test), std::move(then0), std::move(else1)});
  if (eq[0]->type->kind != TypeKind::Ground) throw Error("if: test must have type B");
  if (!type_equal(eq[1]->type, eq[2]->type)) throw Error("if: branch types differ");
  if (!is_linear(eq[1]->type)) throw Error("if: branch type must be linear");
  DerivNode n;
  n.rule = Rule::BE;
  n.ctx = eq[0]->ctx;
  n.subject = if_(eq[0]->subject, eq[1]->subject, eq[2]->subject);
  n.type = eq[1]->type;
  n.premises = {eq[0], eq[1], eq[2]};
  return make_deriv(std::move(n));
}

Deriv promote(Deriv d) {
  DerivNode n;
  n.rule = Rule::Sp;
  for (const auto& [k, v] : d->ctx) n.ctx.emplace(k, bang(v));
  n.subject = d->subject;
  n.type = bang(d->type);
  n.premises = {std::move(d)};
  return make_deriv(std::move(n));
}

Deriv merge(Deriv d, const std::vector<std::string>& xs, const std::string& x) {
  if (xs.empty()) throw Error("merge: nothing to merge");
  Ctx rest = d->ctx;
  Type sigma;
  for (const auto& xi : xs) {
    auto it = rest.find(xi);
    if (it == rest.end()) throw Error("merge: variable " + xi + " not assumed");
    if (!sigma)
      sigma = it->second;
    else if (!type_equal(sigma, it->second))
      throw Error("merge: variables at different types");
    rest.erase(it);
  }
  if (rest.count(x)) throw Error("merge: target " + x + " already present");
  DerivNode n;
  n.rule = Rule::M;
  n.ctx = rest;
  n.ctx.emplace(x, bang(sigma));
  Term subj = d->subject;
  for (const auto& xi : xs) subj = subst(subj, var(x), xi);
  n.subject = subj;
  n.type = d->type;
  n.m_merged = xs;
  n.m_target = x;
  n.premises = {std::move(d)};
  return make_deriv(std::move(n));
}

Deriv gen(Deriv d, const std::string& alpha) {
  for (const auto& [k, v] : d->ctx)
    if (free_tyvars(v).count(alpha))
      throw Error("gen: " + alpha + " occurs free in the context");
  if (!is_linear(d->type)) throw Error("gen: body must be linear");
  DerivNode n;
  n.rule = Rule::ForallI;
  n.ctx = d->ctx;
  n.subject = d->subject;
  n.type = forall(alpha, d->type);
  n.gen_var = alpha;
  n.premises = {std::move(d)};
  return make_deriv(std::move(n));
}

Deriv inst(Deriv d, const Type& a) {
  if (!is_linear(a)) throw Error("inst: instantiating type must be linear");
  if (d->type->kind != TypeKind::Forall) throw Error("inst: premise is not a forall");
  DerivNode n;
  n.rule = Rule::ForallE;
  n.ctx = d->ctx;
  n.subject = d->subject;
  n.type = subst_type(d->type->a, a, d->type->name);
  n.inst_type = a;
  n.premises = {std::move(d)};
  return make_deriv(std::move(n));
}

namespace {

std::string fresh_tyvar(const std::vector<Type>& around) {
  std::set<std::string> used;
  for (const auto& t : around)
    for (const auto& v : free_tyvars(t)) used.insert(v);
  if (!used.count("a")) return "a";
  for (int i = 0;; ++i) {
    std::string cand = "a" + std::to_string(i);
    if (!used.count(cand)) return cand;
  }
}

}  // namespace

Type tensor(const std::vector<Type>& comps) {
  if (comps.empty()) throw Error("tensor: needs at least one component");
  std::string a = fresh_tyvar(comps);
  Type fun = tvar(a);
  for (auto it = comps.rbegin(); it != comps.rend(); ++it) fun = arrow(*it, fun);
  return forall(a, arrow(fun, tvar(a)));
}

Deriv tuple(std::vector<Deriv> comps, FreshGen& fg) {
  std::vector<Type> tys;
  std::vector<Type> around;
  for (const auto& c : comps) {
    tys.push_back(c->type);
    around.push_back(c->type);
    for (const auto& [k, v] : c->ctx) around.push_back(v);
  }
  std::string a = fresh_tyvar(around);
  Type fun = tvar(a);
  for (auto it = tys.rbegin(); it != tys.rend(); ++it) fun = arrow(*it, fun);
  std::string p = fg.fresh("p");
  Deriv d = ax(p, fun);
  for (auto& c : comps) d = app_(std::move(d), std::move(c));
  d = lam_(std::move(d), p);
  return gen(std::move(d), a);
}

namespace {

// Unpack a tensor type into its component list.
std::vector<Type> tensor_components(const Type& t) {
  if (t->kind != TypeKind::Forall || t->a->kind != TypeKind::Arrow)
    throw Error("not a tensor type: " + to_string(t));
  const std::string& a = t->name;
  Type fun = t->a->a;
  if (t->a->b->kind != TypeKind::TVar || t->a->b->name != a)
    throw Error("not a tensor type: " + to_string(t));
  std::vector<Type> comps;
  Type cur = fun;
  while (cur->kind == TypeKind::Arrow) {
    comps.push_back(cur->a);
    cur = cur->b;
  }
  if (cur->kind != TypeKind::TVar || cur->name != a)
    throw Error("not a tensor type: " + to_string(t));
  return comps;
}

}  // namespace

Deriv letp(Deriv scrutinee, const std::vector<std::pair<std::string, Type>>& binds,
           Deriv body) {
  auto comps = tensor_components(scrutinee->type);
  if (comps.size() != binds.size())
    throw Error("letp: tensor arity " + std::to_string(comps.size()) + " vs " +
                std::to_string(binds.size()) + " binders");
  for (size_t i = 0; i < binds.size(); ++i)
    if (!type_equal(comps[i], binds[i].second))
      throw Error("letp: binder " + binds[i].first + " type mismatch");
  if (!is_linear(body->type)) throw Error("letp: body type must be linear");
  Type tau = body->type;
  Deriv chain = std::move(body);
  for (auto it = binds.rbegin(); it != binds.rend(); ++it) {
    if (!chain->ctx.count(it->first)) chain = weaken_any(std::move(chain), it->first, it->second);
    chain = lam_(std::move(chain), it->first);
  }
  return app_(inst(std::move(scrutinee), tau), std::move(chain));
}

Deriv proj(Deriv pair, int which) {
  auto comps = tensor_components(pair->type);
  if (comps.size() != 2) throw Error("proj: expects a binary tensor");
  if (which != 1 && which != 2) throw Error("proj: component must be 1 or 2");
  Type keep = comps[which - 1];
  if (!is_linear(keep)) throw Error("proj: projected component must be linear");
  Deriv body;
  if (which == 1) {
    body = ax("pj_x", keep);
    body = weaken_any(std::move(body), "pj_y", comps[1]);
  } else {
    body = ax("pj_y", keep);
    body = weaken_any(std::move(body), "pj_x", comps[0]);
  }
  body = lam_(std::move(body), "pj_y");
  body = lam_(std::move(body), "pj_x");
  return app_(inst(std::move(pair), keep), std::move(body));
}

Deriv compose_chain(std::vector<Deriv> fs, FreshGen& fg) {
  if (fs.empty()) throw Error("compose_chain: empty");
  Type in = fs.back()->type;
  if (in->kind != TypeKind::Arrow) throw Error("compose_chain: not a function");
  std::string z = fg.fresh("z");
  Deriv acc = ax(z, in->a);
  for (auto it = fs.rbegin(); it != fs.rend(); ++it) acc = app_(std::move(*it), std::move(acc));
  return lam_(std::move(acc), z);
}

Deriv and_(Deriv m, Deriv n) {
  return if3(std::move(m), if3(std::move(n), blit(0), blit(1)), blit(1));
}

Deriv or_(Deriv m, Deriv n) {
  return if3(std::move(m), blit(0), if3(std::move(n), blit(0), blit(1)));
}

Deriv not_(Deriv m) { return if3(std::move(m), blit(1), blit(0)); }

Deriv rename_free(const Deriv& d, const std::string& from, const std::string& to) {
  if (!d->ctx.count(from)) return d;
  if (d->ctx.count(to)) throw Error("rename_free: " + to + " already in context");
  DerivNode n = *d;
  n.ctx.erase(from);
  n.ctx.emplace(to, d->ctx.at(from));
  n.subject = subst(d->subject, var(to), from);
  switch (d->rule) {
    case Rule::Ax:
      break;
    case Rule::W:
      if (d->w_var == from) {
        n.w_var = to;
      } else {
        n.premises = {rename_free(d->premises[0], from, to)};
      }
      break;
    case Rule::M:
      if (d->m_target == from) {
        n.m_target = to;
      } else {
        for (const auto& xi : d->m_merged)
          if (xi == to) throw Error("rename_free: collides with merged variable");
        n.premises = {rename_free(d->premises[0], from, to)};
      }
      break;
    case Rule::LollyE: {
      n.premises = d->premises;
      for (auto& p : n.premises)
        if (p->ctx.count(from)) p = rename_free(p, from, to);
      break;
    }
    case Rule::BE: {
      n.premises = d->premises;
      for (auto& p : n.premises) p = rename_free(p, from, to);
      break;
    }
    default:
      n.premises = {rename_free(d->premises[0], from, to)};
      break;
  }
  return make_deriv(std::move(n));
}

Deriv freshen_free(const Deriv& d, FreshGen& fg, std::map<std::string, std::string>* renaming) {
  Deriv cur = d;
  for (const auto& [k, v] : d->ctx) {
    std::string nw = fg.fresh(k);
    cur = rename_free(cur, k, nw);
    if (renaming) (*renaming)[k] = nw;
  }
  return cur;
}

}  // namespace stab::build
