#include "stab/derivation.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "stab/errors.hpp"
#include "stab/parser.hpp"

namespace stab {

using json = nlohmann::json;

bool ctx_equal(const Ctx& a, const Ctx& b) {
  if (a.size() != b.size()) return false;
  auto i = a.begin();
  auto j = b.begin();
  for (; i != a.end(); ++i, ++j) {
    if (i->first != j->first || !type_equal(i->second, j->second)) return false;
  }
  return true;
}

bool ctx_disjoint(const Ctx& a, const Ctx& b) {
  for (const auto& [k, v] : a)
    if (b.count(k)) return false;
  return true;
}

Ctx ctx_union(const Ctx& a, const Ctx& b) {
  Ctx out = a;
  for (const auto& [k, v] : b) {
    if (out.count(k)) throw Error("context union: duplicate variable " + k);
    out.emplace(k, v);
  }
  return out;
}

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Ax: return "Ax";
    case Rule::B0I: return "B0I";
    case Rule::B1I: return "B1I";
    case Rule::W: return "w";
    case Rule::LollyI: return "LollyI";
    case Rule::LollyE: return "LollyE";
    case Rule::M: return "m";
    case Rule::Sp: return "sp";
    case Rule::ForallI: return "ForallI";
    case Rule::ForallE: return "ForallE";
    case Rule::BE: return "BE";
  }
  return "?";
}

Rule rule_from_name(const std::string& s) {
  static const std::map<std::string, Rule> table = {
      {"Ax", Rule::Ax},         {"B0I", Rule::B0I},       {"B1I", Rule::B1I},
      {"w", Rule::W},           {"LollyI", Rule::LollyI}, {"LollyE", Rule::LollyE},
      {"m", Rule::M},           {"sp", Rule::Sp},         {"ForallI", Rule::ForallI},
      {"ForallE", Rule::ForallE}, {"BE", Rule::BE}};
  auto it = table.find(s);
  if (it == table.end()) throw Error("unknown rule name: " + s);
  return it->second;
}

Deriv make_deriv(DerivNode n) { return std::make_shared<const DerivNode>(std::move(n)); }

namespace {

[[noreturn]] void violate(Rule r, const std::string& why) {
  throw RuleViolation(rule_name(r), why);
}

void need_arity(const DerivNode& n, size_t k) {
  if (n.premises.size() != k)
    violate(n.rule, "expected " + std::to_string(k) + " premises, got " +
                        std::to_string(n.premises.size()));
}

void check_node(const DerivNode& n) {
  switch (n.rule) {
    case Rule::Ax: {
      need_arity(n, 0);
      if (n.subject->kind != TermKind::Var) violate(n.rule, "subject must be a variable");
      if (n.ctx.size() != 1) violate(n.rule, "context must be exactly {x:A}");
      auto& [x, a] = *n.ctx.begin();
      if (x != n.subject->name) violate(n.rule, "context variable differs from subject");
      if (!is_linear(a)) violate(n.rule, "axiom type must be linear");
      if (!type_equal(a, n.type)) violate(n.rule, "conclusion type differs from assumption");
      return;
    }
    case Rule::B0I:
    case Rule::B1I: {
      need_arity(n, 0);
      int want = n.rule == Rule::B0I ? 0 : 1;
      if (!n.ctx.empty()) violate(n.rule, "context must be empty");
      if (n.subject->kind != TermKind::Bool || n.subject->bit != want)
        violate(n.rule, "subject must be the boolean literal");
      if (n.type->kind != TypeKind::Ground) violate(n.rule, "type must be B");
      return;
    }
    case Rule::W: {
      need_arity(n, 1);
      const DerivNode& p = *n.premises[0];
      if (n.w_var.empty() || !n.w_type) violate(n.rule, "missing payload");
      if (!is_linear(n.w_type)) violate(n.rule, "weakened assumption must be linear");
      if (p.ctx.count(n.w_var)) violate(n.rule, "weakened variable already in context");
      Ctx want = p.ctx;
      want.emplace(n.w_var, n.w_type);
      if (!ctx_equal(n.ctx, want)) violate(n.rule, "context is not premise plus the assumption");
      if (!alpha_equal(n.subject, p.subject)) violate(n.rule, "subject changed");
      if (!type_equal(n.type, p.type)) violate(n.rule, "type changed");
      return;
    }
    case Rule::LollyI: {
      need_arity(n, 1);
      const DerivNode& p = *n.premises[0];
      if (n.subject->kind != TermKind::Lam) violate(n.rule, "subject must be an abstraction");
      const std::string& x = n.subject->name;
      if (n.type->kind != TypeKind::Arrow) violate(n.rule, "type must be an arrow");
      auto it = p.ctx.find(x);
      if (it == p.ctx.end()) violate(n.rule, "binder assumption missing in premise");
      if (!type_equal(it->second, n.type->a)) violate(n.rule, "binder type mismatch");
      if (!type_equal(p.type, n.type->b)) violate(n.rule, "codomain mismatch");
      Ctx rest = p.ctx;
      rest.erase(x);
      if (!ctx_equal(n.ctx, rest)) violate(n.rule, "context is not premise minus binder");
      if (!alpha_equal(n.subject->a, p.subject)) violate(n.rule, "body differs from premise subject");
      return;
    }
    case Rule::LollyE: {
      need_arity(n, 2);
      const DerivNode& f = *n.premises[0];
      const DerivNode& a = *n.premises[1];
      if (n.subject->kind != TermKind::App) violate(n.rule, "subject must be an application");
      if (f.type->kind != TypeKind::Arrow) violate(n.rule, "function premise not an arrow");
      if (!type_equal(f.type->a, a.type)) violate(n.rule, "argument type mismatch");
      if (!type_equal(f.type->b, n.type)) violate(n.rule, "result type mismatch");
      if (!ctx_disjoint(f.ctx, a.ctx)) violate(n.rule, "premise contexts share a variable (G # D)");
      if (!ctx_equal(n.ctx, ctx_union(f.ctx, a.ctx))) violate(n.rule, "context is not the disjoint union");
      if (!alpha_equal(n.subject->a, f.subject) || !alpha_equal(n.subject->b, a.subject))
        violate(n.rule, "subject does not match premises");
      return;
    }
    case Rule::M: {
      need_arity(n, 1);
      const DerivNode& p = *n.premises[0];
      if (n.m_merged.empty()) violate(n.rule, "must merge at least one variable");
      if (n.m_target.empty()) violate(n.rule, "missing target variable");
      // premise context = G + x1:s ... xn:s ; conclusion = G + x:!s
      Ctx rest = p.ctx;
      Type sigma;
      for (const auto& xi : n.m_merged) {
        auto it = rest.find(xi);
        if (it == rest.end()) violate(n.rule, "merged variable " + xi + " missing or repeated");
        if (!sigma) sigma = it->second;
        else if (!type_equal(sigma, it->second)) violate(n.rule, "merged variables at different types");
        rest.erase(it);
      }
      if (rest.count(n.m_target)) violate(n.rule, "target variable already in residual context");
      auto it = n.ctx.find(n.m_target);
      if (it == n.ctx.end()) violate(n.rule, "target variable missing in conclusion");
      if (!type_equal(it->second, bang(sigma))) violate(n.rule, "target must carry !sigma");
      Ctx want = rest;
      want.emplace(n.m_target, it->second);
      if (!ctx_equal(n.ctx, want)) violate(n.rule, "conclusion context mismatch");
      // subject must be the premise subject with every xi renamed to x
      Term renamed = p.subject;
      for (const auto& xi : n.m_merged) renamed = subst(renamed, var(n.m_target), xi);
      if (!alpha_equal(n.subject, renamed)) violate(n.rule, "subject is not the renamed premise subject");
      if (!type_equal(n.type, p.type)) violate(n.rule, "type changed");
      return;
    }
    case Rule::Sp: {
      need_arity(n, 1);
      const DerivNode& p = *n.premises[0];
      if (!type_equal(n.type, bang(p.type))) violate(n.rule, "conclusion type must be !premise");
      if (n.ctx.size() != p.ctx.size()) violate(n.rule, "context size changed");
      auto i = n.ctx.begin();
      auto j = p.ctx.begin();
      for (; i != n.ctx.end(); ++i, ++j) {
        if (i->first != j->first) violate(n.rule, "context variables changed");
        if (!type_equal(i->second, bang(j->second)))
          violate(n.rule, "assumption " + i->first + " must be banged");
      }
      if (!alpha_equal(n.subject, p.subject)) violate(n.rule, "subject changed");
      return;
    }
    case Rule::ForallI: {
      need_arity(n, 1);
      const DerivNode& p = *n.premises[0];
      if (n.type->kind != TypeKind::Forall) violate(n.rule, "type must be a forall");
      const std::string& alpha = n.type->name;
      if (!n.gen_var.empty() && n.gen_var != alpha) violate(n.rule, "payload tyvar mismatch");
      if (!type_equal(p.type, n.type->a)) {
        // allow alpha-renamed binder: forall b. A' with A'[a/b] == premise
        Type inst = subst_type(n.type->a, tvar(alpha), n.type->name);
        if (!type_equal(p.type, inst)) violate(n.rule, "premise type differs from body");
      }
      for (const auto& [x, t] : p.ctx)
        if (free_tyvars(t).count(alpha))
          violate(n.rule, "alpha occurs free in the context (a notin FTV(G))");
      if (!ctx_equal(n.ctx, p.ctx)) violate(n.rule, "context changed");
      if (!alpha_equal(n.subject, p.subject)) violate(n.rule, "subject changed");
      return;
    }
    case Rule::ForallE: {
      need_arity(n, 1);
      const DerivNode& p = *n.premises[0];
      if (!n.inst_type) violate(n.rule, "missing instantiating type");
      if (!is_linear(n.inst_type)) violate(n.rule, "instantiating type must be linear");
      if (p.type->kind != TypeKind::Forall) violate(n.rule, "premise must be a forall");
      Type want = subst_type(p.type->a, n.inst_type, p.type->name);
      if (!type_equal(n.type, want)) violate(n.rule, "conclusion is not B[A/alpha]");
      if (!ctx_equal(n.ctx, p.ctx)) violate(n.rule, "context changed");
      if (!alpha_equal(n.subject, p.subject)) violate(n.rule, "subject changed");
      return;
    }
    case Rule::BE: {
      need_arity(n, 3);
      const DerivNode& t = *n.premises[0];
      const DerivNode& n0 = *n.premises[1];
      const DerivNode& n1 = *n.premises[2];
      if (n.subject->kind != TermKind::If) violate(n.rule, "subject must be a conditional");
      if (t.type->kind != TypeKind::Ground) violate(n.rule, "test premise must have type B");
      if (!is_linear(n.type)) violate(n.rule, "branch type must be linear");
      if (!type_equal(n0.type, n.type) || !type_equal(n1.type, n.type))
        violate(n.rule, "branch types differ from conclusion");
      if (!ctx_equal(t.ctx, n0.ctx) || !ctx_equal(t.ctx, n1.ctx))
        violate(n.rule, "additive contexts: all premises must share one context");
      if (!ctx_equal(n.ctx, t.ctx)) violate(n.rule, "conclusion context differs from premises");
      if (!alpha_equal(n.subject->a, t.subject) || !alpha_equal(n.subject->b, n0.subject) ||
          !alpha_equal(n.subject->c, n1.subject))
        violate(n.rule, "subject does not match premises");
      return;
    }
  }
}

}  // namespace

void validate(const Deriv& d) {
  for (const auto& p : d->premises) validate(p);
  check_node(*d);
}

bool try_validate(const Deriv& d, std::string* why) {
  try {
    validate(d);
    return true;
  } catch (const Error& e) {
    if (why) *why = e.what();
    return false;
  }
}

uint64_t degree(const Deriv& d) {
  uint64_t m = 0;
  for (const auto& p : d->premises) m = std::max(m, degree(p));
  return d->rule == Rule::Sp ? m + 1 : m;
}

static void max_merge_rank(const Deriv& d, uint64_t& m) {
  if (d->rule == Rule::M) {
    uint64_t k = 0;
    const Term& subj = d->premises[0]->subject;
    for (const auto& xi : d->m_merged)
      if (count_occurrences(xi, subj) > 0) ++k;
    m = std::max(m, k);
  }
  for (const auto& p : d->premises) max_merge_rank(p, m);
}

uint64_t rank(const Deriv& d) {
  uint64_t m = 0;
  max_merge_rank(d, m);
  return std::max<uint64_t>(m, 1);
}

uint64_t space_weight(const Deriv& d, uint64_t r) {
  switch (d->rule) {
    case Rule::Ax:
    case Rule::B0I:
    case Rule::B1I:
      return 1;
    case Rule::LollyI:
      return space_weight(d->premises[0], r) + 1;
    case Rule::Sp:
      return r * space_weight(d->premises[0], r);
    case Rule::LollyE:
      return space_weight(d->premises[0], r) + space_weight(d->premises[1], r) + 1;
    case Rule::BE:
      return std::max({space_weight(d->premises[0], r), space_weight(d->premises[1], r),
                       space_weight(d->premises[2], r)}) +
             1;
    default:
      return space_weight(d->premises[0], r);
  }
}

uint64_t var_height(const Deriv& d, const std::string& x) {
  if (!d->ctx.count(x)) throw Error("var_height: " + x + " not in conclusion context");
  switch (d->rule) {
    case Rule::Ax:
      return 0;
    case Rule::W:
      if (d->w_var == x) return 0;
      return var_height(d->premises[0], x) + 1;
    case Rule::M:
      if (d->m_target == x) {
        uint64_t h = 0;
        for (const auto& xi : d->m_merged) h = std::max(h, var_height(d->premises[0], xi));
        return h + 1;
      }
      return var_height(d->premises[0], x) + 1;
    case Rule::BE: {
      uint64_t h = 0;
      for (const auto& p : d->premises) h = std::max(h, var_height(p, x));
      return h + 1;
    }
    case Rule::LollyE:
      if (d->premises[0]->ctx.count(x)) return var_height(d->premises[0], x) + 1;
      return var_height(d->premises[1], x) + 1;
    default:
      return var_height(d->premises[0], x) + 1;
  }
}

static json node_to_json(const Deriv& d) {
  json j;
  j["rule"] = rule_name(d->rule);
  json ctx = json::array();
  for (const auto& [k, v] : d->ctx) ctx.push_back({k, to_string(v)});
  j["ctx"] = ctx;
  j["term"] = to_string(d->subject);
  j["type"] = to_string(d->type);
  json payload = json::object();
  if (d->rule == Rule::W) {
    payload["var"] = d->w_var;
    payload["type"] = to_string(d->w_type);
  } else if (d->rule == Rule::M) {
    payload["merged"] = d->m_merged;
    payload["target"] = d->m_target;
  } else if (d->rule == Rule::ForallE) {
    payload["type"] = to_string(d->inst_type);
  }
  j["payload"] = payload;
  json prem = json::array();
  for (const auto& p : d->premises) prem.push_back(node_to_json(p));
  j["premises"] = prem;
  return j;
}

std::string deriv_to_json(const Deriv& d, int indent) {
  return node_to_json(d).dump(indent);
}

static Deriv node_from_json(const json& j) {
  DerivNode n;
  n.rule = rule_from_name(j.at("rule").get<std::string>());
  for (const auto& e : j.at("ctx")) {
    std::string name = e.at(0).get<std::string>();
    if (n.ctx.count(name)) throw Error("derivation context repeats variable " + name);
    n.ctx.emplace(name, parse_type(e.at(1).get<std::string>()));
  }
  n.subject = parse_term(j.at("term").get<std::string>());
  n.type = parse_type(j.at("type").get<std::string>());
  const json& payload = j.at("payload");
  if (n.rule == Rule::W) {
    n.w_var = payload.at("var").get<std::string>();
    n.w_type = parse_type(payload.at("type").get<std::string>());
  } else if (n.rule == Rule::M) {
    n.m_merged = payload.at("merged").get<std::vector<std::string>>();
    n.m_target = payload.at("target").get<std::string>();
  } else if (n.rule == Rule::ForallE) {
    n.inst_type = parse_type(payload.at("type").get<std::string>());
  }
  if (n.rule == Rule::ForallI && n.type->kind == TypeKind::Forall) n.gen_var = n.type->name;
  for (const auto& p : j.at("premises")) n.premises.push_back(node_from_json(p));
  return make_deriv(std::move(n));
}

Deriv deriv_from_json(const std::string& text) {
  json j = json::parse(text);
  return node_from_json(j);
}

std::string to_string(const Ctx& c) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : c) {
    if (!first) os << ", ";
    first = false;
    os << k << ":" << to_string(v);
  }
  return os.str();
}

}  // namespace stab
