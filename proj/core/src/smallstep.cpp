#include "stab/smallstep.hpp"

#include <sstream>

#include "stab/errors.hpp"

namespace stab {

void MStack::push(MContext a) {
  size += a.size;
  stack.push_back(std::move(a));
}

MContext MStack::pop() {
  MContext a = std::move(stack.back());
  stack.pop_back();
  size -= a.size;
  return a;
}

MContext MStack::flatten() const {
  MContext out;
  for (const auto& a : stack)
    for (const auto& as : a.assigns) out.push(as.var, as.term);
  return out;
}

uint64_t SmallConfig::size() const {
  return mstack.size + bctx.size + mctx.size + stab::size(subject);
}

std::string SmallConfig::to_string() const {
  std::ostringstream os;
  os << "<S=[";
  for (size_t i = 0; i < mstack.stack.size(); ++i) {
    if (i) os << " | ";
    os << mstack.stack[i].to_string();
  }
  os << "], C=" << bctx.to_string() << ", A=" << mctx.to_string()
     << " > " << stab::to_string(subject) << ">";
  return os.str();
}

const char* small_rule_name(SmallRule r) {
  switch (r) {
    case SmallRule::Beta: return "beta";
    case SmallRule::H: return "h";
    case SmallRule::If: return "if";
    case SmallRule::R0: return "r0";
    case SmallRule::R1: return "r1";
  }
  return "?";
}

std::variant<SmallConfig, Final> small_step(const SmallConfig& c, FreshGen& fresh,
                                            SmallRule* fired) {
  SpineView v = spine_view(c.subject);
  switch (v.head->kind) {
    case TermKind::Bool: {
      if (!v.spine.empty()) break;
      if (c.bctx.frames.empty()) {
        if (!c.mstack.empty()) break;  // ill-formed: stack height tracks frames
        return Final{v.head->bit};
      }
      // (r0)/(r1): pop the top frame and the parked m-context, drop the
      // working one eagerly
      SmallConfig n = c;
      BFrame f = n.bctx.pop();
      n.mctx = n.mstack.pop();
      n.subject = app(v.head->bit == 0 ? f.then0 : f.else1, f.spine);
      if (fired) *fired = v.head->bit == 0 ? SmallRule::R0 : SmallRule::R1;
      return n;
    }
    case TermKind::Lam: {
      if (v.spine.empty()) break;
      SmallConfig n = c;
      std::string x2 = fresh.fresh(v.head->name);
      n.mctx.push(x2, v.spine[0]);
      Term body = subst(v.head->a, var(x2), v.head->name, &fresh);
      std::vector<Term> rest(v.spine.begin() + 1, v.spine.end());
      n.subject = app(body, rest);
      if (fired) *fired = SmallRule::Beta;
      return n;
    }
    case TermKind::Var: {
      const Term* bound = c.mctx.lookup(v.head->name);
      if (!bound) {
        // look through the parked contexts: [x := N] in flatten(S . A)
        for (auto it = c.mstack.stack.rbegin(); it != c.mstack.stack.rend() && !bound; ++it)
          bound = it->lookup(v.head->name);
      }
      if (!bound) break;
      SmallConfig n = c;
      n.subject = app(*bound, v.spine);
      if (fired) *fired = SmallRule::H;
      return n;
    }
    case TermKind::If: {
      SmallConfig n = c;
      n.mstack.push(std::move(n.mctx));
      n.mctx = MContext{};
      n.bctx.push(BFrame{v.head->b, v.head->c, v.spine});
      n.subject = v.head->a;
      if (fired) *fired = SmallRule::If;
      return n;
    }
    case TermKind::App:
      break;
  }
  throw Stuck("small-step machine stuck at " + c.to_string());
}

SmallRunResult run_small(const Term& p, std::vector<SmallTraceRecord>* trace,
                         FreshGen* fresh, std::vector<SmallConfig>* configs) {
  FreshGen local;
  if (!fresh) fresh = &local;
  SmallConfig c{{}, {}, {}, p};
  SmallRunResult r;
  r.space_s = c.size();
  if (configs) configs->push_back(c);
  while (true) {
    SmallRule fired;
    auto next = small_step(c, *fresh, &fired);
    if (std::holds_alternative<Final>(next)) {
      r.bit = std::get<Final>(next).bit;
      return r;
    }
    c = std::move(std::get<SmallConfig>(next));
    ++r.steps;
    r.space_s = std::max(r.space_s, c.size());
    if (trace)
      trace->push_back({fired, c.mstack.size, c.bctx.size, c.mctx.size,
                        stab::size(c.subject), c.size()});
    if (configs) configs->push_back(c);
  }
}

namespace {

void walk(const TreeNode& node, MStack& s, BContext& c, MContext& a,
          std::vector<SmallConfig>& out) {
  out.push_back({s, c, a, node.subject});
  switch (node.rule) {
    case BigRule::Ax:
      return;
    case BigRule::Beta: {
      a.push(node.bind_var, node.bind_term);
      walk(*node.children.at(0), s, c, a, out);
      return;
    }
    case BigRule::H:
      walk(*node.children.at(0), s, c, a, out);
      return;
    case BigRule::If0:
    case BigRule::If1: {
      MContext saved = a;
      s.push(std::move(a));
      c.push(node.frame);
      a = MContext{};
      walk(*node.children.at(0), s, c, a, out);
      c.pop();
      s.pop();
      a = std::move(saved);
      walk(*node.children.at(1), s, c, a, out);
      return;
    }
  }
}

}  // namespace

std::vector<SmallConfig> translate_bigstep(const TreeNode& tree, const Term& program) {
  (void)program;
  std::vector<SmallConfig> out;
  MStack s;
  BContext c;
  MContext a;
  walk(tree, s, c, a, out);
  return out;
}

bool config_equal(const SmallConfig& x, const SmallConfig& y) {
  if (x.mstack.stack.size() != y.mstack.stack.size()) return false;
  auto ctx_eq = [](const MContext& p, const MContext& q) {
    if (p.assigns.size() != q.assigns.size()) return false;
    for (size_t i = 0; i < p.assigns.size(); ++i) {
      if (p.assigns[i].var != q.assigns[i].var) return false;
      if (to_string(p.assigns[i].term) != to_string(q.assigns[i].term)) return false;
    }
    return true;
  };
  for (size_t i = 0; i < x.mstack.stack.size(); ++i)
    if (!ctx_eq(x.mstack.stack[i], y.mstack.stack[i])) return false;
  if (!ctx_eq(x.mctx, y.mctx)) return false;
  if (x.bctx.frames.size() != y.bctx.frames.size()) return false;
  for (size_t i = 0; i < x.bctx.frames.size(); ++i) {
    const BFrame& f = x.bctx.frames[i];
    const BFrame& g = y.bctx.frames[i];
    if (to_string(f.then0) != to_string(g.then0)) return false;
    if (to_string(f.else1) != to_string(g.else1)) return false;
    if (f.spine.size() != g.spine.size()) return false;
    for (size_t j = 0; j < f.spine.size(); ++j)
      if (to_string(f.spine[j]) != to_string(g.spine[j])) return false;
  }
  return to_string(x.subject) == to_string(y.subject);
}

}  // namespace stab
