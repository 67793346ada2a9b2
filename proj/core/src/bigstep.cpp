#include "stab/bigstep.hpp"

#include <sstream>

#include "stab/errors.hpp"

namespace stab {

void MContext::push(const std::string& v, Term term) {
  size += stab::size(term) + 1;
  assigns.push_back({v, std::move(term)});
}

void MContext::truncate(size_t n) {
  while (assigns.size() > n) {
    size -= stab::size(assigns.back().term) + 1;
    assigns.pop_back();
  }
}

const Term* MContext::lookup(const std::string& v) const {
  // assignments carry distinct machine-fresh names; scan from the newest
  for (auto it = assigns.rbegin(); it != assigns.rend(); ++it)
    if (it->var == v) return &it->term;
  return nullptr;
}

std::string MContext::to_string() const {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < assigns.size(); ++i) {
    if (i) os << ", ";
    os << assigns[i].var << ":=" << stab::to_string(assigns[i].term);
  }
  os << ']';
  return os.str();
}

uint64_t BFrame::size() const {
  uint64_t s = 1 + stab::size(then0) + stab::size(else1);
  for (const auto& v : spine) s += stab::size(v);
  return s;
}

void BContext::push(BFrame f) {
  size += f.size();
  frames.push_back(std::move(f));
}

BFrame BContext::pop() {
  BFrame f = std::move(frames.back());
  frames.pop_back();
  size -= f.size();
  return f;
}

std::string BContext::to_string() const {
  // rendered outermost first, hole written as `@`
  std::string hole = "@";
  for (const auto& f : frames) {
    std::ostringstream os;
    os << "(if " << hole << " then " << stab::to_string(f.then0) << " else "
       << stab::to_string(f.else1) << ")";
    for (const auto& v : f.spine) os << ' ' << stab::to_string(v);
    hole = os.str();
  }
  return hole;
}

Term plug(const BContext& c, const Term& m) {
  Term cur = m;
  for (const auto& f : c.frames) {
    Term t = if_(cur, f.then0, f.else1);
    cur = app(t, f.spine);
  }
  return cur;
}

Term closure(const Term& m, const MContext& a) {
  Term cur = m;
  for (auto it = a.assigns.rbegin(); it != a.assigns.rend(); ++it)
    cur = subst(cur, it->term, it->var);
  return cur;
}

Term config_term(const BContext& c, const MContext& a, const Term& m) {
  return closure(plug(c, m), a);
}

const char* big_rule_name(BigRule r) {
  switch (r) {
    case BigRule::Ax: return "ax";
    case BigRule::Beta: return "beta";
    case BigRule::H: return "h";
    case BigRule::If0: return "if0";
    case BigRule::If1: return "if1";
  }
  return "?";
}

namespace {

struct PathCounts {
  uint64_t beta = 0, h = 0, iff = 0;
};

struct Pending {
  BFrame frame;          // popped frame, kept to build the continuation
  size_t mctx_mark;      // truncate target for the continuation premise
  PathCounts pc;         // counters at the conditional's configuration
  TreeNode* if_node;     // tree node awaiting its second child
  size_t trace_slot;     // trace line to patch with if0/if1
};

struct Machine {
  const EvalOptions& opts;
  BContext c;
  MContext a;
  ComputationStats stats;
  FreshGen local_fresh;
  FreshGen* fresh;
  std::vector<Pending> pending;
  uint64_t rules = 0;

  explicit Machine(const EvalOptions& o) : opts(o) {
    fresh = o.fresh ? o.fresh : &local_fresh;
  }

  [[noreturn]] void stuck(const Term& m) {
    std::ostringstream os;
    os << "stuck configuration:\n  B-context: " << c.to_string()
       << "\n  m-context: " << a.to_string() << "\n  subject:   " << to_string(m);
    throw Stuck(os.str());
  }

  void note(BigRule r, const Term& m, const PathCounts& pc) {
    uint64_t csize = c.size + a.size + size(m);
    stats.max_config_size = std::max(stats.max_config_size, csize);
    stats.max_beta_path = std::max(stats.max_beta_path, pc.beta);
    stats.max_h_path = std::max(stats.max_h_path, pc.h);
    stats.max_if_path = std::max(stats.max_if_path, pc.iff);
    if (opts.trace)
      opts.trace->push_back({r, c.size, a.size, size(m), stats.max_config_size});
    if (opts.on_config) {
      ConfigInfo info{r,        c.cardinality(), c.size, a.cardinality(), a.size,
                      size(m),  pc.beta,         pc.h,   pc.iff,          csize,
                      &a,       &m};
      opts.on_config(info);
    }
    if (++rules > opts.max_rules) throw FuelExhausted("eval_big: rule budget exhausted");
  }

  EvalResult run(Term m, std::unique_ptr<TreeNode>* tree_out) {
    PathCounts pc;
    TreeNode* parent = nullptr;  // chain parent: new nodes attach here
    auto attach = [&](std::unique_ptr<TreeNode> n) -> TreeNode* {
      TreeNode* raw = n.get();
      if (parent) parent->children.push_back(std::move(n));
      else if (tree_out) *tree_out = std::move(n);
      return raw;
    };

    while (true) {
      SpineView v = spine_view(m);
      switch (v.head->kind) {
        case TermKind::Bool: {
          if (!v.spine.empty()) stuck(m);
          note(BigRule::Ax, m, pc);
          ++stats.total_ax;
          if (opts.build_tree) {
            auto n = std::make_unique<TreeNode>();
            n->rule = BigRule::Ax;
            n->subject = m;
            attach(std::move(n));
          }
          int b = v.head->bit;
          if (pending.empty()) {
            EvalResult r;
            r.bit = b;
            r.stats = stats;
            r.stats.result_bit = b;
            return r;
          }
          Pending p = std::move(pending.back());
          pending.pop_back();
          c.pop();
          a.truncate(p.mctx_mark);
          pc = p.pc;
          if (opts.trace && p.trace_slot != size_t(-1))
            (*opts.trace)[p.trace_slot].rule = b == 0 ? BigRule::If0 : BigRule::If1;
          if (p.if_node) {
            p.if_node->rule = b == 0 ? BigRule::If0 : BigRule::If1;
            p.if_node->test_bit = b;
            parent = p.if_node;
          }
          m = app(b == 0 ? p.frame.then0 : p.frame.else1, p.frame.spine);
          break;
        }
        case TermKind::Lam: {
          if (v.spine.empty()) stuck(m);
          note(BigRule::Beta, m, pc);
          ++stats.total_beta;
          ++pc.beta;
          std::string x2 = fresh->fresh(v.head->name);
          Term arg = v.spine[0];
          a.push(x2, arg);
          Term body = subst(v.head->a, var(x2), v.head->name, fresh);
          std::vector<Term> rest(v.spine.begin() + 1, v.spine.end());
          Term next = app(body, rest);
          if (opts.build_tree) {
            auto n = std::make_unique<TreeNode>();
            n->rule = BigRule::Beta;
            n->subject = m;
            n->bind_var = x2;
            n->bind_term = arg;
            parent = attach(std::move(n));
          }
          m = next;
          break;
        }
        case TermKind::Var: {
          const Term* bound = a.lookup(v.head->name);
          if (!bound) stuck(m);
          note(BigRule::H, m, pc);
          ++stats.total_h;
          ++pc.h;
          if (opts.build_tree) {
            auto n = std::make_unique<TreeNode>();
            n->rule = BigRule::H;
            n->subject = m;
            parent = attach(std::move(n));
          }
          m = app(*bound, v.spine);
          break;
        }
        case TermKind::If: {
          // rule tag patched to if0/if1 once the test returns
          note(BigRule::If0, m, pc);
          size_t slot = opts.trace ? opts.trace->size() - 1 : size_t(-1);
          ++stats.total_if;
          Pending p;
          p.frame = BFrame{v.head->b, v.head->c, v.spine};
          p.mctx_mark = a.assigns.size();
          p.pc = pc;
          p.if_node = nullptr;
          p.trace_slot = slot;
          if (opts.build_tree) {
            auto n = std::make_unique<TreeNode>();
            n->rule = BigRule::If0;
            n->subject = m;
            n->frame = p.frame;
            p.if_node = attach(std::move(n));
            parent = p.if_node;
          }
          c.push(p.frame);
          pending.push_back(std::move(p));
          ++pc.iff;
          m = v.head->a;
          break;
        }
        case TermKind::App:
          stuck(m);  // unreachable: spine_view strips applications
      }
    }
  }
};

}  // namespace

EvalResult eval_big_in(BContext c, MContext a, const Term& m, const EvalOptions& opts) {
  // The (Ax) rule returns the boolean under any B-context, so frames present
  // initially are inert: they weigh in on configuration sizes but are never
  // resumed.  Only frames pushed by (if) during this run have continuations.
  Machine mach(opts);
  mach.c = std::move(c);
  mach.a = std::move(a);
  std::unique_ptr<TreeNode> tree;
  EvalResult r = mach.run(m, &tree);
  r.tree = std::move(tree);
  return r;
}

EvalResult eval_big(const Term& p, const EvalOptions& opts) {
  Machine mach(opts);
  std::unique_ptr<TreeNode> tree;
  EvalResult r = mach.run(p, &tree);
  r.tree = std::move(tree);
  return r;
}

uint64_t space(const Term& p) {
  EvalResult r = eval_big(p);
  return r.stats.max_config_size;
}

bool check_weakening(const BContext& c1, const MContext& a, const Term& t,
                     const BContext& outer) {
  EvalResult base = eval_big_in(c1, a, t, {});
  BContext composed;
  for (const auto& f : outer.frames) composed.push(f);
  for (const auto& f : c1.frames) composed.push(f);
  EvalResult wrapped = eval_big_in(composed, a, t, {});
  return base.bit == wrapped.bit;
}

}  // namespace stab
