#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stab/term.hpp"

namespace stab {

// The big-step evaluation machine: two memory devices (an m-context of
// delayed variable assignments and a stack of pending conditional frames),
// head-variable substitution only, left-depth-first evaluation order.

struct MContext {
  struct Assign {
    std::string var;
    Term term;
  };
  std::vector<Assign> assigns;
  uint64_t size = 0;  // an assignment x := M weighs |M| + 1

  void push(const std::string& var, Term term);
  void truncate(size_t n);
  const Term* lookup(const std::string& var) const;
  uint64_t cardinality() const { return assigns.size(); }
  std::string to_string() const;
};

// One pending conditional: (if [] then then0 else else1) V1 ... Vn.
struct BFrame {
  Term then0, else1;
  std::vector<Term> spine;
  uint64_t size() const;  // 1 + |then0| + |else1| + sum |spine|
};

struct BContext {
  std::vector<BFrame> frames;  // back() is the innermost frame
  uint64_t size = 0;           // the hole itself weighs nothing

  void push(BFrame f);
  BFrame pop();
  uint64_t cardinality() const { return frames.size(); }
  std::string to_string() const;
};

// Term a configuration denotes: C[M] with assignments applied outermost-last.
Term plug(const BContext& c, const Term& m);
Term closure(const Term& m, const MContext& a);
Term config_term(const BContext& c, const MContext& a, const Term& m);

struct ComputationStats {
  uint64_t total_beta = 0, total_h = 0, total_if = 0, total_ax = 0;
  uint64_t max_beta_path = 0, max_h_path = 0, max_if_path = 0;
  uint64_t max_config_size = 0;
  int result_bit = -1;
  uint64_t total_rules() const { return total_beta + total_h + total_if + total_ax; }
};

enum class BigRule { Ax, Beta, H, If0, If1 };
const char* big_rule_name(BigRule r);

// Node of the materialized computation tree (--tree mode).
struct TreeNode {
  BigRule rule;
  Term subject;
  std::string bind_var;  // Beta: the fresh assignment
  Term bind_term;
  BFrame frame;        // If0/If1: the frame that was pushed
  int test_bit = -1;   // If0/If1
  std::vector<std::unique_ptr<TreeNode>> children;
};

// Everything visible at one configuration, reported just before its rule
// fires.  Path counters follow the tree path from the initial configuration;
// entering the continuation premise of a conditional does not re-count it.
struct ConfigInfo {
  BigRule rule;
  uint64_t bctx_card, bctx_size;
  uint64_t mctx_card, mctx_size;
  uint64_t subj_size;
  uint64_t path_beta, path_h, path_if;
  uint64_t config_size;  // |C| + |A| + |M|
  const MContext* mctx;
  const Term* subject;
};

struct TraceRecord {
  BigRule rule;
  uint64_t bctx_size, mctx_size, subj_size, running_max;
};

struct EvalOptions {
  uint64_t max_rules = 200000000;  // safety net for ill-typed inputs
  bool build_tree = false;
  std::vector<TraceRecord>* trace = nullptr;
  std::function<void(const ConfigInfo&)> on_config;
  FreshGen* fresh = nullptr;  // shared with a paired small-step run if desired
};

struct EvalResult {
  int bit = -1;
  ComputationStats stats;
  std::unique_ptr<TreeNode> tree;
};

// Evaluate a program (closed, ground-typed).  Throws Stuck with a rendered
// configuration when no rule applies.
EvalResult eval_big(const Term& p, const EvalOptions& opts = {});

// General entry: evaluation under given contexts (the machine's weakening
// lemma quantifies over these).
EvalResult eval_big_in(BContext c, MContext a, const Term& m, const EvalOptions& opts = {});

// Maximal configuration size over the whole computation.
uint64_t space(const Term& p);

// Re-run under the composed context outer[c1[.]] and report whether the
// boolean agrees.
bool check_weakening(const BContext& c1, const MContext& a, const Term& t,
                     const BContext& outer);

}  // namespace stab
