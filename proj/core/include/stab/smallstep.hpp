#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stab/bigstep.hpp"
#include "stab/term.hpp"

namespace stab {

// The sequential machine: the extra m-stack parks the working m-context of
// every conditional whose test is still being evaluated.

struct MStack {
  std::vector<MContext> stack;
  uint64_t size = 0;

  void push(MContext a);
  MContext pop();
  bool empty() const { return stack.empty(); }
  // concatenation of all stacked m-contexts, bottom first
  MContext flatten() const;
};

struct SmallConfig {
  MStack mstack;
  BContext bctx;
  MContext mctx;
  Term subject;

  uint64_t size() const;  // |S| + |C| + |A| + |M|
  std::string to_string() const;
};

enum class SmallRule { Beta, H, If, R0, R1 };
const char* small_rule_name(SmallRule r);

struct Final {
  int bit;
};

// One transition; Final when the subject is a boolean under the empty
// B-context.  Throws Stuck when no rule applies.
std::variant<SmallConfig, Final> small_step(const SmallConfig& c, FreshGen& fresh,
                                            SmallRule* fired = nullptr);

struct SmallTraceRecord {
  SmallRule rule;
  uint64_t mstack_size, bctx_size, mctx_size, subj_size, total;
};

struct SmallRunResult {
  int bit = -1;
  uint64_t space_s = 0;
  uint64_t steps = 0;
};

SmallRunResult run_small(const Term& p, std::vector<SmallTraceRecord>* trace = nullptr,
                         FreshGen* fresh = nullptr,
                         std::vector<SmallConfig>* configs = nullptr);

// The translation from a big-step computation tree: one small configuration
// per tree node, in left-depth-first order.  Consecutive entries are related
// by exactly one small_step.
std::vector<SmallConfig> translate_bigstep(const TreeNode& tree, const Term& program);

bool config_equal(const SmallConfig& a, const SmallConfig& b);

}  // namespace stab
