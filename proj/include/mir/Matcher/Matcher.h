//===- Matcher.h - Pattern sets compiled to matcher programs ----*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// A PatternSet compiles to a `builtin.module` of `pat.matcher` ops. Each
// stage below rewrites that module in place:
//
//   naive       one linear chain per pattern, one matcher per root opcode
//   contracted  opcode+arity and adjacent attribute checks fused
//   reordered   captures sunk to their first use, same-handle checks sorted
//   factored    chains merged into one prefix trie with opcode switches
//   final       factored, then generic CSE
//
// Positions are written as in CaptureInfo: "r" is the root, "P.i" the op
// defining operand i of the op at P. Capture ids are position based too,
// so captures from different patterns at the same place coincide.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/Rewrite/GreedyDriver.h"
#include "mir/Rewrite/PatternDSL.h"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mir {

enum class MatcherStage { Naive, Contracted, Reordered, Factored, Final };

std::string_view stageName(MatcherStage stage);
std::optional<MatcherStage> parseStageName(std::string_view name);
std::vector<MatcherStage> allMatcherStages();

/// Naive compilation. Throws ValidationError on duplicate pattern names.
std::unique_ptr<Operation> compilePatternsToMatcher(Context &ctx, const PatternSet &set);

ChangeReport contractMatcher(Operation *module);
ChangeReport reorderPredicates(Operation *module);
ChangeReport factorMatcher(Operation *module);

/// Compiles `set` and runs every transformation up to `stage`.
std::unique_ptr<Operation> buildMatcher(Context &ctx, const PatternSet &set, MatcherStage stage);

struct MatcherStats {
  /// Executed `pat.check_*` and `pat.switch_opcode` ops.
  unsigned evaluations = 0;
  unsigned matches = 0;
  unsigned rewrites = 0;
};

/// Picks rewrites by interpreting a matcher module. Ops the matcher does
/// not handle fall through to `fallback` when one is given.
class MatcherApplicator : public PatternApplicator {
public:
  MatcherApplicator(Operation *matcherModule, const PatternSet &set,
                    const FrozenPatternSet *fallback = nullptr);
  std::optional<std::string> apply(Operation *op, PatternRewriter &rewriter) override;

  /// Name of the pattern the matcher selects for `op`, without rewriting.
  std::optional<std::string> match(Operation *op);

  const MatcherStats &getStats() const { return stats_; }

private:
  struct Match {
    const DeclarativePattern *pattern;
    Bindings bindings;
  };
  std::optional<Match> run(Operation *op);

  std::vector<Operation *> matchers_;
  std::map<std::string, const DeclarativePattern *> byName_;
  const FrozenPatternSet *fallback_;
  MatcherStats stats_;
};

/// Greedy rewriting of `scope` driven by the matcher module.
ChangeReport runMatcher(Operation *matcherModule, const PatternSet &set, Operation *scope,
                        const GreedyConfig &config, MatcherStats &stats);

} // namespace mir
