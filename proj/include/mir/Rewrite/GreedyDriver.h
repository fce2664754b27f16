//===- GreedyDriver.h - Worklist-driven pattern application -----*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/Rewrite/PatternMatch.h"

#include <string>
#include <vector>

namespace mir {

struct GreedyConfig {
  unsigned maxIterations = 10;
  bool fold = true;
  /// Erase any trivially dead op met on the worklist, not only dead ops
  /// left behind by a rewrite.
  bool removeDeadOps = false;
  /// Seed the worklist in reverse post-order instead.
  bool reverseSeed = false;
  /// Erase blocks unreachable from their region entry after each sweep.
  bool eraseUnreachableBlocks = false;
  /// Per-sweep cap on processed worklist items; guards against patterns
  /// that undo each other forever. Zero selects a size-based default.
  size_t maxStepsPerSweep = 0;
};

struct ChangeReport {
  unsigned rewrites = 0;
  unsigned folds = 0;
  unsigned opsErased = 0;
  unsigned blocksErased = 0;
  unsigned iterations = 0;
  /// True iff the final sweep changed nothing.
  bool converged = false;
  /// Names of applied patterns, in application order.
  std::vector<std::string> applied;

  bool changed() const { return rewrites + folds + opsErased + blocksErased > 0; }
};

/// Chooses and applies at most one rewrite for an op.
class PatternApplicator {
public:
  virtual ~PatternApplicator() = default;
  /// Returns the applied pattern's name, or nullopt when nothing applied.
  virtual std::optional<std::string> apply(Operation *op, PatternRewriter &rewriter) = 0;
};

/// Tries the candidates of a FrozenPatternSet in order.
class DirectApplicator : public PatternApplicator {
public:
  explicit DirectApplicator(const FrozenPatternSet &patterns) : patterns_(patterns) {}
  std::optional<std::string> apply(Operation *op, PatternRewriter &rewriter) override;

private:
  const FrozenPatternSet &patterns_;
};

/// Rewrites everything nested under `scope` (not `scope` itself) until a
/// sweep makes no change or `maxIterations` sweeps ran.
ChangeReport applyPatternsGreedily(Operation *scope, PatternApplicator &applicator,
                                   const GreedyConfig &config = {});
ChangeReport applyPatternsGreedily(Operation *scope, const FrozenPatternSet &patterns,
                                   const GreedyConfig &config = {});

/// Erases blocks unreachable from their region's entry, in every region
/// nested under `scope`. Returns the number of erased blocks.
unsigned eraseUnreachableBlocks(Operation *scope);

} // namespace mir
