//===- Dominance.h - Block dominance and value visibility -------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/Operation.h"

#include <unordered_map>
#include <vector>

namespace mir {

/// Dominator tree of one region's CFG, rooted at the entry block.
struct RegionDomTree {
  /// Blocks reachable from the entry, in reverse post-order.
  std::vector<Block *> rpo;
  std::unordered_map<Block *, Block *> idom;
  std::unordered_map<Block *, std::vector<Block *>> children;
  std::unordered_map<Block *, unsigned> rpoIndex;

  bool isReachable(Block *b) const { return rpoIndex.count(b) != 0; }
};

/// Lazily computed dominator trees for the regions it is asked about. The
/// IR must not change between queries.
class DominanceInfo {
public:
  const RegionDomTree &getDomTree(Region *region);

  /// True if `a` dominates `b` (reflexive); both in the same region.
  /// Unreachable blocks are dominated by every block.
  bool dominates(Block *a, Block *b);

  /// True if `user` may legally use `value`: defined earlier in the same
  /// block, in a dominating block, or in an enclosing region, with no
  /// IsolatedFromAbove op in between.
  bool properlyDominates(Value *value, Operation *user);

private:
  std::unordered_map<Region *, RegionDomTree> trees_;
};

/// One-shot convenience wrapper around DominanceInfo.
bool properlyDominates(Value *value, Operation *user);

/// True if `value` is defined outside the nearest IsolatedFromAbove scope
/// of `user` (the use would cross an isolation barrier).
bool crossesIsolationBarrier(Value *value, Operation *user);

} // namespace mir
