//===- Canonicalize.h - Canonicalization driver -----------------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/Rewrite/GreedyDriver.h"

namespace mir {

/// Tier used for patterns collected from op definitions. Declarative
/// patterns loaded from a file go in tier 0 and are tried first.
inline constexpr unsigned kNativePatternTier = 1;

/// Every registered op's canonicalization patterns, plus the rule moving
/// constants to the right of commutative ops.
void addCanonicalizationPatterns(Context &ctx, FrozenPatternSet &patterns);

/// Canonicalizer settings: folding, dead-op and unreachable-block removal.
GreedyConfig getCanonicalizeConfig();

/// Greedy rewriting of `scope` with `applicator` under the canonicalizer
/// settings.
ChangeReport runCanonicalizer(Operation *scope, PatternApplicator &applicator);
/// Same, with the registered patterns only.
ChangeReport runCanonicalizer(Operation *scope);

} // namespace mir
