//===- Passes.h - Core transformation passes --------------------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/Pass/PassManager.h"

namespace mir {

/// Dominance-scoped common subexpression elimination over side-effect-free,
/// region-free registered ops. Values found in an enclosing region are
/// reused in nested regions unless an IsolatedFromAbove op intervenes.
ChangeReport runCSE(Operation *scope);

/// Removes unreachable blocks and side-effect-free ops without uses, until
/// nothing changes.
ChangeReport runDCE(Operation *scope);

struct InlinerOptions {
  /// Callees with more ops than this are left alone.
  unsigned maxOps = 32;
};

/// Inlines `func.call` ops whose callee is legal to inline, small enough and
/// not part of a recursive call chain. Statistics: `inlined`,
/// `skipped-unresolved`, `skipped-recursive`, `skipped-size`,
/// `skipped-unregistered`, `skipped-illegal`.
PassResult runInliner(Operation *module, const InlinerOptions &options = {});

/// Registers cse, dce, canonicalize, inline, lower-affine and the
/// test-corrupt-ir helper. Idempotent; called by the registry on first use.
void registerCorePasses();

} // namespace mir
