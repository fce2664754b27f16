//===- Verifier.h - IR invariant checking -----------------------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/Diagnostic.h"
#include "mir/IR/Operation.h"

namespace mir {

/// Checks `root` and everything nested in it, in five phases: structure,
/// SSA dominance and isolation, symbols, op definitions (including custom
/// verifier hooks), and dialect attributes. A phase only runs when every
/// earlier phase passed. Diagnostics follow pre-order walk order within a
/// phase.
DiagnosticList verify(Operation *root);

/// Convenience wrapper: true when `verify` reports no error.
bool verifies(Operation *root);

} // namespace mir
