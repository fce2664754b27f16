//===- LowerAffine.h - Affine to CFG lowering -------------------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/Operation.h"
#include "mir/Rewrite/GreedyDriver.h"

namespace mir {

/// Rewrites every affine op nested under `scope` into arith, cf and memref
/// ops. Loops become a condition block taking the induction variable as a
/// block argument, the body blocks, and a step block. Inner loops are
/// lowered before outer ones.
///
/// Returns false with a diagnostic if `scope` contains an affine op outside
/// the supported set; the IR is left untouched in that case.
bool lowerAffine(Operation *scope, ChangeReport &report, DiagnosticList &diags);

} // namespace mir
