//===- MLDialect.cpp - ml.leaky_relu --------------------------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "DialectUtils.h"
#include "mir/Dialects/Dialects.h"

namespace mir {

// The scalar f32 form is executable; a tensor-of-f32 form is accepted by
// the verifier but has no runtime semantics.
static const char *const kMLTable = R"(
dialect ml
op ml.leaky_relu traits(NoSideEffect, SameOperandsAndResultType) operands(any) results(any)
  attrs(alpha: float) regions(0) successors(0) hooks(verify=leaky_relu)
)";

void registerMLDialect(Context &ctx) {
  HookTable hooks;
  hooks.verify["leaky_relu"] = [](Operation &op, DiagnosticList &diags) {
    Type type = op.getOperand(0)->getType();
    Type element = type.isTensor() ? type.getElementType() : type;
    if (!element.isF32())
      detail::emitOpError(op, diags, "expects f32 or a tensor of f32, got " + type.str());
  };
  loadDialectTable(ctx, kMLTable, hooks);
}

} // namespace mir
