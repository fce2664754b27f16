//===- MemRefDialect.cpp - Buffers ----------------------------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "DialectUtils.h"
#include "mir/Dialects/Dialects.h"

namespace mir {
using detail::emitOpError;

static const char *const kMemRefTable = R"(
dialect memref
op memref.alloc operands() results(memref) regions(0) successors(0) hooks(verify=alloc)
op memref.load operands(memref, index...) results(any) regions(0) successors(0)
  hooks(verify=load)
op memref.store operands(any, memref, index...) results() regions(0) successors(0)
  hooks(verify=store)
op memref.dealloc operands(memref) results() regions(0) successors(0)
)";

static void verifyAccess(Operation &op, DiagnosticList &diags, unsigned memrefIndex,
                         Type elementType) {
  Type memref = op.getOperand(memrefIndex)->getType();
  unsigned numIndices = op.getNumOperands() - memrefIndex - 1;
  if (numIndices != memref.getRank()) {
    emitOpError(op, diags, "incorrect number of indices, expected " +
                               std::to_string(memref.getRank()) + " but got " +
                               std::to_string(numIndices));
    return;
  }
  if (elementType != memref.getElementType())
    emitOpError(op, diags, "element type " + elementType.str() + " does not match " +
                               memref.str());
}

void registerMemRefDialect(Context &ctx) {
  HookTable hooks;
  hooks.verify["alloc"] = [](Operation &op, DiagnosticList &diags) {
    if (!op.getResult(0)->getType().hasStaticShape())
      emitOpError(op, diags, "requires a static shape, got " + op.getResult(0)->getType().str());
  };
  hooks.verify["load"] = [](Operation &op, DiagnosticList &diags) {
    verifyAccess(op, diags, 0, op.getResult(0)->getType());
  };
  hooks.verify["store"] = [](Operation &op, DiagnosticList &diags) {
    verifyAccess(op, diags, 1, op.getOperand(0)->getType());
  };
  loadDialectTable(ctx, kMemRefTable, hooks);
  ctx.getMutableDialect("memref")->isLegalToInline = [](Operation &, Region &) { return true; };
}

} // namespace mir
