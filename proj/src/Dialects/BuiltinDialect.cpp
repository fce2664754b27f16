//===- BuiltinDialect.cpp - builtin.module --------------------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "DialectUtils.h"
#include "mir/Dialects/Dialects.h"

namespace mir {

static const char *const kBuiltinTable = R"(
dialect builtin
op builtin.module
  traits(SymbolTableHolder, IsolatedFromAbove, SingleRegionSingleBlock)
  operands() results() attrs(sym_name: string?) regions(1) successors(0)
  hooks(print=module, parse=module)
op builtin.module_end traits(Terminator) operands() results() regions(0) successors(0)
)";

// The terminator is implicit in the custom form, so the form only applies
// when the body is one argument-free block ending in a bare module_end.
static bool printModule(Operation &op, OpAsmPrinter &p) {
  Region &body = op.getRegion(0);
  if (body.size() != 1)
    return false;
  Block *block = body.front();
  if (block->getNumArguments() != 0 || block->empty())
    return false;
  Operation *term = block->back();
  if (term->getName() != "builtin.module_end" || term->getNumOperands() != 0 ||
      !term->getAttrs().empty())
    return false;
  if (Attribute name = op.getAttr("sym_name")) {
    if (!name.isa(AttrKind::String))
      return false;
    p << " ";
    p.printAttribute(op.getContext().getSymbolRefAttr(name.getString()));
  }
  std::string_view elided[] = {"sym_name"};
  p.printAttrDict(op, elided, /*withKeyword=*/true);
  p << " ";
  p.printRegion(body, /*printEntryArgs=*/false, /*printTerminators=*/false);
  return true;
}

static void parseModule(OpAsmParser &parser, OperationState &state) {
  Context &ctx = parser.getContext();
  if (parser.peekPunct("@"))
    state.addAttribute("sym_name", ctx.getStringAttr(parser.parseSymbolName()));
  parser.parseOptionalAttrDictWithKeyword(state.attributes);
  Region *body = state.addRegion();
  parser.parseRegion(*body);
  if (body->empty())
    body->addBlock(ctx);
  Block *block = body->front();
  if (block->empty() || block->back()->getName() != "builtin.module_end")
    block->push_back(Operation::create(ctx, OperationState("builtin.module_end", state.location)));
}

void registerBuiltinDialect(Context &ctx) {
  HookTable hooks;
  hooks.print["module"] = printModule;
  hooks.parse["module"] = parseModule;
  loadDialectTable(ctx, kBuiltinTable, hooks);
}

std::unique_ptr<Operation> createModule(Context &ctx, Location loc) {
  OperationState state("builtin.module", loc);
  Block *block = state.addRegion()->addBlock(ctx);
  block->push_back(Operation::create(ctx, OperationState("builtin.module_end", loc)));
  return Operation::create(ctx, std::move(state));
}

} // namespace mir
