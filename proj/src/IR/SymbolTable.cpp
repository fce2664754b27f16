//===- SymbolTable.cpp - Symbol lookup ------------------------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/IR/SymbolTable.h"

namespace mir {

std::optional<std::string> getSymbolName(const Operation *op) {
  if (!op->hasTrait(Trait::SymbolDefiner))
    return std::nullopt;
  Attribute name = op->getAttr(kSymbolNameAttr);
  if (!name || !name.isa(AttrKind::String))
    return std::nullopt;
  return name.getString();
}

Operation *lookupSymbol(Operation *scope, std::string_view name) {
  if (scope->getNumRegions() == 0)
    return nullptr;
  for (Block &block : scope->getRegion(0).getBlocks())
    for (Operation &op : block.getOperations())
      if (auto sym = getSymbolName(&op); sym && *sym == name)
        return &op;
  return nullptr;
}

Operation *getNearestSymbolTable(Operation *op) {
  for (Operation *p = op->getParentOp(); p; p = p->getParentOp())
    if (p->hasTrait(Trait::SymbolTableHolder))
      return p;
  return nullptr;
}

Operation *lookupNearestSymbol(Operation *from, std::string_view name) {
  Operation *table = getNearestSymbolTable(from);
  return table ? lookupSymbol(table, name) : nullptr;
}

} // namespace mir
