//===- DialectUtils.h - Shared helpers for dialect hooks --------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/Diagnostic.h"
#include "mir/IR/DialectTable.h"
#include "mir/IR/Operation.h"
#include "mir/Text/AsmPrinter.h"
#include "mir/Text/Parser.h"

namespace mir::detail {

inline void emitOpError(Operation &op, DiagnosticList &diags, const std::string &msg) {
  diags.push_back(Diagnostic::error(op.getLoc(), "'" + op.getName() + "' op " + msg));
}

/// Prints a comma-separated type list.
inline void printTypeList(OpAsmPrinter &p, std::span<const Type> types) {
  for (size_t i = 0; i < types.size(); ++i) {
    if (i)
      p << ", ";
    p.printType(types[i]);
  }
}

/// `, ` joined operands with their types after a colon, or nothing.
inline void printOperandsWithTypes(OpAsmPrinter &p, const std::vector<Value *> &values) {
  if (values.empty())
    return;
  p << " ";
  p.printOperands(values);
  p << " : ";
  std::vector<Type> types;
  for (Value *v : values)
    types.push_back(v->getType());
  printTypeList(p, types);
}

} // namespace mir::detail
