//===- SymbolTable.h - Symbol lookup ----------------------------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/Operation.h"

#include <optional>
#include <string>
#include <string_view>

namespace mir {

/// Name of the attribute holding a symbol definer's name.
inline constexpr std::string_view kSymbolNameAttr = "sym_name";

/// The symbol defined by `op`, if it is a symbol definer with a name.
std::optional<std::string> getSymbolName(const Operation *op);

/// Finds the op defining `name` directly in the single region of `scope`.
/// Definition order does not matter.
Operation *lookupSymbol(Operation *scope, std::string_view name);

/// Nearest ancestor (excluding `op`) holding a symbol table.
Operation *getNearestSymbolTable(Operation *op);

/// Resolves `name` in the nearest symbol table enclosing `from`.
Operation *lookupNearestSymbol(Operation *from, std::string_view name);

} // namespace mir
