//===- AsmPrinter.h - Textual IR printer ------------------------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Prints ops in the generic form or, when a registered op has a print hook
// and the generic flag is off, in its custom form. Printing never fails:
// values and blocks the printer cannot name are rendered as placeholder
// tokens.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/Operation.h"

#include <ostream>
#include <span>
#include <string>
#include <unordered_map>

namespace mir {

struct PrintOptions {
  /// Print every op in the generic form.
  bool generic = false;
  /// Append `loc(...)` to every op.
  bool printLocations = false;
};

std::string printOp(Operation *op, const PrintOptions &options = {});
void printOp(Operation *op, std::ostream &os, const PrintOptions &options = {});

/// Printer interface handed to custom print hooks. The printer has already
/// emitted the result names and the opcode; hooks print the rest of the line
/// (regions included).
class OpAsmPrinter {
public:
  OpAsmPrinter(std::ostream &os, Operation *root, const PrintOptions &options);

  std::ostream &getStream() { return *os_; }
  OpAsmPrinter &operator<<(std::string_view text) {
    *os_ << text;
    return *this;
  }
  OpAsmPrinter &operator<<(int64_t v) {
    *os_ << v;
    return *this;
  }
  OpAsmPrinter &operator<<(Type type) {
    printType(type);
    return *this;
  }
  OpAsmPrinter &operator<<(Attribute attr) {
    printAttribute(attr);
    return *this;
  }
  OpAsmPrinter &operator<<(Value *value) {
    printOperand(value);
    return *this;
  }

  void printOperand(Value *value);
  void printOperands(std::span<Value *const> values);
  void printType(Type type);
  void printTypes(std::span<const Type> types);
  void printAttribute(Attribute attr);
  /// `(a, b) -> c`, parenthesizing zero, multiple or function-typed results.
  void printFunctionalType(std::span<const Type> inputs, std::span<const Type> results);
  /// Prints ` {k = v, ...}` (or ` attributes {...}`) with `elided` names
  /// skipped; prints nothing when no attribute remains.
  void printAttrDict(const Operation &op, std::span<const std::string_view> elided = {},
                     bool withKeyword = false);
  /// `%arg0: i32`.
  void printArgument(Value *arg);
  void printSuccessor(Block *block);
  /// `^bb1(%a, %b : i32, i32)`.
  void printSuccessorAndOperands(const Operation &op, unsigned index);
  /// Prints `{`, the blocks, and `}`. With `printEntryArgs` false the entry
  /// block label is never printed; with `printTerminators` false the last op
  /// of every block is skipped.
  void printRegion(Region &region, bool printEntryArgs = true, bool printTerminators = true);

  const std::string &getValueName(Value *value);

  /// Prints an op line (indentation, results, op, location, newline).
  void printOperation(Operation *op);
  /// Prints the alias definitions collected from the root.
  void printAliases();

private:
  void assignNames(Operation *root);
  void printGeneric(Operation *op);
  void indent();
  void collectAliases(Attribute attr, std::unordered_map<Attribute, unsigned> &counts,
                      std::vector<Attribute> &order);

  std::ostream *os_;
  PrintOptions options_;
  unsigned indent_ = 0;
  std::unordered_map<Value *, std::string> valueNames_;
  std::unordered_map<Block *, std::string> blockNames_;
  std::unordered_map<Attribute, std::string> aliases_;
  std::vector<Attribute> aliasOrder_;
};

} // namespace mir
