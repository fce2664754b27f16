//===- Parser.h - Textual IR parser -----------------------------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Recursive-descent parser for the generic op form plus the custom forms of
// registered ops (through their parse hooks). Errors are reported as
// diagnostics carrying file:line:col; the parser stops at the first error.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/Operation.h"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mir {

struct ParseResult {
  std::unique_ptr<Operation> module;
  DiagnosticList diagnostics;
  explicit operator bool() const { return module != nullptr; }
};

/// Parses a whole source. A single top-level `builtin.module` is returned
/// as is; otherwise the top-level ops are wrapped in a new module.
ParseResult parseSource(Context &ctx, std::string_view text, std::string filename = "<input>");

/// Parses `affine_map<...>` (or the bare `(dims)[syms] -> (exprs)` body).
/// Throws ValidationError with a message on failure.
AffineMap parseAffineMap(std::string_view text);

/// Parses a single type or attribute from text; throws ValidationError.
Type parseType(Context &ctx, std::string_view text);
Attribute parseAttribute(Context &ctx, std::string_view text);

/// Thrown internally on the first parse error.
struct ParseError {
  Location loc;
  std::string message;
};

/// Parser interface handed to custom parse hooks, and the parser itself.
class OpAsmParser {
public:
  struct UnresolvedOperand {
    std::string name;
    Location loc;
  };
  struct Argument {
    UnresolvedOperand name;
    Type type;
  };

  OpAsmParser(Context &ctx, std::string_view text, std::string filename);

  Context &getContext() const { return *ctx_; }
  Location getCurrentLocation();
  [[noreturn]] void emitError(const std::string &message);
  [[noreturn]] void emitError(Location loc, const std::string &message);

  // Lexical helpers. Whitespace and `//` comments are skipped first.
  bool atEnd();
  /// Consumes `punct` if next; `punct` may be any literal token text.
  bool parseOptionalPunct(std::string_view punct);
  void parsePunct(std::string_view punct);
  bool peekPunct(std::string_view punct);
  /// Consumes the keyword only when it is a whole identifier.
  bool parseOptionalKeyword(std::string_view keyword);
  void parseKeyword(std::string_view keyword);
  std::optional<std::string> parseOptionalIdentifier();
  std::string parseIdentifier();
  bool parseOptionalInteger(BigInt &value);
  int64_t parseInteger();
  std::string parseStringLiteral();
  /// `@name` or `@"name"`.
  std::string parseSymbolName();

  // Operands and values.
  bool peekOperand();
  UnresolvedOperand parseOperand();
  /// Zero or more comma-separated operands.
  std::vector<UnresolvedOperand> parseOperandList();
  Value *resolveOperand(const UnresolvedOperand &operand, Type type);
  std::vector<Value *> resolveOperands(const std::vector<UnresolvedOperand> &operands,
                                       const std::vector<Type> &types, Location loc);
  /// `%x: T`.
  Argument parseArgument();

  // Types and attributes.
  Type parseType();
  std::optional<Type> parseOptionalType();
  /// Comma-separated, at least one.
  std::vector<Type> parseTypeList();
  /// `(a, b) -> c` or `(a) -> (b, c)`.
  Type parseFunctionType();
  /// `-> T` / `-> (T, U)` result list after the arrow has been consumed.
  std::vector<Type> parseResultTypes();
  Attribute parseAttribute();
  std::optional<Attribute> parseOptionalAttribute();
  /// `(d0, d1)[s0] -> (exprs)`, without the `affine_map<>` wrapper.
  AffineMap parseAffineMapBody();
  /// `{k = v, ...}` appended to `attrs`; returns false if no `{` follows.
  bool parseOptionalAttrDict(std::vector<NamedAttribute> &attrs);
  /// `attributes {...}`.
  bool parseOptionalAttrDictWithKeyword(std::vector<NamedAttribute> &attrs);
  Location parseLocation();

  // Regions and successors.
  /// Parses `{ ... }` into `region`. With `entryArgs`, the entry block is
  /// created with those arguments even when the body is empty.
  void parseRegion(Region &region, const std::vector<Argument> *entryArgs = nullptr);
  Block *parseSuccessor();
  /// `^bb(%a, %b : T, U)` appended to `state.successors`.
  void parseSuccessorAndOperands(OperationState &state);

  /// Name of the op being parsed by the current hook.
  const std::string &getOpName() const { return opStack_.back(); }

  // Top level.
  std::unique_ptr<Operation> parseTopLevel();

private:
  struct ValueEntry {
    Value *value = nullptr;
    bool forward = false;
    Location useLoc;
    Block *useBlock = nullptr;
  };
  struct BlockEntry {
    Block *block = nullptr;
    bool defined = false;
    Location loc;
    std::unique_ptr<Block> pending;
  };
  struct Scope {
    bool isolated = false;
    std::map<std::string, ValueEntry> values;
    std::map<std::string, BlockEntry> blocks;
  };

  void skipTrivia();
  char peekChar();
  Location locAt(size_t pos);
  std::string parseBareId();
  std::string parseSuffixId(char sigil);
  void parseAliasDefinition();

  Operation *parseOperation(Block *block);
  AffineExpr parseAffineExpr(const std::vector<std::string> &dims,
                             const std::vector<std::string> &syms);
  AffineExpr parseAffineTerm(const std::vector<std::string> &dims,
                             const std::vector<std::string> &syms);
  AffineExpr parseAffineUnary(const std::vector<std::string> &dims,
                              const std::vector<std::string> &syms);
  Location parseLocationBody();
  void parseGenericBody(OperationState &state);

  ValueEntry *lookupValue(const std::string &name);
  void defineValue(const std::string &name, Value *value, Location loc);
  Block *getBlockRef(const std::string &name, Location loc);
  Block *defineBlock(const std::string &name, Location loc, Region &region);
  void pushScope(bool isolated);
  void popScope();

  Context *ctx_;
  std::string_view text_;
  std::string filename_;
  size_t pos_ = 0;
  std::vector<size_t> lineStarts_;
  std::vector<Scope> scopes_;
  std::vector<std::unique_ptr<Value>> placeholders_;
  std::vector<Block *> blockStack_;
  std::vector<std::string> opStack_;
  std::unordered_map<std::string, Attribute> aliases_;
};

} // namespace mir
