//===- FuncDialect.cpp - Functions, calls and returns ---------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "DialectUtils.h"
#include "mir/Dialects/Dialects.h"
#include "mir/IR/SymbolTable.h"

namespace mir {
using detail::emitOpError;

static const char *const kFuncTable = R"(
dialect func
op func.func traits(SymbolDefiner, IsolatedFromAbove)
  operands() results() attrs(sym_name: string, function_type: type) regions(1) successors(0)
  hooks(verify=func, print=func, parse=func)
op func.return traits(Terminator) operands(any...) results() regions(0) successors(0)
  hooks(verify=return, print=return, parse=return)
op func.call operands(any...) results(any...) attrs(callee: symbol) regions(0) successors(0)
  hooks(verify=call)
)";

static Type getFunctionType(Operation &op) {
  Attribute attr = op.getAttr("function_type");
  if (!attr || !attr.isa(AttrKind::Type) || !attr.getTypeValue().isFunction())
    return Type();
  return attr.getTypeValue();
}

static void verifyFunc(Operation &op, DiagnosticList &diags) {
  Type type = getFunctionType(op);
  if (!type) {
    emitOpError(op, diags, "requires 'function_type' to be a function type");
    return;
  }
  Region &body = op.getRegion(0);
  if (body.empty())
    return;
  if (body.front()->getArgumentTypes() != type.getInputs())
    emitOpError(op, diags, "entry block argument types must match the function signature " +
                               type.str());
}

static void verifyReturn(Operation &op, DiagnosticList &diags) {
  Operation *parent = op.getParentOp();
  if (!parent || parent->getName() != "func.func") {
    emitOpError(op, diags, "expects parent op 'func.func'");
    return;
  }
  Type type = getFunctionType(*parent);
  if (!type)
    return;
  const std::vector<Type> &results = type.getResults();
  if (results.size() != op.getNumOperands()) {
    emitOpError(op, diags, "has " + std::to_string(op.getNumOperands()) +
                               " operands, but enclosing function returns " +
                               std::to_string(results.size()));
    return;
  }
  for (unsigned i = 0; i < results.size(); ++i)
    if (op.getOperand(i)->getType() != results[i])
      emitOpError(op, diags, "type of return operand " + std::to_string(i) + " (" +
                                 op.getOperand(i)->getType().str() +
                                 ") doesn't match function result type (" + results[i].str() +
                                 ")");
}

static void verifyCall(Operation &op, DiagnosticList &diags) {
  Attribute callee = op.getAttr("callee");
  Operation *fn = lookupNearestSymbol(&op, callee.getSymbol());
  // Unresolved references are reported by the symbol checks.
  if (!fn)
    return;
  if (fn->getName() != "func.func") {
    emitOpError(op, diags, "'" + callee.str() + "' does not reference a function");
    return;
  }
  Type type = getFunctionType(*fn);
  if (!type)
    return;
  if (op.getOperandTypes() != type.getInputs())
    emitOpError(op, diags, "operand types do not match the signature of callee " +
                               callee.str() + " " + type.str());
  else if (op.getResultTypes() != type.getResults())
    emitOpError(op, diags, "result types do not match the signature of callee " +
                               callee.str() + " " + type.str());
}

static bool printFunc(Operation &op, OpAsmPrinter &p) {
  Type type = getFunctionType(op);
  Attribute name = op.getAttr("sym_name");
  if (!type || !name || !name.isa(AttrKind::String))
    return false;
  Region &body = op.getRegion(0);
  Block *entry = body.empty() ? nullptr : body.front();
  if (entry && (entry->empty() || entry->getArgumentTypes() != type.getInputs()))
    return false;

  p << " ";
  p.printAttribute(op.getContext().getSymbolRefAttr(name.getString()));
  p << "(";
  const std::vector<Type> &inputs = type.getInputs();
  for (unsigned i = 0; i < inputs.size(); ++i) {
    if (i)
      p << ", ";
    if (entry)
      p.printArgument(entry->getArgument(i));
    else
      p.printType(inputs[i]);
  }
  p << ")";
  const std::vector<Type> &results = type.getResults();
  if (!results.empty()) {
    p << " -> ";
    if (results.size() == 1 && !results[0].isFunction()) {
      p.printType(results[0]);
    } else {
      p << "(";
      detail::printTypeList(p, results);
      p << ")";
    }
  }
  std::string_view elided[] = {"function_type", "sym_name"};
  p.printAttrDict(op, elided, /*withKeyword=*/true);
  if (entry) {
    p << " ";
    p.printRegion(body, /*printEntryArgs=*/false);
  }
  return true;
}

static void parseFunc(OpAsmParser &parser, OperationState &state) {
  Context &ctx = parser.getContext();
  std::string name = parser.parseSymbolName();
  parser.parsePunct("(");
  std::vector<OpAsmParser::Argument> args;
  std::vector<Type> inputs;
  bool named = parser.peekOperand();
  if (!parser.parseOptionalPunct(")")) {
    do {
      if (named) {
        args.push_back(parser.parseArgument());
        inputs.push_back(args.back().type);
      } else {
        inputs.push_back(parser.parseType());
      }
    } while (parser.parseOptionalPunct(","));
    parser.parsePunct(")");
  }
  std::vector<Type> results;
  if (parser.parseOptionalPunct("->"))
    results = parser.parseResultTypes();
  parser.parseOptionalAttrDictWithKeyword(state.attributes);
  state.addAttribute("sym_name", ctx.getStringAttr(name));
  state.addAttribute("function_type", ctx.getTypeAttr(ctx.getFunctionType(inputs, results)));
  Region *body = state.addRegion();
  if (parser.peekPunct("{")) {
    if (!named && !inputs.empty())
      parser.emitError("function body requires named arguments");
    parser.parseRegion(*body, &args);
  }
}

static bool printReturn(Operation &op, OpAsmPrinter &p) {
  if (!op.getAttrs().empty())
    return false;
  detail::printOperandsWithTypes(p, op.getOperands());
  return true;
}

static void parseReturn(OpAsmParser &parser, OperationState &state) {
  if (!parser.peekOperand())
    return;
  Location loc = parser.getCurrentLocation();
  auto operands = parser.parseOperandList();
  parser.parsePunct(":");
  auto types = parser.parseTypeList();
  state.addOperands(parser.resolveOperands(operands, types, loc));
}

void registerFuncDialect(Context &ctx) {
  HookTable hooks;
  hooks.verify["func"] = verifyFunc;
  hooks.verify["return"] = verifyReturn;
  hooks.verify["call"] = verifyCall;
  hooks.print["func"] = printFunc;
  hooks.parse["func"] = parseFunc;
  hooks.print["return"] = printReturn;
  hooks.parse["return"] = parseReturn;
  loadDialectTable(ctx, kFuncTable, hooks);

  DialectDescriptor *dialect = ctx.getMutableDialect("func");
  dialect->isLegalToInline = [](Operation &, Region &) { return true; };
  dialect->terminatorValues = [](Operation &term) { return term.getOperands(); };
  dialect->rewriteTerminator = [](Operation &term, Block &continuation) {
    OpBuilder builder(term.getContext());
    builder.setInsertionPoint(&term);
    OperationState state("cf.br", term.getLoc());
    state.addSuccessor(&continuation, term.getOperands());
    builder.create(std::move(state));
    term.erase();
  };
}

} // namespace mir
