//===- mini-run.cpp - Interpret a function --------------------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Prints one result literal per line. Exit codes: 0 success, 1 diagnostics,
// 2 trap, 64 bad flags or argument literals, 66 unreadable input.
//
//===----------------------------------------------------------------------===//

#include "ToolSupport.h"

#include "mir/Dialects/Dialects.h"
#include "mir/IR/SymbolTable.h"
#include "mir/Interp/Interpreter.h"
#include "mir/Text/Parser.h"
#include "mir/Verifier/Verifier.h"

using namespace mir;

int main(int argc, char **argv) {
  CLI::App app("Run a function of an IR module with the reference interpreter.", "mini-run");
  std::string input, entry, args;
  uint64_t maxSteps = InterpLimits().maxSteps;
  app.add_option("file", input, "input IR, or - for stdin")->required();
  app.add_option("--entry", entry, "function to call")->required();
  app.add_option("--args", args, "whitespace separated literals, e.g. '3:i32 [1,2]:memref<2xi32>'");
  app.add_option("--max-steps", maxSteps, "trap after this many executed ops");
  if (auto code = tool::parseArgs(app, argc, argv))
    return *code;

  Context ctx;
  registerAllDialects(ctx);
  std::optional<std::string> text = tool::readInput(input);
  if (!text)
    return tool::kNoInput;
  ParseResult parsed = parseSource(ctx, *text, input == "-" ? "<stdin>" : input);
  if (!parsed) {
    std::cerr << renderDiagnostics(parsed.diagnostics);
    return tool::kDiagnostics;
  }
  if (DiagnosticList diags = verify(parsed.module.get()); !diags.empty()) {
    std::cerr << renderDiagnostics(diags);
    return tool::kDiagnostics;
  }
  if (!lookupSymbol(parsed.module.get(), entry)) {
    std::cerr << "error: no function named @" << entry << "\n";
    return tool::kDiagnostics;
  }

  std::vector<RuntimeValue> values;
  try {
    values = parseRuntimeValues(ctx, args);
  } catch (const ValidationError &e) {
    std::cerr << "error: bad --args: " << e.what() << "\n";
    return tool::kUsage;
  }
  InterpLimits limits;
  limits.maxSteps = maxSteps;
  try {
    for (const RuntimeValue &result : runFunction(parsed.module.get(), entry, values, limits))
      std::cout << formatRuntimeValue(result) << "\n";
  } catch (const InterpTrap &e) {
    std::cerr << "trap: " << e.what() << "\n";
    return tool::kTrap;
  }
  return tool::kSuccess;
}
