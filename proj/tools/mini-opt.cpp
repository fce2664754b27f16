//===- mini-opt.cpp - Parse, run a pass pipeline, print -------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Exit codes: 0 success, 1 diagnostics, 64 bad flags, 66 unreadable input.
// Diagnostics and --print-ir-after-all dumps go to stderr; stdout carries
// only the resulting IR so runs can be piped.
//
//===----------------------------------------------------------------------===//

#include "ToolSupport.h"

#include "mir/Dialects/Dialects.h"
#include "mir/Matcher/Matcher.h"
#include "mir/Pass/PassManager.h"
#include "mir/Rewrite/Canonicalize.h"
#include "mir/Text/AsmPrinter.h"
#include "mir/Text/Parser.h"
#include "mir/Verifier/Verifier.h"

using namespace mir;

int main(int argc, char **argv) {
  CLI::App app("Parse IR, run a pass pipeline over it and print the result.", "mini-opt");
  std::string input, pipeline, patternsFile, engine = "direct", emit = "custom", output;
  unsigned threads = getDefaultThreadCount();
  bool verifyEach = false, printAfterAll = false, showTable = false;
  app.add_option("file", input, "input IR, or - for stdin")->required();
  app.add_option("--pass-pipeline", pipeline, "e.g. 'builtin.module(func.func(cse))'");
  app.add_option("--patterns", patternsFile, "declarative patterns used by canonicalize");
  app.add_option("--engine", engine, "pattern engine for --patterns")
      ->check(CLI::IsMember({"direct", "fsm"}));
  app.add_option("--threads", threads, "worker threads (default: MINI_IR_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--verify-each", verifyEach, "verify after every pass");
  app.add_option("--emit", emit, "output form")->check(CLI::IsMember({"generic", "custom"}));
  app.add_flag("--print-ir-after-all", printAfterAll, "dump the anchor op after every pass");
  app.add_flag("--pass-timing", showTable, "print per-pass rewrites and timing to stderr");
  app.add_option("-o", output, "output file (default stdout)");
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
  Operation *module = parsed.module.get();
  if (DiagnosticList diags = verify(module); !diags.empty()) {
    std::cerr << renderDiagnostics(diags);
    return tool::kDiagnostics;
  }

  PipelineSpec spec;
  spec.anchor = module->getName();
  if (!pipeline.empty()) {
    PipelineParseResult pipelineResult = parsePipeline(ctx, pipeline);
    if (!pipelineResult.spec) {
      std::cerr << renderDiagnostics(pipelineResult.diagnostics);
      return tool::kDiagnostics;
    }
    spec = *pipelineResult.spec;
  }

  PipelineOptions options;
  options.threads = threads;
  options.verifyEach = verifyEach;
  options.printAfterAll = printAfterAll;
  options.printOptions.generic = emit == "generic";

  // Declarative patterns go first, the registered ones after them.
  auto natives = std::make_shared<FrozenPatternSet>();
  addCanonicalizationPatterns(ctx, *natives);
  auto declarative = std::make_shared<PatternSet>();
  if (!patternsFile.empty()) {
    std::optional<std::string> patternText = tool::readInput(patternsFile);
    if (!patternText)
      return tool::kNoInput;
    PatternParseResult patterns = parsePatternFile(ctx, *patternText, patternsFile);
    if (!patterns.patterns) {
      std::cerr << renderDiagnostics(patterns.diagnostics);
      return tool::kDiagnostics;
    }
    *declarative = *patterns.patterns;
  }
  if (engine == "fsm") {
    std::shared_ptr<Operation> matcher;
    try {
      matcher = buildMatcher(ctx, *declarative, MatcherStage::Final);
    } catch (const ValidationError &e) {
      std::cerr << patternsFile << ": error: " << e.what() << "\n";
      return tool::kDiagnostics;
    }
    options.env.canonicalizeApplicator = [matcher, declarative, natives] {
      return std::make_unique<MatcherApplicator>(matcher.get(), *declarative, natives.get());
    };
  } else {
    auto combined = std::make_shared<FrozenPatternSet>();
    for (const auto &p : declarative->patterns)
      combined->add(p, 0);
    addCanonicalizationPatterns(ctx, *combined);
    options.env.canonicalizeApplicator = [combined] {
      return std::make_unique<DirectApplicator>(*combined);
    };
  }

  PassReport report;
  try {
    report = runPipeline(module, spec, options);
  } catch (const IRError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return tool::kDiagnostics;
  }
  std::cerr << report.irDumps;
  if (showTable)
    std::cerr << report.table();
  if (report.failed) {
    std::cerr << renderDiagnostics(report.diagnostics);
    return tool::kDiagnostics;
  }
  if (DiagnosticList diags = verify(module); !diags.empty()) {
    std::cerr << renderDiagnostics(diags);
    return tool::kDiagnostics;
  }
  if (!tool::writeOutput(output, printOp(module, options.printOptions)))
    return tool::kNoInput;
  return tool::kSuccess;
}
