//===- mini-match.cpp - Pattern matcher tooling ---------------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
//   mini-match FILE.pat --dump-matcher STAGE     print the matcher IR
//   mini-match FILE.pat --input IN.mir           rewrite IN with the matcher
//   mini-match FILE.pat --input IN.mir --stats   also compare every stage
//
// Statistics go to stderr. Exit codes as for mini-opt.
//
//===----------------------------------------------------------------------===//

#include "ToolSupport.h"

#include "mir/Dialects/Dialects.h"
#include "mir/Matcher/Matcher.h"
#include "mir/Text/AsmPrinter.h"
#include "mir/Text/Parser.h"
#include "mir/Verifier/Verifier.h"

#include <iomanip>

using namespace mir;

namespace {

size_t countMatcherOps(Operation *module) {
  size_t n = 0;
  walk(module, WalkOrder::PreOrder, [&](Operation *op) {
    n += op->getDialectNamespace() == "pat";
  });
  return n;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app("Compile declarative patterns to a matcher program and apply it.", "mini-match");
  std::string patternsFile, dumpStage, input, output;
  bool stats = false, fold = false;
  std::vector<std::string> stages;
  for (MatcherStage stage : allMatcherStages())
    stages.emplace_back(stageName(stage));
  app.add_option("patterns", patternsFile, "pattern file")->required();
  app.add_option("--dump-matcher", dumpStage, "print the matcher after this stage")
      ->check(CLI::IsMember(stages));
  app.add_option("--input", input, "IR to rewrite with the final matcher, or - for stdin");
  app.add_flag("--stats", stats, "report matcher size and evaluations for every stage");
  app.add_flag("--fold", fold, "also fold constants while rewriting");
  app.add_option("-o", output, "output file (default stdout)");
  if (auto code = tool::parseArgs(app, argc, argv))
    return *code;

  Context ctx;
  registerAllDialects(ctx);
  std::optional<std::string> patternText = tool::readInput(patternsFile);
  if (!patternText)
    return tool::kNoInput;
  PatternParseResult parsedPatterns = parsePatternFile(ctx, *patternText, patternsFile);
  if (!parsedPatterns.patterns) {
    std::cerr << renderDiagnostics(parsedPatterns.diagnostics);
    return tool::kDiagnostics;
  }
  const PatternSet &set = *parsedPatterns.patterns;

  std::vector<std::unique_ptr<Operation>> matchers;
  try {
    for (MatcherStage stage : allMatcherStages())
      matchers.push_back(buildMatcher(ctx, set, stage));
  } catch (const ValidationError &e) {
    std::cerr << patternsFile << ": error: " << e.what() << "\n";
    return tool::kDiagnostics;
  }
  for (auto &matcher : matchers) {
    if (DiagnosticList diags = verify(matcher.get()); !diags.empty()) {
      std::cerr << renderDiagnostics(diags);
      return tool::kDiagnostics;
    }
  }

  std::string out;
  if (!dumpStage.empty())
    out += printOp(matchers[size_t(*parseStageName(dumpStage))].get());

  std::optional<std::string> text;
  if (!input.empty()) {
    text = tool::readInput(input);
    if (!text)
      return tool::kNoInput;
  }
  GreedyConfig config;
  config.fold = fold;
  if (stats) {
    std::cerr << std::left << std::setw(12) << "stage" << std::setw(10) << "ops";
    if (text)
      std::cerr << std::setw(13) << "evaluations" << std::setw(9) << "matches" << "rewrites";
    std::cerr << "\n";
  }
  for (size_t s = 0; s < matchers.size(); ++s) {
    bool last = s + 1 == matchers.size();
    if (!stats && !last)
      continue;
    if (stats)
      std::cerr << std::left << std::setw(12) << stageName(allMatcherStages()[s])
                << std::setw(10) << countMatcherOps(matchers[s].get());
    if (text) {
      ParseResult parsed = parseSource(ctx, *text, input == "-" ? "<stdin>" : input);
      if (!parsed) {
        std::cerr << renderDiagnostics(parsed.diagnostics);
        return tool::kDiagnostics;
      }
      MatcherStats matcherStats;
      try {
        runMatcher(matchers[s].get(), set, parsed.module.get(), config, matcherStats);
      } catch (const IRError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return tool::kDiagnostics;
      }
      if (stats)
        std::cerr << std::setw(13) << matcherStats.evaluations << std::setw(9)
                  << matcherStats.matches << matcherStats.rewrites;
      if (last)
        out += printOp(parsed.module.get());
    }
    if (stats)
      std::cerr << "\n";
  }
  if (!tool::writeOutput(output, out))
    return tool::kNoInput;
  return tool::kSuccess;
}
