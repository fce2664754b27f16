//===- MatcherTest.cpp - Matcher compilation, optimization and running ----===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "Corpus.h"
#include "TestUtils.h"

#include "mir/Matcher/Matcher.h"
#include "mir/Pass/Passes.h"
#include "mir/Verifier/Verifier.h"

#include <random>

using namespace mir;
using namespace mir::test;

namespace {

PatternSet loadPatterns(Context &ctx, const std::string &relative) {
  PatternParseResult parsed = parsePatternFile(ctx, readFile(sourcePath(relative)), relative);
  INFO(renderDiagnostics(parsed.diagnostics));
  REQUIRE(parsed.patterns);
  return *parsed.patterns;
}

PatternSet parsePatterns(Context &ctx, std::string_view text) {
  PatternParseResult parsed = parsePatternFile(ctx, text, "t.pat");
  INFO(renderDiagnostics(parsed.diagnostics));
  REQUIRE(parsed.patterns);
  return *parsed.patterns;
}

/// The pattern a direct search would pick: first match in priority order.
std::optional<std::string> oracleMatch(const PatternSet &set, Operation *op) {
  for (const DeclarativePattern *pattern : set.getOrdered(op->getName())) {
    Bindings bindings;
    if (pattern->match(op, bindings))
      return pattern->getName();
  }
  return std::nullopt;
}

std::vector<Operation *> matcherOps(Operation *module) {
  std::vector<Operation *> out;
  for (Operation &op : *module->getRegion(0).front())
    if (op.getName() == "pat.matcher")
      out.push_back(&op);
  return out;
}

/// Top-level ops of the first matcher body other than descends.
std::vector<Operation *> matcherBody(Operation *module) {
  std::vector<Operation *> out;
  for (Operation &op : *matcherOps(module).at(0)->getRegion(0).front())
    if (op.getName() != "pat.descend")
      out.push_back(&op);
  return out;
}

size_t countNamed(Operation *root, std::string_view name) {
  size_t n = 0;
  walk(root, WalkOrder::PreOrder, [&](Operation *op) { n += op->getName() == name; });
  return n;
}

FrozenPatternSet freeze(const PatternSet &set) {
  FrozenPatternSet frozen;
  for (const auto &p : set.patterns)
    frozen.add(p);
  return frozen;
}

/// Random straight-line arith over i32 and i64 values.
std::string randomArith(std::mt19937 &rng, unsigned numOps) {
  std::vector<std::string> pools[2] = {{"%a", "%b"}, {"%c"}};
  const char *types[2] = {"i32", "i64"};
  const char *binary[] = {"arith.addi", "arith.subi", "arith.muli"};
  std::string body;
  for (unsigned i = 0; i < numOps; ++i) {
    unsigned t = rng() % 4 == 0 ? 1 : 0;
    std::string name = "%v" + std::to_string(i);
    auto pick = [&] { return pools[t][rng() % pools[t].size()]; };
    if (rng() % 3 == 0) {
      body += "  " + name + " = arith.constant " + std::to_string(rng() % 3) + " : " + types[t] +
              "\n";
    } else {
      std::string lhs = pick(), rhs = pick();
      body += "  " + name + " = \"" + binary[rng() % 3] + "\"(" + lhs + ", " + rhs + ") : (" +
              types[t] + ", " + types[t] + ") -> " + types[t] + "\n";
    }
    pools[t].push_back(name);
  }
  return "func.func @f(%a: i32, %b: i32, %c: i64) -> i32 {\n" + body + "  func.return " +
         pools[0].back() + " : i32\n}\n";
}

struct Engines {
  std::vector<std::unique_ptr<Operation>> stages;
  Engines(Context &ctx, const PatternSet &set) {
    for (MatcherStage stage : allMatcherStages())
      stages.push_back(buildMatcher(ctx, set, stage));
  }
};

GreedyConfig engineConfig() {
  GreedyConfig config;
  config.fold = false;
  return config;
}

} // namespace

TEST_SUITE("pdl-fsm") {

TEST_CASE("naive compilation emits one chain per pattern") {
  DialectContext dc;
  SUBCASE("leaky relu") {
    PatternSet set = loadPatterns(dc.ctx, "patterns/leaky_relu.pat");
    auto module = compilePatternsToMatcher(dc.ctx, set);
    CHECK(verifies(module.get()));
    REQUIRE(matcherOps(module.get()).size() == 1);
    CHECK(countNamed(module.get(), "pat.emit") == 1);
    Operation *emit = nullptr;
    walk(module.get(), WalkOrder::PreOrder, [&](Operation *op) {
      if (op->getName() == "pat.emit")
        emit = op;
    });
    CHECK(emit->getAttr("pattern").getString() == "leaky_relu_lower");
  }
  SUBCASE("empty set") {
    auto module = compilePatternsToMatcher(dc.ctx, PatternSet());
    CHECK(matcherOps(module.get()).empty());
    CHECK(verifies(module.get()));
  }
  SUBCASE("three chains on one root") {
    PatternSet set = parsePatterns(dc.ctx, R"(
pattern a benefit(1) { match: "arith.addi"($x, $y) where same($x, $y) rewrite: replace: $x }
pattern b benefit(2) { match: "arith.addi"($x, "arith.constant"() {value = 0 : i32}) rewrite: replace: $x }
pattern c benefit(1) { match: "arith.addi"("arith.constant"() {value = 0 : i32}, $x) rewrite: replace: $x }
)");
    auto module = compilePatternsToMatcher(dc.ctx, set);
    std::vector<Operation *> body = matcherBody(module.get());
    REQUIRE(body.size() == 4);
    for (int i = 0; i < 3; ++i)
      CHECK(body[i]->getName() == "pat.check_opcode");
    CHECK(body[3]->getName() == "pat.fail");
  }
}

TEST_CASE("matcher verification catches captures used before definition") {
  DialectContext dc;
  auto module = parseOrFail(dc.ctx, R"(
"pat.matcher"() ({
^bb0(%r: index):
  "pat.check_same"() {lhs = "r.0", rhs = "r.1"} ({
    "pat.emit"() {pattern = "p", bindings = {}} : () -> ()
  }) : () -> ()
  "pat.fail"() : () -> ()
}) : () -> ()
)");
  DiagnosticList diags = verify(module.get());
  REQUIRE(!diags.empty());
  CHECK(diags[0].render().find("uses capture 'r.0' before it is defined") != std::string::npos);
}

TEST_CASE("contraction fuses opcode and arity checks and is idempotent") {
  DialectContext dc;
  PatternSet set = loadPatterns(dc.ctx, "patterns/arith_suite.pat");
  auto module = compilePatternsToMatcher(dc.ctx, set);
  size_t opcodes = countNamed(module.get(), "pat.check_opcode");
  ChangeReport first = contractMatcher(module.get());
  CHECK(first.rewrites >= opcodes);
  CHECK(countNamed(module.get(), "pat.check_opcode") == 0);
  CHECK(countNamed(module.get(), "pat.check_arity") == 0);
  CHECK(countNamed(module.get(), "pat.check_op_arity") == opcodes);
  CHECK(verifies(module.get()));
  std::string once = printOp(module.get());
  CHECK(contractMatcher(module.get()).rewrites == 0);
  CHECK(printOp(module.get()) == once);

  SUBCASE("adjacent attribute checks become one") {
    PatternSet attrs = parsePatterns(dc.ctx, R"(
pattern p benefit(1) { match: "arith.addi"($x, %y) {a = 1 : i32, b = 2 : i32} rewrite: replace: $x }
)");
    auto m = compilePatternsToMatcher(dc.ctx, attrs);
    contractMatcher(m.get());
    CHECK(countNamed(m.get(), "pat.check_attr") == 0);
    CHECK(countNamed(m.get(), "pat.check_attrs") == 1);
  }
}

TEST_CASE("every stage selects the same pattern as a direct search on random ops") {
  DialectContext dc;
  PatternSet set = loadPatterns(dc.ctx, "patterns/arith_suite.pat");
  Engines engines(dc.ctx, set);
  std::vector<std::unique_ptr<MatcherApplicator>> applicators;
  for (auto &stage : engines.stages)
    applicators.push_back(std::make_unique<MatcherApplicator>(stage.get(), set));

  std::mt19937 rng(7);
  unsigned ops = 0, matched = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto module = parseOrFail(dc.ctx, randomArith(rng, 8));
    walk(module.get(), WalkOrder::PreOrder, [&](Operation *op) {
      if (op->getName().rfind("arith.", 0) != 0)
        return;
      ++ops;
      std::optional<std::string> expected = oracleMatch(set, op);
      matched += expected.has_value();
      for (size_t s = 0; s < applicators.size(); ++s) {
        INFO("stage " << stageName(allMatcherStages()[s]) << " on " << printOp(op));
        CHECK(applicators[s]->match(op) == expected);
      }
    });
  }
  CHECK(ops >= 100);
  // The generator should exercise more than the no-match path.
  CHECK(matched > 10);
}

TEST_CASE("reordering puts the globally frequent predicate first") {
  DialectContext dc;
  PatternSet set = parsePatterns(dc.ctx, R"(
pattern ab benefit(3) { match: "arith.addi"($x, %y) {a = 1 : i32, b = 2 : i32} rewrite: replace: $x }
pattern ba benefit(2) { match: "arith.addi"($x, %y) {b = 2 : i32, a = 1 : i32} rewrite: replace: $x }
pattern a benefit(1) { match: "arith.addi"($x, %y) {a = 1 : i32} rewrite: replace: $x }
)");
  auto module = compilePatternsToMatcher(dc.ctx, set);
  ChangeReport report = reorderPredicates(module.get());
  CHECK(report.rewrites >= 1);
  CHECK(verifies(module.get()));
  // Each chain's first attribute check is now `a`.
  std::vector<std::string> firstAttr;
  std::function<void(Block *)> scan = [&](Block *block) {
    for (Operation &op : *block) {
      if (op.getName() == "pat.check_attr") {
        firstAttr.push_back(op.getAttr("name").getString());
        continue;
      }
      for (unsigned r = 0; r < op.getNumRegions(); ++r)
        scan(op.getRegion(r).front());
    }
  };
  scan(matcherOps(module.get())[0]->getRegion(0).front());
  CHECK(firstAttr == std::vector<std::string>{"a", "a", "a"});
}

TEST_CASE("reordering keeps captures ahead of the checks reading them") {
  DialectContext dc;
  PatternSet set = loadPatterns(dc.ctx, "patterns/arith_suite.pat");
  auto module = compilePatternsToMatcher(dc.ctx, set);
  contractMatcher(module.get());
  reorderPredicates(module.get());
  // The verifier checks capture order along every path.
  DiagnosticList diags = verify(module.get());
  INFO(renderDiagnostics(diags));
  CHECK(diags.empty());
  CHECK(countNamed(module.get(), "pat.check_same") == 4);
}

TEST_CASE("factoring shares prefixes and dispatches on roots") {
  DialectContext dc;
  PatternSet addi = parsePatterns(dc.ctx, R"(
pattern a benefit(1) { match: "arith.addi"($x, $y) where same($x, $y) rewrite: replace: $x }
pattern b benefit(2) { match: "arith.addi"($x, "arith.constant"() {value = 0 : i32}) rewrite: replace: $x }
pattern c benefit(1) { match: "arith.addi"("arith.constant"() {value = 0 : i32}, $x) rewrite: replace: $x }
)");
  auto module = buildMatcher(dc.ctx, addi, MatcherStage::Factored);
  CHECK(verifies(module.get()));
  std::vector<Operation *> body = matcherBody(module.get());
  REQUIRE(body.size() == 2);
  CHECK(body[0]->getName() == "pat.check_op_arity");
  CHECK(body[1]->getName() == "pat.fail");

  // A non-addi op costs one evaluation instead of three.
  auto input = parseOrFail(dc.ctx, R"(
func.func @f(%a: i32, %b: i32) -> i32 {
  %s = "arith.subi"(%a, %b) : (i32, i32) -> i32
  func.return %s : i32
}
)");
  Operation *subi = nullptr;
  walk(input.get(), WalkOrder::PreOrder, [&](Operation *op) {
    if (op->getName() == "arith.subi")
      subi = op;
  });
  auto naive = compilePatternsToMatcher(dc.ctx, addi);
  MatcherApplicator naiveRun(naive.get(), addi), factoredRun(module.get(), addi);
  naiveRun.match(subi);
  factoredRun.match(subi);
  CHECK(naiveRun.getStats().evaluations == 3);
  CHECK(factoredRun.getStats().evaluations == 1);

  SUBCASE("a single chain is left alone") {
    PatternSet one = loadPatterns(dc.ctx, "patterns/leaky_relu.pat");
    auto m = buildMatcher(dc.ctx, one, MatcherStage::Reordered);
    std::string before = printOp(m.get());
    CHECK(factorMatcher(m.get()).rewrites == 0);
    CHECK(printOp(m.get()) == before);
  }
  SUBCASE("distinct roots meet in a switch") {
    PatternSet suite = loadPatterns(dc.ctx, "patterns/arith_suite.pat");
    auto m = buildMatcher(dc.ctx, suite, MatcherStage::Factored);
    REQUIRE(matcherOps(m.get()).size() == 1);
    std::vector<Operation *> top = matcherBody(m.get());
    REQUIRE(!top.empty());
    CHECK(top[0]->getName() == "pat.switch_opcode");
    CHECK(top[0]->getAttr("cases").getArray().size() == 3);
  }
}

TEST_CASE("every stage round-trips, verifies and survives CSE") {
  DialectContext dc;
  for (const char *file : {"patterns/arith_suite.pat", "patterns/leaky_relu.pat"}) {
    PatternSet set = loadPatterns(dc.ctx, file);
    unsigned deduped = 0;
    for (MatcherStage stage : allMatcherStages()) {
      INFO(file << " at " << stageName(stage));
      auto module = buildMatcher(dc.ctx, set, stage);
      CHECK(verifies(module.get()));
      std::string text = printOp(module.get());
      auto reparsed = parseOrFail(dc.ctx, text);
      CHECK(structurallyEqual(module.get(), reparsed.get()));
      CHECK(printOp(reparsed.get()) == text);
      std::string generic = printOp(module.get(), PrintOptions{true, false});
      auto fromGeneric = parseOrFail(dc.ctx, generic);
      CHECK(structurallyEqual(module.get(), fromGeneric.get()));

      ChangeReport cse = runCSE(reparsed.get());
      deduped += cse.opsErased;
      CHECK(verifies(reparsed.get()));
      if (stage == MatcherStage::Naive && std::string(file) == "patterns/arith_suite.pat")
        CHECK(cse.opsErased >= 1);
      if (stage == MatcherStage::Final)
        CHECK(cse.opsErased == 0);
    }
    if (std::string(file) == "patterns/arith_suite.pat")
      CHECK(deduped >= 1);
  }
}

TEST_CASE("all engines agree with the direct engine on the corpus") {
  DialectContext dc;
  for (const char *file : {"patterns/arith_suite.pat", "patterns/leaky_relu.pat"}) {
    PatternSet set = loadPatterns(dc.ctx, file);
    FrozenPatternSet frozen = freeze(set);
    Engines engines(dc.ctx, set);
    for (const auto &corpusFile : corpus::load(sourcePath("corpus"))) {
      INFO(file << " on " << corpusFile.name);
      auto direct = parseOrFail(dc.ctx, corpusFile.text);
      ChangeReport directReport = applyPatternsGreedily(direct.get(), frozen, engineConfig());
      std::vector<unsigned> evaluations;
      for (size_t s = 0; s < engines.stages.size(); ++s) {
        INFO("stage " << stageName(allMatcherStages()[s]));
        auto module = parseOrFail(dc.ctx, corpusFile.text);
        MatcherStats stats;
        ChangeReport report =
            runMatcher(engines.stages[s].get(), set, module.get(), engineConfig(), stats);
        std::string why;
        CHECK_MESSAGE(structurallyEqual(direct.get(), module.get(), &why), why);
        CHECK(report.applied == directReport.applied);
        CHECK(stats.rewrites == directReport.rewrites);
        evaluations.push_back(stats.evaluations);
      }
      // naive >= contracted >= reordered+factored, and the final stage.
      CHECK(evaluations[0] >= evaluations[1]);
      CHECK(evaluations[1] >= evaluations[3]);
      CHECK(evaluations[4] <= evaluations[0]);
    }
  }
}

TEST_CASE("factoring cuts evaluations on the arith suite by at least 30 percent") {
  DialectContext dc;
  PatternSet set = loadPatterns(dc.ctx, "patterns/arith_suite.pat");
  size_t addiRooted = 0;
  for (const auto &p : set.patterns)
    addiRooted += p->getRootName() == "arith.addi";
  CHECK(set.patterns.size() == 6);
  CHECK(addiRooted == 4);

  std::string text = readFile(sourcePath("corpus/arith_patterns.mir"));
  unsigned evaluations[2];
  MatcherStage stages[2] = {MatcherStage::Naive, MatcherStage::Final};
  for (int i = 0; i < 2; ++i) {
    auto matcher = buildMatcher(dc.ctx, set, stages[i]);
    auto module = parseOrFail(dc.ctx, text);
    MatcherStats stats;
    runMatcher(matcher.get(), set, module.get(), engineConfig(), stats);
    evaluations[i] = stats.evaluations;
  }
  MESSAGE("naive " << evaluations[0] << ", final " << evaluations[1]);
  CHECK(evaluations[1] * 10 <= evaluations[0] * 7);
}

TEST_CASE("a module with nothing to match costs at least one evaluation per op") {
  DialectContext dc;
  PatternSet set = loadPatterns(dc.ctx, "patterns/leaky_relu.pat");
  auto module = parseOrFail(dc.ctx, readFile(sourcePath("corpus/cf_loop.mir")));
  size_t ops = collectOps(module.get(), WalkOrder::PreOrder).size() - 1;
  for (MatcherStage stage : allMatcherStages()) {
    auto matcher = buildMatcher(dc.ctx, set, stage);
    MatcherStats stats;
    ChangeReport report = runMatcher(matcher.get(), set, module.get(), engineConfig(), stats);
    CHECK(report.rewrites == 0);
    CHECK(stats.matches == 0);
    CHECK(stats.evaluations >= ops);
  }
}

TEST_CASE("the highest priority pattern wins in every engine") {
  DialectContext dc;
  PatternSet set = loadPatterns(dc.ctx, "patterns/arith_suite.pat");
  const char *text = R"(
func.func @f() -> i32 {
  %z = arith.constant 0 : i32
  %r = "arith.addi"(%z, %z) : (i32, i32) -> i32
  func.return %r : i32
}
)";
  auto probe = parseOrFail(dc.ctx, text);
  Operation *addi = nullptr;
  walk(probe.get(), WalkOrder::PreOrder, [&](Operation *op) {
    if (op->getName() == "arith.addi")
      addi = op;
  });
  // add_zero, add_self and both cancellations are candidates; only the
  // first two actually match, and add_zero has the higher benefit.
  Bindings unused;
  size_t matching = 0;
  for (const auto &p : set.patterns)
    matching += p->match(addi, unused);
  CHECK(matching == 2);
  for (MatcherStage stage : allMatcherStages()) {
    auto matcher = buildMatcher(dc.ctx, set, stage);
    MatcherApplicator applicator(matcher.get(), set);
    CHECK(applicator.match(addi) == std::optional<std::string>("add_zero"));
  }
}

TEST_CASE("the matcher engine falls back to native patterns") {
  DialectContext dc;
  PatternSet set = loadPatterns(dc.ctx, "patterns/leaky_relu.pat");
  auto matcher = buildMatcher(dc.ctx, set, MatcherStage::Final);
  FrozenPatternSet natives;
  natives.add(std::make_shared<LambdaPattern>(
      "arith.mulf", 1, "drop_mulf", [](Operation *op, PatternRewriter &rewriter) {
        rewriter.replaceOp(op, std::vector<Value *>{op->getOperand(1)});
        return true;
      }));
  MatcherApplicator applicator(matcher.get(), set, &natives);
  auto module = parseOrFail(dc.ctx, readFile(sourcePath("corpus/leaky.mir")));
  ChangeReport report = applyPatternsGreedily(module.get(), applicator, engineConfig());
  CHECK(report.applied == std::vector<std::string>{"leaky_relu_lower", "drop_mulf"});
}

} // TEST_SUITE
