//===- RewriteTest.cpp - Patterns, DSL and the greedy driver --------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "TestUtils.h"

#include "mir/Rewrite/Canonicalize.h"
#include "mir/Rewrite/PatternDSL.h"
#include "mir/Verifier/Verifier.h"

using namespace mir;
using namespace mir::test;

namespace {

size_t countOps(Operation *root, std::string_view name) {
  size_t n = 0;
  walk(root, WalkOrder::PreOrder, [&](Operation *op) { n += op->getName() == name; });
  return n;
}

Operation *findOp(Operation *root, std::string_view name) {
  Operation *found = nullptr;
  walk(root, WalkOrder::PreOrder, [&](Operation *op) {
    if (!found && op->getName() == name)
      found = op;
  });
  return found;
}

/// The values returned by the first `func.return`.
std::vector<Value *> returned(Operation *module) {
  return findOp(module, "func.return")->getOperands();
}

struct Canon {
  DialectContext dc;
  std::unique_ptr<Operation> module;
  ChangeReport report;

  explicit Canon(std::string_view text) {
    module = parseOrFail(dc.ctx, text);
    report = runCanonicalizer(module.get());
    INFO(renderDiagnostics(verify(module.get())));
    CHECK(verifies(module.get()));
  }
};

const char *kUnary = R"(
func.func @f(%x: i32, %y: i32) -> i32 {
  %c0 = arith.constant 0 : i32
  %c1 = arith.constant 1 : i32
  %c2 = arith.constant 2 : i32
  %r = "arith.OPCODE"(LHS, RHS) : (i32, i32) -> i32
  func.return %r : i32
}
)";

std::string binary(std::string_view opcode, std::string_view lhs, std::string_view rhs) {
  std::string text = kUnary;
  text.replace(text.find("OPCODE"), 6, opcode);
  text.replace(text.find("LHS"), 3, lhs);
  text.replace(text.find("RHS"), 3, rhs);
  return text;
}

} // namespace

TEST_SUITE("rewrite") {

TEST_CASE("subi of a value with itself becomes zero") {
  Canon c(binary("subi", "%x", "%x"));
  Attribute v = getConstantValue(returned(c.module.get())[0]);
  REQUIRE(v);
  CHECK(v.getInt() == 0);
  CHECK(countOps(c.module.get(), "arith.subi") == 0);

  Canon neg(binary("subi", "%x", "%y"));
  CHECK(countOps(neg.module.get(), "arith.subi") == 1);
}

TEST_CASE("addi with zero becomes its other operand") {
  Canon c(binary("addi", "%x", "%c0"));
  Operation *f = findOp(c.module.get(), "func.func");
  CHECK(returned(c.module.get())[0] == f->getRegion(0).front()->getArgument(0));

  Canon lhs(binary("addi", "%c0", "%y"));
  f = findOp(lhs.module.get(), "func.func");
  CHECK(returned(lhs.module.get())[0] == f->getRegion(0).front()->getArgument(1));

  Canon neg(binary("addi", "%x", "%c1"));
  CHECK(countOps(neg.module.get(), "arith.addi") == 1);
}

TEST_CASE("muli by one and by zero") {
  Canon one(binary("muli", "%x", "%c1"));
  Operation *f = findOp(one.module.get(), "func.func");
  CHECK(returned(one.module.get())[0] == f->getRegion(0).front()->getArgument(0));

  Canon zero(binary("muli", "%c0", "%x"));
  Attribute v = getConstantValue(returned(zero.module.get())[0]);
  REQUIRE(v);
  CHECK(v.getInt() == 0);

  Canon neg(binary("muli", "%x", "%c2"));
  CHECK(countOps(neg.module.get(), "arith.muli") == 1);
}

TEST_CASE("select on a constant condition") {
  const char *text = R"(
func.func @f(%c: i1, %a: i32, %b: i32) -> i32 {
  %t = arith.constant COND : i1
  %r = "arith.select"(%t, %a, %b) : (i1, i32, i32) -> i32
  func.return %r : i32
}
)";
  std::string trueText = text;
  trueText.replace(trueText.find("COND"), 4, "1");
  Canon c(trueText);
  Block *entry = findOp(c.module.get(), "func.func")->getRegion(0).front();
  CHECK(returned(c.module.get())[0] == entry->getArgument(1));

  std::string falseText = text;
  falseText.replace(falseText.find("COND"), 4, "0");
  Canon f(falseText);
  entry = findOp(f.module.get(), "func.func")->getRegion(0).front();
  CHECK(returned(f.module.get())[0] == entry->getArgument(2));

  std::string dynamic = text;
  dynamic.replace(dynamic.find("COND"), 4, "1");
  dynamic.replace(dynamic.find("(%t,"), 4, "(%c,");
  Canon neg(dynamic);
  CHECK(countOps(neg.module.get(), "arith.select") == 1);
}

TEST_CASE("cond_br on a constant becomes an unconditional branch") {
  const char *text = R"(
func.func @f(%c: i1, %a: i32, %b: i32) -> i32 {
  %t = arith.constant 1 : i1
  cf.cond_br COND, ^bb1(%a : i32), ^bb2(%b : i32)
^bb1(%x: i32):
  func.return %x : i32
^bb2(%y: i32):
  func.return %y : i32
}
)";
  std::string constant = text;
  constant.replace(constant.find("COND"), 4, "%t");
  Canon c(constant);
  CHECK(countOps(c.module.get(), "cf.cond_br") == 0);
  CHECK(countOps(c.module.get(), "cf.br") == 1);
  // The false destination became unreachable and was removed.
  CHECK(c.report.blocksErased == 1);

  std::string dynamic = text;
  dynamic.replace(dynamic.find("COND"), 4, "%c");
  Canon neg(dynamic);
  CHECK(countOps(neg.module.get(), "cf.cond_br") == 1);
}

TEST_CASE("constants move to the right of commutative ops") {
  DialectContext dc;
  auto module = parseOrFail(dc.ctx, R"(
func.func @f(%x: i32) -> i32 {
  %c5 = arith.constant 5 : i32
  %r = "arith.addi"(%c5, %x) : (i32, i32) -> i32
  func.return %r : i32
}
)");
  ChangeReport report = runCanonicalizer(module.get());
  Operation *add = findOp(module.get(), "arith.addi");
  REQUIRE(add);
  CHECK(add->getOperand(0)->isBlockArgument());
  CHECK(getConstantValue(add->getOperand(1)));
  CHECK(report.rewrites == 1);
  CHECK(report.converged);
}

TEST_CASE("an already canonical module converges in one sweep") {
  DialectContext dc;
  auto module = parseOrFail(dc.ctx, R"(
func.func @f(%x: i32, %y: i32) -> i32 {
  %c2 = arith.constant 2 : i32
  %a = "arith.addi"(%x, %y) : (i32, i32) -> i32
  %m = "arith.muli"(%a, %c2) : (i32, i32) -> i32
  func.return %m : i32
}
)");
  ChangeReport report = runCanonicalizer(module.get());
  CHECK_FALSE(report.changed());
  CHECK(report.rewrites == 0);
  CHECK(report.folds == 0);
  CHECK(report.converged);
  CHECK(report.iterations == 1);
}

TEST_CASE("empty pattern set without folding changes nothing") {
  DialectContext dc;
  auto module = parseOrFail(dc.ctx, binary("subi", "%x", "%x"));
  std::string before = printOp(module.get());
  FrozenPatternSet empty;
  GreedyConfig config;
  config.fold = false;
  ChangeReport report = applyPatternsGreedily(module.get(), empty, config);
  CHECK(report.rewrites == 0);
  CHECK(report.converged);
  CHECK(printOp(module.get()) == before);
}

TEST_CASE("patterns undoing each other do not converge") {
  DialectContext dc;
  auto module = parseOrFail(dc.ctx, R"(
func.func @f(%x: i32) -> i32 {
  %r = "test.a"(%x) : (i32) -> i32
  func.return %r : i32
}
)");
  auto flip = [](std::string from, std::string to) {
    return std::make_shared<LambdaPattern>(
        from, 1, from + "->" + to, [to](Operation *op, PatternRewriter &rewriter) {
          Operation *repl = rewriter.create(to, op->getOperands(), op->getResultTypes());
          std::vector<Value *> results = repl->getResults();
          rewriter.replaceOp(op, results);
          return true;
        });
  };
  FrozenPatternSet patterns;
  patterns.add(flip("test.a", "test.b"));
  patterns.add(flip("test.b", "test.a"));
  GreedyConfig config;
  config.maxIterations = 3;
  ChangeReport report = applyPatternsGreedily(module.get(), patterns, config);
  CHECK_FALSE(report.converged);
  CHECK(report.iterations == 3);
  CHECK(report.rewrites > 0);
  CHECK(verifies(module.get()));
}

TEST_CASE("higher benefit is tried first") {
  DialectContext dc;
  auto module = parseOrFail(dc.ctx, binary("addi", "%x", "%y"));
  auto tag = [](unsigned benefit, std::string name) {
    return std::make_shared<LambdaPattern>(
        "arith.addi", benefit, name, [name](Operation *op, PatternRewriter &rewriter) {
          if (op->getAttr("tag"))
            return false;
          rewriter.modifyOpInPlace(
              op, [&] { op->setAttr("tag", op->getContext().getStringAttr(name)); });
          return true;
        });
  };
  FrozenPatternSet patterns;
  patterns.add(tag(1, "low"));
  patterns.add(tag(5, "high"));
  patterns.add(tag(5, "high-later"));
  ChangeReport report = applyPatternsGreedily(module.get(), patterns);
  REQUIRE(report.applied.size() == 1);
  CHECK(report.applied[0] == "high");
  CHECK(findOp(module.get(), "arith.addi")->getAttr("tag").getString() == "high");
}

TEST_CASE("dead ops left by a rewrite are removed with removeDeadOps") {
  DialectContext dc;
  auto module = parseOrFail(dc.ctx, R"(
func.func @f(%x: i32) -> i32 {
  %a = "arith.addi"(%x, %x) : (i32, i32) -> i32
  %b = "arith.muli"(%a, %a) : (i32, i32) -> i32
  func.return %x : i32
}
)");
  FrozenPatternSet none;
  GreedyConfig config;
  config.removeDeadOps = true;
  ChangeReport report = applyPatternsGreedily(module.get(), none, config);
  CHECK(report.opsErased == 2);
  CHECK(countOps(module.get(), "arith.addi") == 0);
}

TEST_CASE("seed order does not change the canonical result") {
  const char *sources[] = {
      R"(
func.func @f(%x: i32, %y: i32) -> i32 {
  %c0 = arith.constant 0 : i32
  %c1 = arith.constant 1 : i32
  %c3 = arith.constant 3 : i32
  %c4 = arith.constant 4 : i32
  %a = "arith.addi"(%c3, %c4) : (i32, i32) -> i32
  %b = "arith.muli"(%a, %c1) : (i32, i32) -> i32
  %c = "arith.addi"(%c0, %b) : (i32, i32) -> i32
  %d = "arith.subi"(%x, %x) : (i32, i32) -> i32
  %e = "arith.addi"(%d, %c) : (i32, i32) -> i32
  %f = "arith.addi"(%c4, %y) : (i32, i32) -> i32
  %g = "arith.muli"(%e, %f) : (i32, i32) -> i32
  func.return %g : i32
}
)",
      R"(
func.func @g(%c: i1, %a: i32) -> i32 {
  %t = arith.constant 0 : i1
  %z = arith.constant 0 : i32
  %s = "arith.select"(%t, %z, %a) : (i1, i32, i32) -> i32
  cf.cond_br %t, ^bb1(%s : i32), ^bb2(%s : i32)
^bb1(%p: i32):
  func.return %p : i32
^bb2(%q: i32):
  %m = "arith.muli"(%q, %z) : (i32, i32) -> i32
  %n = "arith.addi"(%m, %q) : (i32, i32) -> i32
  func.return %n : i32
}
)"};
  for (const char *text : sources) {
    DialectContext dc;
    auto forward = parseOrFail(dc.ctx, text);
    auto reverse = parseOrFail(dc.ctx, text);
    FrozenPatternSet patterns;
    addCanonicalizationPatterns(dc.ctx, patterns);
    GreedyConfig config = getCanonicalizeConfig();
    CHECK(applyPatternsGreedily(forward.get(), patterns, config).converged);
    config.reverseSeed = true;
    CHECK(applyPatternsGreedily(reverse.get(), patterns, config).converged);
    std::string why;
    CHECK_MESSAGE(structurallyEqual(forward.get(), reverse.get(), &why), why);
  }
}

TEST_CASE("pattern file parsing") {
  DialectContext dc;
  PatternParseResult leaky =
      parsePatternFile(dc.ctx, readFile(sourcePath("patterns/leaky_relu.pat")));
  INFO(renderDiagnostics(leaky.diagnostics));
  REQUIRE(leaky.patterns);
  REQUIRE(leaky.patterns->patterns.size() == 1);
  CHECK(leaky.patterns->patterns[0]->getName() == "leaky_relu_lower");
  CHECK(leaky.patterns->patterns[0]->getRootName() == "ml.leaky_relu");

  PatternParseResult suite =
      parsePatternFile(dc.ctx, readFile(sourcePath("patterns/arith_suite.pat")));
  REQUIRE(suite.patterns);
  CHECK(suite.patterns->patterns.size() == 6);
  std::vector<std::string> order;
  for (const DeclarativePattern *p : suite.patterns->getOrdered("arith.addi"))
    order.push_back(p->getName());
  CHECK(order == std::vector<std::string>{"add_zero", "add_sub_cancel_rhs",
                                          "add_sub_cancel_lhs", "add_self"});
}

TEST_CASE("pattern file errors") {
  DialectContext dc;
  auto error = [&](std::string_view text) {
    PatternParseResult r = parsePatternFile(dc.ctx, text, "t.pat");
    CHECK_FALSE(r.patterns);
    return r.diagnostics.empty() ? std::string() : r.diagnostics[0].render();
  };
  CHECK(error(R"(pattern p benefit(1) {
  match: "arith.addi"($x, $y)
  rewrite:
  replace: $z
})") == "t.pat:4:12: error: unbound capture z");
  CHECK(error(R"(pattern p benefit(1) {
  match: "arith.addi"($x, $x)
  rewrite:
  replace: $x
})")
            .find("duplicate capture x") != std::string::npos);
  CHECK(error(R"(pattern p benefit(1) { match: "arith.subi"($x, $y) rewrite: replace: $x }
pattern p benefit(2) { match: "arith.subi"($x, $y) rewrite: replace: $y })")
            .find("duplicate pattern name") != std::string::npos);
  CHECK(error(R"(pattern p benefit(1) {
  match: "arith.addi"($x, $y) where same($x, $q)
  rewrite:
  replace: $x
})")
            .find("unbound capture q") != std::string::npos);

  dc.ctx.setStrict(true);
  CHECK(error(R"(pattern p benefit(1) { match: "foo.bar"($x) rewrite: replace: $x })")
            .find("unknown opcode 'foo.bar' in strict mode") != std::string::npos);
}

TEST_CASE("LeakyRelu lowers to a compare and a select") {
  DialectContext dc;
  auto module = parseOrFail(dc.ctx, R"(
func.func @leaky(%x: f32) -> f32 {
  %r = "ml.leaky_relu"(%x) {alpha = 0.1 : f32} : (f32) -> f32
  func.return %r : f32
}
)");
  PatternParseResult parsed =
      parsePatternFile(dc.ctx, readFile(sourcePath("patterns/leaky_relu.pat")));
  REQUIRE(parsed.patterns);
  FrozenPatternSet patterns;
  for (auto &p : parsed.patterns->patterns)
    patterns.add(p);
  ChangeReport report = applyPatternsGreedily(module.get(), patterns);
  CHECK(report.rewrites == 1);
  CHECK(report.applied == std::vector<std::string>{"leaky_relu_lower"});
  CHECK(countOps(module.get(), "ml.leaky_relu") == 0);
  CHECK(countOps(module.get(), "arith.cmpf") == 1);
  CHECK(countOps(module.get(), "arith.select") == 1);
  INFO(printOp(module.get()));
  CHECK(verifies(module.get()));
}

TEST_CASE("declarative patterns match nested producers") {
  DialectContext dc;
  auto module = parseOrFail(dc.ctx, R"(
func.func @f(%a: i32, %b: i32) -> i32 {
  %d = "arith.subi"(%a, %b) : (i32, i32) -> i32
  %s = "arith.addi"(%d, %b) : (i32, i32) -> i32
  func.return %s : i32
}
)");
  PatternParseResult parsed =
      parsePatternFile(dc.ctx, readFile(sourcePath("patterns/arith_suite.pat")));
  REQUIRE(parsed.patterns);
  FrozenPatternSet patterns;
  for (auto &p : parsed.patterns->patterns)
    patterns.add(p);
  GreedyConfig config;
  config.fold = false;
  ChangeReport report = applyPatternsGreedily(module.get(), patterns, config);
  CHECK(report.applied == std::vector<std::string>{"add_sub_cancel_rhs"});
  // The matched subi is dead after the rewrite and goes with it.
  CHECK(countOps(module.get(), "arith.subi") == 0);
  Block *entry = findOp(module.get(), "func.func")->getRegion(0).front();
  CHECK(returned(module.get())[0] == entry->getArgument(0));
}

TEST_CASE("a mistyped target is reported as an error") {
  DialectContext dc;
  PatternParseResult parsed = parsePatternFile(dc.ctx, R"(
pattern widen benefit(1) {
  match: "arith.addi"($x, $y)
  rewrite: %c = "arith.constant"() {value = 0 : i64} : i64
  replace: %c
})");
  REQUIRE(parsed.patterns);
  auto module = parseOrFail(dc.ctx, binary("addi", "%x", "%y"));
  FrozenPatternSet patterns;
  patterns.add(parsed.patterns->patterns[0]);
  CHECK_THROWS_WITH_AS(applyPatternsGreedily(module.get(), patterns),
                       doctest::Contains("pattern 'widen'"), IRError);
}

} // TEST_SUITE
