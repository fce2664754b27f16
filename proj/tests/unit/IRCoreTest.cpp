//===- IRCoreTest.cpp - Interning, affine maps, use-def, dominance --------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "TestUtils.h"

#include "mir/IR/Builder.h"
#include "mir/IR/Dominance.h"
#include "mir/IR/SymbolTable.h"
#include "mir/Verifier/Verifier.h"

#include <random>

using namespace mir;
using namespace mir::test;

namespace {

/// Independent description of a type, compared field by field.
struct TypeSpec {
  int kind = 0; // 0 int, 1 f32, 2 f64, 3 index, 4 memref, 5 function
  unsigned width = 0;
  std::vector<int64_t> shape;
  std::vector<TypeSpec> inner;
  bool operator==(const TypeSpec &) const = default;
};

TypeSpec randomSpec(std::mt19937 &rng, int depth = 0) {
  TypeSpec s;
  s.kind = static_cast<int>(rng() % (depth ? 4 : 6));
  switch (s.kind) {
  case 0:
    s.width = std::array<unsigned, 3>{1, 8, 32}[rng() % 3];
    break;
  case 4:
    for (unsigned i = rng() % 3; i > 0; --i)
      s.shape.push_back(rng() % 4 == 0 ? kDynamicDim : static_cast<int64_t>(rng() % 3 + 1));
    s.inner.push_back(randomSpec(rng, depth + 1));
    break;
  case 5:
    for (unsigned i = rng() % 3; i > 0; --i)
      s.inner.push_back(randomSpec(rng, depth + 1));
    s.width = static_cast<unsigned>(s.inner.size()); // number of inputs
    s.inner.push_back(randomSpec(rng, depth + 1));
    break;
  }
  return s;
}

Type build(Context &ctx, const TypeSpec &s) {
  switch (s.kind) {
  case 0:
    return ctx.getIntegerType(s.width);
  case 1:
    return ctx.getF32Type();
  case 2:
    return ctx.getF64Type();
  case 3:
    return ctx.getIndexType();
  case 4:
    return ctx.getMemRefType(s.shape, build(ctx, s.inner[0]));
  default: {
    std::vector<Type> inputs;
    for (unsigned i = 0; i < s.width; ++i)
      inputs.push_back(build(ctx, s.inner[i]));
    return ctx.getFunctionType(inputs, {build(ctx, s.inner.back())});
  }
  }
}

/// Random well-formed expression over d0, d1 and s0.
AffineExpr randomExpr(std::mt19937 &rng, int depth) {
  if (depth == 0 || rng() % 4 == 0) {
    switch (rng() % 4) {
    case 0:
      return AffineExpr::constant(static_cast<int64_t>(rng() % 7) - 3);
    case 1:
      return AffineExpr::dim(0);
    case 2:
      return AffineExpr::dim(1);
    default:
      return AffineExpr::symbol(0);
    }
  }
  AffineExpr lhs = randomExpr(rng, depth - 1);
  switch (rng() % 5) {
  case 0:
    return AffineExpr::binary(AffineExprKind::Add, lhs, randomExpr(rng, depth - 1));
  case 1:
    return AffineExpr::binary(AffineExprKind::Mul, lhs,
                              AffineExpr::constant(static_cast<int64_t>(rng() % 5) - 2));
  case 2:
    return AffineExpr::binary(AffineExprKind::Mod, lhs,
                              AffineExpr::constant(static_cast<int64_t>(rng() % 4) + 1));
  case 3:
    return AffineExpr::binary(AffineExprKind::FloorDiv, lhs,
                              AffineExpr::constant(static_cast<int64_t>(rng() % 4) + 1));
  default:
    return AffineExpr::binary(AffineExprKind::CeilDiv, lhs,
                              AffineExpr::constant(static_cast<int64_t>(rng() % 4) + 1));
  }
}

std::vector<std::string> names(const std::vector<Operation *> &ops) {
  std::vector<std::string> out;
  for (Operation *op : ops)
    out.emplace_back(op->getName());
  return out;
}

} // namespace

TEST_SUITE("ir-core") {

TEST_CASE("type interning") {
  Context ctx;
  CHECK(ctx.getIntegerType(32) == ctx.getIntegerType(32));
  CHECK(ctx.getIntegerType(32) != ctx.getIntegerType(64));
  Type m = ctx.getMemRefType({3, kDynamicDim}, ctx.getF64Type());
  CHECK(m.str() == "memref<3x?xf64>");
  CHECK(parseType(ctx, m.str()) == m);
  CHECK_THROWS_AS(ctx.getIntegerType(0), ValidationError);
  CHECK_THROWS_AS(ctx.getIntegerType(129), ValidationError);
  CHECK_THROWS_AS(ctx.getMemRefType({-3}, ctx.getF32Type()), ValidationError);

  std::mt19937 rng(11);
  std::vector<std::pair<TypeSpec, Type>> seen;
  for (int i = 0; i < 300; ++i) {
    TypeSpec spec = randomSpec(rng);
    Type type = build(ctx, spec);
    for (auto &[otherSpec, otherType] : seen)
      CHECK((otherSpec == spec) == (otherType == type));
    CHECK(parseType(ctx, type.str()) == type);
    seen.emplace_back(spec, type);
  }
}

TEST_CASE("attribute interning") {
  Context ctx;
  Attribute ba = ctx.getDictionaryAttr({{"b", ctx.getUnitAttr()}, {"a", ctx.getUnitAttr()}});
  Attribute ab = ctx.getDictionaryAttr({{"a", ctx.getUnitAttr()}, {"b", ctx.getUnitAttr()}});
  CHECK(ba == ab);
  CHECK_THROWS_AS(ctx.getDictionaryAttr({{"a", ctx.getUnitAttr()}, {"a", ctx.getUnitAttr()}}),
                  ValidationError);
  CHECK(ctx.getIndexAttr(1).str() == "1 : index");
  CHECK(ctx.getAffineMapAttr(AffineMap::constant(0)).str() == "affine_map<() -> (0)>");
  CHECK(ctx.getIndexAttr(1) == ctx.getIntegerAttr(ctx.getIndexType(), 1));
  CHECK(ctx.getIndexAttr(1) != ctx.getIntegerAttr(ctx.getIntegerType(64), 1));
  // Arbitrary precision values intern by value.
  BigInt big = BigInt(1) << 100;
  CHECK(ctx.getIntegerAttr(ctx.getIntegerType(128), big) ==
        ctx.getIntegerAttr(ctx.getIntegerType(128), big));
  CHECK(ctx.getStringAttr("x") == ctx.getStringAttr("x"));
  CHECK(ctx.getStringAttr("x") != ctx.getStringAttr("y"));
}

TEST_CASE("affine map evaluation") {
  CHECK(AffineMap::constant(0).evaluate({}, {}) == std::vector<int64_t>{0});
  AffineMap sum = parseAffineMap("(d0, d1) -> (d0 + d1)");
  int64_t dims[] = {2, 3};
  CHECK(sum.evaluate(dims, {}) == std::vector<int64_t>{5});
  AffineMap divmod = parseAffineMap("(d0) -> (d0 floordiv 3, d0 mod 3)");
  int64_t minus4[] = {-4};
  CHECK(divmod.evaluate(minus4, {}) == std::vector<int64_t>{-2, 2});
  CHECK_THROWS_AS(sum.evaluate(minus4, {}), ValidationError);
  CHECK_THROWS_AS(parseAffineMap("(d0) -> (d0 * d0)"), ValidationError);

  AffineMap ceil = parseAffineMap("(d0)[s0] -> (d0 ceildiv 4, (d0 + s0) mod 5)");
  for (int64_t a = -10; a <= 10; ++a) {
    int64_t d[] = {a}, s[] = {3};
    std::vector<int64_t> r = ceil.evaluate(d, s);
    // Oracles straight from the definitions.
    int64_t expectCeil = a >= 0 ? (a + 3) / 4 : -((-a) / 4);
    int64_t m = (a + 3) % 5;
    CHECK(r[0] == expectCeil);
    CHECK(r[1] == (m < 0 ? m + 5 : m));
  }
}

TEST_CASE("floor division identities") {
  for (int64_t a = -50; a <= 50; ++a)
    for (int64_t b = 1; b <= 10; ++b) {
      int64_t q = floorDiv(a, b), r = floorMod(a, b);
      CHECK(a == b * q + r);
      CHECK(0 <= r);
      CHECK(r < b);
      CHECK(ceilDiv(a, b) == -floorDiv(-a, b));
    }
}

TEST_CASE("affine simplification") {
  AffineExpr d0 = AffineExpr::dim(0);
  CHECK(simplifyAffineExpr(d0 + AffineExpr::constant(0)) == d0);
  CHECK(simplifyAffineExpr(AffineExpr::constant(2) * AffineExpr::constant(3)) ==
        AffineExpr::constant(6));
  CHECK(simplifyAffineExpr(d0 * AffineExpr::constant(1)) == d0);
  CHECK(simplifyAffineExpr(d0 * AffineExpr::constant(0)) == AffineExpr::constant(0));
  AffineExpr mod1 =
      simplifyAffineExpr(AffineExpr::binary(AffineExprKind::Mod, d0, AffineExpr::constant(1)));
  CHECK(mod1 == AffineExpr::constant(0));
  AffineExpr raw = AffineExpr::binary(AffineExprKind::Mod, d0, AffineExpr::constant(1));
  for (int64_t x = -100; x <= 100; ++x) {
    int64_t d[] = {x};
    CHECK(evaluateAffineExpr(raw, d, {}) == 0);
  }

  std::mt19937 rng(5);
  for (int i = 0; i < 1000; ++i) {
    AffineExpr e = randomExpr(rng, 4);
    AffineExpr s = simplifyAffineExpr(e);
    int64_t d[] = {static_cast<int64_t>(rng() % 41) - 20, static_cast<int64_t>(rng() % 41) - 20};
    int64_t sym[] = {static_cast<int64_t>(rng() % 21) - 10};
    INFO(e.str() << "  =>  " << s.str());
    CHECK(evaluateAffineExpr(s, d, sym) == evaluateAffineExpr(e, d, sym));
    // Printing and re-parsing a map keeps it equal.
    AffineMap map(2, 1, {e});
    CHECK(parseAffineMap(map.str()) == map);
  }
}

TEST_CASE("creating ops") {
  DialectContext dc;
  Context &ctx = dc.ctx;
  auto module = createModule(ctx);
  OpBuilder b(ctx);
  b.setInsertionPointToEnd(module->getRegion(0).front());
  b.setInsertionPoint(module->getRegion(0).front()->back());
  Type i32 = ctx.getIntegerType(32);
  Operation *c = b.create("arith.constant", {}, {i32}, {{"value", ctx.getIntegerAttr(i32, 4)}});
  Operation *add = b.create("arith.addi", {c->getResult(0), c->getResult(0)}, {i32});
  CHECK(add->getNumResults() == 1);
  CHECK(add->getResult(0)->getType() == i32);
  CHECK(add->hasTrait(Trait::Commutative));
  CHECK(c->getResult(0)->getNumUses() == 2);

  Operation *opaque = b.create("foo.opaque", {}, {});
  CHECK_FALSE(opaque->isRegistered());
  CHECK_FALSE(opaque->hasTrait(Trait::NoSideEffect));

  ctx.setStrict(true);
  CHECK_THROWS_AS(b.create("foo.opaque", {}, {}), IRError);
  ctx.setStrict(false);

  // A terminator in the middle of a block is caught later by the verifier.
  auto fn = parseOrFail(ctx, R"(
func.func @f() {
  func.return
}
)");
  Block *entry = lookupSymbol(fn.get(), "f")->getRegion(0).front();
  OpBuilder fb(ctx);
  fb.setInsertionPointToStart(entry);
  fb.create("func.return", {}, {});
  CHECK_FALSE(verifies(fn.get()));
}

TEST_CASE("replacing uses") {
  DialectContext dc;
  auto module = parseOrFail(dc.ctx, R"(
func.func @f(%a: i32, %b: i32, %w: i64) -> i32 {
  %x = "arith.addi"(%a, %a) : (i32, i32) -> i32
  %y = "arith.muli"(%a, %x) : (i32, i32) -> i32
  func.return %y : i32
}
)");
  Operation *f = lookupSymbol(module.get(), "f");
  Block *entry = f->getRegion(0).front();
  Value *a = entry->getArgument(0), *b = entry->getArgument(1), *w = entry->getArgument(2);
  CHECK(a->replaceAllUsesWith(a) == 3);
  CHECK(a->getNumUses() == 3);
  CHECK_THROWS_AS(a->replaceAllUsesWith(w), IRError);
  CHECK(a->replaceAllUsesWith(b) == 3);
  CHECK(a->use_empty());
  CHECK(b->getNumUses() == 3);
  CHECK(auditUseDefConsistency(module.get()).empty());
}

TEST_CASE("erasing ops") {
  DialectContext dc;
  auto module = parseOrFail(dc.ctx, R"(
func.func @f(%m: memref<4xi32>) -> i32 {
  %dead = arith.constant 7 : i32
  %c = arith.constant 1 : i32
  %s = "arith.addi"(%c, %c) : (i32, i32) -> i32
  affine.for %i = 0 to 4 step 1 {
    %v = "affine.load"(%m, %i) {map = affine_map<(d0) -> (d0)>} : (memref<4xi32>, index) -> i32
    "affine.store"(%s, %m, %i) {map = affine_map<(d0) -> (d0)>} : (i32, memref<4xi32>, index) -> ()
  }
  func.return %s : i32
}
)");
  std::vector<Operation *> ops = lookupSymbol(module.get(), "f")->getRegion(0).front()->getOpsSnapshot();
  ops[0]->erase();
  CHECK_THROWS_WITH_AS(ops[1]->erase(), doctest::Contains("'arith.addi'"), IRError);
  CHECK(ops[2]->getResult(0)->getNumUses() == 2);
  ops[3]->erase(); // the loop and everything in it
  CHECK(ops[2]->getResult(0)->getNumUses() == 1);
  CHECK(auditUseDefConsistency(module.get()).empty());
  CHECK(verifies(module.get()));
}

TEST_CASE("walk order") {
  DialectContext dc;
  auto module = parseOrFail(dc.ctx, R"(
func.func @f(%a: i32) -> i32 {
  %x = "arith.addi"(%a, %a) : (i32, i32) -> i32
  func.return %x : i32
}
)");
  CHECK(names(collectOps(module.get(), WalkOrder::PreOrder)) ==
        std::vector<std::string>{"builtin.module", "func.func", "arith.addi", "func.return",
                                 "builtin.module_end"});
  CHECK(names(collectOps(module.get(), WalkOrder::PostOrder)) ==
        std::vector<std::string>{"arith.addi", "func.return", "func.func", "builtin.module_end",
                                 "builtin.module"});
}

TEST_CASE("erasing during a post-order walk matches collect-then-erase") {
  const char *text = R"(
func.func @f(%a: i32, %m: memref<2xi32>) {
  %c = arith.constant 1 : i32
  %x = "arith.addi"(%a, %c) : (i32, i32) -> i32
  %y = "arith.muli"(%x, %x) : (i32, i32) -> i32
  affine.for %i = 0 to 2 step 1 {
    %k = arith.constant 3 : i32
    %z = "arith.subi"(%k, %a) : (i32, i32) -> i32
  }
  func.return
}
)";
  DialectContext dc;
  auto walked = parseOrFail(dc.ctx, text);
  auto collected = parseOrFail(dc.ctx, text);
  auto isArith = [](Operation *op) { return op->getDialectNamespace() == "arith"; };

  // Post-order lists defs before their users; erase from the back.
  std::vector<Operation *> victims;
  walk(collected.get(), WalkOrder::PostOrder, [&](Operation *op) {
    if (isArith(op))
      victims.push_back(op);
  });
  for (auto it = victims.rbegin(); it != victims.rend(); ++it)
    (*it)->erase();

  // Erase inside the visitor: only ops whose results are already unused.
  bool changed = true;
  while (changed) {
    changed = false;
    walk(walked.get(), WalkOrder::PostOrder, [&](Operation *op) {
      if (isArith(op) && op->use_empty()) {
        op->erase();
        changed = true;
      }
    });
  }
  CHECK(verifies(walked.get()));
  CHECK(structurallyEqual(walked.get(), collected.get()));
  CHECK(auditUseDefConsistency(walked.get()).empty());
}

TEST_CASE("dominance") {
  DialectContext dc;
  auto module = parseOrFail(dc.ctx, R"(
func.func @f(%a: index, %m: memref<4xindex>) -> index {
  %x = "arith.addi"(%a, %a) : (index, index) -> index
  affine.for %i = 0 to 4 step 1 {
    %in = "arith.addi"(%i, %a) : (index, index) -> index
  }
  %after = "arith.muli"(%x, %x) : (index, index) -> index
  func.return %after : index
}
func.func @g() {
  func.return
}
)");
  Operation *f = lookupSymbol(module.get(), "f");
  std::vector<Operation *> ops = f->getRegion(0).front()->getOpsSnapshot();
  Operation *x = ops[0], *loop = ops[1], *after = ops[2];
  Operation *inner = loop->getRegion(0).front()->front();
  Value *a = f->getRegion(0).front()->getArgument(0);
  CHECK(properlyDominates(x->getResult(0), after));
  CHECK_FALSE(properlyDominates(after->getResult(0), x));
  CHECK_FALSE(properlyDominates(inner->getResult(0), after));
  CHECK(properlyDominates(a, inner));
  Operation *gReturn = lookupSymbol(module.get(), "g")->getRegion(0).front()->front();
  CHECK_FALSE(properlyDominates(a, gReturn));
  CHECK(crossesIsolationBarrier(a, gReturn));

  // Brute force on straight-line blocks: a value dominates exactly the ops
  // after its definition.
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    unsigned n = 1 + rng() % 20;
    std::string text = "func.func @h(%p: i32) {\n";
    for (unsigned i = 0; i < n; ++i) {
      std::string lhs = i ? "%v" + std::to_string(rng() % i) : "%p";
      text += "  %v" + std::to_string(i) + " = \"arith.addi\"(" + lhs + ", %p) : (i32, i32) -> i32\n";
    }
    text += "  func.return\n}\n";
    auto m = parseOrFail(dc.ctx, text);
    std::vector<Operation *> body = m->getRegion(0).front()->front()->getRegion(0).front()->getOpsSnapshot();
    DominanceInfo info;
    for (size_t i = 0; i < body.size(); ++i)
      for (size_t j = 0; j < body.size(); ++j)
        for (Value *v : body[i]->getResults())
          CHECK(info.properlyDominates(v, body[j]) == (i < j));
  }
}

TEST_CASE("symbols") {
  DialectContext dc;
  auto module = parseOrFail(dc.ctx, R"(
func.func @caller() -> i32 {
  %r = "func.call"() {callee = @later} : () -> i32
  func.return %r : i32
}
func.func @later() -> i32 {
  %c = arith.constant 1 : i32
  func.return %c : i32
}
)");
  Operation *later = lookupSymbol(module.get(), "later");
  REQUIRE(later);
  CHECK(*getSymbolName(later) == "later");
  Operation *call = lookupSymbol(module.get(), "caller")->getRegion(0).front()->front();
  CHECK(lookupNearestSymbol(call, "later") == later);
  CHECK(lookupSymbol(module.get(), "nothing") == nullptr);
  CHECK(verifies(module.get()));

  auto dup = parseSource(dc.ctx, R"(
func.func @f() {
  func.return
}
func.func @f() {
  func.return
}
)");
  bool rejected = !dup.module || !verifies(dup.module.get());
  CHECK(rejected);
}

TEST_CASE("structural equality") {
  DialectContext dc;
  const char *text = R"(
func.func @f(%a: i32) -> i32 {
  %c = arith.constant 2 : i32
  %x = "arith.muli"(%a, %c) : (i32, i32) -> i32
  func.return %x : i32
}
)";
  auto one = parseOrFail(dc.ctx, text);
  CHECK(structurallyEqual(one.get(), one.get()));
  std::string renamed = text;
  renamed.replace(renamed.find("%x ="), 4, "%q =");
  renamed.replace(renamed.find("return %x"), 9, "return %q");
  auto two = parseOrFail(dc.ctx, renamed);
  CHECK(structurallyEqual(one.get(), two.get()));
  std::string changed = text;
  changed.replace(changed.find("constant 2"), 10, "constant 3");
  auto three = parseOrFail(dc.ctx, changed);
  std::string why;
  CHECK_FALSE(structurallyEqual(one.get(), three.get(), &why));
  CHECK_FALSE(why.empty());
}

TEST_CASE("use-def stays consistent under random edits") {
  DialectContext dc;
  Context &ctx = dc.ctx;
  std::mt19937 rng(21);
  auto module = parseOrFail(ctx, R"(
func.func @f(%a: i32, %b: i32) {
  func.return
}
)");
  Block *entry = lookupSymbol(module.get(), "f")->getRegion(0).front();
  Type i32 = ctx.getIntegerType(32);
  std::vector<Value *> values{entry->getArgument(0), entry->getArgument(1)};
  OpBuilder b(ctx);
  for (int step = 0; step < 400; ++step) {
    b.setInsertionPoint(entry->getTerminator());
    switch (rng() % 3) {
    case 0: {
      Value *l = values[rng() % values.size()], *r = values[rng() % values.size()];
      values.push_back(b.create("arith.addi", {l, r}, {i32})->getResult(0));
      break;
    }
    case 1: {
      if (values.size() < 4)
        break;
      size_t i = 2 + rng() % (values.size() - 2);
      Value *from = values[i];
      // Replace with a value defined earlier so dominance still holds.
      Value *to = values[rng() % i];
      from->replaceAllUsesWith(to);
      break;
    }
    default: {
      std::vector<Operation *> dead;
      for (Operation &op : *entry)
        if (op.getName() == "arith.addi" && op.use_empty())
          dead.push_back(&op);
      if (dead.empty())
        break;
      Operation *victim = dead[rng() % dead.size()];
      values.erase(std::find(values.begin(), values.end(), victim->getResult(0)));
      victim->erase();
      break;
    }
    }
  }
  CHECK(auditUseDefConsistency(module.get()).empty());
  CHECK(verifies(module.get()));
}

} // TEST_SUITE
