//===- InterpTest.cpp - Reference interpreter -----------------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "Corpus.h"
#include "TestUtils.h"

#include "mir/Interp/Interpreter.h"

#include <random>

using namespace mir;
using namespace mir::test;

namespace {

std::string runText(Context &ctx, Operation *module, std::string_view entry,
                    std::string_view args, InterpLimits limits = {}) {
  std::vector<RuntimeValue> results =
      runFunction(module, entry, parseRuntimeValues(ctx, args), limits);
  std::string out;
  for (const RuntimeValue &v : results)
    out += (out.empty() ? "" : " ") + formatRuntimeValue(v);
  return out;
}

/// C[k] = sum over i + j = k of A[i] * B[j].
std::vector<int64_t> convolve(const std::vector<int64_t> &a, const std::vector<int64_t> &b) {
  std::vector<int64_t> c(a.size() + b.size() - 1, 0);
  for (size_t k = 0; k < c.size(); ++k)
    for (size_t i = 0; i < a.size(); ++i)
      if (k >= i && k - i < b.size())
        c[k] += a[i] * b[k - i];
  return c;
}

std::string bufferLiteral(const std::vector<int64_t> &v, const std::string &type) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i)
    s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]:" + type;
}

} // namespace

TEST_SUITE("interp") {

TEST_CASE("polymul computes the convolution") {
  DialectContext dc;
  auto module = parseOrFail(dc.ctx, readFile(sourcePath("corpus/polymul.mir")));
  CHECK(convolve({1, 2, 3}, {4, 5}) == std::vector<int64_t>{4, 13, 22, 15});
  CHECK(runText(dc.ctx, module.get(), "polymul",
                "[1,2,3]:memref<3xi32> [4,5]:memref<2xi32>") == "[4,13,22,15]:memref<4xi32>");

  std::mt19937 rng(7);
  std::uniform_int_distribution<int> dist(-100, 100);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int64_t> a{dist(rng), dist(rng), dist(rng)}, b{dist(rng), dist(rng)};
    CHECK(runText(dc.ctx, module.get(), "polymul",
                  bufferLiteral(a, "memref<3xi32>") + " " + bufferLiteral(b, "memref<2xi32>")) ==
          bufferLiteral(convolve(a, b), "memref<4xi32>"));
  }
}

TEST_CASE("leaky relu follows the reference formula") {
  DialectContext dc;
  auto module = parseOrFail(dc.ctx, readFile(sourcePath("corpus/leaky.mir")));
  float alpha = 0.1f;
  for (float x : {-2.0f, 3.0f, -0.5f, 0.0f}) {
    float expected = x < 0 ? alpha * x : x;
    auto results = runFunction(module.get(), "leaky",
                               {RuntimeValue::floating(dc.ctx.getF32Type(), x)});
    REQUIRE(results.size() == 1);
    CHECK(results[0].getFloat() == static_cast<double>(expected));
  }
  CHECK(runText(dc.ctx, module.get(), "leaky", "-2.0:f32") == "-0.2:f32");
}

TEST_CASE("integer arithmetic wraps") {
  DialectContext dc;
  auto module = parseOrFail(dc.ctx, readFile(sourcePath("corpus/arith_int.mir")));
  CHECK(runText(dc.ctx, module.get(), "wrap8", "127:i8 1:i8") == "-128:i8");
  CHECK(runText(dc.ctx, module.get(), "wide", "4000000000:i64 3:i64") ==
        std::to_string(static_cast<int64_t>(4000000000ull * 4000000000ull * 3ull)) + ":i64");
  Type i1 = dc.ctx.getI1Type();
  CHECK(wrapToType(3, i1) == 1);
  CHECK(wrapToType(-1, dc.ctx.getIntegerType(16)) == -1);
  CHECK(wrapToType(65535, dc.ctx.getIntegerType(16)) == -1);
}

TEST_CASE("control flow and calls") {
  DialectContext dc;
  auto loop = parseOrFail(dc.ctx, readFile(sourcePath("corpus/cf_loop.mir")));
  CHECK(runText(dc.ctx, loop.get(), "sum", "10:i32") == "45:i32");
  CHECK(runText(dc.ctx, loop.get(), "sum", "0:i32") == "0:i32");
  auto rec = parseOrFail(dc.ctx, readFile(sourcePath("corpus/recursive.mir")));
  CHECK(runText(dc.ctx, rec.get(), "fact", "5:i64") == "120:i64");
  auto calls = parseOrFail(dc.ctx, readFile(sourcePath("corpus/calls.mir")));
  CHECK(runText(dc.ctx, calls.get(), "main", "3:i32 4:i32") == "625:i32");
  auto quasi = parseOrFail(dc.ctx, readFile(sourcePath("corpus/affine_apply.mir")));
  CHECK(runText(dc.ctx, quasi.get(), "quasi", "-7:index") ==
        "-3:index -1:index 3:index -18:index");
}

TEST_CASE("traps") {
  DialectContext dc;
  auto module = parseOrFail(dc.ctx, R"(
func.func @oob(%i: index) {
  %m = "memref.alloc"() : () -> memref<4xi32>
  %c = arith.constant 1 : i32
  "memref.store"(%c, %m, %i) : (i32, memref<4xi32>, index) -> ()
  func.return
}
func.func @spin() {
  cf.br ^loop
^loop:
  cf.br ^loop
}
func.func @stale() -> i32 {
  %m = "memref.alloc"() : () -> memref<1xi32>
  %i = arith.constant 0 : index
  "memref.dealloc"(%m) : (memref<1xi32>) -> ()
  %v = "memref.load"(%m, %i) : (memref<1xi32>, index) -> i32
  func.return %v : i32
}
func.func @deep(%x: i32) -> i32 {
  %r = "func.call"(%x) {callee = @deep} : (i32) -> i32
  func.return %r : i32
}
)");
  Operation *m = module.get();
  CHECK_NOTHROW(runText(dc.ctx, m, "oob", "3:index"));
  CHECK_THROWS_WITH_AS(runText(dc.ctx, m, "oob", "4:index"),
                       doctest::Contains("out-of-bounds access [4]"), InterpTrap);
  CHECK_THROWS_WITH_AS(runText(dc.ctx, m, "oob", "-1:index"), doctest::Contains("out-of-bounds"),
                       InterpTrap);
  InterpLimits small;
  small.maxSteps = 1000;
  CHECK_THROWS_WITH_AS(runText(dc.ctx, m, "spin", "", small), doctest::Contains("step budget"),
                       InterpTrap);
  CHECK_THROWS_WITH_AS(runText(dc.ctx, m, "stale", ""), doctest::Contains("deallocated"),
                       InterpTrap);
  CHECK_THROWS_WITH_AS(runText(dc.ctx, m, "deep", "1:i32"), doctest::Contains("call depth"),
                       InterpTrap);
  CHECK_THROWS_WITH_AS(runText(dc.ctx, m, "oob", "3:i32"), doctest::Contains("must be index"),
                       InterpTrap);
  CHECK_THROWS_AS(runText(dc.ctx, m, "missing", ""), InterpTrap);
}

TEST_CASE("runtime literals") {
  DialectContext dc;
  for (const char *text : {"3:i32", "-2.5:f32", "0.1:f64", "[1,2,3]:memref<3xi32>",
                           "[1.5,-2]:memref<2xf32>", "7:index", "1:i1"}) {
    RuntimeValue v = parseRuntimeValue(dc.ctx, text);
    CHECK(parseRuntimeValue(dc.ctx, formatRuntimeValue(v)) == v);
  }
  CHECK(formatRuntimeValue(parseRuntimeValue(dc.ctx, "[1.5,-2]:memref<2xf32>")) ==
        "[1.5,-2.0]:memref<2xf32>");
  CHECK_THROWS_AS(parseRuntimeValue(dc.ctx, "[1,2]:memref<3xi32>"), ValidationError);
  CHECK_THROWS_AS(parseRuntimeValue(dc.ctx, "x:i32"), ValidationError);
  CHECK_THROWS_AS(parseRuntimeValue(dc.ctx, "3"), ValidationError);
  CHECK(parseRuntimeValues(dc.ctx, "  1:i32   2:i32 ").size() == 2);
}

TEST_CASE("every executable corpus entry runs without trapping") {
  size_t runs = 0;
  for (const auto &file : corpus::load(sourcePath("corpus"))) {
    INFO(file.name);
    DialectContext dc;
    auto module = parseOrFail(dc.ctx, file.text);
    for (const auto &run : file.runs) {
      INFO(run.entry << " " << run.args);
      CHECK_NOTHROW(runText(dc.ctx, module.get(), run.entry, run.args));
      ++runs;
    }
  }
  CHECK(runs >= 20);
}

} // TEST_SUITE
