//===- CorePasses.cpp - Registration of the shipped passes ----------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/Dialects/LowerAffine.h"
#include "mir/IR/Builder.h"
#include "mir/IR/Context.h"
#include "mir/Pass/Passes.h"
#include "mir/Rewrite/Canonicalize.h"

#include <charconv>
#include <mutex>

namespace mir {

namespace {

/// Adapts a stateless function to the Pass interface.
class FunctionPass : public Pass {
public:
  using Fn = std::function<void(Operation *, const PassEnvironment &, PassResult &)>;
  explicit FunctionPass(Fn fn) : fn_(std::move(fn)) {}
  void run(Operation *anchor, const PassEnvironment &env, PassResult &result) const override {
    fn_(anchor, env, result);
  }

private:
  Fn fn_;
};

std::function<std::unique_ptr<Pass>(const PassOptions &)> simple(FunctionPass::Fn fn) {
  return [fn](const PassOptions &) { return std::make_unique<FunctionPass>(fn); };
}

unsigned parseUnsigned(const PassOptions &options, const std::string &key, unsigned fallback,
                       const std::string &pass) {
  auto it = options.find(key);
  if (it == options.end())
    return fallback;
  const std::string &text = it->second;
  unsigned value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ValidationError("option '" + key + "' of pass '" + pass +
                          "' expects a non-negative integer, got '" + text + "'");
  return value;
}

void registerAll() {
  registerPass({"cse", "eliminate common subexpressions", "", {},
                simple([](Operation *op, const PassEnvironment &, PassResult &r) {
                  r.changes = runCSE(op);
                })});
  registerPass({"dce", "erase dead ops and unreachable blocks", "", {},
                simple([](Operation *op, const PassEnvironment &, PassResult &r) {
                  r.changes = runDCE(op);
                })});
  registerPass({"canonicalize", "greedy folding and canonicalization patterns", "", {},
                simple([](Operation *op, const PassEnvironment &env, PassResult &r) {
                  if (env.canonicalizeApplicator) {
                    std::unique_ptr<PatternApplicator> applicator = env.canonicalizeApplicator();
                    r.changes = runCanonicalizer(op, *applicator);
                  } else {
                    r.changes = runCanonicalizer(op);
                  }
                })});
  registerPass({"lower-affine", "lower affine loops and accesses to cf and memref", "", {},
                simple([](Operation *op, const PassEnvironment &, PassResult &r) {
                  r.failed = !lowerAffine(op, r.changes, r.diagnostics);
                })});
  registerPass({"inline", "inline calls to small non-recursive functions", "builtin.module",
                {"max-ops"}, [](const PassOptions &options) -> std::unique_ptr<Pass> {
                  InlinerOptions inlinerOptions;
                  inlinerOptions.maxOps =
                      parseUnsigned(options, "max-ops", inlinerOptions.maxOps, "inline");
                  return std::make_unique<FunctionPass>(
                      [inlinerOptions](Operation *op, const PassEnvironment &, PassResult &r) {
                        r = runInliner(op, inlinerOptions);
                      });
                }});
  // Breaks the IR on purpose so tests can exercise verify-each.
  registerPass({"test-corrupt-ir", "insert an arith.constant without its value", "", {},
                simple([](Operation *op, const PassEnvironment &, PassResult &r) {
                  if (op->getNumRegions() == 0 || op->getRegion(0).empty())
                    return;
                  OpBuilder builder(op->getContext());
                  builder.setInsertionPointToStart(op->getRegion(0).front());
                  builder.create("arith.constant", {}, {builder.getIntegerType(32)}, {},
                                 op->getLoc());
                  r.changes.rewrites = 1;
                })});
}

} // namespace

void registerCorePasses() {
  static std::once_flag once;
  std::call_once(once, registerAll);
}

} // namespace mir
