//===- PassManager.h - Pass registry, pipelines and execution ---*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// A pipeline is a tree: each level names an anchor opcode and lists passes
// and nested pipelines to run on every op with that opcode. Nested anchors
// that are IsolatedFromAbove run on a worker pool; results are merged in
// document order so the output never depends on the thread count.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/Diagnostic.h"
#include "mir/IR/Operation.h"
#include "mir/Rewrite/GreedyDriver.h"
#include "mir/Text/AsmPrinter.h"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mir {

using PassOptions = std::map<std::string, std::string>;

/// Shared inputs that are not part of the pipeline text.
struct PassEnvironment {
  /// Builds the applicator used by `canonicalize`, once per anchor op.
  /// Unset means the registered canonicalization patterns only.
  std::function<std::unique_ptr<PatternApplicator>()> canonicalizeApplicator;
};

struct PassResult {
  ChangeReport changes;
  /// Named counters, e.g. the inliner's skip reasons.
  std::map<std::string, unsigned> statistics;
  DiagnosticList diagnostics;
  /// Irrecoverable error; the pipeline stops.
  bool failed = false;
};

class Pass {
public:
  virtual ~Pass() = default;
  /// Runs on one anchor op and must not touch anything outside it. Called
  /// concurrently for distinct anchors, so implementations keep no mutable
  /// state.
  virtual void run(Operation *anchor, const PassEnvironment &env, PassResult &result) const = 0;
};

struct PassInfo {
  std::string name;
  std::string description;
  /// Opcode the pass must be anchored on; empty accepts any op.
  std::string anchor;
  std::vector<std::string> optionNames;
  /// Throws ValidationError for bad option values.
  std::function<std::unique_ptr<Pass>(const PassOptions &)> factory;
};

/// Adds a pass to the global registry. Throws ValidationError on a
/// duplicate name.
void registerPass(PassInfo info);
const PassInfo *lookupPass(std::string_view name);
std::vector<const PassInfo *> getRegisteredPasses();

//===----------------------------------------------------------------------===//
// Pipelines
//===----------------------------------------------------------------------===//

struct PassInvocation {
  std::string name;
  PassOptions options;
  std::shared_ptr<const Pass> pass;
};

struct PipelineSpec {
  struct Entry {
    std::optional<PassInvocation> pass;
    std::shared_ptr<PipelineSpec> nested;
  };

  std::string anchor;
  std::vector<Entry> entries;

  /// Number of pass invocations in the whole tree.
  size_t getNumPasses() const;
  /// Canonical text, e.g. `builtin.module(cse,func.func(canonicalize))`.
  std::string str() const;
};

struct PipelineParseResult {
  std::optional<PipelineSpec> spec;
  DiagnosticList diagnostics;
};

/// Grammar: `anchor(entry (, entry)*)` where an entry is
/// `pass-name({key=value,...})?` or a nested pipeline. Pass names, options
/// and anchor nesting are checked against `ctx`.
PipelineParseResult parsePipeline(Context &ctx, std::string_view text);

struct PipelineOptions {
  unsigned threads = 1;
  bool verifyEach = false;
  /// Dump each anchor op after every pass into PassReport::irDumps.
  bool printAfterAll = false;
  PrintOptions printOptions;
  PassEnvironment env;
};

/// One row per pass invocation, summed over the anchor ops it ran on.
struct PassRecord {
  std::string pass;
  std::string anchor;
  unsigned anchorOps = 0;
  ChangeReport changes;
  std::map<std::string, unsigned> statistics;
  double timeMs = 0;
  bool verified = true;
};

struct PassReport {
  std::vector<PassRecord> passes;
  bool failed = false;
  DiagnosticList diagnostics;
  /// `// -----// after PASS (ANCHOR)` blocks, in document order.
  std::string irDumps;
  double wallMs = 0;

  unsigned getStatistic(std::string_view pass, std::string_view name) const;
  /// Columns: pass, anchor, rewrites, time-ms.
  std::string table() const;
};

PassReport runPipeline(Operation *root, const PipelineSpec &spec,
                       const PipelineOptions &options = {});

/// `MINI_IR_THREADS` when set to a positive integer, otherwise 1.
unsigned getDefaultThreadCount();

} // namespace mir
