//===- PassManager.cpp - Pass registry, pipelines and execution -----------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/Pass/PassManager.h"

#include "mir/IR/Context.h"
#include "mir/Pass/Passes.h"
#include "mir/Verifier/Verifier.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace mir {

//===----------------------------------------------------------------------===//
// Registry
//===----------------------------------------------------------------------===//

namespace {

struct Registry {
  std::mutex mutex;
  std::map<std::string, std::unique_ptr<PassInfo>, std::less<>> passes;
};

Registry &rawRegistry() {
  static Registry registry;
  return registry;
}

Registry &registry() {
  registerCorePasses();
  return rawRegistry();
}

} // namespace

void registerPass(PassInfo info) {
  Registry &r = rawRegistry();
  std::lock_guard<std::mutex> lock(r.mutex);
  if (r.passes.count(info.name))
    throw ValidationError("pass '" + info.name + "' is already registered");
  std::string name = info.name;
  r.passes.emplace(std::move(name), std::make_unique<PassInfo>(std::move(info)));
}

const PassInfo *lookupPass(std::string_view name) {
  Registry &r = registry();
  std::lock_guard<std::mutex> lock(r.mutex);
  auto it = r.passes.find(name);
  return it == r.passes.end() ? nullptr : it->second.get();
}

std::vector<const PassInfo *> getRegisteredPasses() {
  Registry &r = registry();
  std::lock_guard<std::mutex> lock(r.mutex);
  std::vector<const PassInfo *> out;
  for (auto &[name, info] : r.passes)
    out.push_back(info.get());
  return out;
}

//===----------------------------------------------------------------------===//
// PipelineSpec
//===----------------------------------------------------------------------===//

size_t PipelineSpec::getNumPasses() const {
  size_t n = 0;
  for (const Entry &e : entries)
    n += e.pass ? 1 : e.nested->getNumPasses();
  return n;
}

std::string PipelineSpec::str() const {
  std::string out = anchor + "(";
  for (size_t i = 0; i < entries.size(); ++i) {
    if (i)
      out += ",";
    const Entry &e = entries[i];
    if (!e.pass) {
      out += e.nested->str();
      continue;
    }
    out += e.pass->name;
    if (!e.pass->options.empty()) {
      out += "{";
      bool first = true;
      for (auto &[k, v] : e.pass->options) {
        out += (first ? "" : ",") + k + "=" + v;
        first = false;
      }
      out += "}";
    }
  }
  return out + ")";
}

//===----------------------------------------------------------------------===//
// Parser
//===----------------------------------------------------------------------===//

namespace {

class PipelineParser {
public:
  PipelineParser(Context &ctx, std::string_view text) : ctx_(ctx), text_(text) {}

  PipelineParseResult parse() {
    PipelineParseResult result;
    std::optional<PipelineSpec> spec = parseSpec(nullptr);
    if (spec) {
      skipSpace();
      if (pos_ != text_.size())
        error("unexpected '" + std::string(1, text_[pos_]) + "' after pipeline");
    }
    result.diagnostics = std::move(diags_);
    if (result.diagnostics.empty())
      result.spec = std::move(spec);
    return result;
  }

private:
  void error(std::string message, size_t at) {
    if (diags_.empty())
      diags_.push_back(Diagnostic::error(
          Location::fileLineCol("<pipeline>", 1, static_cast<unsigned>(at) + 1),
          std::move(message)));
  }
  void error(std::string message) { error(std::move(message), pos_); }

  void skipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  bool consume(char c) {
    skipSpace();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  static bool isNameChar(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
           c == '$';
  }
  std::string parseName() {
    skipSpace();
    size_t start = pos_;
    while (pos_ < text_.size() && isNameChar(text_[pos_]))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  /// Checks that `anchor` names a registered op able to sit inside `parent`.
  bool checkAnchor(const std::string &anchor, const std::string *parent, size_t at) {
    const OpDefinition *def = ctx_.lookupOp(anchor);
    if (!def) {
      error("unknown anchor op '" + anchor + "'", at);
      return false;
    }
    if (parent) {
      const OpDefinition *parentDef = ctx_.lookupOp(*parent);
      if (parentDef->numRegions.value_or(0) == 0) {
        error("anchor '" + *parent + "' has no regions and cannot contain '" + anchor + "'", at);
        return false;
      }
    }
    return true;
  }

  std::optional<PipelineSpec> parseSpec(const std::string *parent) {
    skipSpace();
    size_t start = pos_;
    PipelineSpec spec;
    spec.anchor = parseName();
    if (spec.anchor.empty()) {
      error("expected anchor op name");
      return std::nullopt;
    }
    if (!consume('(')) {
      error("expected '(' after anchor '" + spec.anchor + "'");
      return std::nullopt;
    }
    if (!checkAnchor(spec.anchor, parent, start))
      return std::nullopt;
    if (consume(')'))
      return spec;
    do {
      skipSpace();
      size_t entryStart = pos_;
      std::string name = parseName();
      if (name.empty()) {
        error("expected pass name or nested pipeline");
        return std::nullopt;
      }
      skipSpace();
      if (pos_ < text_.size() && text_[pos_] == '(') {
        pos_ = entryStart;
        std::optional<PipelineSpec> nested = parseSpec(&spec.anchor);
        if (!nested)
          return std::nullopt;
        spec.entries.push_back({std::nullopt, std::make_shared<PipelineSpec>(std::move(*nested))});
        continue;
      }
      std::optional<PassInvocation> invocation = parseInvocation(name, spec.anchor, entryStart);
      if (!invocation)
        return std::nullopt;
      spec.entries.push_back({std::move(invocation), nullptr});
    } while (consume(','));
    if (!consume(')')) {
      error("expected ',' or ')' in pipeline for '" + spec.anchor + "'");
      return std::nullopt;
    }
    return spec;
  }

  std::optional<PassInvocation> parseInvocation(const std::string &name,
                                                const std::string &anchor, size_t at) {
    const PassInfo *info = lookupPass(name);
    if (!info) {
      error("unknown pass '" + name + "'", at);
      return std::nullopt;
    }
    if (!info->anchor.empty() && info->anchor != anchor) {
      error("pass '" + name + "' must be anchored on '" + info->anchor + "', not '" + anchor +
                "'",
            at);
      return std::nullopt;
    }
    PassInvocation invocation{name, {}, nullptr};
    if (consume('{')) {
      if (!consume('}')) {
        do {
          skipSpace();
          size_t keyAt = pos_;
          std::string key = parseName();
          if (key.empty() || !consume('=')) {
            error("expected 'key=value' in options of pass '" + name + "'");
            return std::nullopt;
          }
          std::string value = parseName();
          if (std::find(info->optionNames.begin(), info->optionNames.end(), key) ==
              info->optionNames.end()) {
            error("unknown option '" + key + "' for pass '" + name + "'", keyAt);
            return std::nullopt;
          }
          invocation.options[key] = value;
        } while (consume(',') || (skipSpace(), pos_ < text_.size() && isNameChar(text_[pos_])));
        if (!consume('}')) {
          error("expected '}' after options of pass '" + name + "'");
          return std::nullopt;
        }
      }
    }
    try {
      invocation.pass = info->factory(invocation.options);
    } catch (const ValidationError &e) {
      error(e.what(), at);
      return std::nullopt;
    }
    return invocation;
  }

  Context &ctx_;
  std::string_view text_;
  size_t pos_ = 0;
  DiagnosticList diags_;
};

} // namespace

PipelineParseResult parsePipeline(Context &ctx, std::string_view text) {
  return PipelineParser(ctx, text).parse();
}

//===----------------------------------------------------------------------===//
// Execution
//===----------------------------------------------------------------------===//

namespace {

using Clock = std::chrono::steady_clock;

double elapsedMs(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

void addChanges(PassRecord &to, const ChangeReport &changes,
                const std::map<std::string, unsigned> &statistics) {
  to.changes.rewrites += changes.rewrites;
  to.changes.folds += changes.folds;
  to.changes.opsErased += changes.opsErased;
  to.changes.blocksErased += changes.blocksErased;
  to.changes.iterations = std::max(to.changes.iterations, changes.iterations);
  to.changes.converged = to.changes.converged && changes.converged;
  to.changes.applied.insert(to.changes.applied.end(), changes.applied.begin(),
                            changes.applied.end());
  for (auto &[k, v] : statistics)
    to.statistics[k] += v;
}

/// Results of running part of a pipeline on one subtree.
struct Accumulator {
  std::vector<PassRecord> records;
  DiagnosticList diagnostics;
  std::string dumps;
  bool failed = false;

  void merge(Accumulator &&other) {
    for (size_t i = 0; i < records.size(); ++i) {
      PassRecord &to = records[i];
      PassRecord &from = other.records[i];
      to.anchorOps += from.anchorOps;
      to.timeMs += from.timeMs;
      to.verified = to.verified && from.verified;
      addChanges(to, from.changes, from.statistics);
    }
    diagnostics.insert(diagnostics.end(), std::make_move_iterator(other.diagnostics.begin()),
                       std::make_move_iterator(other.diagnostics.end()));
    dumps += other.dumps;
    failed = failed || other.failed;
  }
};

class Runner {
public:
  Runner(const PipelineOptions &options) : options_(options) {}

  /// Creates one empty record per pass invocation in pre-order.
  void initRecords(const PipelineSpec &spec, std::vector<PassRecord> &records) {
    for (const auto &entry : spec.entries) {
      if (!entry.pass) {
        initRecords(*entry.nested, records);
        continue;
      }
      PassRecord record;
      record.pass = entry.pass->name;
      record.anchor = spec.anchor;
      record.changes.converged = true;
      records.push_back(std::move(record));
      indices_[&*entry.pass] = records.size() - 1;
    }
  }

  Accumulator makeAccumulator() const {
    Accumulator acc;
    acc.records = templateRecords_;
    return acc;
  }

  void setTemplate(std::vector<PassRecord> records) { templateRecords_ = std::move(records); }

  /// Runs `spec` on `root`, whose opcode is the spec's anchor.
  void run(Operation *root, const PipelineSpec &spec, Accumulator &acc) {
    for (const auto &entry : spec.entries) {
      if (acc.failed || abort_.load())
        return;
      if (entry.pass)
        runPass(root, spec.anchor, *entry.pass, acc);
      else
        runNested(root, *entry.nested, acc);
    }
  }

private:
  void runPass(Operation *root, const std::string &anchor, const PassInvocation &invocation,
               Accumulator &acc) {
    PassRecord &record = acc.records[indices_.at(&invocation)];
    PassResult result;
    result.changes.converged = true;
    auto start = Clock::now();
    invocation.pass->run(root, options_.env, result);
    double ms = elapsedMs(start);

    record.anchorOps += 1;
    record.timeMs += ms;
    addChanges(record, result.changes, result.statistics);
    acc.diagnostics.insert(acc.diagnostics.end(), result.diagnostics.begin(),
                           result.diagnostics.end());
    if (result.failed) {
      if (result.diagnostics.empty())
        acc.diagnostics.push_back(Diagnostic::error(
            root->getLoc(), "pass '" + invocation.name + "' failed on '" + anchor + "'"));
      fail(acc);
      return;
    }
    if (options_.printAfterAll)
      acc.dumps += "// -----// after " + invocation.name + " (" + anchor + ")\n" +
                   printOp(root, options_.printOptions) + "\n";
    if (options_.verifyEach) {
      DiagnosticList diags = verify(root);
      if (!diags.empty()) {
        record.verified = false;
        acc.diagnostics.insert(acc.diagnostics.end(), diags.begin(), diags.end());
        acc.diagnostics.push_back(Diagnostic::error(
            root->getLoc(),
            "verification failed after pass '" + invocation.name + "' on '" + anchor + "'"));
        fail(acc);
      }
    }
  }

  void fail(Accumulator &acc) {
    acc.failed = true;
    abort_.store(true);
  }

  void runNested(Operation *root, const PipelineSpec &nested, Accumulator &acc) {
    std::vector<Operation *> anchors;
    for (unsigned r = 0; r < root->getNumRegions(); ++r)
      for (Block &block : root->getRegion(r))
        for (Operation &op : block)
          walkWithSkip(&op, [&](Operation *candidate) {
            if (candidate->getName() != nested.anchor)
              return true;
            anchors.push_back(candidate);
            return false;
          });
    if (anchors.empty())
      return;

    bool isolated = std::all_of(anchors.begin(), anchors.end(), [](Operation *op) {
      return op->hasTrait(Trait::IsolatedFromAbove);
    });
    unsigned workers = isolated ? std::min<size_t>(options_.threads, anchors.size()) : 1;

    std::vector<Accumulator> results(anchors.size());
    for (Accumulator &r : results)
      r = makeAccumulator();
    if (workers <= 1) {
      for (size_t i = 0; i < anchors.size() && !abort_.load(); ++i)
        run(anchors[i], nested, results[i]);
    } else {
      std::atomic<size_t> next{0};
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
          for (size_t i = next++; i < anchors.size() && !abort_.load(); i = next++)
            run(anchors[i], nested, results[i]);
        });
      for (std::thread &t : pool)
        t.join();
    }
    for (Accumulator &r : results)
      acc.merge(std::move(r));
  }

  const PipelineOptions &options_;
  std::map<const PassInvocation *, size_t> indices_;
  std::vector<PassRecord> templateRecords_;
  std::atomic<bool> abort_{false};
};

} // namespace

PassReport runPipeline(Operation *root, const PipelineSpec &spec,
                       const PipelineOptions &options) {
  auto start = Clock::now();
  PassReport report;
  Runner runner(options);
  std::vector<PassRecord> records;
  runner.initRecords(spec, records);
  runner.setTemplate(records);
  Accumulator acc = runner.makeAccumulator();

  if (root->getName() != spec.anchor) {
    acc.failed = true;
    acc.diagnostics.push_back(Diagnostic::error(
        root->getLoc(), "pipeline anchored on '" + spec.anchor + "' cannot run on '" +
                            std::string(root->getName()) + "'"));
  } else {
    runner.run(root, spec, acc);
  }

  report.passes = std::move(acc.records);
  report.failed = acc.failed;
  report.diagnostics = std::move(acc.diagnostics);
  report.irDumps = std::move(acc.dumps);
  report.wallMs = elapsedMs(start);
  return report;
}

unsigned PassReport::getStatistic(std::string_view pass, std::string_view name) const {
  unsigned total = 0;
  for (const PassRecord &r : passes)
    if (r.pass == pass)
      if (auto it = r.statistics.find(std::string(name)); it != r.statistics.end())
        total += it->second;
  return total;
}

std::string PassReport::table() const {
  size_t passWidth = 4, anchorWidth = 6;
  for (const PassRecord &r : passes) {
    passWidth = std::max(passWidth, r.pass.size());
    anchorWidth = std::max(anchorWidth, r.anchor.size());
  }
  std::ostringstream os;
  os << std::left << std::setw(passWidth) << "pass" << "  " << std::setw(anchorWidth)
     << "anchor" << "  " << std::right << std::setw(8) << "rewrites" << "  " << std::setw(9)
     << "time-ms" << "\n";
  for (const PassRecord &r : passes) {
    unsigned changes = r.changes.rewrites + r.changes.folds + r.changes.opsErased +
                       r.changes.blocksErased;
    os << std::left << std::setw(passWidth) << r.pass << "  " << std::setw(anchorWidth)
       << r.anchor << "  " << std::right << std::setw(8) << changes << "  " << std::setw(9)
       << std::fixed << std::setprecision(3) << r.timeMs << "\n";
  }
  return os.str();
}

unsigned getDefaultThreadCount() {
  const char *env = std::getenv("MINI_IR_THREADS");
  if (!env)
    return 1;
  unsigned value = 0;
  std::string_view text(env);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value == 0)
    return 1;
  return value;
}

} // namespace mir
