//===- PatternDSL.h - Declarative source-to-target rewrites -----*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Text format:
//
//   pattern name benefit(N) {
//     match: "op"($x, "inner"($y) {k = $a}) where same($x, $y)
//     rewrite: %r = "other"($x) {k = $a} : type($x)
//     replace: %r
//   }
//
// `$x` in a source operand slot captures the operand value, `%x` accepts
// any operand, and a nested dag requires the operand to be the single
// result of a matching op.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/Rewrite/PatternMatch.h"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mir {

struct DagNode;

struct DagOperand {
  enum class Kind { Nested, Capture, Wildcard };
  Kind kind = Kind::Wildcard;
  std::string name;
  std::unique_ptr<DagNode> nested;
};

struct DagAttr {
  std::string name;
  /// Literal to compare against, or null when `capture` is set.
  Attribute literal;
  std::string capture;
};

struct DagNode {
  std::string opcode;
  std::vector<DagOperand> operands;
  std::vector<DagAttr> attrs;
};

struct DslPredicate {
  enum class Kind { Same, AttrEq, TypeIs };
  Kind kind;
  std::string lhs, rhs;
  Attribute attr;
  Type type;
};

struct TargetOperand {
  bool isCapture;
  std::string name;
};

struct TargetAttr {
  std::string name;
  Attribute literal;
  std::string capture;
};

struct TargetOp {
  std::string result;
  std::string opcode;
  std::vector<TargetOperand> operands;
  std::vector<TargetAttr> attrs;
  /// Explicit result type, or the type of capture `typeOf`.
  Type type;
  std::string typeOf;
};

/// Values and attributes bound by a successful match.
struct Bindings {
  std::map<std::string, Value *> values;
  std::map<std::string, Attribute> attrs;
};

/// Where a capture lives relative to the root. Op paths are "r" for the
/// root and "P.i" for the op defining operand i of the op at P. A value
/// capture is "P.i" (operand i of the op at P); an attribute capture is
/// "P@name".
struct CaptureInfo {
  bool isAttr = false;
  std::string opPath;
  unsigned slot = 0;
  std::string attrName;
  std::string id() const {
    return isAttr ? opPath + "@" + attrName : opPath + "." + std::to_string(slot);
  }
};

class DeclarativePattern : public RewritePattern {
public:
  DeclarativePattern(std::string name, unsigned benefit, DagNode source,
                     std::vector<DslPredicate> predicates, std::vector<TargetOp> targets,
                     std::vector<TargetOperand> replacements,
                     std::map<std::string, CaptureInfo> captures);

  const DagNode &getSource() const { return source_; }
  const std::vector<DslPredicate> &getPredicates() const { return predicates_; }
  const std::map<std::string, CaptureInfo> &getCaptures() const { return captures_; }

  /// Matches `op` against the source dag and the predicates.
  bool match(Operation *op, Bindings &bindings) const;
  /// Builds the target ops before `op`, replaces it, and erases matched
  /// producers left dead. Throws IRError on a type mismatch.
  void rewrite(Operation *op, const Bindings &bindings, PatternRewriter &rewriter) const;

  bool matchAndRewrite(Operation *op, PatternRewriter &rewriter) const override;

private:
  DagNode source_;
  std::vector<DslPredicate> predicates_;
  std::vector<TargetOp> targets_;
  std::vector<TargetOperand> replacements_;
  std::map<std::string, CaptureInfo> captures_;
};

struct PatternSet {
  std::vector<std::shared_ptr<const DeclarativePattern>> patterns;

  /// Patterns rooted at `opcode`, in (benefit desc, declaration) order.
  std::vector<const DeclarativePattern *> getOrdered(const std::string &opcode) const;
  /// Every pattern in (benefit desc, declaration) order.
  std::vector<const DeclarativePattern *> getOrdered() const;
};

struct PatternParseResult {
  std::optional<PatternSet> patterns;
  DiagnosticList diagnostics;
};

PatternParseResult parsePatternFile(Context &ctx, std::string_view text,
                                    std::string filename = "<patterns>");

} // namespace mir
