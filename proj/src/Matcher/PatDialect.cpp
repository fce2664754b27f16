//===- PatDialect.cpp - Matcher programs as IR ----------------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/Matcher/PatDialect.h"
#include "mir/IR/DialectTable.h"
#include "mir/IR/Operation.h"

#include <set>

namespace mir {

static const char *const kPatTable = R"(
dialect pat
op pat.matcher traits(IsolatedFromAbove) operands() results() attrs(root: string?)
  regions(1) successors(0) hooks(verify=matcher)
op pat.descend traits(NoSideEffect) operands(index) results(index) attrs(index: integer)
  regions(0) successors(0)
op pat.check_opcode operands(index) results() attrs(opcode: string) regions(1) successors(0)
op pat.check_arity operands(index) results() attrs(count: integer) regions(1) successors(0)
op pat.check_op_arity operands(index) results() attrs(opcode: string, count: integer)
  regions(1) successors(0)
op pat.check_attr operands(index) results() attrs(name: string, value: any?)
  regions(1) successors(0)
op pat.check_attrs operands(index) results() attrs(values: dictionary) regions(1) successors(0)
op pat.check_type operands(index) results() attrs(slot: integer, type: type)
  regions(1) successors(0)
op pat.check_same operands() results() attrs(lhs: string, rhs: string) regions(1) successors(0)
op pat.switch_opcode operands(index) results() attrs(cases: array) successors(0)
  hooks(verify=switch)
op pat.capture operands(index) results() attrs(id: string, slot: integer?, attr: string?)
  regions(0) successors(0)
op pat.emit traits(Terminator) operands() results() attrs(pattern: string, bindings: dictionary)
  regions(0) successors(0)
op pat.fail traits(Terminator) operands() results() regions(0) successors(0)
)";

bool isPatCheck(std::string_view name) {
  return name == "pat.check_opcode" || name == "pat.check_arity" ||
         name == "pat.check_op_arity" || name == "pat.check_attr" ||
         name == "pat.check_attrs" || name == "pat.check_type" || name == "pat.check_same";
}

/// Every capture id read along a path must have been written earlier on
/// that path.
static void checkCaptures(Block *block, std::set<std::string> defined, DiagnosticList &diags) {
  for (Operation &op : *block) {
    std::vector<std::string> uses;
    if (op.getName() == "pat.check_same") {
      for (const char *side : {"lhs", "rhs"})
        if (Attribute id = op.getAttr(side); id && id.isa(AttrKind::String))
          uses.push_back(id.getString());
    } else if (op.getName() == "pat.emit") {
      if (Attribute bindings = op.getAttr("bindings"); bindings && bindings.isa(AttrKind::Dictionary))
        for (const NamedAttribute &b : bindings.getDictionary())
          if (b.value.isa(AttrKind::String))
            uses.push_back(b.value.getString());
    }
    for (const std::string &id : uses)
      if (!defined.count(id))
        diags.push_back(Diagnostic::error(op.getLoc(), "'" + op.getName() +
                                                           "' op uses capture '" + id +
                                                           "' before it is defined"));
    if (op.getName() == "pat.capture")
      if (Attribute id = op.getAttr("id"); id && id.isa(AttrKind::String))
        defined.insert(id.getString());
    for (unsigned r = 0; r < op.getNumRegions(); ++r)
      if (!op.getRegion(r).empty())
        checkCaptures(op.getRegion(r).front(), defined, diags);
  }
}

void registerPatDialect(Context &ctx) {
  HookTable hooks;
  hooks.verify["matcher"] = [](Operation &op, DiagnosticList &diags) {
    Region &body = op.getRegion(0);
    if (body.empty() || body.front()->getNumArguments() != 1 ||
        !body.front()->getArgument(0)->getType().isIndex()) {
      diags.push_back(Diagnostic::error(
          op.getLoc(), "'pat.matcher' op body must take a single index root handle"));
      return;
    }
    checkCaptures(body.front(), {}, diags);
  };
  hooks.verify["switch"] = [](Operation &op, DiagnosticList &diags) {
    const auto &cases = op.getAttr("cases").getArray();
    if (op.getNumRegions() != cases.size() + 1)
      diags.push_back(Diagnostic::error(
          op.getLoc(), "'pat.switch_opcode' op expects one region per case plus a default"));
    for (Attribute c : cases)
      if (!c.isa(AttrKind::String))
        diags.push_back(
            Diagnostic::error(op.getLoc(), "'pat.switch_opcode' op cases must be strings"));
  };
  loadDialectTable(ctx, kPatTable, hooks);
}

} // namespace mir
