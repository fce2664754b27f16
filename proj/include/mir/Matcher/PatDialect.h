//===- PatDialect.h - Matcher programs as IR --------------------*- C++ -*-===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// A matcher is a `pat.matcher` op whose entry block argument is a handle to
// the op being matched. Handles are `index`-typed SSA values; `pat.descend`
// derives the handle of the op defining an operand (null when there is
// none). Check ops carry one success region; on failure, or when their
// region ends in `pat.fail`, execution continues with the next op of the
// enclosing block. `pat.emit` ends matching successfully.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "mir/IR/Context.h"

namespace mir {

void registerPatDialect(Context &ctx);

/// True for ops with a success region whose outcome is a predicate.
bool isPatCheck(std::string_view opName);

} // namespace mir
