//===- Registration.cpp - Register every shipped dialect ------------------===//
//
// Licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "mir/Dialects/Dialects.h"
#include "mir/Matcher/PatDialect.h"

namespace mir {

void registerAllDialects(Context &ctx) {
  registerBuiltinDialect(ctx);
  registerFuncDialect(ctx);
  registerArithDialect(ctx);
  registerCFDialect(ctx);
  registerMemRefDialect(ctx);
  registerAffineDialect(ctx);
  registerMLDialect(ctx);
  registerPatDialect(ctx);
}

} // namespace mir
