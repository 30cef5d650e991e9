#pragma once

// Inference of intersection types for lambdas whose annotation leaves the
// codomain open.
//
// The body is first checked under the annotated domain `s` while collecting
// ψ, the types its parameter was seen at. Each candidate is then checked
// again on its own and yields one arrow. The part of `s` not covered by any
// successful candidate keeps its own arrow.

#include <utility>
#include <vector>

#include "occt/checker.hpp"

namespace occt {

/// Type of the lambda `lam` under `env`. Throws TypeError.
Type infer_lambda(Checker& c, const TypeEnv& env, const ExprPtr& lam);

/// The intersection of the arrows `u -> w`, dropping arrows implied by the
/// others.
Type simplify_arrows(const std::vector<std::pair<Type, Type>>& arrows);

}  // namespace occt
