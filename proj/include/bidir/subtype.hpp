#pragma once

#include "bidir/context.hpp"
#include "bidir/session.hpp"

namespace bidir {

/// Algorithmic subtyping `g |- a <: b -| Δ`. Both types must be well-formed
/// and fully applied under `g`. Throws TypeError (Mismatch, OccursCheck,
/// NoRuleApplies) on failure.
Context subtype(Session& s, const Context& g, const Type& a, const Type& b);

}  // namespace bidir
