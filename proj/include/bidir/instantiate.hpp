#pragma once

#include <string>

#include "bidir/context.hpp"
#include "bidir/session.hpp"

namespace bidir {

/// Instantiates `evar` such that `evar <: a`. Requires `evar` unsolved in
/// `g`, `a` fully applied under `g`, well-formed, and free of `evar`.
/// Throws TypeError(NoRuleApplies) when no rule matches.
Context inst_left(Session& s, const Context& g, const std::string& evar, const Type& a);

/// Instantiates `evar` such that `a <: evar`. Same preconditions.
Context inst_right(Session& s, const Context& g, const Type& a, const std::string& evar);

}  // namespace bidir
