#pragma once

#include <utility>

#include "bidir/context.hpp"
#include "bidir/session.hpp"
#include "bidir/syntax.hpp"

namespace bidir {

struct Synthesized {
  Type type;
  Context context;
};

/// `g |- e <= a -| Δ`
Context check(Session& s, const Context& g, const Term& e, const Type& a);

/// `g |- e => A -| Δ`
Synthesized synth(Session& s, const Context& g, const Term& e);

/// `g |- a . e =>> C -| Δ`: applying a function of type `a` to `e`.
Synthesized apply_fn(Session& s, const Context& g, const Term& e, const Type& a);

}  // namespace bidir
