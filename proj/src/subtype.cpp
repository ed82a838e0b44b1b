#include "bidir/subtype.hpp"

#include "bidir/instantiate.hpp"
#include "bidir/surface.hpp"

namespace bidir {

namespace {

void fire(Session& s, const char* rule, const Type& a, const Type& b, const Context& g) {
  if (s.tracing()) s.trace(std::string(rule) + ": " + print_type(a) + " <: " + print_type(b) + " |- " + print_context(g));
}

TypeError mismatch(const Type& a, const Type& b) {
  return TypeError(TypeError::Kind::Mismatch,
                   "type mismatch: " + print_type(a) + " is not a subtype of " + print_type(b));
}

Context subtype_rules(Session& s, const Context& g, const Type& a, const Type& b) {
  // <:ForallR is invertible, so it goes first.
  if (b.is_forall()) {
    fire(s, "<:ForallR", a, b, g);
    std::string beta = s.universal_for(g, b.name());
    Type body = beta == b.name() ? b.body() : subst_tyvar(b.body(), b.name(), Type::var(beta));
    Context out = subtype(s, g.extended(Entry::universal(beta)), a, body);
    if (s.options().skip_forall_r_truncation) return out;
    return truncate_before(out, EntryKey::universal(beta));
  }

  if (a.is_forall()) {
    fire(s, "<:ForallL", a, b, g);
    std::string alpha_hat = s.fresh_evar();
    Type body = subst_tyvar(a.body(), a.name(), Type::exists(alpha_hat));
    Entry scope[] = {Entry::marker(alpha_hat), Entry::unsolved(alpha_hat)};
    Context out = subtype(s, g.extended(scope), body, b);
    return truncate_before(out, EntryKey::marker(alpha_hat));
  }

  if (a.is_var() && b.is_var() && a.name() == b.name()) {
    if (!g.has_universal(a.name()))
      throw TypeError(TypeError::Kind::UnboundVariable, "unbound type variable " + a.name());
    fire(s, "<:Var", a, b, g);
    return g;
  }

  if (a.is_unit() && b.is_unit()) {
    fire(s, "<:Unit", a, b, g);
    return g;
  }

  if (a.is_exists() && b.is_exists() && a.name() == b.name()) {
    if (g.find_evar(a.name()) == nullptr)
      throw TypeError(TypeError::Kind::UnboundVariable, "unbound existential ?" + a.name());
    fire(s, "<:Exvar", a, b, g);
    return g;
  }

  if (a.is_arrow() && b.is_arrow()) {
    fire(s, "<:Arrow", a, b, g);
    Context theta = subtype(s, g, b.domain(), a.domain());
    return subtype(s, theta, s.applied(theta, a.codomain()), s.applied(theta, b.codomain()));
  }

  if (a.is_exists() && g.is_unsolved(a.name())) {
    if (occurs_evar(a.name(), b)) {
      throw TypeError(TypeError::Kind::OccursCheck,
                      "occurs check: ?" + a.name() + " occurs in " + print_type(b));
    }
    fire(s, "<:InstantiateL", a, b, g);
    return inst_left(s, g, a.name(), b);
  }

  if (b.is_exists() && g.is_unsolved(b.name())) {
    if (occurs_evar(b.name(), a)) {
      throw TypeError(TypeError::Kind::OccursCheck,
                      "occurs check: ?" + b.name() + " occurs in " + print_type(a));
    }
    fire(s, "<:InstantiateR", a, b, g);
    return inst_right(s, g, a, b.name());
  }

  throw mismatch(a, b);
}

}  // namespace

Context subtype(Session& s, const Context& g, const Type& a, const Type& b) {
  Session::FrameGuard frame(
      s, Session::FrameKind::Subtype,
      {forall_count(a) + forall_count(b), unsolved_count(g), contextual_size(g, a) + contextual_size(g, b)},
      "subtype");
  if (s.checking() && (!(apply_ctx(g, a) == a) || !(apply_ctx(g, b) == b))) {
    s.violation("subtype-applied", print_type(a) + " <: " + print_type(b) + " |- " + print_context(g));
  }
  Context out = subtype_rules(s, g, a, b);
  if (s.checking() && !extends(g, out)) {
    s.violation("subtype-extension", print_type(a) + " <: " + print_type(b) + ": [" + print_context(g) +
                                         "] -> [" + print_context(out) + "]");
  }
  return out;
}

}  // namespace bidir
