#include "bidir/instantiate.hpp"

#include "bidir/surface.hpp"

namespace bidir {

namespace {

enum class Side { Left, Right };

std::string judgment(Side side, const std::string& evar, const Type& a) {
  if (side == Side::Left) return "?" + evar + " :=< " + print_type(a);
  return print_type(a) + " =<: ?" + evar;
}

void fire(Session& s, const char* rule, Side side, const std::string& evar, const Type& a, const Context& g) {
  if (s.tracing()) s.trace(std::string(rule) + ": " + judgment(side, evar, a) + " |- " + print_context(g));
}

void check_preconditions(Session& s, const Context& g, const std::string& evar, const Type& a, Side side) {
  if (!s.checking()) return;
  auto report = [&](const char* what) {
    s.violation("instantiation-precondition",
                std::string(what) + ": " + judgment(side, evar, a) + " |- " + print_context(g));
  };
  if (!g.is_unsolved(evar)) report("existential not unsolved");
  if (!(apply_ctx(g, a) == a)) report("type not fully applied");
  if (occurs_evar(evar, a)) report("existential occurs in type");
  if (!type_wf(g, a)) report("type not well-formed");
}

Context instantiate(Session& s, const Context& g, const std::string& evar, const Type& a, Side side);

Context instantiate_rules(Session& s, const Context& g, const std::string& evar, const Type& a, Side side) {
  const bool left = side == Side::Left;
  Split split = split_at(g, EntryKey::existential(evar));

  if (is_monotype(a) && type_wf(split.left, a)) {
    fire(s, left ? "InstLSolve" : "InstRSolve", side, evar, a, g);
    s.record_solution(evar, a);
    return replace(g, EntryKey::existential(evar), {Entry::solved(evar, a)});
  }

  if (a.is_exists() && split.right.is_unsolved(a.name())) {
    fire(s, left ? "InstLReach" : "InstRReach", side, evar, a, g);
    s.record_solution(a.name(), Type::exists(evar));
    return replace(g, EntryKey::existential(a.name()), {Entry::solved(a.name(), Type::exists(evar))});
  }

  if (a.is_arrow()) {
    fire(s, left ? "InstLArr" : "InstRArr", side, evar, a, g);
    std::string dom = s.fresh_evar();
    std::string cod = s.fresh_evar();
    Type articulated = Type::arrow(Type::exists(dom), Type::exists(cod));
    s.record_solution(evar, articulated);
    Context articulated_ctx = replace(
        g, EntryKey::existential(evar),
        {Entry::unsolved(cod), Entry::unsolved(dom), Entry::solved(evar, articulated)});
    if (left) {
      Context theta = instantiate(s, articulated_ctx, dom, a.domain(), Side::Right);
      return instantiate(s, theta, cod, s.applied(theta, a.codomain()), Side::Left);
    }
    Context theta = instantiate(s, articulated_ctx, dom, a.domain(), Side::Left);
    return instantiate(s, theta, cod, s.applied(theta, a.codomain()), Side::Right);
  }

  if (a.is_forall() && left) {
    fire(s, "InstLAllR", side, evar, a, g);
    std::string beta = s.universal_for(g, a.name());
    Type body = beta == a.name() ? a.body() : subst_tyvar(a.body(), a.name(), Type::var(beta));
    Context out = instantiate(s, g.extended(Entry::universal(beta)), evar, body, Side::Left);
    return truncate_before(out, EntryKey::universal(beta));
  }

  if (a.is_forall() && !left) {
    fire(s, "InstRAllL", side, evar, a, g);
    std::string beta_hat = s.fresh_evar();
    Type body = subst_tyvar(a.body(), a.name(), Type::exists(beta_hat));
    Entry scope[] = {Entry::marker(beta_hat), Entry::unsolved(beta_hat)};
    Context out = instantiate(s, g.extended(scope), evar, body, Side::Right);
    return truncate_before(out, EntryKey::marker(beta_hat));
  }

  throw TypeError(TypeError::Kind::NoRuleApplies,
                  "cannot instantiate " + judgment(side, evar, a) + " under " + print_context(g));
}

Context instantiate(Session& s, const Context& g, const std::string& evar, const Type& a, Side side) {
  check_preconditions(s, g, evar, a, side);
  Context out = instantiate_rules(s, g, evar, a, side);
  if (s.checking()) {
    if (!extends(g, out)) {
      s.violation("instantiation-extension",
                  judgment(side, evar, a) + ": [" + print_context(g) + "] -> [" + print_context(out) + "]");
    }
    if (is_monotype(a) && unsolved_count(g) != unsolved_count(out) + 1) {
      s.violation("monotype-solves",
                  judgment(side, evar, a) + ": [" + print_context(g) + "] -> [" + print_context(out) + "]");
    }
  }
  return out;
}

}  // namespace

Context inst_left(Session& s, const Context& g, const std::string& evar, const Type& a) {
  return instantiate(s, g, evar, a, Side::Left);
}

Context inst_right(Session& s, const Context& g, const Type& a, const std::string& evar) {
  return instantiate(s, g, evar, a, Side::Right);
}

}  // namespace bidir
