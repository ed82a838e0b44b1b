#include "bidir/typecheck.hpp"

#include "bidir/instantiate.hpp"
#include "bidir/subtype.hpp"
#include "bidir/surface.hpp"

namespace bidir {

namespace {

void fire(Session& s, const char* rule, const std::string& judgment, const Context& g) {
  if (s.tracing()) s.trace(std::string(rule) + ": " + judgment + " |- " + print_context(g));
}

std::string check_judgment(const Term& e, const Type& a) { return print_term(e) + " <= " + print_type(a); }

// Opens `\x. body` under `g`, renaming the binder if `g` already declares it.
std::pair<std::string, Term> open_lambda(Session& s, const Context& g, const Term& lam) {
  std::string x = s.term_var_for(g, lam.name(), term_var_names(lam.body()));
  if (x == lam.name()) return {x, lam.body()};
  return {x, subst_term(lam.body(), lam.name(), Term::var(x))};
}

void check_extension(Session& s, const char* judgment, const Term& e, const Context& g, const Context& d) {
  if (s.checking() && !extends(g, d)) {
    s.violation("typing-extension", std::string(judgment) + " " + print_term(e) + ": [" + print_context(g) +
                                        "] -> [" + print_context(d) + "]");
  }
}

std::vector<std::size_t> measure(Session& s, const Term& e, std::size_t rank, const Context& g, const Type* a) {
  if (!s.checking()) return {};
  return {term_size(e), rank, a ? contextual_size(g, *a) : 0};
}

template <typename F>
auto with_span(const Term& e, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (TypeError& err) {
    if (e.span().end > 0) err.attach_span(e.span());
    throw;
  }
}

Context check_rules(Session& s, const Context& g, const Term& e, const Type& input) {
  const Type a = s.applied(g, input);

  if (a.is_forall()) {
    fire(s, "ForallI", check_judgment(e, a), g);
    std::string alpha = s.universal_for(g, a.name());
    Type body = alpha == a.name() ? a.body() : subst_tyvar(a.body(), a.name(), Type::var(alpha));
    Context out = check(s, g.extended(Entry::universal(alpha)), e, body);
    return truncate_before(out, EntryKey::universal(alpha));
  }

  if (e.is_unit() && a.is_unit()) {
    fire(s, "1I", check_judgment(e, a), g);
    return g;
  }

  if (e.is_lam() && a.is_arrow()) {
    fire(s, "->I", check_judgment(e, a), g);
    auto [x, body] = open_lambda(s, g, e);
    Context out = check(s, g.extended(Entry::term_var(x, a.domain())), body, a.codomain());
    return truncate_before(out, EntryKey::term_var(x));
  }

  if (s.mode() == Mode::NoInference && a.is_exists() && g.is_unsolved(a.name())) {
    if (e.is_unit()) {
      fire(s, "1I^", check_judgment(e, a), g);
      s.record_solution(a.name(), Type::unit());
      return replace(g, EntryKey::existential(a.name()), {Entry::solved(a.name(), Type::unit())});
    }
    if (e.is_lam()) {
      fire(s, "->I^", check_judgment(e, a), g);
      std::string dom = s.fresh_evar();
      std::string cod = s.fresh_evar();
      Type articulated = Type::arrow(Type::exists(dom), Type::exists(cod));
      s.record_solution(a.name(), articulated);
      Context articulated_ctx = replace(
          g, EntryKey::existential(a.name()),
          {Entry::unsolved(cod), Entry::unsolved(dom), Entry::solved(a.name(), articulated)});
      auto [x, body] = open_lambda(s, articulated_ctx, e);
      Context out = check(s, articulated_ctx.extended(Entry::term_var(x, Type::exists(dom))), body,
                          Type::exists(cod));
      return truncate_before(out, EntryKey::term_var(x));
    }
  }

  fire(s, "Sub", check_judgment(e, a), g);
  Synthesized synthesized = synth(s, g, e);
  const Context& theta = synthesized.context;
  return subtype(s, theta, s.applied(theta, synthesized.type), s.applied(theta, a));
}

Synthesized synth_rules(Session& s, const Context& g, const Term& e) {
  switch (e.kind()) {
    case Term::Kind::Var: {
      const Type* a = g.lookup_term(e.name());
      if (a == nullptr) throw TypeError(TypeError::Kind::UnboundVariable, "unbound variable " + e.name());
      fire(s, "Var", print_term(e) + " =>", g);
      return {*a, g};
    }
    case Term::Kind::Anno: {
      fire(s, "Anno", print_term(e) + " =>", g);
      if (!type_wf(g, e.ascribed()) || has_evars(e.ascribed())) {
        throw TypeError(TypeError::Kind::IllFormedType,
                        "ill-formed annotation " + print_type(e.ascribed()));
      }
      Context out = check(s, g, e.subject(), e.ascribed());
      return {e.ascribed(), out};
    }
    case Term::Kind::Unit:
      if (s.mode() == Mode::NoInference)
        throw TypeError(TypeError::Kind::CannotSynthesize, "cannot synthesize a type for () without an annotation");
      fire(s, "1I=>", print_term(e) + " =>", g);
      return {Type::unit(), g};
    case Term::Kind::Lam: {
      if (s.mode() == Mode::NoInference) {
        throw TypeError(TypeError::Kind::CannotSynthesize,
                        "cannot synthesize a type for " + print_term(e) + " without an annotation");
      }
      fire(s, "->I=>", print_term(e) + " =>", g);
      std::string alpha = s.fresh_evar();
      std::string beta = s.fresh_evar();
      Context opened = g.extended(Entry::unsolved(alpha)).extended(Entry::unsolved(beta));
      auto [x, body] = open_lambda(s, opened, e);
      Context out = check(s, opened.extended(Entry::term_var(x, Type::exists(alpha))), body, Type::exists(beta));
      return {Type::arrow(Type::exists(alpha), Type::exists(beta)), truncate_before(out, EntryKey::term_var(x))};
    }
    case Term::Kind::App: {
      fire(s, "->E", print_term(e) + " =>", g);
      Synthesized head = synth(s, g, e.fn());
      return apply_fn(s, head.context, e.arg(), s.applied(head.context, head.type));
    }
  }
  throw TypeError(TypeError::Kind::CannotSynthesize, "cannot synthesize " + print_term(e));
}

Synthesized apply_rules(Session& s, const Context& g, const Term& e, const Type& input) {
  const Type a = s.applied(g, input);
  auto judgment = [&] { return print_type(a) + " . " + print_term(e) + " =>>"; };

  if (a.is_forall()) {
    fire(s, "ForallApp", judgment(), g);
    std::string alpha_hat = s.fresh_evar();
    Type body = subst_tyvar(a.body(), a.name(), Type::exists(alpha_hat));
    return apply_fn(s, g.extended(Entry::unsolved(alpha_hat)), e, body);
  }

  if (a.is_exists() && g.is_unsolved(a.name())) {
    fire(s, "^App", judgment(), g);
    std::string dom = s.fresh_evar();
    std::string cod = s.fresh_evar();
    Type articulated = Type::arrow(Type::exists(dom), Type::exists(cod));
    s.record_solution(a.name(), articulated);
    Context articulated_ctx =
        replace(g, EntryKey::existential(a.name()),
                {Entry::unsolved(cod), Entry::unsolved(dom), Entry::solved(a.name(), articulated)});
    Context out = check(s, articulated_ctx, e, Type::exists(dom));
    return {Type::exists(cod), out};
  }

  if (a.is_arrow()) {
    fire(s, "->App", judgment(), g);
    Context out = check(s, g, e, a.domain());
    return {a.codomain(), out};
  }

  throw TypeError(TypeError::Kind::NotAFunction, "cannot apply a value of type " + print_type(a));
}

}  // namespace

Context check(Session& s, const Context& g, const Term& e, const Type& a) {
  Session::FrameGuard frame(s, Session::FrameKind::Check, measure(s, e, 1, g, &a), "check");
  Context out = with_span(e, [&] { return check_rules(s, g, e, a); });
  check_extension(s, "check", e, g, out);
  return out;
}

Synthesized synth(Session& s, const Context& g, const Term& e) {
  Session::FrameGuard frame(s, Session::FrameKind::Synth, measure(s, e, 0, g, nullptr), "synth");
  Synthesized out = with_span(e, [&] { return synth_rules(s, g, e); });
  check_extension(s, "synth", e, g, out.context);
  return out;
}

Synthesized apply_fn(Session& s, const Context& g, const Term& e, const Type& a) {
  Session::FrameGuard frame(s, Session::FrameKind::Apply, measure(s, e, 2, g, &a), "apply");
  Synthesized out = with_span(e, [&] { return apply_rules(s, g, e, a); });
  check_extension(s, "apply", e, g, out.context);
  return out;
}

}  // namespace bidir
