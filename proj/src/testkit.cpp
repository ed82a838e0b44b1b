#include "bidir/testkit.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

#include "bidir/instantiate.hpp"
#include "bidir/subtype.hpp"
#include "bidir/surface.hpp"
#include "bidir/typecheck.hpp"

namespace bidir::testkit {

namespace {

constexpr std::array<const char*, 8> kTyvarNames = {"a", "b", "c", "d", "p", "q", "r", "s"};
constexpr std::array<const char*, 4> kBinderNames = {"x", "y", "z", "w"};
constexpr std::array<const char*, 4> kFunctionNames = {"f", "g", "h", "k"};

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::size_t below(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

std::size_t between(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
  return xs[below(rng, xs.size())];
}

std::string fresh_tyvar(Rng& rng, const std::vector<std::string>& taken) {
  std::vector<std::string> free;
  for (const char* n : kTyvarNames) {
    if (std::find(taken.begin(), taken.end(), n) == taken.end()) free.emplace_back(n);
  }
  if (!free.empty()) return pick(rng, free);
  return fresh_variant("t", NameSet(taken.begin(), taken.end()));
}

Type gen_leaf(Rng& rng, const std::vector<std::string>& tyvars, const std::vector<std::string>& evars) {
  std::size_t i = below(rng, 1 + tyvars.size() + evars.size());
  if (i == 0) return Type::unit();
  if (i <= tyvars.size()) return Type::var(tyvars[i - 1]);
  return Type::exists(evars[i - 1 - tyvars.size()]);
}

Type gen_type_impl(Rng& rng, std::size_t size, std::size_t quantifiers, std::vector<std::string>& tyvars,
                   const std::vector<std::string>& evars) {
  if (size >= 3 && quantifiers > 0 && chance(rng, 0.35)) {
    std::string binder = fresh_tyvar(rng, tyvars);
    tyvars.push_back(binder);
    Type body = gen_type_impl(rng, size - 1, quantifiers - 1, tyvars, evars);
    tyvars.pop_back();
    return Type::forall(binder, body);
  }
  if (size >= 3 && chance(rng, 0.8)) {
    std::size_t left = between(rng, 1, size - 2);
    std::size_t left_q = between(rng, 0, quantifiers);
    Type dom = gen_type_impl(rng, left, left_q, tyvars, evars);
    Type cod = gen_type_impl(rng, size - 1 - left, quantifiers - left_q, tyvars, evars);
    return Type::arrow(dom, cod);
  }
  return gen_leaf(rng, tyvars, evars);
}

bool higher_rank_impl(const Type& a, bool under_arrow) {
  switch (a.kind()) {
    case Type::Kind::Forall:
      return under_arrow || higher_rank_impl(a.body(), under_arrow);
    case Type::Kind::Arrow:
      return higher_rank_impl(a.domain(), true) || higher_rank_impl(a.codomain(), true);
    default:
      return false;
  }
}

bool closed(const Type& a) { return free_tyvars(a).empty() && !has_evars(a); }

}  // namespace

std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + index + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// ---- types -----------------------------------------------------------------

Type gen_type(Rng& rng, std::size_t max_size, std::size_t max_quantifiers, const TypeScope& scope) {
  std::vector<std::string> tyvars = scope.tyvars;
  return gen_type_impl(rng, std::max<std::size_t>(max_size, 1), max_quantifiers, tyvars, scope.evars);
}

Type gen_type(std::uint64_t seed, std::size_t max_size, std::size_t max_quantifiers, const DeclContext& scope) {
  Rng rng(seed);
  return gen_type(rng, max_size, max_quantifiers, scope_of(scope.context()));
}

Type gen_monotype(Rng& rng, std::size_t max_size, const TypeScope& scope) {
  return gen_type(rng, max_size, 0, scope);
}

bool is_higher_rank(const Type& a) { return higher_rank_impl(a, false); }

std::vector<Type> shrink_type(const Type& a) {
  std::vector<Type> out;
  if (!a.is_unit() && !a.is_var()) out.push_back(Type::unit());
  switch (a.kind()) {
    case Type::Kind::Arrow:
      out.push_back(a.domain());
      out.push_back(a.codomain());
      for (const Type& d : shrink_type(a.domain())) out.push_back(Type::arrow(d, a.codomain()));
      for (const Type& c : shrink_type(a.codomain())) out.push_back(Type::arrow(a.domain(), c));
      break;
    case Type::Kind::Forall:
      out.push_back(subst_tyvar(a.body(), a.name(), Type::unit()));
      for (const Type& b : shrink_type(a.body())) out.push_back(Type::forall(a.name(), b));
      break;
    default:
      break;
  }
  return out;
}

// ---- terms -----------------------------------------------------------------

AnnotationSource default_annotations(const TermGenOptions& options) {
  return [options](Rng& rng) { return gen_type(rng, options.annotation_size, options.annotation_quantifiers); };
}

namespace {

Term gen_term_impl(Rng& rng, std::size_t size, std::vector<std::string>& vars, const TermGenOptions& options,
                   const AnnotationSource& annotations) {
  auto leaf = [&] {
    if (!vars.empty() && chance(rng, 0.6)) return Term::var(pick(rng, vars));
    return Term::unit();
  };
  if (size <= 1) return leaf();
  double roll = std::uniform_real_distribution<double>(0, 1)(rng);
  if (roll < 0.3) {
    std::string x = kBinderNames[below(rng, kBinderNames.size())];
    vars.push_back(x);
    Term body = gen_term_impl(rng, size - 1, vars, options, annotations);
    vars.pop_back();
    return Term::lam(x, body);
  }
  if (roll < 0.7 && size >= 3) {
    std::size_t head_size = between(rng, 1, size - 2);
    Term head = Term::unit();
    // The annotation node of a redex counts against the head's budget.
    std::size_t annotate = chance(rng, options.annotate_redex) ? 1 : 0;
    if (chance(rng, 0.5) && head_size >= 2 + annotate) {
      std::string x = kBinderNames[below(rng, kBinderNames.size())];
      vars.push_back(x);
      head = Term::lam(x, gen_term_impl(rng, head_size - 1 - annotate, vars, options, annotations));
      vars.pop_back();
    } else {
      head = gen_term_impl(rng, head_size, vars, options, annotations);
    }
    if (head.is_lam() && annotate == 1 && term_size(head) < head_size) head = Term::anno(head, annotations(rng));
    Term arg = gen_term_impl(rng, size - 1 - head_size, vars, options, annotations);
    return Term::app(head, arg);
  }
  if (roll < 0.85) {
    return Term::anno(gen_term_impl(rng, size - 1, vars, options, annotations), annotations(rng));
  }
  return leaf();
}

// Type-directed construction. Scope mirrors a DeclContext.
struct TypedGen {
  Rng& rng;
  const TermGenOptions& options;
  std::vector<std::string> tyvars;
  std::vector<std::pair<std::string, Type>> vars;

  std::vector<std::string> var_names() const {
    std::vector<std::string> out;
    for (const auto& [x, _] : vars) out.push_back(x);
    return out;
  }

  TypeScope scope() const { return {tyvars, {}}; }

  Type small_closed_type() { return gen_type(rng, 4, 1); }

  // A monotype to instantiate a quantifier with.
  Type guess() {
    if (chance(rng, 0.5)) return Type::unit();
    return gen_monotype(rng, 3, scope());
  }

  Term bind(const std::string& x, const Type& a, const Type& goal, std::size_t size) {
    vars.emplace_back(x, a);
    Term body = gen(goal, size);
    vars.pop_back();
    return Term::lam(x, body);
  }

  std::string binder() { return kBinderNames[below(rng, kBinderNames.size())]; }

  Term noise(std::size_t size) {
    std::vector<std::string> names = var_names();
    return gen_term_impl(rng, size, names, options, default_annotations(options));
  }

  // f e1 ... en with f from the scope, arguments built for the instantiated domains.
  std::optional<Term> eliminate(const Type& goal, std::size_t size) {
    if (vars.empty()) return std::nullopt;
    const auto& [f, fa] = vars[below(rng, vars.size())];
    Term head = Term::var(f);
    Type a = fa;
    std::size_t budget = size;
    for (int args = 0; args < 3; ++args) {
      while (a.is_forall()) a = subst_tyvar(a.body(), a.name(), guess());
      if (alpha_equiv(a, goal) || !a.is_arrow() || budget < 2) break;
      std::size_t arg_size = std::max<std::size_t>(1, budget / 2);
      head = Term::app(head, gen(a.domain(), arg_size));
      budget -= arg_size;
      a = a.codomain();
    }
    return head;
  }

  Term redex(const Type& goal, std::size_t size) {
    Type b = chance(rng, 0.5) ? small_closed_type() : gen_monotype(rng, 3, scope());
    std::size_t body_size = std::max<std::size_t>(1, (size - 1) / 2);
    std::string y = binder();
    Term head = bind(y, b, goal, body_size);
    Type ascription = Type::arrow(b, goal);
    if (closed(ascription) && chance(rng, options.annotate_redex)) head = Term::anno(head, ascription);
    return Term::app(head, gen(b, std::max<std::size_t>(1, size - 1 - body_size)));
  }

  Term gen(const Type& goal, std::size_t size) {
    if (goal.is_forall()) {
      std::string alpha = fresh_variant(goal.name(), NameSet(tyvars.begin(), tyvars.end()));
      Type body = alpha == goal.name() ? goal.body() : subst_tyvar(goal.body(), goal.name(), Type::var(alpha));
      tyvars.push_back(alpha);
      Term out = gen(body, size);
      tyvars.pop_back();
      return out;
    }
    if (size <= 1) {
      std::vector<std::string> fits;
      for (const auto& [x, a] : vars) {
        if (alpha_equiv(a, goal) || a.is_forall()) fits.push_back(x);
      }
      if (!fits.empty() && (!goal.is_unit() || chance(rng, 0.3))) return Term::var(pick(rng, fits));
      return Term::unit();
    }
    double roll = std::uniform_real_distribution<double>(0, 1)(rng);
    if (roll < 0.08) return noise(size);
    if (roll < 0.45) {
      if (goal.is_arrow()) return bind(binder(), goal.domain(), goal.codomain(), size - 1);
      if (goal.is_unit() && chance(rng, 0.5)) return Term::unit();
    }
    if (roll < 0.65) {
      if (auto e = eliminate(goal, size)) return *e;
    }
    if (roll < 0.8 && closed(goal)) return Term::anno(gen(goal, size - 1), goal);
    if (size >= 4) return redex(goal, size);
    if (goal.is_arrow()) return bind(binder(), goal.domain(), goal.codomain(), size - 1);
    return gen(goal, 1);
  }
};

void count_redexes_impl(const Term& e, RedexCount& out) {
  switch (e.kind()) {
    case Term::Kind::Lam:
      count_redexes_impl(e.body(), out);
      break;
    case Term::Kind::Anno:
      count_redexes_impl(e.subject(), out);
      break;
    case Term::Kind::App:
      if (e.fn().is_lam()) ++out.redexes;
      if (e.fn().is_anno() && e.fn().subject().is_lam()) {
        ++out.redexes;
        ++out.annotated;
      }
      count_redexes_impl(e.fn(), out);
      count_redexes_impl(e.arg(), out);
      break;
    default:
      break;
  }
}

}  // namespace

Term gen_term(Rng& rng, const TermGenOptions& options, const std::vector<std::string>& vars,
              const AnnotationSource& annotations) {
  std::vector<std::string> scope = vars;
  return gen_term_impl(rng, std::max<std::size_t>(options.max_size, 1), scope, options, annotations);
}

Term gen_term(std::uint64_t seed, std::size_t max_size, const AnnotationSource& annotations) {
  Rng rng(seed);
  TermGenOptions options;
  options.max_size = max_size;
  return gen_term(rng, options, {}, annotations);
}

Term gen_typed_term(Rng& rng, const DeclContext& psi, const Type& goal, const TermGenOptions& options) {
  TypedGen g{rng, options, {}, {}};
  for (const Entry& entry : psi.entries()) {
    if (entry.kind == Entry::Kind::Universal) g.tyvars.push_back(entry.name);
    if (entry.kind == Entry::Kind::TermVar) g.vars.emplace_back(entry.name, *entry.type);
  }
  return g.gen(goal, std::max<std::size_t>(options.max_size, 1));
}

RedexCount count_redexes(const Term& e) {
  RedexCount out;
  count_redexes_impl(e, out);
  return out;
}

std::vector<Term> shrink_term(const Term& e) {
  std::vector<Term> out;
  if (!e.is_unit() && !e.is_var()) out.push_back(Term::unit());
  switch (e.kind()) {
    case Term::Kind::Lam:
      if (!free_term_vars(e.body()).contains(e.name())) out.push_back(e.body());
      for (const Term& b : shrink_term(e.body())) out.push_back(Term::lam(e.name(), b));
      break;
    case Term::Kind::App:
      out.push_back(e.fn());
      out.push_back(e.arg());
      for (const Term& f : shrink_term(e.fn())) out.push_back(Term::app(f, e.arg()));
      for (const Term& a : shrink_term(e.arg())) out.push_back(Term::app(e.fn(), a));
      break;
    case Term::Kind::Anno:
      out.push_back(e.subject());
      for (const Term& s : shrink_term(e.subject())) out.push_back(Term::anno(s, e.ascribed()));
      for (const Type& a : shrink_type(e.ascribed())) out.push_back(Term::anno(e.subject(), a));
      break;
    default:
      break;
  }
  return out;
}

Term minimize_term(Term e, const std::function<bool(const Term&)>& still_fails) {
  for (bool progress = true; progress;) {
    progress = false;
    for (const Term& candidate : shrink_term(e)) {
      if (still_fails(candidate)) {
        e = candidate;
        progress = true;
        break;
      }
    }
  }
  return e;
}

Type minimize_type(Type a, const std::function<bool(const Type&)>& still_fails) {
  for (bool progress = true; progress;) {
    progress = false;
    for (const Type& candidate : shrink_type(a)) {
      if (still_fails(candidate)) {
        a = candidate;
        progress = true;
        break;
      }
    }
  }
  return a;
}

// ---- contexts --------------------------------------------------------------

Context gen_context(Rng& rng, const ContextGenOptions& options) {
  std::vector<Entry> entries;
  std::vector<std::string> tyvars;
  std::vector<std::string> evars;
  std::size_t universals = options.universals;
  std::size_t term_vars = options.term_vars;
  std::size_t existentials = options.evars;
  std::size_t next_evar = 0;
  std::size_t next_fn = 0;
  while (universals + term_vars + existentials > 0) {
    std::size_t i = below(rng, universals + term_vars + existentials);
    if (i < universals) {
      --universals;
      std::string a = fresh_tyvar(rng, tyvars);
      tyvars.push_back(a);
      entries.push_back(Entry::universal(a));
    } else if (i < universals + term_vars) {
      --term_vars;
      std::string f = next_fn < kFunctionNames.size() ? kFunctionNames[next_fn]
                                                      : "f" + std::to_string(next_fn);
      ++next_fn;
      entries.push_back(Entry::term_var(f, gen_type(rng, options.type_size, options.quantifiers, {tyvars, evars})));
    } else {
      --existentials;
      std::string e = "e" + std::to_string(++next_evar);
      if (chance(rng, 0.15)) entries.push_back(Entry::marker(e));
      if (chance(rng, 0.4)) {
        entries.push_back(Entry::solved(e, gen_monotype(rng, 3, {tyvars, evars})));
      } else {
        entries.push_back(Entry::unsolved(e));
      }
      evars.push_back(e);
    }
  }
  return Context(std::move(entries));
}

DeclContext to_decl(const Context& g) { return DeclContext(g); }

TypeScope scope_of(const Context& g) {
  TypeScope out;
  for (const Entry& entry : g.entries()) {
    if (entry.kind == Entry::Kind::Universal) out.tyvars.push_back(entry.name);
    if (entry.is_evar()) out.evars.push_back(entry.name);
  }
  return out;
}

// ---- witnesses -------------------------------------------------------------

Witness witness_for(const Session& s, const Context& delta) {
  CompleteContext omega = fill(delta);
  std::map<std::string, Type> solution;
  for (const Entry& entry : omega.context().entries()) {
    if (entry.kind == Entry::Kind::Solved) solution.emplace(entry.name, *entry.type);
  }
  for (const auto& [evar, t] : s.solutions()) solution.emplace(evar, t);

  std::map<std::string, Type> resolved;
  std::function<Type(const Type&, std::size_t)> resolve = [&](const Type& t, std::size_t fuel) -> Type {
    Type out = t;
    for (const std::string& evar : free_evars(t)) {
      Type r = Type::unit();
      if (auto done = resolved.find(evar); done != resolved.end()) {
        r = done->second;
      } else if (auto found = solution.find(evar); found != solution.end() && fuel > 0) {
        r = resolve(found->second, fuel - 1);
        resolved.emplace(evar, r);
      }
      out = subst_evar(out, evar, r);
    }
    return out;
  };

  std::vector<Type> seeds;
  for (const auto& [evar, t] : solution) seeds.push_back(resolve(t, 64));
  return {omega, seeds};
}

// ---- differential harness --------------------------------------------------

const char* to_string(CaseKind kind) {
  switch (kind) {
    case CaseKind::TypingClosed: return "typing";
    case CaseKind::SubtypeClosed: return "subtype";
    case CaseKind::TypingOpen: return "typing-evars";
    case CaseKind::SubtypeOpen: return "subtype-evars";
    case CaseKind::Instantiation: return "instantiation";
  }
  return "?";
}

std::string DiffReport::summary(std::uint64_t seed) const {
  std::ostringstream out;
  out << "summary cases=" << cases << " seed=" << seed << " disagreements=" << disagreements()
      << " violations=" << violations << " cap_hits=" << cap_hits << " soundness_checked=" << algorithm_accepted
      << " completeness_checked=" << oracle_accepted;
  return out.str();
}

namespace {

// The algorithmic side of one judgment.
struct Outcome {
  bool accepted = false;
  std::optional<Context> delta;
  std::vector<Violation> violations;
  std::string error;
  std::vector<Type> seeds;
  std::optional<CompleteContext> omega;
};

Options options_for(const DiffConfig& config) {
  Options o;
  o.mode = config.mode;
  o.skip_forall_r_truncation = config.skip_forall_r_truncation;
  return o;
}

template <typename Run>
Outcome run_algorithm(const DiffConfig& config, Run&& run) {
  Session s(options_for(config));
  Outcome out;
  try {
    out.delta = run(s);
    out.accepted = true;
  } catch (const TypeError& e) {
    out.error = std::string(to_string(e.kind())) + ": " + e.what();
  } catch (const ContextError& e) {
    s.violation("context-error", e.what());
  }
  out.violations = s.violations();
  if (out.accepted) {
    try {
      Witness w = witness_for(s, *out.delta);
      out.seeds = std::move(w.seeds);
      out.omega = std::move(w.omega);
    } catch (const ContextError& e) {
      out.violations.push_back({"witness", e.what()});
      out.accepted = false;
    }
  }
  return out;
}

// Declarative answer; nullopt when the search was cut short.
struct OracleAnswer {
  std::optional<bool> accepted;
  bool cap_hit = false;
};

template <typename Ask>
OracleAnswer ask_oracle(const DiffConfig& config, std::vector<Type> seeds, Ask&& ask) {
  OracleLimits limits;
  limits.step_limit = config.oracle_step_limit;
  Oracle oracle(Universe{config.depth, std::move(seeds)}, config.mode, limits);
  bool ok = ask(oracle);
  OracleAnswer out;
  out.cap_hit = oracle.cap_hit();
  if (!oracle.exhausted() && (ok || !oracle.cap_hit())) out.accepted = ok;
  return out;
}

// One generated judgment in a form every case kind can share.
struct Judgment {
  CaseKind kind = CaseKind::TypingClosed;
  Context g;
  Term e = Term::unit();
  Type a = Type::unit();
  Type b = Type::unit();
  std::string evar;
  bool left = true;

  std::string describe() const {
    std::string ctx = print_context(g);
    switch (kind) {
      case CaseKind::TypingClosed:
      case CaseKind::TypingOpen:
        return ctx + " |- " + print_term(e) + " <= " + print_type(a);
      case CaseKind::SubtypeClosed:
      case CaseKind::SubtypeOpen:
        return ctx + " |- " + print_type(a) + " <: " + print_type(b);
      case CaseKind::Instantiation:
        return ctx + " |- " + (left ? "?" + evar + " :=< " + print_type(a) : print_type(a) + " =<: ?" + evar);
    }
    return ctx;
  }

  Outcome algorithm(const DiffConfig& config) const {
    return run_algorithm(config, [&](Session& s) -> Context {
      switch (kind) {
        case CaseKind::TypingClosed:
        case CaseKind::TypingOpen:
          return check(s, g, e, a);
        case CaseKind::SubtypeClosed:
        case CaseKind::SubtypeOpen:
          return subtype(s, g, apply_ctx(g, a), apply_ctx(g, b));
        case CaseKind::Instantiation:
          return left ? inst_left(s, g, evar, a) : inst_right(s, g, a, evar);
      }
      return g;
    });
  }

  // The declarative judgment [Ω]Δ |- ... for a complete Ω.
  OracleAnswer declarative(const DiffConfig& config, const Context& delta, const CompleteContext& omega,
                           std::vector<Type> seeds) const {
    DeclContext psi = complete_apply(omega, delta);
    const Context& w = omega.context();
    return ask_oracle(config, std::move(seeds), [&](Oracle& o) {
      switch (kind) {
        case CaseKind::TypingClosed:
        case CaseKind::TypingOpen:
          return o.check(psi, e, apply_ctx(w, a));
        case CaseKind::SubtypeClosed:
        case CaseKind::SubtypeOpen:
          return o.subtype(psi, apply_ctx(w, a), apply_ctx(w, b));
        case CaseKind::Instantiation: {
          Type hat = apply_ctx(w, Type::exists(evar));
          Type rhs = apply_ctx(w, a);
          return left ? o.subtype(psi, hat, rhs) : o.subtype(psi, rhs, hat);
        }
      }
      return false;
    });
  }

  bool closed_kind() const { return kind == CaseKind::TypingClosed || kind == CaseKind::SubtypeClosed; }
};

TermGenOptions term_options(const DiffConfig& config) {
  TermGenOptions o;
  o.max_size = config.term_size;
  return o;
}

// Subtyping pairs that hold reasonably often: B against a generalization of
// itself, or the reverse, or two unrelated types.
std::pair<Type, Type> gen_subtype_pair(Rng& rng, const TypeScope& scope) {
  Type b = gen_type(rng, 6, 2, scope);
  double roll = std::uniform_real_distribution<double>(0, 1)(rng);
  if (roll < 0.35) {
    std::vector<std::string> taken = scope.tyvars;
    for (const std::string& v : free_tyvars(b)) taken.push_back(v);
    std::string alpha = fresh_tyvar(rng, taken);
    // Replace unit leaves by alpha; the result instantiates back to b.
    std::function<Type(const Type&)> generalize = [&](const Type& t) -> Type {
      switch (t.kind()) {
        case Type::Kind::Unit: return chance(rng, 0.7) ? Type::var(alpha) : t;
        case Type::Kind::Arrow: return Type::arrow(generalize(t.domain()), generalize(t.codomain()));
        case Type::Kind::Forall: return t.name() == alpha ? t : Type::forall(t.name(), generalize(t.body()));
        default: return t;
      }
    };
    Type a = Type::forall(alpha, generalize(b));
    return chance(rng, 0.7) ? std::pair{a, b} : std::pair{b, a};
  }
  if (roll < 0.5) return {b, b};
  return {gen_type(rng, 6, 2, scope), b};
}

Judgment gen_judgment(Rng& rng, const DiffConfig& config, CaseKind kind) {
  Judgment j;
  j.kind = kind;
  ContextGenOptions copts;
  copts.universals = between(rng, 0, 2);
  copts.term_vars = between(rng, 0, 3);
  bool open = kind == CaseKind::TypingOpen || kind == CaseKind::SubtypeOpen || kind == CaseKind::Instantiation;
  if (open) copts.evars = between(rng, 1, 3);
  if (kind != CaseKind::TypingClosed && kind != CaseKind::TypingOpen) copts.term_vars = 0;
  j.g = gen_context(rng, copts);
  TypeScope scope = scope_of(j.g);
  TermGenOptions topts = term_options(config);

  switch (kind) {
    case CaseKind::TypingClosed:
    case CaseKind::TypingOpen: {
      j.a = gen_type(rng, 6, 2, scope);
      CompleteContext guess = fill(j.g);
      DeclContext psi = complete_apply(guess, j.g);
      if (chance(rng, 0.7)) {
        j.e = gen_typed_term(rng, psi, apply_ctx(guess.context(), j.a), topts);
      } else {
        std::vector<std::string> names;
        for (const Entry& entry : j.g.entries()) {
          if (entry.kind == Entry::Kind::TermVar) names.push_back(entry.name);
        }
        j.e = gen_term(rng, topts, names, default_annotations(topts));
      }
      break;
    }
    case CaseKind::SubtypeClosed:
    case CaseKind::SubtypeOpen: {
      auto [a, b] = gen_subtype_pair(rng, scope);
      j.a = apply_ctx(j.g, a);
      j.b = apply_ctx(j.g, b);
      break;
    }
    case CaseKind::Instantiation: {
      std::vector<std::string> unsolved;
      for (const Entry& entry : j.g.entries()) {
        if (entry.kind == Entry::Kind::Unsolved) unsolved.push_back(entry.name);
      }
      if (unsolved.empty()) {
        j.g = j.g.extended(Entry::unsolved("e9"));
        unsolved.push_back("e9");
        scope.evars.push_back("e9");
      }
      j.evar = pick(rng, unsolved);
      j.left = chance(rng, 0.5);
      j.a = Type::unit();
      for (int attempt = 0; attempt < 8; ++attempt) {
        Type a = apply_ctx(j.g, gen_type(rng, 5, 2, scope));
        if (!occurs_evar(j.evar, a)) {
          j.a = a;
          break;
        }
      }
      break;
    }
  }
  return j;
}

CaseKind pick_kind(Rng& rng, bool closed_only) {
  double roll = std::uniform_real_distribution<double>(0, 1)(rng);
  if (closed_only) return roll < 0.7 ? CaseKind::TypingClosed : CaseKind::SubtypeClosed;
  if (roll < 0.45) return CaseKind::TypingClosed;
  if (roll < 0.65) return CaseKind::SubtypeClosed;
  if (roll < 0.8) return CaseKind::TypingOpen;
  if (roll < 0.9) return CaseKind::SubtypeOpen;
  return CaseKind::Instantiation;
}

// Does the soundness obligation fail for this judgment?
bool unsound(const DiffConfig& config, const Judgment& j) {
  Outcome alg = j.algorithm(config);
  if (!alg.accepted) return false;
  OracleAnswer ans = j.declarative(config, *alg.delta, *alg.omega, alg.seeds);
  return ans.accepted.has_value() && !*ans.accepted;
}

// Does the completeness obligation fail for this (evar-free) judgment?
bool incomplete(const DiffConfig& config, const Judgment& j) {
  OracleAnswer ans = j.declarative(config, j.g, fill(j.g), {});
  if (!ans.accepted.value_or(false)) return false;
  return !j.algorithm(config).accepted;
}

Judgment shrink(const DiffConfig& config, Judgment j, const std::function<bool(const DiffConfig&, const Judgment&)>& fails) {
  if (j.kind == CaseKind::TypingClosed || j.kind == CaseKind::TypingOpen) {
    j.e = minimize_term(j.e, [&](const Term& e) {
      Judgment k = j;
      k.e = e;
      return fails(config, k);
    });
  }
  if (j.closed_kind()) {
    auto scoped = [&](const Type& t) {
      for (const std::string& v : free_tyvars(t)) {
        if (!j.g.has_universal(v)) return false;
      }
      return true;
    };
    j.a = minimize_type(j.a, [&](const Type& t) {
      Judgment k = j;
      k.a = t;
      return scoped(t) && fails(config, k);
    });
    if (j.kind == CaseKind::SubtypeClosed) {
      j.b = minimize_type(j.b, [&](const Type& t) {
        Judgment k = j;
        k.b = t;
        return scoped(t) && fails(config, k);
      });
    }
  }
  return j;
}

void evaluate(const DiffConfig& config, std::uint64_t index, const Judgment& j, DiffReport& report) {
  ++report.cases;
  std::string where = "case=" + std::to_string(index) + " seed=" + std::to_string(config.seed) +
                      " kind=" + to_string(j.kind);
  Outcome alg = j.algorithm(config);
  for (const Violation& v : alg.violations) {
    ++report.violations;
    report.lines.push_back("VIOLATION " + where + " " + v.invariant + ": " + v.detail + "  in  " + j.describe());
  }

  if (alg.accepted) {
    OracleAnswer ans = j.declarative(config, *alg.delta, *alg.omega, alg.seeds);
    if (ans.cap_hit || !ans.accepted) ++report.cap_hits;
    if (ans.accepted) {
      ++report.algorithm_accepted;
      if (!*ans.accepted) {
        ++report.soundness_failures;
        Judgment small = shrink(config, j, unsound);
        report.lines.push_back("FAIL soundness " + where + ": algorithm accepts, oracle rejects: " + j.describe() +
                               "  shrunk: " + small.describe());
      }
    }
  }

  if (j.closed_kind()) {
    OracleAnswer ans = j.declarative(config, j.g, fill(j.g), {});
    if (ans.cap_hit || !ans.accepted) ++report.cap_hits;
    if (ans.accepted.value_or(false)) {
      ++report.oracle_accepted;
      if (!alg.accepted) {
        ++report.completeness_failures;
        Judgment small = shrink(config, j, incomplete);
        report.lines.push_back("FAIL completeness " + where + ": oracle accepts, algorithm rejects (" + alg.error +
                               "): " + j.describe() + "  shrunk: " + small.describe());
      }
    }
  }
}

}  // namespace

void run_case(const DiffConfig& config, std::uint64_t index, DiffReport& report) {
  Rng rng(case_seed(config.seed, index));
  CaseKind kind = pick_kind(rng, false);
  evaluate(config, index, gen_judgment(rng, config, kind), report);
}

DiffReport differential_run(const DiffConfig& config) {
  DiffReport report;
  for (std::uint64_t i = 0; i < config.cases; ++i) run_case(config, i, report);
  return report;
}

DiffReport completeness_run(const DiffConfig& config, std::size_t target, std::size_t max_attempts) {
  DiffReport report;
  for (std::uint64_t i = 0; i < max_attempts && report.oracle_accepted < target; ++i) {
    Rng rng(case_seed(config.seed, i));
    CaseKind kind = pick_kind(rng, true);
    evaluate(config, i, gen_judgment(rng, config, kind), report);
  }
  return report;
}

// ---- property suites -------------------------------------------------------

namespace {

struct Attempt {
  bool accepted = false;
  std::vector<Violation> violations;
};

Attempt try_check(const Context& g, const Term& e, const Type& a) {
  Session s;
  Attempt out;
  try {
    check(s, g, e, a);
    out.accepted = true;
  } catch (const TypeError&) {
  }
  out.violations = s.violations();
  return out;
}

template <typename Make>
SuiteReport run_suite(std::size_t instances, std::uint64_t seed, const char* name, Make&& make) {
  SuiteReport report;
  std::size_t max_attempts = instances * 200 + 100;
  for (std::uint64_t i = 0; report.instances < instances && i < max_attempts; ++i) {
    ++report.attempts;
    Rng rng(case_seed(seed, i));
    auto inst = make(rng);
    if (!inst) continue;
    auto& [g, premise, premise_type, g_after, conclusion, conclusion_type] = *inst;
    Attempt before = try_check(g, premise, premise_type);
    report.violations += before.violations.size();
    if (!before.accepted) continue;
    ++report.instances;
    Attempt after = try_check(g_after, conclusion, conclusion_type);
    report.violations += after.violations.size();
    for (const Violation& v : after.violations) report.lines.push_back(std::string("VIOLATION ") + v.invariant + ": " + v.detail);
    if (!after.accepted) {
      ++report.failures;
      OracleLimits limits;
      limits.step_limit = 2'000'000;
      Universe u{2, {}};
      Session replay;
      try {
        u.seeds = witness_for(replay, check(replay, g, premise, premise_type)).seeds;
      } catch (const TypeError&) {
      }
      Oracle oracle(u, Mode::DefaultInference, limits);
      bool premise_holds = oracle.check(to_decl(g), premise, premise_type) && !oracle.exhausted();
      bool conclusion_fails = !oracle.check(to_decl(g_after), conclusion, conclusion_type) && !oracle.exhausted();
      bool confirmed = premise_holds && conclusion_fails;
      report.oracle_confirmed += confirmed;
      report.lines.push_back(std::string("FAIL ") + name + " attempt=" + std::to_string(i) + ": " +
                             print_context(g) + " |- " + print_term(premise) + " <= " + print_type(premise_type) +
                             " holds but " + print_term(conclusion) + " <= " + print_type(conclusion_type) +
                             " does not" + (confirmed ? " (oracle agrees)" : ""));
    }
  }
  return report;
}

// Premise judgment, then the conclusion that must follow from it.
using Instance = std::tuple<Context, Term, Type, Context, Term, Type>;

Context closed_context(Rng& rng) {
  ContextGenOptions copts;
  copts.universals = between(rng, 0, 2);
  copts.term_vars = between(rng, 0, 3);
  return gen_context(rng, copts);
}

std::string fresh_term_var(const std::string& base, const Context& g, const Term& e) {
  NameSet taken = term_var_names(e);
  for (const std::string& n : g.term_names()) taken.insert(n);
  return fresh_variant(base, taken);
}

Type arrow_goal(Rng& rng, const TypeScope& scope) {
  Type a = gen_type(rng, 6, 2, scope);
  Type body = a;
  while (body.is_forall()) body = body.body();
  if (body.is_arrow()) return a;
  return Type::arrow(gen_type(rng, 3, 1, scope), a);
}

}  // namespace

SuiteReport eta_suite(std::size_t instances, std::uint64_t seed) {
  return run_suite(instances, seed, "eta", [](Rng& rng) -> std::optional<Instance> {
    Context g = closed_context(rng);
    Type a = arrow_goal(rng, scope_of(g));
    TermGenOptions topts;
    topts.max_size = 6;
    Term e = gen_typed_term(rng, to_decl(g), a, topts);
    if (chance(rng, 0.5) && e.is_lam()) e = Term::anno(e, a);
    if (!closed(a) && e.is_anno()) return std::nullopt;
    std::string x = fresh_term_var("x", g, e);
    Term eta = Term::lam(x, Term::app(e, Term::var(x)));
    return Instance{g, eta, a, g, e, a};
  });
}

SuiteReport annotation_removal_suite(std::size_t instances, std::uint64_t seed) {
  return run_suite(instances, seed, "annotation-removal", [](Rng& rng) -> std::optional<Instance> {
    Context g = closed_context(rng);
    TypeScope scope = scope_of(g);
    TermGenOptions topts;
    topts.max_size = 6;
    switch (below(rng, 3)) {
      case 0: {  // ((\x. e) : A) <= C
        Type a = gen_type(rng, 6, 2);
        Type body = a;
        while (body.is_forall()) body = body.body();
        if (!body.is_arrow()) a = Type::arrow(gen_type(rng, 3, 1), a);
        Term lam = gen_typed_term(rng, to_decl(g), a, topts);
        if (!lam.is_lam()) return std::nullopt;
        Type c = chance(rng, 0.5) ? a : gen_type(rng, 6, 2, scope);
        return Instance{g, Term::anno(lam, a), c, g, lam, c};
      }
      case 1: {  // (() : A) <= C
        Type a = chance(rng, 0.6) ? Type::unit() : gen_type(rng, 3, 1);
        Type c = chance(rng, 0.5) ? Type::unit() : gen_type(rng, 4, 2, scope);
        return Instance{g, Term::anno(Term::unit(), a), c, g, Term::unit(), c};
      }
      default: {  // e1 (e2 : A) <= C
        Type a = gen_type(rng, 5, 2);
        Type c = gen_type(rng, 5, 2, scope);
        Term e2 = gen_typed_term(rng, to_decl(g), a, topts);
        Term e1 = Term::unit();
        if (chance(rng, 0.5)) {
          std::string f = fresh_term_var("f", g, e2);
          g = g.extended(Entry::term_var(f, Type::arrow(a, c)));
          e1 = Term::var(f);
        } else {
          e1 = gen_typed_term(rng, to_decl(g), Type::arrow(a, c), topts);
        }
        return Instance{g, Term::app(e1, Term::anno(e2, a)), c, g, Term::app(e1, e2), c};
      }
    }
  });
}

SuiteReport substitution_suite(std::size_t instances, std::uint64_t seed) {
  return run_suite(instances, seed, "substitution", [](Rng& rng) -> std::optional<Instance> {
    Context g = closed_context(rng);
    TypeScope scope = scope_of(g);
    TermGenOptions topts;
    topts.max_size = 5;
    Type b = gen_type(rng, 5, 2);
    Term e = Term::anno(gen_typed_term(rng, to_decl(g), b, topts), b);
    if (chance(rng, 0.3)) {
      std::vector<std::string> names;
      for (const Entry& entry : g.entries()) {
        if (entry.kind == Entry::Kind::TermVar) names.push_back(entry.name);
      }
      if (!names.empty()) e = Term::var(pick(rng, names));
    }
    Session s;
    Type a = Type::unit();
    try {
      Synthesized out = synth(s, g, e);
      a = apply_ctx(fill(out.context).context(), out.type);
    } catch (const TypeError&) {
      return std::nullopt;
    }
    Type c = gen_type(rng, 5, 2, scope);
    std::string x = fresh_term_var("v", g, e);
    Context gx = g.extended(Entry::term_var(x, a));
    Term body = gen_typed_term(rng, to_decl(gx), c, topts);
    if (!free_term_vars(body).contains(x) && chance(rng, 0.7)) return std::nullopt;
    return Instance{gx, body, c, g, subst_term(body, x, e), c};
  });
}

}  // namespace bidir::testkit
