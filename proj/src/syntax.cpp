#include "bidir/syntax.hpp"

#include <map>
#include <vector>

namespace bidir {

Type Type::unit() {
  static const Type unit_type(std::make_shared<const Node>(Node{Kind::Unit, {}, {}, {}}));
  return unit_type;
}

Type Type::var(std::string name) {
  return Type(std::make_shared<const Node>(Node{Kind::Var, std::move(name), {}, {}}));
}

Type Type::exists(std::string name) {
  return Type(std::make_shared<const Node>(Node{Kind::Exists, std::move(name), {}, {}}));
}

Type Type::forall(std::string binder, Type body) {
  return Type(std::make_shared<const Node>(Node{Kind::Forall, std::move(binder), std::move(body), {}}));
}

Type Type::arrow(Type domain, Type codomain) {
  return Type(std::make_shared<const Node>(Node{Kind::Arrow, {}, std::move(domain), std::move(codomain)}));
}

bool operator==(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Type::Kind::Unit:
      return true;
    case Type::Kind::Var:
    case Type::Kind::Exists:
      return a.name() == b.name();
    case Type::Kind::Forall:
      return a.name() == b.name() && a.body() == b.body();
    case Type::Kind::Arrow:
      return a.domain() == b.domain() && a.codomain() == b.codomain();
  }
  return false;
}

Term Term::unit(SourceSpan span) {
  return Term(std::make_shared<const Node>(Node{Kind::Unit, {}, {}, {}, nullptr, span}));
}

Term Term::var(std::string name, SourceSpan span) {
  return Term(std::make_shared<const Node>(Node{Kind::Var, std::move(name), {}, {}, nullptr, span}));
}

Term Term::lam(std::string binder, Term body, SourceSpan span) {
  return Term(std::make_shared<const Node>(
      Node{Kind::Lam, std::move(binder), std::move(body), {}, nullptr, span}));
}

Term Term::app(Term fn, Term arg, SourceSpan span) {
  return Term(std::make_shared<const Node>(
      Node{Kind::App, {}, std::move(fn), std::move(arg), nullptr, span}));
}

Term Term::anno(Term subject, Type ascribed, SourceSpan span) {
  return Term(std::make_shared<const Node>(Node{Kind::Anno, {}, std::move(subject), {},
                                                std::make_shared<const Type>(std::move(ascribed)), span}));
}

// ---- free variables --------------------------------------------------------

namespace {

void collect_evars(const Type& a, NameSet& out) {
  switch (a.kind()) {
    case Type::Kind::Unit:
    case Type::Kind::Var:
      return;
    case Type::Kind::Exists:
      out.insert(a.name());
      return;
    case Type::Kind::Forall:
      collect_evars(a.body(), out);
      return;
    case Type::Kind::Arrow:
      collect_evars(a.domain(), out);
      collect_evars(a.codomain(), out);
      return;
  }
}

void collect_tyvars(const Type& a, std::vector<std::string>& bound, NameSet& out) {
  switch (a.kind()) {
    case Type::Kind::Unit:
    case Type::Kind::Exists:
      return;
    case Type::Kind::Var:
      for (const auto& b : bound)
        if (b == a.name()) return;
      out.insert(a.name());
      return;
    case Type::Kind::Forall:
      bound.push_back(a.name());
      collect_tyvars(a.body(), bound, out);
      bound.pop_back();
      return;
    case Type::Kind::Arrow:
      collect_tyvars(a.domain(), bound, out);
      collect_tyvars(a.codomain(), bound, out);
      return;
  }
}

void collect_all_tyvar_names(const Type& a, NameSet& out) {
  switch (a.kind()) {
    case Type::Kind::Unit:
    case Type::Kind::Exists:
      return;
    case Type::Kind::Var:
      out.insert(a.name());
      return;
    case Type::Kind::Forall:
      out.insert(a.name());
      collect_all_tyvar_names(a.body(), out);
      return;
    case Type::Kind::Arrow:
      collect_all_tyvar_names(a.domain(), out);
      collect_all_tyvar_names(a.codomain(), out);
      return;
  }
}

}  // namespace

NameSet free_evars(const Type& a) {
  NameSet out;
  collect_evars(a, out);
  return out;
}

NameSet free_tyvars(const Type& a) {
  NameSet out;
  std::vector<std::string> bound;
  collect_tyvars(a, bound, out);
  return out;
}

bool occurs_evar(const std::string& evar, const Type& a) {
  switch (a.kind()) {
    case Type::Kind::Unit:
    case Type::Kind::Var:
      return false;
    case Type::Kind::Exists:
      return a.name() == evar;
    case Type::Kind::Forall:
      return occurs_evar(evar, a.body());
    case Type::Kind::Arrow:
      return occurs_evar(evar, a.domain()) || occurs_evar(evar, a.codomain());
  }
  return false;
}

bool has_evars(const Type& a) {
  switch (a.kind()) {
    case Type::Kind::Unit:
    case Type::Kind::Var:
      return false;
    case Type::Kind::Exists:
      return true;
    case Type::Kind::Forall:
      return has_evars(a.body());
    case Type::Kind::Arrow:
      return has_evars(a.domain()) || has_evars(a.codomain());
  }
  return false;
}

bool is_monotype(const Type& a) {
  switch (a.kind()) {
    case Type::Kind::Forall:
      return false;
    case Type::Kind::Arrow:
      return is_monotype(a.domain()) && is_monotype(a.codomain());
    default:
      return true;
  }
}

std::size_t plain_size(const Type& a) {
  switch (a.kind()) {
    case Type::Kind::Forall:
      return 1 + plain_size(a.body());
    case Type::Kind::Arrow:
      return 1 + plain_size(a.domain()) + plain_size(a.codomain());
    default:
      return 1;
  }
}

std::size_t forall_count(const Type& a) {
  switch (a.kind()) {
    case Type::Kind::Forall:
      return 1 + forall_count(a.body());
    case Type::Kind::Arrow:
      return forall_count(a.domain()) + forall_count(a.codomain());
    default:
      return 0;
  }
}

std::size_t tyvar_occurrences(const Type& a, const std::string& name) {
  switch (a.kind()) {
    case Type::Kind::Var:
      return a.name() == name ? 1 : 0;
    case Type::Kind::Forall:
      return a.name() == name ? 0 : tyvar_occurrences(a.body(), name);
    case Type::Kind::Arrow:
      return tyvar_occurrences(a.domain(), name) + tyvar_occurrences(a.codomain(), name);
    default:
      return 0;
  }
}

std::string fresh_variant(const std::string& base, const NameSet& avoid) {
  if (!avoid.contains(base)) return base;
  for (std::size_t i = 1;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!avoid.contains(candidate)) return candidate;
  }
}

// ---- substitution ----------------------------------------------------------

namespace {

Type subst_tyvar_impl(const Type& a, const std::string& binder, const Type& replacement,
                      const NameSet& replacement_fvs) {
  switch (a.kind()) {
    case Type::Kind::Unit:
    case Type::Kind::Exists:
      return a;
    case Type::Kind::Var:
      return a.name() == binder ? replacement : a;
    case Type::Kind::Arrow: {
      Type d = subst_tyvar_impl(a.domain(), binder, replacement, replacement_fvs);
      Type c = subst_tyvar_impl(a.codomain(), binder, replacement, replacement_fvs);
      if (d.same_node(a.domain()) && c.same_node(a.codomain())) return a;
      return Type::arrow(std::move(d), std::move(c));
    }
    case Type::Kind::Forall: {
      if (a.name() == binder) return a;
      if (tyvar_occurrences(a.body(), binder) == 0) return a;
      if (!replacement_fvs.contains(a.name())) {
        Type body = subst_tyvar_impl(a.body(), binder, replacement, replacement_fvs);
        return Type::forall(a.name(), std::move(body));
      }
      // The binder would capture a free variable of the replacement.
      NameSet avoid = replacement_fvs;
      collect_all_tyvar_names(a.body(), avoid);
      avoid.insert(binder);
      std::string renamed = fresh_variant(a.name(), avoid);
      Type body = subst_tyvar_impl(a.body(), a.name(), Type::var(renamed), {renamed});
      body = subst_tyvar_impl(body, binder, replacement, replacement_fvs);
      return Type::forall(std::move(renamed), std::move(body));
    }
  }
  return a;
}

}  // namespace

Type subst_tyvar(const Type& a, const std::string& binder, const Type& replacement) {
  return subst_tyvar_impl(a, binder, replacement, free_tyvars(replacement));
}

Type subst_evar(const Type& a, const std::string& evar, const Type& replacement) {
  switch (a.kind()) {
    case Type::Kind::Unit:
    case Type::Kind::Var:
      return a;
    case Type::Kind::Exists:
      return a.name() == evar ? replacement : a;
    case Type::Kind::Forall: {
      Type body = subst_evar(a.body(), evar, replacement);
      if (body.same_node(a.body())) return a;
      // Solutions never mention bound variables of the host type, but the
      // replacement may mention a universal that this binder shadows.
      if (free_tyvars(replacement).contains(a.name())) {
        NameSet avoid = free_tyvars(replacement);
        collect_all_tyvar_names(a.body(), avoid);
        std::string renamed = fresh_variant(a.name(), avoid);
        Type renamed_body = subst_tyvar(a.body(), a.name(), Type::var(renamed));
        return Type::forall(std::move(renamed), subst_evar(renamed_body, evar, replacement));
      }
      return Type::forall(a.name(), std::move(body));
    }
    case Type::Kind::Arrow: {
      Type d = subst_evar(a.domain(), evar, replacement);
      Type c = subst_evar(a.codomain(), evar, replacement);
      if (d.same_node(a.domain()) && c.same_node(a.codomain())) return a;
      return Type::arrow(std::move(d), std::move(c));
    }
  }
  return a;
}

// ---- alpha equivalence -----------------------------------------------------

namespace {

// Binder environments are stacks; the innermost binding of a name wins.
bool alpha_impl(const Type& a, const Type& b, std::vector<std::string>& left,
                std::vector<std::string>& right) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Type::Kind::Unit:
      return true;
    case Type::Kind::Exists:
      return a.name() == b.name();
    case Type::Kind::Var: {
      auto depth_of = [](const std::vector<std::string>& env, const std::string& n) -> long {
        for (std::size_t i = env.size(); i-- > 0;)
          if (env[i] == n) return static_cast<long>(env.size() - i);
        return -1;
      };
      long da = depth_of(left, a.name());
      long db = depth_of(right, b.name());
      if (da != db) return false;
      return da >= 0 || a.name() == b.name();
    }
    case Type::Kind::Forall: {
      left.push_back(a.name());
      right.push_back(b.name());
      bool ok = alpha_impl(a.body(), b.body(), left, right);
      left.pop_back();
      right.pop_back();
      return ok;
    }
    case Type::Kind::Arrow:
      return alpha_impl(a.domain(), b.domain(), left, right) &&
             alpha_impl(a.codomain(), b.codomain(), left, right);
  }
  return false;
}

void canonical_impl(const Type& a, std::vector<std::string>& bound, std::string& out) {
  switch (a.kind()) {
    case Type::Kind::Unit:
      out += '1';
      return;
    case Type::Kind::Exists:
      out += '?';
      out += a.name();
      out += ' ';
      return;
    case Type::Kind::Var:
      for (std::size_t i = bound.size(); i-- > 0;) {
        if (bound[i] == a.name()) {
          out += '#';
          out += std::to_string(bound.size() - 1 - i);
          out += ' ';
          return;
        }
      }
      out += '$';
      out += a.name();
      out += ' ';
      return;
    case Type::Kind::Forall:
      out += 'A';
      bound.push_back(a.name());
      canonical_impl(a.body(), bound, out);
      bound.pop_back();
      return;
    case Type::Kind::Arrow:
      out += '(';
      canonical_impl(a.domain(), bound, out);
      out += '>';
      canonical_impl(a.codomain(), bound, out);
      out += ')';
      return;
  }
}

}  // namespace

bool alpha_equiv(const Type& a, const Type& b) {
  std::vector<std::string> left, right;
  return alpha_impl(a, b, left, right);
}

std::string canonical_key(const Type& a) {
  std::string out;
  std::vector<std::string> bound;
  canonical_impl(a, bound, out);
  return out;
}

// ---- terms -----------------------------------------------------------------

bool term_equal(const Term& a, const Term& b) {
  if (a.identity() == b.identity()) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Unit:
      return true;
    case Term::Kind::Var:
      return a.name() == b.name();
    case Term::Kind::Lam:
      return a.name() == b.name() && term_equal(a.body(), b.body());
    case Term::Kind::App:
      return term_equal(a.fn(), b.fn()) && term_equal(a.arg(), b.arg());
    case Term::Kind::Anno:
      return term_equal(a.subject(), b.subject()) && alpha_equiv(a.ascribed(), b.ascribed());
  }
  return false;
}

std::size_t term_size(const Term& e) {
  switch (e.kind()) {
    case Term::Kind::Lam:
      return 1 + term_size(e.body());
    case Term::Kind::App:
      return 1 + term_size(e.fn()) + term_size(e.arg());
    case Term::Kind::Anno:
      return 1 + term_size(e.subject());
    default:
      return 1;
  }
}

namespace {

void collect_free_term_vars(const Term& e, std::vector<std::string>& bound, NameSet& out) {
  switch (e.kind()) {
    case Term::Kind::Unit:
      return;
    case Term::Kind::Var:
      for (const auto& b : bound)
        if (b == e.name()) return;
      out.insert(e.name());
      return;
    case Term::Kind::Lam:
      bound.push_back(e.name());
      collect_free_term_vars(e.body(), bound, out);
      bound.pop_back();
      return;
    case Term::Kind::App:
      collect_free_term_vars(e.fn(), bound, out);
      collect_free_term_vars(e.arg(), bound, out);
      return;
    case Term::Kind::Anno:
      collect_free_term_vars(e.subject(), bound, out);
      return;
  }
}

void collect_term_names(const Term& e, NameSet& out) {
  switch (e.kind()) {
    case Term::Kind::Unit:
      return;
    case Term::Kind::Var:
      out.insert(e.name());
      return;
    case Term::Kind::Lam:
      out.insert(e.name());
      collect_term_names(e.body(), out);
      return;
    case Term::Kind::App:
      collect_term_names(e.fn(), out);
      collect_term_names(e.arg(), out);
      return;
    case Term::Kind::Anno:
      collect_term_names(e.subject(), out);
      return;
  }
}

}  // namespace

NameSet free_term_vars(const Term& e) {
  NameSet out;
  std::vector<std::string> bound;
  collect_free_term_vars(e, bound, out);
  return out;
}

NameSet term_var_names(const Term& e) {
  NameSet out;
  collect_term_names(e, out);
  return out;
}

namespace {

Term subst_term_impl(const Term& e, const std::string& x, const Term& replacement,
                     const NameSet& replacement_fvs) {
  switch (e.kind()) {
    case Term::Kind::Unit:
      return e;
    case Term::Kind::Var:
      return e.name() == x ? replacement : e;
    case Term::Kind::App:
      return Term::app(subst_term_impl(e.fn(), x, replacement, replacement_fvs),
                       subst_term_impl(e.arg(), x, replacement, replacement_fvs), e.span());
    case Term::Kind::Anno:
      return Term::anno(subst_term_impl(e.subject(), x, replacement, replacement_fvs), e.ascribed(),
                        e.span());
    case Term::Kind::Lam: {
      if (e.name() == x) return e;
      if (!free_term_vars(e.body()).contains(x)) return e;
      if (!replacement_fvs.contains(e.name())) {
        return Term::lam(e.name(), subst_term_impl(e.body(), x, replacement, replacement_fvs), e.span());
      }
      NameSet avoid = replacement_fvs;
      collect_term_names(e.body(), avoid);
      avoid.insert(x);
      std::string renamed = fresh_variant(e.name(), avoid);
      Term body = subst_term_impl(e.body(), e.name(), Term::var(renamed), {renamed});
      return Term::lam(renamed, subst_term_impl(body, x, replacement, replacement_fvs), e.span());
    }
  }
  return e;
}

}  // namespace

Term subst_term(const Term& e, const std::string& x, const Term& replacement) {
  return subst_term_impl(e, x, replacement, free_term_vars(replacement));
}

}  // namespace bidir
