#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <string>

namespace bidir {

/// Byte offsets [start, end) into a source buffer.
struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// Immutable type tree. Copies share structure.
///
/// Universal variables (`Var`) and existential variables (`Exists`) live in
/// separate namespaces; `Forall` binds universal variables only.
class Type {
 public:
  enum class Kind { Unit, Var, Exists, Forall, Arrow };

  static Type unit();
  static Type var(std::string name);
  static Type exists(std::string name);
  static Type forall(std::string binder, Type body);
  static Type arrow(Type domain, Type codomain);

  Kind kind() const;
  bool is_unit() const { return kind() == Kind::Unit; }
  bool is_var() const { return kind() == Kind::Var; }
  bool is_exists() const { return kind() == Kind::Exists; }
  bool is_forall() const { return kind() == Kind::Forall; }
  bool is_arrow() const { return kind() == Kind::Arrow; }

  // Var/Exists name, or the Forall binder.
  const std::string& name() const;
  const Type& body() const;
  const Type& domain() const;
  const Type& codomain() const;

  bool same_node(const Type& other) const { return node_ == other.node_; }

  // Literal structural equality (binder names must match).
  friend bool operator==(const Type& a, const Type& b);

 private:
  struct Node;
  Type() = default;
  explicit Type(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct Type::Node {
  Kind kind;
  std::string name;
  Type first;
  Type second;
};

inline Type::Kind Type::kind() const { return node_->kind; }
inline const std::string& Type::name() const { return node_->name; }
inline const Type& Type::body() const { return node_->first; }
inline const Type& Type::domain() const { return node_->first; }
inline const Type& Type::codomain() const { return node_->second; }

/// Immutable source term. Spans are carried for diagnostics only and are
/// ignored by `term_equal`.
class Term {
 public:
  enum class Kind { Unit, Var, Lam, App, Anno };

  static Term unit(SourceSpan span = {});
  static Term var(std::string name, SourceSpan span = {});
  static Term lam(std::string binder, Term body, SourceSpan span = {});
  static Term app(Term fn, Term arg, SourceSpan span = {});
  static Term anno(Term subject, Type ascribed, SourceSpan span = {});

  Kind kind() const;
  bool is_unit() const { return kind() == Kind::Unit; }
  bool is_var() const { return kind() == Kind::Var; }
  bool is_lam() const { return kind() == Kind::Lam; }
  bool is_app() const { return kind() == Kind::App; }
  bool is_anno() const { return kind() == Kind::Anno; }

  // Var name or Lam binder.
  const std::string& name() const;
  const Term& body() const;
  const Term& fn() const;
  const Term& arg() const;
  const Term& subject() const;
  const Type& ascribed() const;
  SourceSpan span() const;

  const void* identity() const { return node_.get(); }

 private:
  struct Node;
  Term() = default;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  Kind kind;
  std::string name;
  Term first;
  Term second;
  std::shared_ptr<const Type> ascribed;
  SourceSpan span;
};

inline Term::Kind Term::kind() const { return node_->kind; }
inline const std::string& Term::name() const { return node_->name; }
inline const Term& Term::body() const { return node_->first; }
inline const Term& Term::fn() const { return node_->first; }
inline const Term& Term::arg() const { return node_->second; }
inline const Term& Term::subject() const { return node_->first; }
inline const Type& Term::ascribed() const { return *node_->ascribed; }
inline SourceSpan Term::span() const { return node_->span; }

using NameSet = std::set<std::string>;

// ---- type operations -------------------------------------------------------

/// Capture-avoiding substitution of `replacement` for free occurrences of the
/// universal variable `binder` in `a`.
Type subst_tyvar(const Type& a, const std::string& binder, const Type& replacement);

/// Replaces the existential `evar` by `replacement` everywhere in `a`.
Type subst_evar(const Type& a, const std::string& evar, const Type& replacement);

bool is_monotype(const Type& a);
NameSet free_evars(const Type& a);
NameSet free_tyvars(const Type& a);
bool occurs_evar(const std::string& evar, const Type& a);
bool has_evars(const Type& a);

/// Node count; every constructor counts one.
std::size_t plain_size(const Type& a);
std::size_t forall_count(const Type& a);
std::size_t tyvar_occurrences(const Type& a, const std::string& name);

/// Equality up to consistent renaming of Forall binders. Existential names
/// are compared literally.
bool alpha_equiv(const Type& a, const Type& b);

/// A string that is equal for two types iff they are alpha-equivalent.
std::string canonical_key(const Type& a);

/// A name derived from `base` that is not in `avoid`.
std::string fresh_variant(const std::string& base, const NameSet& avoid);

// ---- term operations -------------------------------------------------------

bool term_equal(const Term& a, const Term& b);
std::size_t term_size(const Term& e);
NameSet free_term_vars(const Term& e);
/// Every variable name mentioned by `e`, bound or free.
NameSet term_var_names(const Term& e);

/// Capture-avoiding substitution [replacement/x]e.
Term subst_term(const Term& e, const std::string& x, const Term& replacement);

}  // namespace bidir
