#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "bidir/context.hpp"
#include "bidir/session.hpp"
#include "bidir/syntax.hpp"

namespace bidir {

/// The finite stand-in for "any well-formed monotype" used wherever the
/// declarative rules guess a type. Candidates at a judgment under Ψ are the
/// seeds well-formed under Ψ, followed by the arrow closure of {1} and the
/// type variables of Ψ up to `depth` nested arrows.
struct Universe {
  std::size_t depth = 0;
  std::vector<Type> seeds;
};

/// Every monotype over {1} ∪ tyvars(psi) with arrow nesting at most `depth`,
/// duplicate-free, in a deterministic order: [1, tyvars..., arrows...].
std::vector<Type> enumerate_monotypes(const DeclContext& psi, std::size_t depth);

struct OracleLimits {
  // Result sets of synth/apply stop growing here; hitting it is reported.
  std::size_t set_cap = 4096;
  // Abandon a query after this many rule attempts (0 = unbounded).
  std::uint64_t step_limit = 0;
};

/// Bounded search over the declarative subtyping and typing rules.
/// Memo tables live as long as one top-level query.
class Oracle {
 public:
  explicit Oracle(Universe universe, Mode mode = Mode::DefaultInference, OracleLimits limits = {});

  bool subtype(const DeclContext& psi, const Type& a, const Type& b);
  bool check(const DeclContext& psi, const Term& e, const Type& a);
  std::vector<Type> synth(const DeclContext& psi, const Term& e);
  std::vector<Type> apply(const DeclContext& psi, const Type& a, const Term& e);

  /// A result set was truncated at `set_cap` during the last query.
  bool cap_hit() const { return cap_hit_; }
  /// The last query ran out of steps; its answer is a plain `false`/empty.
  bool exhausted() const { return exhausted_; }
  std::uint64_t steps() const { return steps_; }

 private:
  struct Scope {
    std::vector<std::string> tyvars;
    std::vector<std::pair<std::string, Type>> vars;
    std::vector<std::string> keys;  // incremental memo key per depth

    const std::string& key() const { return keys.back(); }
    bool has_tyvar(const std::string& name) const;
    NameSet tyvar_set() const;
    const Type* lookup(const std::string& x) const;
  };
  class Push;
  struct Exhausted {};

  Scope open(const DeclContext& psi) const;
  void begin();
  void step();

  const std::vector<Type>& candidates(const Scope& psi, const NameSet* relevant);
  bool sub(Scope& psi, const Type& a, const Type& b);
  bool chk(Scope& psi, const Term& e, const Type& a);
  std::vector<Type> syn(Scope& psi, const Term& e);
  std::vector<Type> app(Scope& psi, const Type& a, const Term& e);
  void add(std::vector<Type>& out, std::unordered_map<std::string, bool>& seen, const Type& t);

  Universe universe_;
  Mode mode_;
  OracleLimits limits_;
  bool cap_hit_ = false;
  bool exhausted_ = false;
  std::uint64_t steps_ = 0;

  std::unordered_map<std::string, std::vector<Type>> candidate_cache_;
  std::unordered_map<std::string, bool> sub_memo_;
  std::unordered_map<std::string, bool> chk_memo_;
  std::unordered_map<std::string, std::vector<Type>> syn_memo_;
  std::unordered_map<std::string, std::vector<Type>> app_memo_;
};

bool decl_subtype(const DeclContext& psi, const Type& a, const Type& b, const Universe& u);
bool decl_check(const DeclContext& psi, const Term& e, const Type& a, const Universe& u,
                Mode mode = Mode::DefaultInference);
std::vector<Type> decl_synth(const DeclContext& psi, const Term& e, const Universe& u,
                             Mode mode = Mode::DefaultInference);
std::vector<Type> decl_apply(const DeclContext& psi, const Term& e, const Type& a, const Universe& u,
                             Mode mode = Mode::DefaultInference);

}  // namespace bidir
