#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bidir/context.hpp"
#include "bidir/oracle.hpp"
#include "bidir/session.hpp"
#include "bidir/syntax.hpp"

namespace bidir::testkit {

using Rng = std::mt19937_64;

/// Per-case seed derived from a run seed and a case index (splitmix64).
std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index);

// ---- types -----------------------------------------------------------------

/// What a generated type may mention besides 1.
struct TypeScope {
  std::vector<std::string> tyvars;
  std::vector<std::string> evars;  // existential names
};

/// A well-formed type of at most `max_size` nodes and `max_quantifiers`
/// foralls over `scope`. Binders never shadow each other or the scope.
Type gen_type(Rng& rng, std::size_t max_size, std::size_t max_quantifiers, const TypeScope& scope = {});
Type gen_type(std::uint64_t seed, std::size_t max_size, std::size_t max_quantifiers, const DeclContext& scope);
Type gen_monotype(Rng& rng, std::size_t max_size, const TypeScope& scope);

/// A forall nested somewhere inside an arrow.
bool is_higher_rank(const Type& a);

/// Strictly smaller types, well-formed wherever `a` was.
std::vector<Type> shrink_type(const Type& a);

// ---- terms -----------------------------------------------------------------

using AnnotationSource = std::function<Type(Rng&)>;

struct TermGenOptions {
  std::size_t max_size = 8;
  // Probability that a lambda in head position gets an annotation.
  double annotate_redex = 0.75;
  std::size_t annotation_size = 5;
  std::size_t annotation_quantifiers = 2;
};

/// Closed annotation types drawn from gen_type.
AnnotationSource default_annotations(const TermGenOptions& options);

/// A term whose free variables are among `vars`.
Term gen_term(Rng& rng, const TermGenOptions& options, const std::vector<std::string>& vars,
              const AnnotationSource& annotations);
Term gen_term(std::uint64_t seed, std::size_t max_size, const AnnotationSource& annotations);

/// A term built to check against `goal` under `psi` most of the time.
Term gen_typed_term(Rng& rng, const DeclContext& psi, const Type& goal, const TermGenOptions& options);

/// Lambda-headed applications, and how many of them are annotated.
struct RedexCount {
  std::size_t redexes = 0;
  std::size_t annotated = 0;
};
RedexCount count_redexes(const Term& e);

/// Strictly smaller terms with no new free variables.
std::vector<Term> shrink_term(const Term& e);

/// Greedy shrinking while `still_fails` holds.
Term minimize_term(Term e, const std::function<bool(const Term&)>& still_fails);
Type minimize_type(Type a, const std::function<bool(const Type&)>& still_fails);

// ---- contexts --------------------------------------------------------------

struct ContextGenOptions {
  std::size_t universals = 2;
  std::size_t term_vars = 3;
  std::size_t evars = 0;  // existentials; some are solved, a few sit behind markers
  std::size_t type_size = 5;
  std::size_t quantifiers = 2;
};

/// A well-formed context. Existentials are named `e1, e2, ...` so they never
/// collide with names a Session creates.
Context gen_context(Rng& rng, const ContextGenOptions& options);

DeclContext to_decl(const Context& g);
TypeScope scope_of(const Context& g);

// ---- witnesses -------------------------------------------------------------

/// The complete context `fill(delta)` together with every existential
/// solution the session logged, resolved through the log and Ω. The seeds let
/// the oracle reproduce the algorithm's instantiations, including those of
/// existentials that were later dropped from the context.
struct Witness {
  CompleteContext omega;
  std::vector<Type> seeds;
};
Witness witness_for(const Session& s, const Context& delta);

// ---- differential harness --------------------------------------------------

struct DiffConfig {
  std::size_t cases = 100;
  std::uint64_t seed = 1;
  std::size_t term_size = 8;
  std::size_t depth = 2;
  Mode mode = Mode::DefaultInference;
  bool skip_forall_r_truncation = false;
  std::uint64_t oracle_step_limit = 2'000'000;
};

enum class CaseKind { TypingClosed, SubtypeClosed, TypingOpen, SubtypeOpen, Instantiation };
const char* to_string(CaseKind kind);

struct DiffReport {
  std::size_t cases = 0;
  std::size_t algorithm_accepted = 0;   // soundness obligations checked
  std::size_t oracle_accepted = 0;      // completeness obligations checked (evar-free only)
  std::size_t soundness_failures = 0;
  std::size_t completeness_failures = 0;
  std::size_t violations = 0;
  std::size_t cap_hits = 0;  // oracle truncated a set or ran out of steps
  std::vector<std::string> lines;

  std::size_t disagreements() const { return soundness_failures + completeness_failures; }
  /// `summary cases=N seed=S disagreements=D violations=V cap_hits=C ...`
  std::string summary(std::uint64_t seed) const;
};

/// Runs one generated case and folds its outcome into `report`.
void run_case(const DiffConfig& config, std::uint64_t index, DiffReport& report);
DiffReport differential_run(const DiffConfig& config);

/// Keeps generating evar-free checking judgments until `target` of them are
/// accepted by the oracle (or `max_attempts` is reached), requiring the
/// algorithm to accept each one.
DiffReport completeness_run(const DiffConfig& config, std::size_t target, std::size_t max_attempts);

// ---- property suites -------------------------------------------------------

struct SuiteReport {
  std::size_t instances = 0;  // generated instances whose premise held
  std::size_t attempts = 0;
  std::size_t failures = 0;
  // Failures the depth-2 oracle reproduces: it accepts the premise and
  // rejects the conclusion, so the property itself fails on that instance.
  std::size_t oracle_confirmed = 0;
  std::size_t violations = 0;
  std::vector<std::string> lines;
};

/// check(Ψ, \x. e x, A) implies check(Ψ, e, A) for x not free in e.
SuiteReport eta_suite(std::size_t instances, std::uint64_t seed);
/// Dropping the annotation of an annotated lambda, unit or argument keeps
/// the judgment derivable.
SuiteReport annotation_removal_suite(std::size_t instances, std::uint64_t seed);
/// synth(Ψ, e) = A and check(Ψ, x:A, e', C) imply check(Ψ, [e/x]e', C).
SuiteReport substitution_suite(std::size_t instances, std::uint64_t seed);

}  // namespace bidir::testkit
