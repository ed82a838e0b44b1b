#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bidir/context.hpp"
#include "bidir/syntax.hpp"

namespace bidir {

enum class Mode { DefaultInference, NoInference };

/// A failed judgment. Every failure of check/synth/apply_fn surfaces as
/// exactly one of these.
class TypeError : public std::runtime_error {
 public:
  enum class Kind {
    Mismatch,
    OccursCheck,
    UnboundVariable,
    NotAFunction,
    CannotSynthesize,
    NoRuleApplies,
    IllFormedType,
  };

  TypeError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}

  Kind kind() const { return kind_; }
  const std::optional<SourceSpan>& span() const { return span_; }
  void attach_span(SourceSpan span) {
    if (!span_) span_ = span;
  }

 private:
  Kind kind_;
  std::optional<SourceSpan> span_;
};

const char* to_string(TypeError::Kind kind);

struct Violation {
  std::string invariant;
  std::string detail;
};

struct Options {
  Mode mode = Mode::DefaultInference;
  // Verifies extension, measure decrease, solving and application invariants
  // on every judgment. Off only for benchmarking.
  bool check_invariants = true;
  // Mutation hook for the differential harness: <:ForallR keeps its trailing
  // context instead of dropping it.
  bool skip_forall_r_truncation = false;
};

/// State owned by one typechecking run: the fresh-name counter, the trace
/// sink, the invariant monitor and the log of existential solutions.
/// Not shared between threads.
class Session {
 public:
  explicit Session(Options options = {}) : options_(options) {}

  const Options& options() const { return options_; }
  Mode mode() const { return options_.mode; }

  // -- fresh names --
  std::string fresh_evar();
  /// Returns `binder` if no universal of that name is declared in `g`,
  /// otherwise `fresh_variant(binder, universals of g)`. Depends only on `g`,
  /// so the declarative oracle picks the same name.
  std::string universal_for(const Context& g, const std::string& binder);
  /// Returns `binder` if `g` does not declare it as a term variable,
  /// otherwise a fresh variant that also avoids `taken`.
  std::string term_var_for(const Context& g, const std::string& binder, const NameSet& taken);

  // -- tracing --
  void set_trace_sink(std::function<void(std::string_view)> sink) { trace_ = std::move(sink); }
  bool tracing() const { return static_cast<bool>(trace_); }
  void trace(std::string_view line) const {
    if (trace_) trace_(line);
  }

  // -- invariants --
  bool checking() const { return options_.check_invariants; }
  void violation(std::string invariant, std::string detail);
  const std::vector<Violation>& violations() const { return violations_; }

  /// apply_ctx, verifying idempotence when checking invariants.
  Type applied(const Context& g, const Type& a);

  // -- solutions --
  void record_solution(const std::string& evar, const Type& solution);
  const std::vector<std::pair<std::string, Type>>& solutions() const { return solutions_; }
  std::size_t evars_created() const { return evars_created_; }

  // -- termination measures --
  enum class FrameKind { Subtype, Synth, Check, Apply };
  struct Frame {
    FrameKind kind;
    std::vector<std::size_t> measure;
  };

  /// Pushes a judgment frame; if the enclosing frame belongs to the same
  /// judgment family, checks that the measure strictly decreased.
  class FrameGuard {
   public:
    FrameGuard(Session& session, FrameKind kind, std::vector<std::size_t> measure, std::string_view what);
    ~FrameGuard();
    FrameGuard(const FrameGuard&) = delete;
    FrameGuard& operator=(const FrameGuard&) = delete;

   private:
    Session* session_;
  };

 private:
  Options options_;
  std::size_t counter_ = 0;
  std::size_t evars_created_ = 0;
  std::function<void(std::string_view)> trace_;
  std::vector<Violation> violations_;
  std::vector<std::pair<std::string, Type>> solutions_;
  std::vector<Frame> frames_;
};

}  // namespace bidir
