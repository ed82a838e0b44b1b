#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bidir/syntax.hpp"

namespace bidir {

/// One declaration of an ordered algorithmic context.
struct Entry {
  enum class Kind { Universal, TermVar, Unsolved, Solved, Marker };

  Kind kind;
  std::string name;
  // TermVar: the declared type. Solved: the monotype solution.
  std::optional<Type> type;

  static Entry universal(std::string name) { return {Kind::Universal, std::move(name), std::nullopt}; }
  static Entry term_var(std::string name, Type type) { return {Kind::TermVar, std::move(name), std::move(type)}; }
  static Entry unsolved(std::string name) { return {Kind::Unsolved, std::move(name), std::nullopt}; }
  static Entry solved(std::string name, Type solution) { return {Kind::Solved, std::move(name), std::move(solution)}; }
  static Entry marker(std::string name) { return {Kind::Marker, std::move(name), std::nullopt}; }

  bool is_evar() const { return kind == Kind::Unsolved || kind == Kind::Solved; }
};

/// Identity of an entry: its name plus its syntactic category. An existential
/// key matches the declaration whether it is solved or not; a marker key only
/// matches the marker.
struct EntryKey {
  enum class Kind { Universal, TermVar, Existential, Marker };

  Kind kind;
  std::string name;

  static EntryKey universal(std::string n) { return {Kind::Universal, std::move(n)}; }
  static EntryKey term_var(std::string n) { return {Kind::TermVar, std::move(n)}; }
  static EntryKey existential(std::string n) { return {Kind::Existential, std::move(n)}; }
  static EntryKey marker(std::string n) { return {Kind::Marker, std::move(n)}; }
};

EntryKey key_of(const Entry& e);
bool matches(const Entry& e, const EntryKey& key);

class ContextError : public std::runtime_error {
 public:
  enum class Kind { NotFound, IllFormedResult, NotAnExtension, NotComplete, NotDeclarative };

  ContextError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Ordered sequence of declarations, oldest first. A value type: every
/// operation returns a new context.
class Context {
 public:
  Context() = default;
  explicit Context(std::vector<Entry> entries) : entries_(std::move(entries)) {}

  std::span<const Entry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }

  Context extended(Entry e) const;
  Context extended(std::span<const Entry> es) const;

  std::optional<std::size_t> find(const EntryKey& key) const;
  bool contains(const EntryKey& key) const { return find(key).has_value(); }

  const Entry* find_evar(const std::string& name) const;
  const Type* lookup_term(const std::string& name) const;
  bool has_universal(const std::string& name) const;
  bool is_unsolved(const std::string& evar) const;

  /// Universal and term-variable names, for choosing fresh binders.
  NameSet universal_names() const;
  NameSet term_names() const;

 private:
  std::vector<Entry> entries_;
};

/// A context with no unsolved existentials.
class CompleteContext {
 public:
  explicit CompleteContext(Context ctx);  // throws ContextError::NotComplete
  const Context& context() const { return ctx_; }

 private:
  Context ctx_;
};

/// A context holding only universal and term-variable declarations.
class DeclContext {
 public:
  DeclContext() = default;
  explicit DeclContext(Context ctx);  // throws ContextError::NotDeclarative
  const Context& context() const { return ctx_; }
  std::span<const Entry> entries() const { return ctx_.entries(); }

  friend bool operator==(const DeclContext& a, const DeclContext& b);

 private:
  Context ctx_;
};

struct Split {
  Context left;
  Entry found;
  Context right;
};

/// Applies the solved existentials of `g` to `a`, recursively.
Type apply_ctx(const Context& g, const Type& a);

bool type_wf(const Context& g, const Type& a);
bool ctx_wf(const Context& g);

Split split_at(const Context& g, const EntryKey& key);
Context replace(const Context& g, const EntryKey& key, std::span<const Entry> entries);
Context replace(const Context& g, const EntryKey& key, std::initializer_list<Entry> entries);
Context truncate_before(const Context& g, const EntryKey& key);

/// Decides whether `g` is extended by `d`.
bool extends(const Context& g, const Context& d);

DeclContext complete_apply(const CompleteContext& omega, const Context& g);
CompleteContext fill(const Context& g);

std::size_t unsolved_count(const Context& g);
std::size_t contextual_size(const Context& g, const Type& a);

/// `a, ?b = 1 -> a, x : ?b, >?c`
std::string print_context(const Context& g);
std::string print_entry(const Entry& e);

}  // namespace bidir
