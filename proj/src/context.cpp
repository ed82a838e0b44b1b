#include "bidir/context.hpp"

#include <algorithm>

#include "bidir/surface.hpp"

namespace bidir {

EntryKey key_of(const Entry& e) {
  switch (e.kind) {
    case Entry::Kind::Universal:
      return EntryKey::universal(e.name);
    case Entry::Kind::TermVar:
      return EntryKey::term_var(e.name);
    case Entry::Kind::Unsolved:
    case Entry::Kind::Solved:
      return EntryKey::existential(e.name);
    case Entry::Kind::Marker:
      return EntryKey::marker(e.name);
  }
  return EntryKey::marker(e.name);
}

bool matches(const Entry& e, const EntryKey& key) {
  if (e.name != key.name) return false;
  switch (key.kind) {
    case EntryKey::Kind::Universal:
      return e.kind == Entry::Kind::Universal;
    case EntryKey::Kind::TermVar:
      return e.kind == Entry::Kind::TermVar;
    case EntryKey::Kind::Existential:
      return e.is_evar();
    case EntryKey::Kind::Marker:
      return e.kind == Entry::Kind::Marker;
  }
  return false;
}

namespace {

using Entries = std::span<const Entry>;

const Entry* find_evar_in(Entries es, const std::string& name) {
  for (const auto& e : es)
    if (e.is_evar() && e.name == name) return &e;
  return nullptr;
}

bool has_universal_in(Entries es, const std::string& name) {
  return std::any_of(es.begin(), es.end(),
                     [&](const Entry& e) { return e.kind == Entry::Kind::Universal && e.name == name; });
}

bool type_wf_in(Entries es, const Type& a, std::vector<std::string>& bound) {
  switch (a.kind()) {
    case Type::Kind::Unit:
      return true;
    case Type::Kind::Var:
      if (std::find(bound.begin(), bound.end(), a.name()) != bound.end()) return true;
      return has_universal_in(es, a.name());
    case Type::Kind::Exists:
      return find_evar_in(es, a.name()) != nullptr;
    case Type::Kind::Forall: {
      bound.push_back(a.name());
      bool ok = type_wf_in(es, a.body(), bound);
      bound.pop_back();
      return ok;
    }
    case Type::Kind::Arrow:
      return type_wf_in(es, a.domain(), bound) && type_wf_in(es, a.codomain(), bound);
  }
  return false;
}

bool type_wf_in(Entries es, const Type& a) {
  std::vector<std::string> bound;
  return type_wf_in(es, a, bound);
}

Type apply_in(Entries es, const Type& a) {
  switch (a.kind()) {
    case Type::Kind::Unit:
    case Type::Kind::Var:
      return a;
    case Type::Kind::Exists: {
      const Entry* e = find_evar_in(es, a.name());
      if (e == nullptr || e->kind == Entry::Kind::Unsolved) return a;
      return apply_in(es, *e->type);
    }
    case Type::Kind::Forall: {
      Type body = apply_in(es, a.body());
      if (body.same_node(a.body())) return a;
      return Type::forall(a.name(), std::move(body));
    }
    case Type::Kind::Arrow: {
      Type d = apply_in(es, a.domain());
      Type c = apply_in(es, a.codomain());
      if (d.same_node(a.domain()) && c.same_node(a.codomain())) return a;
      return Type::arrow(std::move(d), std::move(c));
    }
  }
  return a;
}

std::size_t size_in(Entries es, const Type& a) {
  switch (a.kind()) {
    case Type::Kind::Unit:
    case Type::Kind::Var:
      return 1;
    case Type::Kind::Exists: {
      const Entry* e = find_evar_in(es, a.name());
      if (e == nullptr || e->kind == Entry::Kind::Unsolved) return 1;
      return 1 + size_in(es, *e->type);
    }
    case Type::Kind::Forall:
      // Declaring the bound universal does not affect existential lookups.
      return 1 + size_in(es, a.body());
    case Type::Kind::Arrow:
      return 1 + size_in(es, a.domain()) + size_in(es, a.codomain());
  }
  return 1;
}

}  // namespace

// ---- Context ---------------------------------------------------------------

Context Context::extended(Entry e) const {
  std::vector<Entry> out = entries_;
  out.push_back(std::move(e));
  return Context(std::move(out));
}

Context Context::extended(std::span<const Entry> es) const {
  std::vector<Entry> out = entries_;
  out.insert(out.end(), es.begin(), es.end());
  return Context(std::move(out));
}

std::optional<std::size_t> Context::find(const EntryKey& key) const {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (matches(entries_[i], key)) return i;
  return std::nullopt;
}

const Entry* Context::find_evar(const std::string& name) const { return find_evar_in(entries_, name); }

const Type* Context::lookup_term(const std::string& name) const {
  for (std::size_t i = entries_.size(); i-- > 0;)
    if (entries_[i].kind == Entry::Kind::TermVar && entries_[i].name == name) return &*entries_[i].type;
  return nullptr;
}

bool Context::has_universal(const std::string& name) const { return has_universal_in(entries_, name); }

bool Context::is_unsolved(const std::string& evar) const {
  const Entry* e = find_evar(evar);
  return e != nullptr && e->kind == Entry::Kind::Unsolved;
}

NameSet Context::universal_names() const {
  NameSet out;
  for (const auto& e : entries_)
    if (e.kind == Entry::Kind::Universal) out.insert(e.name);
  return out;
}

NameSet Context::term_names() const {
  NameSet out;
  for (const auto& e : entries_)
    if (e.kind == Entry::Kind::TermVar) out.insert(e.name);
  return out;
}

CompleteContext::CompleteContext(Context ctx) : ctx_(std::move(ctx)) {
  for (const auto& e : ctx_.entries())
    if (e.kind == Entry::Kind::Unsolved)
      throw ContextError(ContextError::Kind::NotComplete, "unsolved existential ?" + e.name);
}

DeclContext::DeclContext(Context ctx) : ctx_(std::move(ctx)) {
  for (const auto& e : ctx_.entries()) {
    if (e.kind != Entry::Kind::Universal && e.kind != Entry::Kind::TermVar)
      throw ContextError(ContextError::Kind::NotDeclarative, "existential entry " + print_entry(e));
    if (e.type && has_evars(*e.type))
      throw ContextError(ContextError::Kind::NotDeclarative, "existential in " + print_entry(e));
  }
}

bool operator==(const DeclContext& a, const DeclContext& b) {
  if (a.ctx_.size() != b.ctx_.size()) return false;
  for (std::size_t i = 0; i < a.ctx_.size(); ++i) {
    const Entry& x = a.ctx_[i];
    const Entry& y = b.ctx_[i];
    if (x.kind != y.kind || x.name != y.name) return false;
    if (x.type.has_value() != y.type.has_value()) return false;
    if (x.type && !alpha_equiv(*x.type, *y.type)) return false;
  }
  return true;
}

// ---- operations ------------------------------------------------------------

Type apply_ctx(const Context& g, const Type& a) { return apply_in(g.entries(), a); }

bool type_wf(const Context& g, const Type& a) { return type_wf_in(g.entries(), a); }

bool ctx_wf(const Context& g) {
  Entries all = g.entries();
  for (std::size_t i = 0; i < all.size(); ++i) {
    Entries prefix = all.first(i);
    const Entry& e = all[i];
    switch (e.kind) {
      case Entry::Kind::Universal:
        if (has_universal_in(prefix, e.name)) return false;
        break;
      case Entry::Kind::TermVar:
        for (const auto& p : prefix)
          if (p.kind == Entry::Kind::TermVar && p.name == e.name) return false;
        if (!type_wf_in(prefix, *e.type)) return false;
        break;
      case Entry::Kind::Unsolved:
        if (find_evar_in(prefix, e.name)) return false;
        break;
      case Entry::Kind::Solved:
        if (find_evar_in(prefix, e.name)) return false;
        if (!is_monotype(*e.type) || !type_wf_in(prefix, *e.type)) return false;
        break;
      case Entry::Kind::Marker:
        if (find_evar_in(prefix, e.name)) return false;
        for (const auto& p : prefix)
          if (p.kind == Entry::Kind::Marker && p.name == e.name) return false;
        break;
    }
  }
  return true;
}

Split split_at(const Context& g, const EntryKey& key) {
  auto idx = g.find(key);
  if (!idx) throw ContextError(ContextError::Kind::NotFound, "no entry for " + key.name);
  Entries all = g.entries();
  return Split{Context({all.begin(), all.begin() + static_cast<std::ptrdiff_t>(*idx)}), all[*idx],
               Context({all.begin() + static_cast<std::ptrdiff_t>(*idx) + 1, all.end()})};
}

Context replace(const Context& g, const EntryKey& key, std::span<const Entry> entries) {
  auto idx = g.find(key);
  if (!idx) throw ContextError(ContextError::Kind::NotFound, "no entry for " + key.name);
  Entries all = g.entries();
  std::vector<Entry> out(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(*idx));
  out.insert(out.end(), entries.begin(), entries.end());
  out.insert(out.end(), all.begin() + static_cast<std::ptrdiff_t>(*idx) + 1, all.end());
  Context result(std::move(out));
  if (!ctx_wf(result))
    throw ContextError(ContextError::Kind::IllFormedResult, "ill-formed context: " + print_context(result));
  return result;
}

Context replace(const Context& g, const EntryKey& key, std::initializer_list<Entry> entries) {
  return replace(g, key, std::span<const Entry>(entries.begin(), entries.size()));
}

Context truncate_before(const Context& g, const EntryKey& key) {
  auto idx = g.find(key);
  if (!idx) throw ContextError(ContextError::Kind::NotFound, "no entry for " + key.name);
  Entries all = g.entries();
  return Context({all.begin(), all.begin() + static_cast<std::ptrdiff_t>(*idx)});
}

bool extends(const Context& g, const Context& d) {
  Entries ge = g.entries();
  Entries de = d.entries();
  std::size_t i = ge.size();
  std::size_t j = de.size();
  while (j > 0) {
    const Entry& right = de[j - 1];
    if (i > 0) {
      const Entry& left = ge[i - 1];
      bool same = left.name == right.name &&
                  (left.kind == right.kind || (left.is_evar() && right.is_evar()));
      if (same) {
        switch (left.kind) {
          case Entry::Kind::TermVar:
            if (!alpha_equiv(apply_ctx(d, *left.type), apply_ctx(d, *right.type))) return false;
            break;
          case Entry::Kind::Solved:
            if (right.kind == Entry::Kind::Unsolved) return false;
            if (!alpha_equiv(apply_ctx(d, *left.type), apply_ctx(d, *right.type))) return false;
            break;
          default:
            break;
        }
        --i;
        --j;
        continue;
      }
    }
    if (!right.is_evar()) return false;
    --j;
  }
  return i == 0;
}

DeclContext complete_apply(const CompleteContext& omega, const Context& g) {
  const Context& om = omega.context();
  Entries oe = om.entries();
  Entries ge = g.entries();
  std::size_t j = ge.size();
  std::vector<Entry> out;
  auto fail = [&](const std::string& why) {
    return ContextError(ContextError::Kind::NotAnExtension,
                        "[" + print_context(om) + "] applied to [" + print_context(g) + "]: " + why);
  };
  for (std::size_t i = oe.size(); i-- > 0;) {
    const Entry& o = oe[i];
    switch (o.kind) {
      case Entry::Kind::TermVar: {
        if (j == 0 || ge[j - 1].kind != Entry::Kind::TermVar || ge[j - 1].name != o.name)
          throw fail("term variable " + o.name);
        Type applied = apply_ctx(om, *o.type);
        if (!alpha_equiv(applied, apply_ctx(om, *ge[j - 1].type))) throw fail("type of " + o.name);
        out.push_back(Entry::term_var(o.name, std::move(applied)));
        --j;
        break;
      }
      case Entry::Kind::Universal:
        if (j == 0 || ge[j - 1].kind != Entry::Kind::Universal || ge[j - 1].name != o.name)
          throw fail("universal " + o.name);
        out.push_back(o);
        --j;
        break;
      case Entry::Kind::Solved:
        if (j > 0 && ge[j - 1].is_evar() && ge[j - 1].name == o.name) {
          if (ge[j - 1].kind == Entry::Kind::Solved &&
              !alpha_equiv(apply_ctx(om, *o.type), apply_ctx(om, *ge[j - 1].type)))
            throw fail("solution of ?" + o.name);
          --j;
        } else if (find_evar_in(ge.first(j), o.name) != nullptr) {
          throw fail("order of ?" + o.name);
        }
        break;
      case Entry::Kind::Marker:
        if (j == 0 || ge[j - 1].kind != Entry::Kind::Marker || ge[j - 1].name != o.name)
          throw fail("marker >?" + o.name);
        --j;
        break;
      case Entry::Kind::Unsolved:
        throw fail("unsolved ?" + o.name);
    }
  }
  if (j != 0) throw fail("leftover entries");
  std::reverse(out.begin(), out.end());
  return DeclContext(Context(std::move(out)));
}

CompleteContext fill(const Context& g) {
  std::vector<Entry> out;
  out.reserve(g.size());
  for (const auto& e : g.entries()) {
    if (e.kind == Entry::Kind::Unsolved)
      out.push_back(Entry::solved(e.name, Type::unit()));
    else
      out.push_back(e);
  }
  return CompleteContext(Context(std::move(out)));
}

std::size_t unsolved_count(const Context& g) {
  return static_cast<std::size_t>(std::count_if(g.entries().begin(), g.entries().end(), [](const Entry& e) {
    return e.kind == Entry::Kind::Unsolved;
  }));
}

std::size_t contextual_size(const Context& g, const Type& a) { return size_in(g.entries(), a); }

std::string print_entry(const Entry& e) {
  switch (e.kind) {
    case Entry::Kind::Universal:
      return e.name;
    case Entry::Kind::TermVar:
      return e.name + " : " + print_type(*e.type);
    case Entry::Kind::Unsolved:
      return "?" + e.name;
    case Entry::Kind::Solved:
      return "?" + e.name + " = " + print_type(*e.type);
    case Entry::Kind::Marker:
      return ">?" + e.name;
  }
  return {};
}

std::string print_context(const Context& g) {
  std::string out;
  for (const auto& e : g.entries()) {
    if (!out.empty()) out += ", ";
    out += print_entry(e);
  }
  return out;
}

}  // namespace bidir
