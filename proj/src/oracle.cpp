#include "bidir/oracle.hpp"

#include <algorithm>
#include <cstdint>

namespace bidir {

namespace {

std::vector<Type> arrow_closure(std::vector<Type> level, std::size_t depth) {
  std::unordered_map<std::string, bool> seen;
  for (const Type& t : level) seen.emplace(canonical_key(t), true);
  for (std::size_t d = 0; d < depth; ++d) {
    const std::vector<Type> prev = level;
    for (const Type& a : prev) {
      for (const Type& b : prev) {
        Type t = Type::arrow(a, b);
        if (seen.emplace(canonical_key(t), true).second) level.push_back(std::move(t));
      }
    }
  }
  return level;
}

void collect_subterms(const Type& t, std::vector<Type>& out) {
  out.push_back(t);
  if (t.is_arrow()) {
    collect_subterms(t.domain(), out);
    collect_subterms(t.codomain(), out);
  }
}

std::string ptr_key(const Term& e) {
  return std::to_string(reinterpret_cast<std::uintptr_t>(e.identity()));
}

}  // namespace

std::vector<Type> enumerate_monotypes(const DeclContext& psi, std::size_t depth) {
  std::vector<Type> level{Type::unit()};
  for (const Entry& entry : psi.entries()) {
    if (entry.kind == Entry::Kind::Universal) level.push_back(Type::var(entry.name));
  }
  return arrow_closure(std::move(level), depth);
}

// ---- scope -----------------------------------------------------------------

bool Oracle::Scope::has_tyvar(const std::string& name) const {
  return std::find(tyvars.begin(), tyvars.end(), name) != tyvars.end();
}

NameSet Oracle::Scope::tyvar_set() const { return NameSet(tyvars.begin(), tyvars.end()); }

const Type* Oracle::Scope::lookup(const std::string& x) const {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
    if (it->first == x) return &it->second;
  }
  return nullptr;
}

// Extends a scope for the lifetime of the guard.
class Oracle::Push {
 public:
  Push(Scope& s, const std::string& tyvar) : s_(s), tyvar_(true) {
    s.tyvars.push_back(tyvar);
    s.keys.push_back(s.key() + "," + tyvar);
  }
  Push(Scope& s, const std::string& x, const Type& a) : s_(s), tyvar_(false) {
    s.vars.emplace_back(x, a);
    s.keys.push_back(s.key() + ";" + x + ":" + canonical_key(a));
  }
  ~Push() {
    if (tyvar_) {
      s_.tyvars.pop_back();
    } else {
      s_.vars.pop_back();
    }
    s_.keys.pop_back();
  }
  Push(const Push&) = delete;
  Push& operator=(const Push&) = delete;

 private:
  Scope& s_;
  bool tyvar_;
};

// ---- oracle ----------------------------------------------------------------

Oracle::Oracle(Universe universe, Mode mode, OracleLimits limits)
    : universe_(std::move(universe)), mode_(mode), limits_(limits) {}

Oracle::Scope Oracle::open(const DeclContext& psi) const {
  Scope s;
  s.keys.emplace_back();
  std::string& key = s.keys.back();
  for (const Entry& entry : psi.entries()) {
    if (entry.kind == Entry::Kind::Universal) {
      s.tyvars.push_back(entry.name);
      key += "," + entry.name;
    } else if (entry.kind == Entry::Kind::TermVar) {
      s.vars.emplace_back(entry.name, *entry.type);
      key += ";" + entry.name + ":" + canonical_key(*entry.type);
    }
  }
  return s;
}

void Oracle::begin() {
  cap_hit_ = false;
  exhausted_ = false;
  steps_ = 0;
  sub_memo_.clear();
  chk_memo_.clear();
  syn_memo_.clear();
  app_memo_.clear();
}

void Oracle::step() {
  ++steps_;
  if (limits_.step_limit != 0 && steps_ > limits_.step_limit) throw Exhausted{};
}

const std::vector<Type>& Oracle::candidates(const Scope& psi, const NameSet* relevant) {
  std::string key;
  for (const std::string& a : psi.tyvars) {
    key += (relevant == nullptr || relevant->contains(a)) ? "+" : "-";
    key += a;
  }
  auto found = candidate_cache_.find(key);
  if (found != candidate_cache_.end()) return found->second;

  std::vector<Type> out;
  std::unordered_map<std::string, bool> seen;
  // Seeds first: in soundness runs they hold the witness, so success is found early.
  for (const Type& seed : universe_.seeds) {
    std::vector<Type> parts;
    collect_subterms(seed, parts);
    for (const Type& t : parts) {
      if (!is_monotype(t) || has_evars(t)) continue;
      bool scoped = true;
      for (const std::string& v : free_tyvars(t)) scoped = scoped && psi.has_tyvar(v);
      if (scoped && seen.emplace(canonical_key(t), true).second) out.push_back(t);
    }
  }
  std::vector<Type> base{Type::unit()};
  for (const std::string& a : psi.tyvars) {
    if (relevant == nullptr || relevant->contains(a)) base.push_back(Type::var(a));
  }
  for (Type& t : arrow_closure(std::move(base), universe_.depth)) {
    if (seen.emplace(canonical_key(t), true).second) out.push_back(std::move(t));
  }
  return candidate_cache_.emplace(std::move(key), std::move(out)).first->second;
}

void Oracle::add(std::vector<Type>& out, std::unordered_map<std::string, bool>& seen, const Type& t) {
  if (out.size() >= limits_.set_cap) {
    cap_hit_ = true;
    return;
  }
  if (seen.emplace(canonical_key(t), true).second) out.push_back(t);
}

bool Oracle::sub(Scope& psi, const Type& a, const Type& b) {
  step();
  std::string key;
  for (const std::string& v : psi.tyvars) key += v + ",";
  key += "|" + canonical_key(a) + "<:" + canonical_key(b);
  if (auto it = sub_memo_.find(key); it != sub_memo_.end()) return it->second;

  bool result = false;
  if (b.is_forall()) {
    std::string beta = fresh_variant(b.name(), psi.tyvar_set());
    Type body = beta == b.name() ? b.body() : subst_tyvar(b.body(), b.name(), Type::var(beta));
    Push scope(psi, beta);
    result = sub(psi, a, body);
  } else if (a.is_forall()) {
    if (tyvar_occurrences(a.body(), a.name()) == 0) {
      result = sub(psi, a.body(), b);
    } else {
      // Only type variables mentioned by the judgment matter: replacing any
      // other variable by 1 throughout a derivation leaves a derivation.
      NameSet relevant = free_tyvars(a);
      relevant.merge(free_tyvars(b));
      for (const Type& tau : candidates(psi, &relevant)) {
        if (sub(psi, subst_tyvar(a.body(), a.name(), tau), b)) {
          result = true;
          break;
        }
      }
    }
  } else if (a.is_unit() && b.is_unit()) {
    result = true;
  } else if (a.is_var() && b.is_var()) {
    result = a.name() == b.name() && psi.has_tyvar(a.name());
  } else if (a.is_arrow() && b.is_arrow()) {
    result = sub(psi, b.domain(), a.domain()) && sub(psi, a.codomain(), b.codomain());
  }
  sub_memo_[key] = result;
  return result;
}

bool Oracle::chk(Scope& psi, const Term& e, const Type& a) {
  step();
  std::string key = psi.key() + "#" + ptr_key(e) + "#" + canonical_key(a);
  if (auto it = chk_memo_.find(key); it != chk_memo_.end()) return it->second;

  bool result = false;
  if (a.is_forall()) {
    std::string alpha = fresh_variant(a.name(), psi.tyvar_set());
    Type body = alpha == a.name() ? a.body() : subst_tyvar(a.body(), a.name(), Type::var(alpha));
    Push scope(psi, alpha);
    result = chk(psi, e, body);
  } else if (e.is_unit()) {
    result = a.is_unit();
  } else if (e.is_lam()) {
    // Sub is admissible here: a lambda synthesizes only arrows, and an arrow
    // supertype is already handled by ->I with the same premises.
    if (a.is_arrow()) {
      Push scope(psi, e.name(), a.domain());
      result = chk(psi, e.body(), a.codomain());
    }
  } else {
    for (const Type& b : syn(psi, e)) {
      if (sub(psi, b, a)) {
        result = true;
        break;
      }
    }
  }
  chk_memo_[key] = result;
  return result;
}

std::vector<Type> Oracle::syn(Scope& psi, const Term& e) {
  step();
  std::string key = psi.key() + "#" + ptr_key(e);
  if (auto it = syn_memo_.find(key); it != syn_memo_.end()) return it->second;

  std::vector<Type> out;
  std::unordered_map<std::string, bool> seen;
  switch (e.kind()) {
    case Term::Kind::Var:
      if (const Type* a = psi.lookup(e.name())) out.push_back(*a);
      break;
    case Term::Kind::Anno: {
      const Type& a = e.ascribed();
      bool scoped = !has_evars(a);
      for (const std::string& v : free_tyvars(a)) scoped = scoped && psi.has_tyvar(v);
      if (scoped && chk(psi, e.subject(), a)) out.push_back(a);
      break;
    }
    case Term::Kind::Unit:
      if (mode_ == Mode::DefaultInference) out.push_back(Type::unit());
      break;
    case Term::Kind::Lam:
      if (mode_ == Mode::DefaultInference) {
        const std::vector<Type> taus = candidates(psi, nullptr);
        for (const Type& sigma : taus) {
          Push scope(psi, e.name(), sigma);
          for (const Type& tau : taus) {
            if (chk(psi, e.body(), tau)) add(out, seen, Type::arrow(sigma, tau));
          }
        }
      }
      break;
    case Term::Kind::App:
      if (e.fn().is_lam() && mode_ == Mode::DefaultInference) {
        // (\x. body) arg: the guessed domain must also accept the argument,
        // so filter on that before enumerating codomains.
        const Term& lam = e.fn();
        const std::vector<Type> taus = candidates(psi, nullptr);
        for (const Type& sigma : taus) {
          if (!chk(psi, e.arg(), sigma)) continue;
          Push scope(psi, lam.name(), sigma);
          for (const Type& tau : taus) {
            if (chk(psi, lam.body(), tau)) add(out, seen, tau);
          }
        }
      } else {
        for (const Type& a : syn(psi, e.fn())) {
          for (const Type& c : app(psi, a, e.arg())) add(out, seen, c);
        }
      }
      break;
  }
  syn_memo_[key] = out;
  return out;
}

std::vector<Type> Oracle::app(Scope& psi, const Type& a, const Term& e) {
  step();
  std::string key = psi.key() + "#" + ptr_key(e) + "#" + canonical_key(a);
  if (auto it = app_memo_.find(key); it != app_memo_.end()) return it->second;

  std::vector<Type> out;
  std::unordered_map<std::string, bool> seen;
  if (a.is_forall()) {
    if (tyvar_occurrences(a.body(), a.name()) == 0) {
      out = app(psi, a.body(), e);
    } else {
      for (const Type& tau : candidates(psi, nullptr)) {
        for (const Type& c : app(psi, subst_tyvar(a.body(), a.name(), tau), e)) add(out, seen, c);
      }
    }
  } else if (a.is_arrow()) {
    if (chk(psi, e, a.domain())) out.push_back(a.codomain());
  }
  app_memo_[key] = out;
  return out;
}

bool Oracle::subtype(const DeclContext& psi, const Type& a, const Type& b) {
  begin();
  Scope s = open(psi);
  try {
    return sub(s, a, b);
  } catch (const Exhausted&) {
    exhausted_ = true;
    return false;
  }
}

bool Oracle::check(const DeclContext& psi, const Term& e, const Type& a) {
  begin();
  Scope s = open(psi);
  try {
    return chk(s, e, a);
  } catch (const Exhausted&) {
    exhausted_ = true;
    return false;
  }
}

std::vector<Type> Oracle::synth(const DeclContext& psi, const Term& e) {
  begin();
  Scope s = open(psi);
  try {
    return syn(s, e);
  } catch (const Exhausted&) {
    exhausted_ = true;
    return {};
  }
}

std::vector<Type> Oracle::apply(const DeclContext& psi, const Type& a, const Term& e) {
  begin();
  Scope s = open(psi);
  try {
    return app(s, a, e);
  } catch (const Exhausted&) {
    exhausted_ = true;
    return {};
  }
}

bool decl_subtype(const DeclContext& psi, const Type& a, const Type& b, const Universe& u) {
  return Oracle(u).subtype(psi, a, b);
}

bool decl_check(const DeclContext& psi, const Term& e, const Type& a, const Universe& u, Mode mode) {
  return Oracle(u, mode).check(psi, e, a);
}

std::vector<Type> decl_synth(const DeclContext& psi, const Term& e, const Universe& u, Mode mode) {
  return Oracle(u, mode).synth(psi, e);
}

std::vector<Type> decl_apply(const DeclContext& psi, const Term& e, const Type& a, const Universe& u, Mode mode) {
  return Oracle(u, mode).apply(psi, a, e);
}

}  // namespace bidir
