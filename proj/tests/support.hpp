#pragma once

#include <functional>
#include <regex>
#include <string>
#include <vector>

#include "bidir/context.hpp"
#include "bidir/surface.hpp"
#include "bidir/syntax.hpp"

namespace bidir::test {

// Like parse_type, but `?name` denotes an existential.
inline Type ty(const std::string& text) {
  static const std::regex hat(R"(\?([a-z][a-z0-9_]*))");
  Type parsed = parse_type(std::regex_replace(text, hat, "hat_$1"));
  std::function<Type(const Type&)> lift = [&](const Type& t) -> Type {
    switch (t.kind()) {
      case Type::Kind::Var:
        return t.name().starts_with("hat_") ? Type::exists(t.name().substr(4)) : t;
      case Type::Kind::Forall:
        return Type::forall(t.name(), lift(t.body()));
      case Type::Kind::Arrow:
        return Type::arrow(lift(t.domain()), lift(t.codomain()));
      default:
        return t;
    }
  };
  return lift(parsed);
}

inline Term tm(const std::string& text) { return parse_term(text); }

// Entries in the trace notation: `a`, `?a`, `?a = T`, `x : T`, `>?a`.
inline Context ctx(const std::vector<std::string>& entries) {
  std::vector<Entry> out;
  for (const std::string& e : entries) {
    if (e.starts_with(">?")) {
      out.push_back(Entry::marker(e.substr(2)));
    } else if (e.starts_with("?")) {
      auto eq = e.find('=');
      if (eq == std::string::npos) {
        out.push_back(Entry::unsolved(e.substr(1)));
      } else {
        std::string name = e.substr(1, e.find_first_of(" =") - 1);
        out.push_back(Entry::solved(name, ty(e.substr(eq + 1))));
      }
    } else if (auto colon = e.find(':'); colon != std::string::npos) {
      std::string name = e.substr(0, e.find_first_of(" :"));
      out.push_back(Entry::term_var(name, ty(e.substr(colon + 1))));
    } else {
      out.push_back(Entry::universal(e));
    }
  }
  return Context(std::move(out));
}

}  // namespace bidir::test
