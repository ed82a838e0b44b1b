#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bidir/syntax.hpp"

namespace bidir {

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, OpenAnnotation };

  ParseError(Kind kind, SourceSpan span, const std::string& message)
      : std::runtime_error(message), kind_(kind), span_(span) {}

  Kind kind() const { return kind_; }
  SourceSpan span() const { return span_; }

 private:
  Kind kind_;
  SourceSpan span_;
};

// Grammar:
//   expr     ::= '\' ident '.' expr | appexpr
//   appexpr  ::= atom {atom}
//   atom     ::= '()' | ident | '(' expr ')' | '(' expr ':' type ')'
//   type     ::= 'forall' ident '.' type | arrow
//   arrow    ::= atomtype ['->' type]
//   atomtype ::= '1' | 'Unit' | ident | '(' type ')'
// `--` starts a line comment. Annotations must be closed types.
Term parse_term(std::string_view text);

/// Parses a type; free type variables are allowed.
Type parse_type(std::string_view text);

/// Parses a type and rejects free type variables.
Type parse_closed_type(std::string_view text);

struct TermDecl {
  std::string name;
  Type type;
};

/// `x : A; y : B` with closed types. Empty segments are skipped.
std::vector<TermDecl> parse_declarations(std::string_view text);

std::string print_type(const Type& a);
std::string print_term(const Term& e);

}  // namespace bidir
