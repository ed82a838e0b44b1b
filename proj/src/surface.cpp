#include "bidir/surface.hpp"

#include <cctype>
#include <optional>

namespace bidir {

namespace {

enum class Tok { Backslash, Dot, LParen, RParen, Colon, Arrow, Forall, UnitType, Ident, Semicolon, End };

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Backslash: return "'\\'";
    case Tok::Dot: return "'.'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Colon: return "':'";
    case Tok::Arrow: return "'->'";
    case Tok::Forall: return "'forall'";
    case Tok::UnitType: return "unit type";
    case Tok::Ident: return "identifier";
    case Tok::Semicolon: return "';'";
    case Tok::End: return "end of input";
  }
  return "token";
}

bool ident_start(char c) { return c >= 'a' && c <= 'z'; }
bool ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    std::size_t start = i;
    auto single = [&](Tok t) {
      out.push_back({t, std::string(1, c), {start, start + 1}});
      ++i;
    };
    switch (c) {
      case '\\': single(Tok::Backslash); continue;
      case '.': single(Tok::Dot); continue;
      case '(': single(Tok::LParen); continue;
      case ')': single(Tok::RParen); continue;
      case ':': single(Tok::Colon); continue;
      case ';': single(Tok::Semicolon); continue;
      case '1': single(Tok::UnitType); continue;
      default: break;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({Tok::Arrow, "->", {start, start + 2}});
      i += 2;
      continue;
    }
    if (ident_start(c) || c == 'U') {
      ++i;
      while (i < text.size() && (ident_char(text[i]) || std::isalpha(static_cast<unsigned char>(text[i])))) ++i;
      std::string word(text.substr(start, i - start));
      if (word == "forall") {
        out.push_back({Tok::Forall, word, {start, i}});
      } else if (word == "Unit") {
        out.push_back({Tok::UnitType, word, {start, i}});
      } else {
        bool ok = ident_start(word[0]);
        for (char w : word) ok = ok && ident_char(w);
        if (!ok) throw ParseError(ParseError::Kind::Syntax, {start, i}, "invalid identifier '" + word + "'");
        out.push_back({Tok::Ident, word, {start, i}});
      }
      continue;
    }
    throw ParseError(ParseError::Kind::Syntax, {start, start + 1},
                     std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", {text.size(), text.size()}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(lex(text)) {}

  Term term_only() {
    Term e = expr();
    expect(Tok::End);
    return e;
  }

  Type type_only() {
    Type t = type();
    expect(Tok::End);
    return t;
  }

  std::vector<TermDecl> declarations() {
    std::vector<TermDecl> out;
    while (!at(Tok::End)) {
      if (accept(Tok::Semicolon)) continue;
      Token name = expect(Tok::Ident);
      expect(Tok::Colon);
      SourceSpan type_start = peek().span;
      Type t = type();
      require_closed(t, {type_start.start, previous_end_});
      out.push_back({name.text, t});
      if (!at(Tok::End)) expect(Tok::Semicolon);
    }
    return out;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool at(Tok t) const { return peek().kind == t; }

  Token advance() {
    Token t = tokens_[pos_];
    if (t.kind != Tok::End) ++pos_;
    previous_end_ = t.span.end;
    return t;
  }

  bool accept(Tok t) {
    if (!at(t)) return false;
    advance();
    return true;
  }

  Token expect(Tok t) {
    if (!at(t)) {
      throw ParseError(ParseError::Kind::Syntax, peek().span,
                       std::string("expected ") + describe(t) + ", found " + describe(peek().kind));
    }
    return advance();
  }

  bool atom_start() const {
    return at(Tok::Ident) || at(Tok::LParen);
  }

  Term expr() {
    if (at(Tok::Backslash)) {
      std::size_t start = advance().span.start;
      Token x = expect(Tok::Ident);
      expect(Tok::Dot);
      Term body = expr();
      return Term::lam(x.text, body, {start, previous_end_});
    }
    return app_expr();
  }

  Term app_expr() {
    std::size_t start = peek().span.start;
    Term head = atom();
    while (atom_start()) {
      Term arg = atom();
      head = Term::app(head, arg, {start, previous_end_});
    }
    return head;
  }

  Term atom() {
    if (at(Tok::Ident)) {
      Token x = advance();
      return Term::var(x.text, x.span);
    }
    if (at(Tok::LParen)) {
      std::size_t start = advance().span.start;
      if (at(Tok::RParen)) {
        advance();
        return Term::unit({start, previous_end_});
      }
      Term inner = expr();
      if (accept(Tok::Colon)) {
        std::size_t type_start = peek().span.start;
        Type t = type();
        SourceSpan type_span{type_start, previous_end_};
        expect(Tok::RParen);
        require_closed(t, type_span);
        return Term::anno(inner, t, {start, previous_end_});
      }
      expect(Tok::RParen);
      return inner;
    }
    throw ParseError(ParseError::Kind::Syntax, peek().span,
                     std::string("expected expression, found ") + describe(peek().kind));
  }

  Type type() {
    if (accept(Tok::Forall)) {
      Token a = expect(Tok::Ident);
      expect(Tok::Dot);
      return Type::forall(a.text, type());
    }
    Type left = atom_type();
    if (accept(Tok::Arrow)) return Type::arrow(left, type());
    return left;
  }

  Type atom_type() {
    if (accept(Tok::UnitType)) return Type::unit();
    if (at(Tok::Ident)) return Type::var(advance().text);
    if (accept(Tok::LParen)) {
      Type t = type();
      expect(Tok::RParen);
      return t;
    }
    throw ParseError(ParseError::Kind::Syntax, peek().span,
                     std::string("expected type, found ") + describe(peek().kind));
  }

  static void require_closed(const Type& t, SourceSpan span) {
    NameSet free = free_tyvars(t);
    if (!free.empty()) {
      throw ParseError(ParseError::Kind::OpenAnnotation, span,
                       "annotation mentions unbound type variable '" + *free.begin() + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t previous_end_ = 0;
};

// Printing precedence: 0 = anywhere, 1 = left of an arrow.
void print_type_into(const Type& a, int prec, std::string& out) {
  switch (a.kind()) {
    case Type::Kind::Unit:
      out += '1';
      return;
    case Type::Kind::Var:
      out += a.name();
      return;
    case Type::Kind::Exists:
      out += '?';
      out += a.name();
      return;
    case Type::Kind::Forall:
      if (prec > 0) out += '(';
      out += "forall ";
      out += a.name();
      out += ". ";
      print_type_into(a.body(), 0, out);
      if (prec > 0) out += ')';
      return;
    case Type::Kind::Arrow:
      if (prec > 0) out += '(';
      print_type_into(a.domain(), 1, out);
      out += " -> ";
      print_type_into(a.codomain(), 0, out);
      if (prec > 0) out += ')';
      return;
  }
}

// 0 = expression, 1 = application head, 2 = application argument.
void print_term_into(const Term& e, int prec, std::string& out) {
  switch (e.kind()) {
    case Term::Kind::Unit:
      out += "()";
      return;
    case Term::Kind::Var:
      out += e.name();
      return;
    case Term::Kind::Lam:
      if (prec > 0) out += '(';
      out += '\\';
      out += e.name();
      out += ". ";
      print_term_into(e.body(), 0, out);
      if (prec > 0) out += ')';
      return;
    case Term::Kind::App:
      if (prec > 1) out += '(';
      print_term_into(e.fn(), 1, out);
      out += ' ';
      print_term_into(e.arg(), 2, out);
      if (prec > 1) out += ')';
      return;
    case Term::Kind::Anno:
      out += '(';
      print_term_into(e.subject(), 0, out);
      out += " : ";
      print_type_into(e.ascribed(), 0, out);
      out += ')';
      return;
  }
}

}  // namespace

Term parse_term(std::string_view text) { return Parser(text).term_only(); }

Type parse_type(std::string_view text) { return Parser(text).type_only(); }

Type parse_closed_type(std::string_view text) {
  Type t = parse_type(text);
  NameSet free = free_tyvars(t);
  if (!free.empty()) {
    throw ParseError(ParseError::Kind::OpenAnnotation, {0, text.size()},
                     "type mentions unbound type variable '" + *free.begin() + "'");
  }
  return t;
}

std::vector<TermDecl> parse_declarations(std::string_view text) { return Parser(text).declarations(); }

std::string print_type(const Type& a) {
  std::string out;
  print_type_into(a, 0, out);
  return out;
}

std::string print_term(const Term& e) {
  std::string out;
  print_term_into(e, 0, out);
  return out;
}

}  // namespace bidir
