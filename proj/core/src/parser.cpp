#include "stab/parser.hpp"

#include <cctype>
#include <vector>

#include "stab/errors.hpp"

namespace stab {

namespace {

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, col); }

  void bump(size_t n = 1) {
    for (size_t i = 0; i < n && pos < src.size(); ++i) {
      if (src[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }

  void skip_ws() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '-' && pos + 1 < src.size() && src[pos + 1] == '-') {
        while (pos < src.size() && src[pos] != '\n') bump();
      } else if (isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  bool eof() {
    skip_ws();
    return pos >= src.size();
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  bool try_eat(char c) {
    if (peek() == c) {
      bump();
      return true;
    }
    return false;
  }

  void expect(char c, const std::string& what) {
    if (!try_eat(c)) fail("expected '" + std::string(1, c) + "' " + what);
  }

  bool at_lambda() {
    skip_ws();
    if (pos < src.size() && src[pos] == '\\') return true;
    // UTF-8 lambda
    return pos + 1 < src.size() && static_cast<unsigned char>(src[pos]) == 0xCE &&
           static_cast<unsigned char>(src[pos + 1]) == 0xBB;
  }

  void eat_lambda() {
    skip_ws();
    if (src[pos] == '\\') {
      bump();
    } else {
      bump(2);
    }
  }

  static bool ident_start(char c) {
    return isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  // Returns the identifier at the cursor without consuming it, empty if none.
  std::string peek_ident() {
    skip_ws();
    if (pos >= src.size() || !ident_start(src[pos])) return "";
    size_t end = pos;
    while (end < src.size() && ident_char(src[end])) ++end;
    if (end < src.size() && src[end] == '#') {
      size_t d = end + 1;
      while (d < src.size() && isdigit(static_cast<unsigned char>(src[d]))) ++d;
      if (d > end + 1) end = d;
    }
    return src.substr(pos, end - pos);
  }

  std::string eat_ident(const std::string& what) {
    std::string id = peek_ident();
    if (id.empty()) fail("expected identifier " + what);
    bump(id.size());
    return id;
  }

  bool try_keyword(const std::string& kw) {
    if (peek_ident() == kw) {
      bump(kw.size());
      return true;
    }
    return false;
  }
};

bool is_keyword(const std::string& id) {
  return id == "if" || id == "then" || id == "else" || id == "forall";
}

Term parse_term_rec(Lexer& lx);

Term parse_atom(Lexer& lx) {
  char c = lx.peek();
  if (c == '0') {
    lx.bump();
    return lit(0);
  }
  if (c == '1') {
    lx.bump();
    return lit(1);
  }
  if (c == '(') {
    lx.bump();
    Term t = parse_term_rec(lx);
    lx.expect(')', "to close parenthesis");
    return t;
  }
  std::string id = lx.peek_ident();
  if (!id.empty() && !is_keyword(id)) {
    lx.bump(id.size());
    return var(id);
  }
  lx.fail("expected a term");
}

bool at_atom(Lexer& lx) {
  char c = lx.peek();
  if (c == '0' || c == '1' || c == '(') return true;
  std::string id = lx.peek_ident();
  return !id.empty() && !is_keyword(id);
}

Term parse_term_rec(Lexer& lx) {
  if (lx.at_lambda()) {
    lx.eat_lambda();
    std::vector<std::string> binders;
    binders.push_back(lx.eat_ident("after lambda"));
    while (lx.peek() != '.') binders.push_back(lx.eat_ident("in binder list"));
    lx.expect('.', "after binders");
    Term body = parse_term_rec(lx);
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = lam(*it, body);
    return body;
  }
  if (lx.try_keyword("if")) {
    Term test = parse_term_rec(lx);
    if (!lx.try_keyword("then")) lx.fail("expected 'then'");
    Term th = parse_term_rec(lx);
    if (!lx.try_keyword("else")) lx.fail("expected 'else'");
    Term el = parse_term_rec(lx);
    return if_(test, th, el);
  }
  Term t = parse_atom(lx);
  while (true) {
    if (lx.at_lambda()) {
      // trailing abstraction argument must be parenthesised; treat a bare one
      // as the final argument of nothing -- reject for clarity
      lx.fail("abstraction in argument position must be parenthesised");
    }
    if (!at_atom(lx)) break;
    t = app(t, parse_atom(lx));
  }
  return t;
}

Type parse_type_rec(Lexer& lx);

Type parse_type_atom(Lexer& lx) {
  char c = lx.peek();
  if (c == '!') {
    lx.bump();
    return bang(parse_type_atom(lx));
  }
  if (c == '(') {
    lx.bump();
    Type t = parse_type_rec(lx);
    lx.expect(')', "to close parenthesis");
    return t;
  }
  if (lx.try_keyword("forall")) {
    std::string a = lx.eat_ident("after forall");
    lx.expect('.', "after forall binder");
    Type body = parse_type_rec(lx);
    if (!is_linear(body)) lx.fail("forall body must be linear");
    return forall(a, body);
  }
  std::string id = lx.peek_ident();
  if (id == "B") {
    lx.bump(1);
    return ground();
  }
  if (!id.empty() && !is_keyword(id)) {
    if (!islower(static_cast<unsigned char>(id[0])))
      lx.fail("type variables are lowercase identifiers");
    lx.bump(id.size());
    return tvar(id);
  }
  lx.fail("expected a type");
}

Type parse_type_rec(Lexer& lx) {
  Type lhs = parse_type_atom(lx);
  lx.skip_ws();
  if (lx.pos + 1 < lx.src.size() && lx.src[lx.pos] == '-' && lx.src[lx.pos + 1] == '>') {
    lx.bump(2);
    Type rhs = parse_type_rec(lx);
    if (!is_linear(rhs)) lx.fail("arrow codomain must be linear");
    return arrow(lhs, rhs);
  }
  return lhs;
}

}  // namespace

Term parse_term(const std::string& src) {
  Lexer lx(src);
  Term t = parse_term_rec(lx);
  if (!lx.eof()) lx.fail("trailing input after term");
  return t;
}

Type parse_type(const std::string& src) {
  Lexer lx(src);
  Type t = parse_type_rec(lx);
  if (!lx.eof()) lx.fail("trailing input after type");
  return t;
}

}  // namespace stab
