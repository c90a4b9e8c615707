#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cornering/base.hpp"
#include "cornering/print.hpp"
#include "cornering/term.hpp"

namespace cornering {

struct Diagnostic {
  enum class Severity : uint8_t { Error, Warning };
  Severity severity = Severity::Error;
  std::size_t line = 0;
  std::size_t column = 0;
  std::string message;

  std::string str() const {
    return std::to_string(line) + ":" + std::to_string(column) + ": " +
           (severity == Severity::Error ? "error: " : "warning: ") + message;
  }
};

struct ParseError : Error {
  Diagnostic diagnostic;
  explicit ParseError(Diagnostic d) : Error(d.str()), diagnostic(std::move(d)) {}
};

// A parsed input: the signature, rewrite rules, named protocols and
// named terms, everything checked at load.
struct Workspace {
  Signature signature;
  std::vector<BaseRule> rules;
  std::vector<std::pair<std::string, ProtocolWord>> protocols;
  std::vector<std::pair<std::string, TermPtr>> terms;

  const ProtocolWord* find_protocol(const std::string& name) const {
    for (const auto& [n, p] : protocols)
      if (n == name) return &p;
    return nullptr;
  }

  TermPtr find_term(const std::string& name) const {
    for (const auto& [n, t] : terms)
      if (n == name) return t;
    return nullptr;
  }
};

namespace detail {

enum class Tok : uint8_t {
  Ident, Number, LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Semi, Comma, Star, Dot, Pipe, Plus, Amp, Bang, Query, Arrow, DArrow,
  Colon, Eq, Lt, Gt, At, SumOp, ProdOp, CornerUR, CornerLL, CornerUL,
  CornerLR, End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {
    advance();
    tok_ = ahead_tok_;
    advance();
  }

  const Token& peek() const { return tok_; }
  const Token& peek2() const { return ahead_tok_; }

  Token next() {
    Token t = tok_;
    tok_ = ahead_tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError({Diagnostic::Severity::Error, tok_.line, tok_.col, msg});
  }

 private:
  const std::string& src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1, col_ = 1;
  Token tok_;
  Token ahead_tok_;

  char cur() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
  char ahead(std::size_t k = 1) const {
    return pos_ + k < src_.size() ? src_[pos_ + k] : '\0';
  }

  void bump() {
    if (cur() == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  static bool ident_start(char c) {
    return isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
  }
  static bool ident_char(char c) {
    return isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
           c == '\'';
  }

  void advance() {
    for (;;) {
      while (isspace(static_cast<unsigned char>(cur()))) bump();
      if (cur() == '/' && ahead() == '/') {
        while (cur() && cur() != '\n') bump();
        continue;
      }
      break;
    }
    ahead_tok_.line = line_;
    ahead_tok_.col = col_;
    ahead_tok_.text.clear();
    char c = cur();
    if (!c) {
      ahead_tok_.kind = Tok::End;
      return;
    }
    auto two = [&](Tok k, const char* s) {
      ahead_tok_.kind = k;
      ahead_tok_.text = s;
      bump();
      bump();
    };
    auto one = [&](Tok k) {
      ahead_tok_.kind = k;
      ahead_tok_.text = std::string(1, c);
      bump();
    };
    // corner markers and multi-char operators
    if (c == '^' && ahead() == '>') return two(Tok::CornerUR, "^>");
    if (c == '^' && ahead() == '<') return two(Tok::CornerUL, "^<");
    if (c == '_' && ahead() == '>') return two(Tok::CornerLL, "_>");
    if (c == '_' && ahead() == '<') return two(Tok::CornerLR, "_<");
    if (c == '-' && ahead() == '>') return two(Tok::Arrow, "->");
    if (c == '=' && ahead() == '>') return two(Tok::DArrow, "=>");
    if (c == '(' && ahead() == '+' && ahead(2) == ')') {
      ahead_tok_.kind = Tok::SumOp;
      ahead_tok_.text = "(+)";
      bump();
      bump();
      bump();
      return;
    }
    if (c == '(' && ahead() == 'x' && ahead(2) == ')') {
      ahead_tok_.kind = Tok::ProdOp;
      ahead_tok_.text = "(x)";
      bump();
      bump();
      bump();
      return;
    }
    switch (c) {
      case '(': return one(Tok::LParen);
      case ')': return one(Tok::RParen);
      case '{': return one(Tok::LBrace);
      case '}': return one(Tok::RBrace);
      case '[': return one(Tok::LBracket);
      case ']': return one(Tok::RBracket);
      case ';': return one(Tok::Semi);
      case ',': return one(Tok::Comma);
      case '*': return one(Tok::Star);
      case '.': return one(Tok::Dot);
      case '|': return one(Tok::Pipe);
      case '+': return one(Tok::Plus);
      case '&': return one(Tok::Amp);
      case '!': return one(Tok::Bang);
      case '?': return one(Tok::Query);
      case ':': return one(Tok::Colon);
      case '=': return one(Tok::Eq);
      case '<': return one(Tok::Lt);
      case '>': return one(Tok::Gt);
      case '@': return one(Tok::At);
    }
    if (isdigit(static_cast<unsigned char>(c))) {
      ahead_tok_.kind = Tok::Number;
      while (isdigit(static_cast<unsigned char>(cur()))) {
        ahead_tok_.text += cur();
        bump();
      }
      return;
    }
    if (ident_start(c)) {
      ahead_tok_.kind = Tok::Ident;
      while (ident_char(cur())) {
        ahead_tok_.text += cur();
        bump();
      }
      return;
    }
    throw ParseError({Diagnostic::Severity::Error, line_, col_,
                      std::string("unexpected character '") + c + "'"});
  }
};

// Recursive-descent parser for the workspace language.
//   object X;  mor f : A -> B;  rule r : lhs => rhs [drop N];
//   protocol P = ...;  term t = ...;
class Parser {
 public:
  Parser(const std::string& src, Workspace& ws) : lex_(src), ws_(ws) {}

  void run() {
    while (lex_.peek().kind != Tok::End) statement();
  }

 private:
  Lexer lex_;
  Workspace& ws_;

  Token expect(Tok k, const std::string& what) {
    if (lex_.peek().kind != k) lex_.fail("expected " + what);
    return lex_.next();
  }

  void statement() {
    Token head = expect(Tok::Ident, "a declaration keyword");
    if (head.text == "object") {
      Token name = expect(Tok::Ident, "an object name");
      try {
        ws_.signature.add_object(name.text);
      } catch (const Error& e) {
        throw ParseError({Diagnostic::Severity::Error, name.line, name.col, e.what()});
      }
      expect(Tok::Semi, "';'");
    } else if (head.text == "mor") {
      Token name = expect(Tok::Ident, "a morphism name");
      expect(Tok::Colon, "':'");
      ObjectWord dom = object_word();
      expect(Tok::Arrow, "'->'");
      ObjectWord cod = object_word();
      expect(Tok::Semi, "';'");
      try {
        ws_.signature.add_morphism(name.text, dom, cod);
      } catch (const Error& e) {
        throw ParseError({Diagnostic::Severity::Error, name.line, name.col, e.what()});
      }
    } else if (head.text == "rule") {
      Token name = expect(Tok::Ident, "a rule name");
      expect(Tok::Colon, "':'");
      BaseMor lhs = mor_comp_expr();
      expect(Tok::DArrow, "'=>'");
      BaseMor rhs = mor_comp_expr();
      std::optional<std::size_t> drop;
      if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "drop") {
        lex_.next();
        Token n = expect(Tok::Number, "a number");
        drop = static_cast<std::size_t>(std::stoul(n.text));
      }
      expect(Tok::Semi, "';'");
      BaseRule r{name.text, lhs, rhs, drop};
      try {
        check_rule(r);
      } catch (const Error& e) {
        throw ParseError({Diagnostic::Severity::Error, name.line, name.col, e.what()});
      }
      ws_.rules.push_back(std::move(r));
    } else if (head.text == "protocol") {
      Token name = expect(Tok::Ident, "a protocol name");
      expect(Tok::Eq, "'='");
      ProtocolWord p = proto_expr();
      expect(Tok::Semi, "';'");
      ws_.protocols.push_back({name.text, std::move(p)});
    } else if (head.text == "term") {
      Token name = expect(Tok::Ident, "a term name");
      std::optional<CellType> ascribed;
      if (lex_.peek().kind == Tok::Colon) {
        lex_.next();
        ascribed = cell_type();
      }
      expect(Tok::Eq, "'='");
      TermPtr t = term_expr();
      expect(Tok::Semi, "';'");
      if (ascribed && t->type != *ascribed)
        throw ParseError({Diagnostic::Severity::Error, name.line, name.col,
                          "term has type " + cell_str(t->type) +
                              ", declared " + cell_str(*ascribed)});
      ws_.terms.push_back({name.text, std::move(t)});
    } else {
      throw ParseError({Diagnostic::Severity::Error, head.line, head.col,
                        "unknown declaration '" + head.text + "'"});
    }
  }

  // object words: I | name (* name)*
  ObjectWord object_word() {
    ObjectWord w;
    if (lex_.peek().kind == Tok::LParen) {
      lex_.next();
      w = object_word();
      expect(Tok::RParen, "')'");
      return w;
    }
    Token first = expect(Tok::Ident, "an object word");
    if (first.text != "I") {
      check_object(first);
      w.push_back(first.text);
    }
    while (lex_.peek().kind == Tok::Star) {
      lex_.next();
      Token x = expect(Tok::Ident, "an object name");
      if (x.text == "I") continue;
      check_object(x);
      w.push_back(x.text);
    }
    return w;
  }

  void check_object(const Token& t) {
    if (!ws_.signature.has_object(t.text))
      throw ParseError({Diagnostic::Severity::Error, t.line, t.col,
                        "unknown object: " + t.text});
  }

  // base morphisms: mexpr := mtens (';' mtens)* ; mtens := mprim ('*' mprim)*
  static bool is_keyword(const std::string& s) {
    return s == "object" || s == "mor" || s == "rule" || s == "protocol" ||
           s == "term" || s == "drop";
  }

  bool semi_continues_morphism() const {
    const Token& t2 = lex_.peek2();
    if (t2.kind == Tok::LParen) return true;
    if (t2.kind == Tok::Number && t2.text == "1") return true;
    if (t2.kind == Tok::Ident && !is_keyword(t2.text)) return true;
    return false;
  }

  BaseMor mor_comp_expr() {
    BaseMor acc = mor_tens();
    while (lex_.peek().kind == Tok::Semi && semi_continues_morphism()) {
      lex_.next();
      BaseMor next = mor_tens();
      try {
        acc = mor_comp(acc, next);
      } catch (const Error& e) {
        lex_.fail(e.what());
      }
    }
    return acc;
  }

  BaseMor mor_tens() {
    BaseMor acc = mor_prim();
    while (lex_.peek().kind == Tok::Star) {
      lex_.next();
      acc = mor_tensor(acc, mor_prim());
    }
    return acc;
  }

  BaseMor mor_prim() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::LParen) {
      lex_.next();
      BaseMor m = mor_comp_expr();
      expect(Tok::RParen, "')'");
      return m;
    }
    if (t.kind == Tok::Number && t.text == "1") {
      lex_.next();
      expect(Tok::At, "'@'");
      return mor_id(object_word_arg());
    }
    Token name = expect(Tok::Ident, "a morphism name");
    const MorGen* g = ws_.signature.find_morphism(name.text);
    if (!g)
      throw ParseError({Diagnostic::Severity::Error, name.line, name.col,
                        "unknown morphism: " + name.text});
    return mor_gen(*g);
  }

  // object word in argument position: a bare name or (A * B) or I
  ObjectWord object_word_arg() {
    if (lex_.peek().kind == Tok::LParen) {
      lex_.next();
      ObjectWord w = object_word();
      expect(Tok::RParen, "')'");
      return w;
    }
    Token t = expect(Tok::Ident, "an object word");
    if (t.text == "I") return {};
    check_object(t);
    return {t.text};
  }

  // protocols: pexpr := pseq (('+'|'&') pseq)? ; pseq := patom ('.' patom)*
  ProtocolWord proto_expr() {
    ProtocolWord lhs = proto_seq();
    if (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Amp) {
      Tok op = lex_.next().kind;
      ProtocolWord rhs = proto_seq();
      return proto_word(op == Tok::Plus ? proto_plus(lhs, rhs)
                                        : proto_times(lhs, rhs));
    }
    return lhs;
  }

  ProtocolWord proto_seq() {
    ProtocolWord acc = proto_atom();
    while (lex_.peek().kind == Tok::Dot) {
      lex_.next();
      acc = proto_concat(acc, proto_atom());
    }
    return acc;
  }

  ProtocolWord proto_atom() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Number && t.text == "1") {
      lex_.next();
      return {};
    }
    if (t.kind == Tok::LParen) {
      lex_.next();
      // Either a parenthesized protocol or a parenthesized object word
      // followed by ! or ?. Try the object-word reading first: it is a
      // prefix of identifiers joined by '*'.
      // Simplest deterministic rule: parse as protocol; the object-word
      // case is distinguished after ')' by a following ! or ?.
      // To support '(A * B)!' we parse object words eagerly when the
      // content matches 'Ident (* Ident)*' and the closer is ! or ?.
      return proto_group();
    }
    Token name = expect(Tok::Ident, "a protocol atom");
    if (lex_.peek().kind == Tok::Bang || lex_.peek().kind == Tok::Query) {
      Tok mark = lex_.next().kind;
      if (name.text != "I") check_object(name);
      ObjectWord payload = name.text == "I" ? ObjectWord{} : ObjectWord{name.text};
      return proto_word(mark == Tok::Bang ? proto_send(payload)
                                          : proto_recv(payload));
    }
    const ProtocolWord* ref = ws_.find_protocol(name.text);
    if (!ref)
      throw ParseError({Diagnostic::Severity::Error, name.line, name.col,
                        "unknown protocol: " + name.text});
    return *ref;
  }

  // after '(': either an object word closed by ')!' / ')?', or a protocol
  ProtocolWord proto_group() {
    // speculative object-word parse
    std::vector<std::string> names;
    bool word_shape = lex_.peek().kind == Tok::Ident;
    if (word_shape) {
      // can only decide with lookahead over the token stream; parse a
      // protocol expression but remember whether it could be a word
    }
    // Parse as protocol expression; a trailing ')!' or ')?' reinterprets
    // a pure send/recv-free identifier chain, which cannot occur since
    // bare identifiers inside protocols resolve as protocol names. To
    // keep the grammar unambiguous, object words under !/? use the
    // dedicated form below.
    // Look ahead: Ident (Star Ident)* RParen (Bang|Query) is an object
    // word; anything else is a protocol.
    // The lexer has single-token lookahead only, so parse a first Ident
    // and branch on the next token.
    if (lex_.peek().kind == Tok::Ident) {
      Token first = lex_.next();
      if (lex_.peek().kind == Tok::Star || lex_.peek().kind == Tok::RParen) {
        // object word
        ObjectWord w;
        if (first.text != "I") {
          check_object(first);
          w.push_back(first.text);
        }
        while (lex_.peek().kind == Tok::Star) {
          lex_.next();
          Token x = expect(Tok::Ident, "an object name");
          if (x.text == "I") continue;
          check_object(x);
          w.push_back(x.text);
        }
        expect(Tok::RParen, "')'");
        if (lex_.peek().kind == Tok::Bang) {
          lex_.next();
          return proto_word(proto_send(w));
        }
        if (lex_.peek().kind == Tok::Query) {
          lex_.next();
          return proto_word(proto_recv(w));
        }
        // plain parenthesized protocol name? only single-name protocols
        if (w.size() == 1) {
          const ProtocolWord* ref = ws_.find_protocol(first.text);
          if (ref) return *ref;
        }
        lex_.fail("expected '!' or '?' after a parenthesized object word");
      }
      // not a word: continue as a protocol whose first atom starts with
      // this identifier
      ProtocolWord head;
      if (lex_.peek().kind == Tok::Bang || lex_.peek().kind == Tok::Query) {
        Tok mark = lex_.next().kind;
        if (first.text != "I") check_object(first);
        ObjectWord payload =
            first.text == "I" ? ObjectWord{} : ObjectWord{first.text};
        head = proto_word(mark == Tok::Bang ? proto_send(payload)
                                            : proto_recv(payload));
      } else {
        const ProtocolWord* ref = ws_.find_protocol(first.text);
        if (!ref)
          throw ParseError({Diagnostic::Severity::Error, first.line, first.col,
                            "unknown protocol: " + first.text});
        head = *ref;
      }
      // continue the sequence / choice
      while (lex_.peek().kind == Tok::Dot) {
        lex_.next();
        head = proto_concat(head, proto_atom());
      }
      if (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Amp) {
        Tok op = lex_.next().kind;
        ProtocolWord rhs = proto_seq();
        head = proto_word(op == Tok::Plus ? proto_plus(head, rhs)
                                          : proto_times(head, rhs));
      }
      expect(Tok::RParen, "')'");
      return head;
    }
    ProtocolWord inner = proto_expr();
    expect(Tok::RParen, "')'");
    return inner;
  }

  CellType cell_type() {
    expect(Tok::Lt, "'<'");
    ProtocolWord left = proto_expr();
    expect(Tok::Pipe, "'|'");
    ObjectWord top = object_word();
    expect(Tok::Arrow, "'->'");
    ObjectWord bottom = object_word();
    expect(Tok::Pipe, "'|'");
    ProtocolWord right = proto_expr();
    expect(Tok::Gt, "'>'");
    return {left, top, bottom, right};
  }

  // terms:
  //   tsum := tseq (('(+)' | '(x)') tseq)?       non-associative
  //   tseq := tpar ('.' tpar)*                   left-associative
  //   tpar := tprim ('|' tprim)*                 left-associative
  TermPtr term_expr() { return term_expr_cont(nullptr); }

  TermPtr term_expr_cont(TermPtr seed) {
    TermPtr lhs = term_seq_cont(std::move(seed));
    if (lex_.peek().kind == Tok::SumOp || lex_.peek().kind == Tok::ProdOp) {
      Tok op = lex_.next().kind;
      TermPtr rhs = term_seq_cont(nullptr);
      if (lex_.peek().kind == Tok::SumOp || lex_.peek().kind == Tok::ProdOp)
        lex_.fail("choice operators do not associate; parenthesize");
      try {
        return op == Tok::SumOp ? t_sum(lhs, rhs) : t_prod(lhs, rhs);
      } catch (const Error& e) {
        lex_.fail(e.what());
      }
    }
    return lhs;
  }

  TermPtr term_seq_cont(TermPtr seed) {
    TermPtr acc = term_par_cont(std::move(seed));
    while (lex_.peek().kind == Tok::Dot) {
      lex_.next();
      TermPtr next = term_par_cont(nullptr);
      try {
        acc = t_vcomp(acc, next);
      } catch (const Error& e) {
        lex_.fail(e.what());
      }
    }
    return acc;
  }

  TermPtr term_par_cont(TermPtr seed) {
    TermPtr acc = seed ? std::move(seed) : term_prim();
    while (lex_.peek().kind == Tok::Pipe) {
      lex_.next();
      TermPtr next = term_prim();
      try {
        acc = t_hcomp(acc, next);
      } catch (const Error& e) {
        lex_.fail(e.what());
      }
    }
    return acc;
  }

  TermPtr corner_of(Tok k, ObjectWord w) {
    switch (k) {
      case Tok::CornerUR: return t_corner_ur(std::move(w));
      case Tok::CornerLL: return t_corner_ll(std::move(w));
      case Tok::CornerUL: return t_corner_ul(std::move(w));
      case Tok::CornerLR: return t_corner_lr(std::move(w));
      default: lex_.fail("expected a corner marker");
    }
  }

  static bool is_corner(Tok k) {
    return k == Tok::CornerUR || k == Tok::CornerLL || k == Tok::CornerUL ||
           k == Tok::CornerLR;
  }

  TermPtr term_prim() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::LParen) {
      // '(A * B)^>' is a corner on an object word; spot it with the
      // two-token lookahead before committing to a term expression.
      if (lex_.peek2().kind == Tok::Ident) {
        // cannot see past two tokens; parse the group with a seed
        lex_.next();  // '('
        Token first = lex_.next();
        if (lex_.peek().kind == Tok::Star) {
          ObjectWord w;
          if (first.text != "I") {
            check_object(first);
            w.push_back(first.text);
          }
          while (lex_.peek().kind == Tok::Star) {
            lex_.next();
            Token x = expect(Tok::Ident, "an object name");
            if (x.text == "I") continue;
            check_object(x);
            w.push_back(x.text);
          }
          expect(Tok::RParen, "')'");
          return corner_of(lex_.next().kind, std::move(w));
        }
        // a term expression beginning with this identifier
        TermPtr seed = term_prim_from_ident(first);
        TermPtr inner = term_expr_cont(seed);
        expect(Tok::RParen, "')'");
        if (is_corner(lex_.peek().kind)) {
          // '(A)^>' with a single bare name parsed as a term reference
          // cannot happen: corners bind to object words, which resolve
          // in term_prim_from_ident below.
          lex_.fail("corner marker after a term group");
        }
        return inner;
      }
      lex_.next();
      TermPtr inner = term_expr();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.kind == Tok::LBracket) {
      lex_.next();
      BaseMor f = mor_comp_expr();
      expect(Tok::RBracket, "']'");
      return t_base(std::move(f));
    }
    if (t.kind == Tok::Number && t.text == "1") {
      lex_.next();
      expect(Tok::At, "'@'");
      return t_vid(object_word_arg());
    }
    Token name = expect(Tok::Ident, "a term");
    return term_prim_from_ident(name);
  }

  TermPtr term_prim_from_ident(const Token& name) {
    if (name.text == "id" && lex_.peek().kind == Tok::At) {
      lex_.next();
      return t_hid(proto_arg());
    }
    if ((name.text == "inj0" || name.text == "inj1" || name.text == "proj0" ||
         name.text == "proj1") &&
        lex_.peek().kind == Tok::At) {
      lex_.next();
      expect(Tok::LBrace, "'{'");
      ProtocolWord u = proto_expr();
      expect(Tok::Comma, "','");
      ProtocolWord w = proto_expr();
      expect(Tok::RBrace, "'}'");
      int i = name.text.back() == '0' ? 0 : 1;
      return name.text[0] == 'i' ? t_inj(i, u, w) : t_proj(i, u, w);
    }
    // corner on a bare object name?
    if (ws_.signature.has_object(name.text) || name.text == "I") {
      ObjectWord w = name.text == "I" ? ObjectWord{} : ObjectWord{name.text};
      switch (lex_.peek().kind) {
        case Tok::CornerUR: lex_.next(); return t_corner_ur(w);
        case Tok::CornerLL: lex_.next(); return t_corner_ll(w);
        case Tok::CornerUL: lex_.next(); return t_corner_ul(w);
        case Tok::CornerLR: lex_.next(); return t_corner_lr(w);
        default: break;
      }
    }
    TermPtr ref = ws_.find_term(name.text);
    if (!ref)
      throw ParseError({Diagnostic::Severity::Error, name.line, name.col,
                        "unknown term: " + name.text});
    return ref;
  }

  // protocol in argument position after '@': '1', an atom, a name, or
  // a parenthesized protocol
  ProtocolWord proto_arg() { return proto_atom(); }

};

}  // namespace detail

inline Workspace parse_workspace(const std::string& text) {
  Workspace ws;
  detail::Parser p(text, ws);
  p.run();
  return ws;
}

// Multi-factor corners print as '(A * B)^>'; the parser handles them by
// re-reading a parenthesized term group that consists only of an object
// word. This helper parses a standalone term given a workspace.
inline TermPtr parse_term(const std::string& text, Workspace& ws) {
  Workspace tmp = ws;
  std::string src = "term __main = " + text + ";";
  detail::Parser p(src, tmp);
  p.run();
  return tmp.find_term("__main");
}

}  // namespace cornering
