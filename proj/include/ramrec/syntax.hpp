// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ramrec/error.hpp"
#include "ramrec/type_print.hpp"
#include "ramrec/types.hpp"

namespace ramrec {

enum class Calculus : std::uint8_t { S1, RS1, RS1_1 };

inline const char* calculus_name(Calculus c) {
  switch (c) {
    case Calculus::S1: return "s1";
    case Calculus::RS1: return "rs1";
    case Calculus::RS1_1: return "rs1.1";
  }
  return "s1";
}

// ---------------------------------------------------------------------------
// Tokens

struct Token {
  enum Kind { Ident, Number, Punct, Pragma, End } kind = End;
  std::string text;
  std::uint64_t number = 0;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> tokenize() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.pos = {line_, col_};
      if (i_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[i_];
      if (c == '%' && at_line_start_) {
        std::size_t start = i_;
        while (i_ < src_.size() && src_[i_] != '\n') advance();
        t.kind = Token::Pragma;
        t.text = std::string(src_.substr(start, i_ - start));
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = i_;
        while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_' || src_[i_] == '\''))
          advance();
        t.kind = Token::Ident;
        t.text = std::string(src_.substr(start, i_ - start));
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = i_;
        while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) advance();
        t.kind = Token::Number;
        t.text = std::string(src_.substr(start, i_ - start));
        if (t.text.size() > 18) fail(ErrorCode::ParseError, "numeral too large", t.pos);
        t.number = std::stoull(t.text);
      } else {
        static constexpr std::string_view two[] = {"=>", "::", "->"};
        bool matched = false;
        for (auto p : two) {
          if (src_.substr(i_, 2) == p) {
            t.text = std::string(p);
            advance();
            advance();
            matched = true;
            break;
          }
        }
        if (!matched) {
          if (std::string_view("()[],:.|=*+").find(c) == std::string_view::npos)
            fail(ErrorCode::ParseError, std::string("unexpected character '") + c + "'", t.pos);
          t.text = std::string(1, c);
          advance();
        }
        t.kind = Token::Punct;
      }
      at_line_start_ = false;
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
      at_line_start_ = true;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip_space() {
    for (;;) {
      while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) advance();
      if (src_.substr(i_, 2) == "--") {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
      } else if (src_.substr(i_, 2) == "(*") {
        SourcePos start{line_, col_};
        int depth = 0;
        do {
          if (i_ >= src_.size()) fail(ErrorCode::ParseError, "unterminated comment", start);
          if (src_.substr(i_, 2) == "(*") {
            ++depth;
            advance();
          } else if (src_.substr(i_, 2) == "*)") {
            --depth;
            advance();
          }
          advance();
        } while (depth > 0);
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
  bool at_line_start_ = true;
};

// ---------------------------------------------------------------------------
// Surface syntax

struct TypeExpr;
using TypeExprPtr = std::shared_ptr<const TypeExpr>;

struct TypeExpr {
  enum Kind { Unit, Name, Sum, Prod, Safe, Mu } kind = Unit;
  std::string name;  // Name, or the bound variable of Mu
  TypeExprPtr l, r;
  SourcePos pos;
};

struct Pattern {
  enum Kind { Var, Wild, Unit, Tuple } kind = Wild;
  std::string name;
  std::vector<Pattern> items;
};

enum class PrimOp : std::uint8_t { Fst, Snd, Inl, Inr, Con, Des, SCon, SDes, ToSafe, ToNorm, CS };

struct SExpr;
using SExprPtr = std::shared_ptr<const SExpr>;

struct Alt {
  enum Kind { Inl, Inr, Ctor, SafeCtor, Wild } kind = Wild;
  std::string ctor;
  std::optional<Pattern> pattern;
  SExprPtr body;
  SourcePos pos;
};

struct SExpr {
  enum Kind { Var, SafeCtor, Num, Unit, Tuple, List, Cons, Fn, Let, App, Prim, Fold, Case } kind = Unit;
  std::string name;  // Var, SafeCtor
  std::uint64_t number = 0;
  PrimOp op = PrimOp::Fst;
  Pattern pattern;                  // Fn, Let
  TypeExprPtr type;                 // Fn/Let annotation, Prim/Fold datatype
  std::vector<SExprPtr> items;      // Tuple, List, Cons (head, tail), App (fn, arg), Let (bound, body),
                                    // Fn (body), Prim (arg), Fold (step, arg), Case (subject)
  std::vector<Alt> alts;            // Case
  SourcePos pos;
};

struct CtorDecl {
  std::string name;
  TypeExprPtr arg;  // null for nullary constructors
  SourcePos pos;
};

struct DatatypeDecl {
  std::string name;
  std::vector<CtorDecl> ctors;
  SourcePos pos;
};

struct DefDecl {
  std::string name;
  SExprPtr body;
  SourcePos pos;
};

struct SurfaceProgram {
  Calculus level = Calculus::S1;
  std::vector<DatatypeDecl> datatypes;
  std::vector<DefDecl> defs;
  std::optional<DefDecl> main;
  std::unordered_set<std::string> identifiers;  // every identifier in the source
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).tokenize()) {}

  SurfaceProgram program() {
    SurfaceProgram p;
    if (peek().kind == Token::Pragma) p.level = pragma(next());
    while (peek().kind != Token::End) {
      const Token& t = peek();
      if (is_kw("datatype")) {
        p.datatypes.push_back(datatype());
      } else if (is_kw("def")) {
        p.defs.push_back(def());
      } else if (is_kw("main")) {
        if (p.main) fail(ErrorCode::DuplicateName, "duplicate main", t.pos);
        SourcePos pos = next().pos;
        expect("=");
        p.main = DefDecl{"main", expr(), pos};
      } else if (t.kind == Token::Pragma) {
        fail(ErrorCode::ParseError, "pragma must be the first line", t.pos);
      } else {
        fail(ErrorCode::ParseError, "expected 'datatype', 'def' or 'main', found '" + t.text + "'", t.pos);
      }
    }
    for (const Token& t : toks_)
      if (t.kind == Token::Ident) p.identifiers.insert(t.text);
    return p;
  }

  TypeExprPtr type_only() {
    TypeExprPtr t = type();
    if (peek().kind != Token::End) fail(ErrorCode::ParseError, "trailing input after type", peek().pos);
    return t;
  }

  SExprPtr expr_only() {
    SExprPtr e = expr();
    if (peek().kind != Token::End) fail(ErrorCode::ParseError, "trailing input after expression", peek().pos);
    return e;
  }

 private:
  static Calculus pragma(const Token& t) {
    std::string s = t.text;
    std::string_view rest(s);
    if (rest.substr(0, 9) != "%calculus") fail(ErrorCode::ParseError, "unknown pragma", t.pos);
    rest.remove_prefix(9);
    while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front()))) rest.remove_prefix(1);
    while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.remove_suffix(1);
    if (rest == "s1") return Calculus::S1;
    if (rest == "rs1") return Calculus::RS1;
    if (rest == "rs1.1") return Calculus::RS1_1;
    fail(ErrorCode::ParseError, "unknown calculus '" + std::string(rest) + "'", t.pos);
  }

  static bool keyword(std::string_view s) {
    static constexpr std::string_view kws[] = {"datatype", "def",  "main", "fn",    "let",  "in",     "case",
                                               "of",       "fold", "fst",  "snd",   "inl",  "inr",    "con",
                                               "des",      "scon", "sdes", "toSafe", "toNorm", "cs", "unit",
                                               "safe",     "mu"};
    for (auto k : kws)
      if (s == k) return true;
    return false;
  }

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool is_punct(std::string_view p, std::size_t k = 0) const { return peek(k).kind == Token::Punct && peek(k).text == p; }
  bool is_kw(std::string_view w, std::size_t k = 0) const { return peek(k).kind == Token::Ident && peek(k).text == w; }
  bool accept(std::string_view p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }
  void expect(std::string_view p) {
    if (!accept(p)) fail(ErrorCode::ParseError, "expected '" + std::string(p) + "', found '" + describe(peek()) + "'", peek().pos);
  }
  void expect_kw(std::string_view w) {
    if (!is_kw(w)) fail(ErrorCode::ParseError, "expected '" + std::string(w) + "', found '" + describe(peek()) + "'", peek().pos);
    next();
  }
  static std::string describe(const Token& t) { return t.kind == Token::End ? "end of input" : t.text; }

  std::string ident() {
    const Token& t = peek();
    if (t.kind != Token::Ident || keyword(t.text))
      fail(ErrorCode::ParseError, "expected identifier, found '" + describe(t) + "'", t.pos);
    return next().text;
  }

  DatatypeDecl datatype() {
    DatatypeDecl d;
    d.pos = next().pos;
    d.name = ident();
    expect("=");
    accept("|");
    do {
      CtorDecl c;
      c.pos = peek().pos;
      c.name = ident();
      if (is_kw("of")) {
        next();
        c.arg = type();
      }
      d.ctors.push_back(std::move(c));
    } while (accept("|"));
    return d;
  }

  DefDecl def() {
    DefDecl d;
    d.pos = next().pos;
    d.name = ident();
    if (is_punct("=")) {
      next();
      d.body = expr();
      return d;
    }
    auto fn = std::make_shared<SExpr>();
    fn->kind = SExpr::Fn;
    fn->pos = peek().pos;
    param(*fn);
    expect("=");
    fn->items.push_back(expr());
    d.body = fn;
    return d;
  }

  // '(' pattern ':' type ')' | IDENT | '_'
  void param(SExpr& fn) {
    if (is_punct("(") && !is_punct(")", 1)) {
      next();
      fn.pattern = pattern();
      if (accept(":")) fn.type = type();
      expect(")");
    } else {
      fn.pattern = pattern();
    }
  }

  Pattern pattern() {
    Pattern p;
    if (accept("(")) {
      if (accept(")")) {
        p.kind = Pattern::Unit;
        return p;
      }
      p.kind = Pattern::Tuple;
      p.items.push_back(pattern());
      while (accept(",")) p.items.push_back(pattern());
      expect(")");
      if (p.items.size() == 1) return p.items.front();
      return p;
    }
    std::string name = ident();
    if (name == "_") {
      p.kind = Pattern::Wild;
    } else {
      p.kind = Pattern::Var;
      p.name = std::move(name);
    }
    return p;
  }

  TypeExprPtr type() {
    TypeExprPtr l = prod_type();
    if (is_punct("+")) {
      SourcePos pos = next().pos;
      return make_type(TypeExpr::Sum, l, type(), pos);
    }
    return l;
  }

  TypeExprPtr prod_type() {
    TypeExprPtr l = unary_type();
    if (is_punct("*")) {
      SourcePos pos = next().pos;
      return make_type(TypeExpr::Prod, l, prod_type(), pos);
    }
    return l;
  }

  TypeExprPtr unary_type() {
    const Token& t = peek();
    auto out = std::make_shared<TypeExpr>();
    out->pos = t.pos;
    if (is_kw("safe")) {
      next();
      out->kind = TypeExpr::Safe;
      out->l = unary_type();
    } else if (is_kw("unit")) {
      next();
      out->kind = TypeExpr::Unit;
    } else if (is_kw("mu")) {
      next();
      out->kind = TypeExpr::Mu;
      out->name = ident();
      expect(".");
      out->l = type();
    } else if (accept("(")) {
      TypeExprPtr inner = type();
      expect(")");
      return inner;
    } else {
      out->kind = TypeExpr::Name;
      out->name = ident();
    }
    return out;
  }

  static TypeExprPtr make_type(TypeExpr::Kind k, TypeExprPtr l, TypeExprPtr r, SourcePos pos) {
    auto t = std::make_shared<TypeExpr>();
    t->kind = k;
    t->l = std::move(l);
    t->r = std::move(r);
    t->pos = pos;
    return t;
  }

  SExprPtr expr() {
    const Token& t = peek();
    if (is_kw("fn")) {
      next();
      auto fn = std::make_shared<SExpr>();
      fn->kind = SExpr::Fn;
      fn->pos = t.pos;
      param(*fn);
      expect("=>");
      fn->items.push_back(expr());
      return fn;
    }
    if (is_kw("let")) {
      next();
      auto let = std::make_shared<SExpr>();
      let->kind = SExpr::Let;
      let->pos = t.pos;
      let->pattern = pattern();
      if (accept(":")) let->type = type();
      expect("=");
      let->items.push_back(expr());
      expect_kw("in");
      let->items.push_back(expr());
      return let;
    }
    if (is_kw("case")) {
      next();
      auto c = std::make_shared<SExpr>();
      c->kind = SExpr::Case;
      c->pos = t.pos;
      c->items.push_back(expr());
      expect_kw("of");
      accept("|");
      do c->alts.push_back(alt());
      while (accept("|"));
      return c;
    }
    SExprPtr head = app();
    if (is_punct("::")) {
      SourcePos pos = next().pos;
      auto cons = std::make_shared<SExpr>();
      cons->kind = SExpr::Cons;
      cons->pos = pos;
      cons->items = {head, expr()};
      return cons;
    }
    return head;
  }

  Alt alt() {
    Alt a;
    a.pos = peek().pos;
    if (is_kw("inl") || is_kw("inr")) {
      a.kind = next().text == "inl" ? Alt::Inl : Alt::Inr;
      a.pattern = pattern();
    } else if (is_kw("S") && is_punct(".", 1)) {
      next();
      next();
      a.kind = Alt::SafeCtor;
      a.ctor = ident();
      if (!is_punct("=>")) a.pattern = pattern();
    } else {
      std::string name = ident();
      if (name == "_") {
        a.kind = Alt::Wild;
      } else {
        a.kind = Alt::Ctor;
        a.ctor = std::move(name);
        if (!is_punct("=>")) a.pattern = pattern();
      }
    }
    expect("=>");
    a.body = expr();
    return a;
  }

  static std::optional<PrimOp> prim(std::string_view s) {
    if (s == "fst") return PrimOp::Fst;
    if (s == "snd") return PrimOp::Snd;
    if (s == "inl") return PrimOp::Inl;
    if (s == "inr") return PrimOp::Inr;
    if (s == "con") return PrimOp::Con;
    if (s == "des") return PrimOp::Des;
    if (s == "scon") return PrimOp::SCon;
    if (s == "sdes") return PrimOp::SDes;
    if (s == "toSafe") return PrimOp::ToSafe;
    if (s == "toNorm") return PrimOp::ToNorm;
    if (s == "cs") return PrimOp::CS;
    return std::nullopt;
  }

  static bool needs_type(PrimOp op) {
    return op == PrimOp::Con || op == PrimOp::Des || op == PrimOp::SCon || op == PrimOp::SDes || op == PrimOp::CS;
  }

  bool starts_atom() const {
    const Token& t = peek();
    if (t.kind == Token::Number) return true;
    if (t.kind == Token::Punct) return t.text == "(" || t.text == "[";
    return t.kind == Token::Ident && !keyword(t.text) && t.text != "_";
  }

  SExprPtr app() {
    const Token& t = peek();
    if (is_kw("fold")) {
      next();
      auto f = std::make_shared<SExpr>();
      f->kind = SExpr::Fold;
      f->pos = t.pos;
      expect("[");
      f->type = type();
      expect("]");
      f->items.push_back(atom());
      f->items.push_back(atom());
      return f;
    }
    if (t.kind == Token::Ident) {
      if (auto op = prim(t.text)) {
        next();
        auto p = std::make_shared<SExpr>();
        p->kind = SExpr::Prim;
        p->op = *op;
        p->pos = t.pos;
        if (needs_type(*op)) {
          expect("[");
          p->type = type();
          expect("]");
        }
        p->items.push_back(atom());
        return p;
      }
    }
    SExprPtr head = atom();
    if (!starts_atom()) return head;
    auto a = std::make_shared<SExpr>();
    a->kind = SExpr::App;
    a->pos = head->pos;
    a->items = {head, atom()};
    if (starts_atom()) fail(ErrorCode::ParseError, "application takes exactly one argument", peek().pos);
    return a;
  }

  SExprPtr atom() {
    const Token& t = peek();
    auto e = std::make_shared<SExpr>();
    e->pos = t.pos;
    if (t.kind == Token::Number) {
      e->kind = SExpr::Num;
      e->number = next().number;
      return e;
    }
    if (accept("(")) {
      if (accept(")")) {
        e->kind = SExpr::Unit;
        return e;
      }
      SExprPtr first = expr();
      if (!is_punct(",")) {
        expect(")");
        return first;
      }
      e->kind = SExpr::Tuple;
      e->items.push_back(first);
      while (accept(",")) e->items.push_back(expr());
      expect(")");
      return e;
    }
    if (accept("[")) {
      e->kind = SExpr::List;
      if (!accept("]")) {
        e->items.push_back(expr());
        while (accept(",")) e->items.push_back(expr());
        expect("]");
      }
      return e;
    }
    if (is_kw("S") && is_punct(".", 1)) {
      next();
      next();
      e->kind = SExpr::SafeCtor;
      e->name = ident();
      return e;
    }
    if (is_kw("fn") || is_kw("let") || is_kw("case") || is_kw("fold") || (t.kind == Token::Ident && prim(t.text)))
      fail(ErrorCode::ParseError, "'" + t.text + "' must be parenthesized here", t.pos);
    e->kind = SExpr::Var;
    e->name = ident();
    if (e->name == "_") fail(ErrorCode::ParseError, "'_' is not an expression", t.pos);
    return e;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

inline SurfaceProgram parse(std::string_view source) { return Parser(source).program(); }

// ---------------------------------------------------------------------------
// Type expressions to interned types

class TypeResolver {
 public:
  explicit TypeResolver(const TypeNames& names) : names_(names) {}

  TypeId resolve(const TypeExpr& t) const { return to_type(t); }

  // Functor of a datatype body whose self-reference is `self`.
  FunctorId resolve_functor(const TypeExpr& t, const std::string& self) const { return to_functor(t, self); }

  static bool mentions(const TypeExpr& t, const std::string& var) {
    switch (t.kind) {
      case TypeExpr::Unit: return false;
      case TypeExpr::Name: return t.name == var;
      case TypeExpr::Mu: return t.name != var && mentions(*t.l, var);
      case TypeExpr::Safe: return mentions(*t.l, var);
      default: return mentions(*t.l, var) || mentions(*t.r, var);
    }
  }

 private:
  TypeId to_type(const TypeExpr& t) const {
    switch (t.kind) {
      case TypeExpr::Unit: return unit_type();
      case TypeExpr::Name: {
        if (auto found = names_.lookup(t.name)) return *found;
        fail(ErrorCode::UnknownDatatype, "unknown type '" + t.name + "'", t.pos);
      }
      case TypeExpr::Sum: return sum_type(to_type(*t.l), to_type(*t.r));
      case TypeExpr::Prod: return prod_type(to_type(*t.l), to_type(*t.r));
      case TypeExpr::Safe: return safe_of(to_type(*t.l));
      case TypeExpr::Mu: return mu_type(to_functor(*t.l, t.name));
    }
    fail(ErrorCode::Internal, "bad type expression");
  }

  FunctorId to_functor(const TypeExpr& t, const std::string& var) const {
    if (!mentions(t, var)) {
      TypeId c = to_type(t);
      if (!is_normal(c)) fail(ErrorCode::TypeMismatch, "datatype constants must be normal", t.pos);
      return f_const(c);
    }
    switch (t.kind) {
      case TypeExpr::Name: return f_id();
      case TypeExpr::Sum: return f_sum(to_functor(*t.l, var), to_functor(*t.r, var));
      case TypeExpr::Prod: return f_prod(to_functor(*t.l, var), to_functor(*t.r, var));
      case TypeExpr::Safe:
        fail(ErrorCode::TypeMismatch, "a datatype cannot mix normal and safe components", t.pos);
      default:
        fail(ErrorCode::TypeMismatch, "recursive reference to '" + var + "' is not a polynomial position", t.pos);
    }
  }

  const TypeNames& names_;
};

inline TypeId parse_type(std::string_view text, const TypeNames& names) {
  TypeExprPtr t = Parser(text).type_only();
  return TypeResolver(names).resolve(*t);
}

}  // namespace ramrec
