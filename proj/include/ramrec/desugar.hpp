// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ramrec/syntax.hpp"
#include "ramrec/term.hpp"

namespace ramrec {

struct CtorInfo {
  std::string name;
  TypeId datatype;
  int index = 1;  // 1-based position among the datatype's constructors
  int count = 1;
  bool nullary = true;
};

struct DatatypeInfo {
  std::string name;
  TypeId type;
  std::vector<std::string> ctors;
};

struct CoreProgram {
  Calculus level = Calculus::S1;
  TypeNames names;
  std::vector<DatatypeInfo> datatypes;
  std::unordered_map<std::string, CtorInfo> ctors;
  std::vector<std::pair<std::string, TermPtr>> defs;
  std::optional<TermPtr> main;
  std::unordered_map<std::string, SourcePos> positions;  // def name -> source position

  const DatatypeInfo* datatype(TypeId t) const {
    for (const auto& d : datatypes)
      if (d.type == t) return &d;
    return nullptr;
  }
  TermPtr def(const std::string& name) const {
    for (const auto& [n, t] : defs)
      if (n == name) return t;
    if (name == "main" && main) return *main;
    return nullptr;
  }
};

// Constructor i of k injects with ι2^(i-1) then ι1, except the last which uses ι2^(k-1).
inline TermPtr inject_ctor(int index, int count, TermPtr arg) {
  TermPtr t = index < count ? mk::inj(1, std::move(arg)) : std::move(arg);
  for (int i = 1; i < index; ++i) t = mk::inj(2, t);
  return t;
}

inline TermPtr numeral_term(std::uint64_t n) {
  TypeId nat = nat_type();
  TermPtr t = mk::con(nat, mk::inj(1, mk::unit()));
  for (std::uint64_t i = 0; i < n; ++i) t = mk::con(nat, mk::inj(2, t));
  return t;
}

class Desugarer {
 public:
  explicit Desugarer(const SurfaceProgram& p) : surface_(p) {}

  CoreProgram run() {
    out_.level = surface_.level;
    for (const auto& d : surface_.datatypes) declare(d);
    std::unordered_set<std::string> seen;
    for (const auto& d : surface_.defs) {
      if (!seen.insert(d.name).second || out_.ctors.count(d.name))
        fail(ErrorCode::DuplicateName, "duplicate definition '" + d.name + "'", d.pos);
      out_.defs.emplace_back(d.name, expr(*d.body));
      out_.positions[d.name] = d.pos;
    }
    if (surface_.main) {
      out_.main = expr(*surface_.main->body);
      out_.positions["main"] = surface_.main->pos;
    }
    return std::move(out_);
  }

 private:
  void declare(const DatatypeDecl& d) {
    if (out_.names.lookup(d.name)) fail(ErrorCode::DuplicateName, "duplicate datatype '" + d.name + "'", d.pos);
    TypeResolver resolver(out_.names);
    std::vector<FunctorId> parts;
    for (const auto& c : d.ctors) {
      if (out_.ctors.count(c.name)) fail(ErrorCode::DuplicateName, "duplicate constructor '" + c.name + "'", c.pos);
      parts.push_back(c.arg ? resolver.resolve_functor(*c.arg, d.name) : f_const(unit_type()));
    }
    FunctorId p = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) p = f_sum(parts[i], p);
    TypeId t = mu_type(p);
    if (!is_inhabited(t)) fail(ErrorCode::UninhabitedType, "datatype '" + d.name + "' has no values", d.pos);
    out_.names.add(d.name, t);
    DatatypeInfo info{d.name, t, {}};
    int k = static_cast<int>(d.ctors.size());
    for (int i = 0; i < k; ++i) {
      const auto& c = d.ctors[i];
      out_.ctors.emplace(c.name, CtorInfo{c.name, t, i + 1, k, c.arg == nullptr});
      info.ctors.push_back(c.name);
    }
    out_.datatypes.push_back(std::move(info));
  }

  Symbol fresh() {
    for (;;) {
      std::string name = "_v" + std::to_string(++counter_);
      if (!surface_.identifiers.count(name)) return sym(name);
    }
  }

  TypeId resolve(const TypeExpr& t) const { return TypeResolver(out_.names).resolve(t); }

  TypeId datatype(const TypeExpr& t) const {
    TypeId d = resolve(t);
    if (!is_mu(d)) fail(ErrorCode::TypeMismatch, "expected an inductive datatype, got " + print_type(d, &out_.names), t.pos);
    return norm_of(d);
  }

  const CtorInfo& ctor(const std::string& name, SourcePos pos) const {
    auto it = out_.ctors.find(name);
    if (it == out_.ctors.end()) fail(ErrorCode::UnknownConstructor, "unknown constructor '" + name + "'", pos);
    return it->second;
  }

  bool is_local(const std::string& name) const {
    return std::find(scope_.begin(), scope_.end(), name) != scope_.end();
  }

  // Names a pattern introduces, in binding order.
  static void pattern_names(const Pattern& p, std::vector<std::string>& out) {
    if (p.kind == Pattern::Var) out.push_back(p.name);
    for (const auto& q : p.items) pattern_names(q, out);
  }

  // Binder symbol used for a pattern in a binding position.
  Symbol binder(const Pattern& p) { return p.kind == Pattern::Var ? sym(p.name) : fresh(); }

  // Destructures variable `v` by pattern `p` around `body` (only tuple patterns need work).
  TermPtr destructure(const Pattern& p, Symbol v, TermPtr body) {
    if (p.kind != Pattern::Tuple) return body;
    return bind_items(p.items, 0, mk::var(v), std::move(body));
  }

  TermPtr bind_items(const std::vector<Pattern>& items, std::size_t i, TermPtr src, TermPtr body) {
    if (i + 1 == items.size()) return bind(items[i], std::move(src), std::move(body));
    TermPtr rest = bind_items(items, i + 1, mk::proj(2, src), std::move(body));
    return bind(items[i], mk::proj(1, src), std::move(rest));
  }

  TermPtr bind(const Pattern& p, TermPtr src, TermPtr body) {
    switch (p.kind) {
      case Pattern::Var: return mk::let(sym(p.name), std::nullopt, std::move(src), std::move(body));
      case Pattern::Wild:
      case Pattern::Unit: return body;
      case Pattern::Tuple: {
        if (src->kind == TermKind::Var) return bind_items(p.items, 0, src, std::move(body));
        Symbol v = fresh();
        return mk::let(v, std::nullopt, std::move(src), bind_items(p.items, 0, mk::var(v), std::move(body)));
      }
    }
    return body;
  }

  // Desugars `body` with the pattern's names in scope.
  TermPtr scoped(const Pattern& p, const SExpr& body) {
    std::vector<std::string> names;
    pattern_names(p, names);
    std::unordered_set<std::string> uniq(names.begin(), names.end());
    if (uniq.size() != names.size()) fail(ErrorCode::DuplicateName, "pattern binds a name twice", body.pos);
    std::size_t mark = scope_.size();
    scope_.insert(scope_.end(), names.begin(), names.end());
    TermPtr t = expr(body);
    scope_.resize(mark);
    return t;
  }

  TermPtr identifier(const SExpr& e) {
    if (is_local(e.name)) return mk::var(e.name);
    for (const auto& [n, t] : out_.defs) {
      if (n == e.name) return t;
    }
    if (auto it = out_.ctors.find(e.name); it != out_.ctors.end()) {
      if (!it->second.nullary) fail(ErrorCode::TypeMismatch, "constructor '" + e.name + "' expects an argument", e.pos);
      return mk::con(it->second.datatype, inject_ctor(it->second.index, it->second.count, mk::unit()));
    }
    fail(ErrorCode::UnknownVariable, "unknown identifier '" + e.name + "'", e.pos);
  }

  TermPtr apply(const SExpr& head, const SExpr& arg, SourcePos pos) {
    if (head.kind == SExpr::Var && !is_local(head.name)) {
      if (auto it = out_.ctors.find(head.name); it != out_.ctors.end()) {
        const CtorInfo& c = it->second;
        return mk::con(c.datatype, inject_ctor(c.index, c.count, expr(arg)));
      }
    }
    if (head.kind == SExpr::SafeCtor) {
      const CtorInfo& c = ctor(head.name, head.pos);
      return mk::scon(c.datatype, inject_ctor(c.index, c.count, expr(arg)));
    }
    TermPtr f = expr(head);
    if (f->kind != TermKind::Lam) fail(ErrorCode::TypeMismatch, "only functions can be applied", pos);
    return mk::app(f, expr(arg));
  }

  TermPtr tuple(const std::vector<SExprPtr>& items, std::size_t i) {
    if (i + 1 == items.size()) return expr(*items[i]);
    TermPtr l = expr(*items[i]);
    return mk::pair(l, tuple(items, i + 1));
  }

  TermPtr list(const std::vector<SExprPtr>& items, SourcePos pos) {
    const CtorInfo& nil = ctor("Nil", pos);
    const CtorInfo& cons = ctor("Cons", pos);
    TermPtr t = mk::con(nil.datatype, inject_ctor(nil.index, nil.count, mk::unit()));
    for (auto it = items.rbegin(); it != items.rend(); ++it)
      t = mk::con(cons.datatype, inject_ctor(cons.index, cons.count, mk::pair(expr(**it), t)));
    return t;
  }

  TermPtr prim(const SExpr& e) {
    TermPtr a = expr(*e.items[0]);
    switch (e.op) {
      case PrimOp::Fst: return mk::proj(1, a);
      case PrimOp::Snd: return mk::proj(2, a);
      case PrimOp::Inl: return mk::inj(1, a);
      case PrimOp::Inr: return mk::inj(2, a);
      case PrimOp::Con: return mk::con(datatype(*e.type), a);
      case PrimOp::Des: return mk::des(datatype(*e.type), a);
      case PrimOp::SCon: return mk::scon(datatype(*e.type), a);
      case PrimOp::SDes: return mk::sdes(datatype(*e.type), a);
      case PrimOp::ToSafe: return mk::to_safe(a);
      case PrimOp::ToNorm: return mk::to_norm(a);
      case PrimOp::CS: return mk::cs(datatype(*e.type), a);
    }
    fail(ErrorCode::Internal, "bad primitive");
  }

  TermPtr alt_body(const Alt& a, Symbol& x) {
    Pattern p = a.pattern ? *a.pattern : Pattern{};
    x = binder(p);
    return destructure(p, x, scoped(p, *a.body));
  }

  TermPtr case_expr(const SExpr& e) {
    TermPtr subject = expr(*e.items[0]);
    const Alt* wild = nullptr;
    bool sums = false, ctors = false, safe = false;
    for (const auto& a : e.alts) {
      if (a.kind == Alt::Wild) {
        if (wild) fail(ErrorCode::ParseError, "duplicate wildcard alternative", a.pos);
        wild = &a;
      } else if (a.kind == Alt::Inl || a.kind == Alt::Inr) {
        sums = true;
      } else {
        ctors = true;
        safe = a.kind == Alt::SafeCtor;
      }
    }
    if (sums && ctors) fail(ErrorCode::ParseError, "cannot mix inl/inr and constructor alternatives", e.pos);
    if (!sums && !ctors) fail(ErrorCode::ParseError, "case needs at least one non-wildcard alternative", e.pos);

    if (sums) {
      const Alt* l = nullptr;
      const Alt* r = nullptr;
      for (const auto& a : e.alts) {
        const Alt*& slot = a.kind == Alt::Inl ? l : r;
        if (a.kind == Alt::Wild) continue;
        if (slot) fail(ErrorCode::ParseError, "duplicate alternative", a.pos);
        slot = &a;
      }
      if (!l) l = wild;
      if (!r) r = wild;
      if (!l || !r) fail(ErrorCode::ParseError, "non-exhaustive case", e.pos);
      Symbol x1, x2;
      TermPtr e1 = alt_body(*l, x1);
      TermPtr e2 = alt_body(*r, x2);
      return mk::case_of(subject, x1, e1, x2, e2);
    }

    TypeId d;
    std::vector<const Alt*> by_index;
    for (const auto& a : e.alts) {
      if (a.kind == Alt::Wild) continue;
      if ((a.kind == Alt::SafeCtor) != safe) fail(ErrorCode::ParseError, "cannot mix safe and normal constructor patterns", a.pos);
      const CtorInfo& c = ctor(a.ctor, a.pos);
      if (by_index.empty()) {
        d = c.datatype;
        by_index.assign(c.count, nullptr);
      } else if (c.datatype != d) {
        fail(ErrorCode::TypeMismatch, "constructor '" + a.ctor + "' belongs to another datatype", a.pos);
      }
      if (by_index[c.index - 1]) fail(ErrorCode::ParseError, "duplicate alternative for '" + a.ctor + "'", a.pos);
      by_index[c.index - 1] = &a;
    }
    for (auto& a : by_index) {
      if (!a) a = wild;
      if (!a) fail(ErrorCode::ParseError, "non-exhaustive case", e.pos);
    }
    TermPtr unfolded = safe ? mk::sdes(d, subject) : mk::des(d, subject);
    return ctor_cases(by_index, 0, unfolded);
  }

  TermPtr ctor_cases(const std::vector<const Alt*>& alts, std::size_t i, TermPtr subject) {
    if (i + 1 == alts.size()) {
      Symbol x;
      TermPtr body = alt_body(*alts[i], x);
      return mk::let(x, std::nullopt, subject, body);
    }
    Symbol x1;
    TermPtr e1 = alt_body(*alts[i], x1);
    Symbol rest = fresh();
    TermPtr e2 = ctor_cases(alts, i + 1, mk::var(rest));
    return mk::case_of(subject, x1, e1, rest, e2);
  }

  TermPtr expr(const SExpr& e) {
    switch (e.kind) {
      case SExpr::Var: return identifier(e);
      case SExpr::SafeCtor: {
        const CtorInfo& c = ctor(e.name, e.pos);
        if (!c.nullary) fail(ErrorCode::TypeMismatch, "constructor '" + e.name + "' expects an argument", e.pos);
        return mk::scon(c.datatype, inject_ctor(c.index, c.count, mk::to_safe(mk::unit())));
      }
      case SExpr::Num: return numeral_term(e.number);
      case SExpr::Unit: return mk::unit();
      case SExpr::Tuple: return tuple(e.items, 0);
      case SExpr::List: return list(e.items, e.pos);
      case SExpr::Cons: {
        const CtorInfo& cons = ctor("Cons", e.pos);
        TermPtr h = expr(*e.items[0]);
        return mk::con(cons.datatype, inject_ctor(cons.index, cons.count, mk::pair(h, expr(*e.items[1]))));
      }
      case SExpr::Fn: {
        std::optional<TypeId> annot;
        if (e.type) annot = resolve(*e.type);
        Symbol x = binder(e.pattern);
        return mk::lam(x, annot, destructure(e.pattern, x, scoped(e.pattern, *e.items[0])));
      }
      case SExpr::Let: {
        std::optional<TypeId> annot;
        if (e.type) annot = resolve(*e.type);
        TermPtr bound = expr(*e.items[0]);
        Symbol x = binder(e.pattern);
        TermPtr body = destructure(e.pattern, x, scoped(e.pattern, *e.items[1]));
        return mk::let(x, annot, bound, body);
      }
      case SExpr::App: return apply(*e.items[0], *e.items[1], e.pos);
      case SExpr::Prim: return prim(e);
      case SExpr::Fold: {
        TypeId d = datatype(*e.type);
        TermPtr step = expr(*e.items[0]);
        if (step->kind != TermKind::Lam) fail(ErrorCode::TypeMismatch, "fold step must be a lambda", e.items[0]->pos);
        return mk::fold(d, step, expr(*e.items[1]));
      }
      case SExpr::Case: return case_expr(e);
    }
    fail(ErrorCode::Internal, "bad surface expression");
  }

  const SurfaceProgram& surface_;
  CoreProgram out_;
  std::vector<std::string> scope_;
  int counter_ = 0;
};

inline CoreProgram desugar(const SurfaceProgram& p) { return Desugarer(p).run(); }

}  // namespace ramrec
