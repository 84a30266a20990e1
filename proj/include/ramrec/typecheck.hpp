// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ramrec/syntax.hpp"
#include "ramrec/term.hpp"
#include "ramrec/type_print.hpp"

namespace ramrec {

using Context = std::vector<std::pair<Symbol, TypeId>>;

struct CheckOptions {
  bool enforce_to_norm = true;  // side condition on toNorm; disabled only by mutation harnesses
};

class TypeChecker {
 public:
  TypeChecker(Calculus level, const TypeNames* names = nullptr, CheckOptions options = {})
      : level_(level), names_(names), options_(options) {}

  // Type of a closed-over-ctx term; a top-level lambda yields an arrow type.
  Type check_top(Context ctx, const Term& e) {
    ctx_ = std::move(ctx);
    for (const auto& [x, t] : ctx_) annotation(t);
    if (e.kind == TermKind::Lam) {
      if (!e.annot) fail(ErrorCode::TypeMismatch, "top-level function parameter '" + sym_name(e.x) + "' needs a type annotation");
      annotation(*e.annot);
      ctx_.emplace_back(e.x, *e.annot);
      TypeId r = synth(*e.a);
      ctx_.pop_back();
      return Type{*e.annot, r};
    }
    return Type{std::nullopt, synth(e)};
  }

  TypeId check_ground(Context ctx, const Term& e) {
    ctx_ = std::move(ctx);
    return synth(e);
  }

 private:
  std::string show(TypeId t) const { return print_type(t, names_); }

  [[noreturn]] void mismatch(const std::string& what, TypeId expected, TypeId got) const {
    fail(ErrorCode::TypeMismatch, what + ": expected " + show(expected) + ", got " + show(got));
  }

  bool ramified() const { return level_ != Calculus::S1; }

  void need_level(Calculus at_least, const char* construct) const {
    if (static_cast<int>(level_) < static_cast<int>(at_least))
      fail(ErrorCode::LevelViolation, std::string(construct) + " is not available in " + calculus_name(level_));
  }

  void annotation(TypeId t) const {
    if (!ramified() && !is_normal(t)) fail(ErrorCode::LevelViolation, "safe types are not available in s1");
    if (!is_inhabited(t)) fail(ErrorCode::UninhabitedType, "type " + show(t) + " has no values");
  }

  TypeId datatype(TypeId d) const {
    if (kind_of(d) != TypeKind::Mu) fail(ErrorCode::TypeMismatch, "expected a normal inductive datatype, got " + show(d));
    if (!is_inhabited(d)) fail(ErrorCode::UninhabitedType, "datatype " + show(d) + " has no values");
    return d;
  }

  TypeId lookup(Symbol x) const {
    for (auto it = ctx_.rbegin(); it != ctx_.rend(); ++it)
      if (it->first == x) return it->second;
    fail(ErrorCode::UnknownVariable, "unbound variable '" + sym_name(x) + "'");
  }

  TypeId with(Symbol x, TypeId t, const Term& body, const std::optional<TypeId>& expected) {
    ctx_.emplace_back(x, t);
    TypeId r = expected ? check(body, *expected) : synth(body);
    ctx_.pop_back();
    return r;
  }

  static bool inferable(const Term& t) {
    switch (t.kind) {
      case TermKind::Inj: return false;
      case TermKind::App: return inferable(*t.a->a);
      case TermKind::Case: return inferable(*t.b) || inferable(*t.c);
      default: return true;
    }
  }

  TypeId synth(const Term& e) { return infer(e, std::nullopt); }

  TypeId check(const Term& e, TypeId expected) {
    TypeId got = infer(e, expected);
    if (got != expected) mismatch(std::string("in ") + term_kind_name(e.kind), expected, got);
    return got;
  }

  // Matches P(σ) against `t`, binding σ at Id positions.
  static bool match_functor(FunctorId f, TypeId t, std::optional<TypeId>& sigma) {
    FunctorNode n = node_of(f);
    switch (n.kind) {
      case FunctorKind::Id:
        if (sigma && *sigma != t) return false;
        sigma = t;
        return true;
      case FunctorKind::Const: return TypeId{n.a} == t;
      case FunctorKind::Sum:
      case FunctorKind::Prod: {
        TypeKind want = n.kind == FunctorKind::Sum ? TypeKind::Sum : TypeKind::Prod;
        if (kind_of(t) != want) return false;
        return match_functor(FunctorId{n.a}, left(t), sigma) && match_functor(FunctorId{n.b}, right(t), sigma);
      }
    }
    return false;
  }

  TypeId fold(const Term& e, const std::optional<TypeId>& expected) {
    TypeId d = datatype(e.datatype);
    FunctorId p = functor_of(d);
    TypeId arg = synth(*e.b);
    if (arg != d) {
      if (ramified() && arg == safe_of(d))
        fail(ErrorCode::SideConditionFoldNormal, "fold over " + show(d) + " requires a normal argument, got " + show(arg));
      mismatch("fold argument", d, arg);
    }
    const Term& step = *e.a;
    if (step.kind != TermKind::Lam) fail(ErrorCode::TypeMismatch, "fold step must be a lambda");
    std::optional<TypeId> sigma = expected;
    if (step.annot) {
      annotation(*step.annot);
      std::optional<TypeId> from_annot;
      if (!match_functor(p, *step.annot, from_annot))
        fail(ErrorCode::TypeMismatch, "fold step parameter type " + show(*step.annot) + " does not match " +
                                          print_functor(p, names_) + " for " + show(d));
      if (from_annot) {
        if (sigma && *sigma != *from_annot) mismatch("fold result", *sigma, *from_annot);
        sigma = from_annot;
      }
    }
    TypeId z = sigma ? apply_functor(p, *sigma) : apply_functor(p, unit_type());
    if (!sigma && degree(p) > 0)
      fail(ErrorCode::TypeMismatch, "cannot infer the result type of this fold; annotate the step parameter");
    if (step.annot && *step.annot != z) mismatch("fold step parameter", z, *step.annot);
    TypeId r = with(step.x, z, *step.a, sigma);
    if (ramified() && !is_safe(r)) fail(ErrorCode::TypeMismatch, "fold result type " + show(r) + " must be safe");
    return r;
  }

  TypeId infer(const Term& e, const std::optional<TypeId>& expected) {
    switch (e.kind) {
      case TermKind::Var: return lookup(e.x);
      case TermKind::Lam: fail(ErrorCode::TypeMismatch, "functions may only appear at top level or as fold steps");
      case TermKind::App: {
        const Term& f = *e.a;
        if (f.kind != TermKind::Lam) fail(ErrorCode::TypeMismatch, "only lambdas can be applied");
        TypeId arg;
        if (f.annot) {
          annotation(*f.annot);
          arg = check(*e.b, *f.annot);
        } else {
          arg = synth(*e.b);
        }
        return with(f.x, arg, *f.a, expected);
      }
      case TermKind::Unit: return unit_type();
      case TermKind::Pair: {
        if (expected && kind_of(*expected) == TypeKind::Prod)
          return prod_type(infer(*e.a, left(*expected)), infer(*e.b, right(*expected)));
        TypeId l = synth(*e.a);
        return prod_type(l, synth(*e.b));
      }
      case TermKind::Proj: {
        TypeId t = synth(*e.a);
        if (kind_of(t) != TypeKind::Prod) fail(ErrorCode::TypeMismatch, "projection from non-product type " + show(t));
        return component(t, e.index);
      }
      case TermKind::Inj: {
        if (!expected) fail(ErrorCode::TypeMismatch, "cannot infer the type of an injection here; add an annotation");
        if (kind_of(*expected) != TypeKind::Sum) fail(ErrorCode::TypeMismatch, "injection checked against non-sum type " + show(*expected));
        check(*e.a, component(*expected, e.index));
        return *expected;
      }
      case TermKind::Case: {
        TypeId s = synth(*e.a);
        if (kind_of(s) != TypeKind::Sum) fail(ErrorCode::TypeMismatch, "case on non-sum type " + show(s));
        std::optional<TypeId> want = expected;
        TypeId r;
        if (!want && !inferable(*e.b) && inferable(*e.c)) {
          r = with(e.y, right(s), *e.c, std::nullopt);
          with(e.x, left(s), *e.b, r);
        } else {
          r = with(e.x, left(s), *e.b, want);
          with(e.y, right(s), *e.c, r);
        }
        if (ramified() && !is_normal(s) && !is_safe(r))
          fail(ErrorCode::SideConditionCase, "case on " + show(s) + " (not normal) must have a safe result, got " + show(r));
        return r;
      }
      case TermKind::Con: {
        TypeId d = datatype(e.datatype);
        check(*e.a, unfold(d));
        return d;
      }
      case TermKind::Des: {
        TypeId d = datatype(e.datatype);
        check(*e.a, d);
        return unfold(d);
      }
      case TermKind::SafeCon: {
        need_level(Calculus::RS1, "safe constructor");
        TypeId d = datatype(e.datatype);
        check(*e.a, unfold(safe_of(d)));
        return safe_of(d);
      }
      case TermKind::SafeDes: {
        need_level(Calculus::RS1, "safe destructor");
        TypeId d = datatype(e.datatype);
        check(*e.a, safe_of(d));
        return unfold(safe_of(d));
      }
      case TermKind::Fold: return fold(e, expected);
      case TermKind::ToSafe: {
        need_level(Calculus::RS1, "toSafe");
        std::optional<TypeId> inner;
        if (expected && is_safe(*expected) && !inferable(*e.a)) inner = norm_of(*expected);
        return safe_of(inner ? check(*e.a, *inner) : synth(*e.a));
      }
      case TermKind::ToNorm: {
        need_level(Calculus::RS1, "toNorm");
        if (options_.enforce_to_norm) {
          for (Symbol x : free_vars(*e.a)) {
            TypeId t = lookup(x);
            if (!is_normal(t))
              fail(ErrorCode::SideConditionToNorm,
                   "toNorm body uses '" + sym_name(x) + "' of non-normal type " + show(t));
          }
        }
        std::optional<TypeId> inner;
        if (expected && !inferable(*e.a)) inner = safe_of(*expected);
        return norm_of(inner ? check(*e.a, *inner) : synth(*e.a));
      }
      case TermKind::CS: {
        need_level(Calculus::RS1_1, "cs");
        TypeId d = datatype(e.datatype);
        check(*e.a, d);
        return nat_type();
      }
    }
    fail(ErrorCode::Internal, "bad term");
  }

  Calculus level_;
  const TypeNames* names_;
  CheckOptions options_;
  Context ctx_;
};

inline Type typecheck(Calculus level, const Context& ctx, const Term& e, const TypeNames* names = nullptr,
                      CheckOptions options = {}) {
  return TypeChecker(level, names, options).check_top(ctx, e);
}

// A checked ground judgment Γ ⊢ e : γ.
struct Judgment {
  std::string name;
  Calculus level = Calculus::S1;
  Context context;
  TermPtr subject;
  TypeId type;
};

// Top-level definition as a judgment: fn (x : T) => e becomes x : T ⊢ e.
inline Judgment judgment_of(const std::string& name, const TermPtr& def, Calculus level, const TypeNames* names = nullptr,
                            CheckOptions options = {}) {
  Type t = typecheck(level, {}, *def, names, options);
  Judgment j;
  j.name = name;
  j.level = level;
  if (t.is_arrow()) {
    j.context.emplace_back(def->x, *t.arg);
    j.subject = def->a;
  } else {
    j.subject = def;
  }
  j.type = t.result;
  return j;
}

}  // namespace ramrec
