// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "ramrec/desugar.hpp"
#include "ramrec/term.hpp"
#include "ramrec/types.hpp"

namespace ramrec {

// Emits closed RS1 functions computing tree sizes of hereditarily sequential normal types.
class TreeSizeGenerator {
 public:
  // fn (x : γ) => treeSize_γ(x), of type γ -> nat.
  TermPtr generate(TypeId gamma) {
    if (!is_normal(gamma)) fail(ErrorCode::TypeMismatch, "tree-size generation needs a normal type");
    if (!is_hereditarily_sequential(gamma))
      fail(ErrorCode::NotHereditarilySequential, "type is not hereditarily sequential");
    Symbol x = fresh();
    return mk::lam(x, gamma, tree_size_body(gamma, x));
  }

 private:
  Symbol fresh() { return sym("_ts" + std::to_string(counter_++)); }

  static TypeId safe_nat() { return safe_of(nat_type()); }

  // treeSize_t applied to a term of type t.
  TermPtr tree_size(TypeId t, TermPtr e) {
    Symbol x = fresh();
    return mk::app(mk::lam(x, t, tree_size_body(t, x)), std::move(e));
  }

  TermPtr tree_size_body(TypeId t, Symbol x) {
    switch (kind_of(t)) {
      case TypeKind::Unit: return numeral_term(0);
      case TypeKind::Sum: {
        Symbol a = fresh(), b = fresh();
        return mk::case_of(mk::var(x), a, tree_size(left(t), mk::var(a)), b, tree_size(right(t), mk::var(b)));
      }
      case TypeKind::Prod:
        return plus(tree_size(left(t), mk::proj(1, mk::var(x))), tree_size(right(t), mk::proj(2, mk::var(x))));
      case TypeKind::Mu: {
        FunctorId p = functor_of(t);
        Symbol w = fresh();
        TermPtr step = mk::lam(w, apply_functor(p, safe_nat()),
                               mk::scon(nat_type(), mk::inj(2, tally(p, mk::var(w)))));
        return mk::to_norm(mk::fold(t, step, mk::var(x)));
      }
      default: fail(ErrorCode::TypeMismatch, "tree-size generation needs a normal type");
    }
  }

  // Safe tally of one layer: e has type F(safe nat).
  TermPtr tally(FunctorId f, TermPtr e) {
    FunctorNode n = node_of(f);
    if (functor_ids(f) == 0) return mk::to_safe(tree_size(apply_functor(f, unit_type()), std::move(e)));
    switch (n.kind) {
      case FunctorKind::Id: return e;
      case FunctorKind::Sum: {
        Symbol v = fresh(), a = fresh(), b = fresh();
        TermPtr body = mk::case_of(mk::var(v), a, tally(FunctorId{n.a}, mk::var(a)), b, tally(FunctorId{n.b}, mk::var(b)));
        return mk::app(mk::lam(v, apply_functor(f, safe_nat()), body), std::move(e));
      }
      case FunctorKind::Prod: {
        Symbol v = fresh();
        FunctorId l{n.a}, r{n.b};
        bool rec_left = functor_ids(l) > 0;
        FunctorId rec = rec_left ? l : r, flat = rec_left ? r : l;
        int ri = rec_left ? 1 : 2;
        TermPtr body = plus_safe(tally(rec, mk::proj(ri, mk::var(v))),
                                 tree_size(apply_functor(flat, unit_type()), mk::proj(3 - ri, mk::var(v))));
        return mk::app(mk::lam(v, apply_functor(f, safe_nat()), body), std::move(e));
      }
      default: fail(ErrorCode::Internal, "unexpected functor");
    }
  }

  // plus'(a, b) with a : safe nat, b : nat.
  TermPtr plus_safe(TermPtr a, TermPtr b) {
    Symbol pa = fresh(), pb = fresh(), w = fresh(), u = fresh(), n = fresh();
    TermPtr step = mk::lam(w, sum_type(unit_type(), safe_nat()),
                           mk::case_of(mk::var(w), u, mk::var(pa), n, mk::scon(nat_type(), mk::inj(2, mk::var(n)))));
    TermPtr body = mk::fold(nat_type(), step, mk::var(pb));
    return mk::app(mk::lam(pa, safe_nat(), mk::app(mk::lam(pb, nat_type(), body), std::move(b))), std::move(a));
  }

  // plus(a, b) with a, b : nat.
  TermPtr plus(TermPtr a, TermPtr b) {
    Symbol pa = fresh(), pb = fresh();
    TermPtr body = mk::to_norm(plus_safe(mk::to_safe(mk::var(pa)), mk::var(pb)));
    return mk::app(mk::lam(pa, nat_type(), mk::app(mk::lam(pb, nat_type(), body), std::move(b))), std::move(a));
  }

  unsigned counter_ = 0;
};

inline TermPtr gen_tree_size(TypeId gamma) { return TreeSizeGenerator().generate(gamma); }

}  // namespace ramrec
