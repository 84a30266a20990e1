// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>

#include "ramrec/polynomial.hpp"
#include "ramrec/typecheck.hpp"

namespace ramrec {

// Vertices per constructor vertex in values of type t, bounded over all datatypes reachable from t.
inline std::uint64_t vertex_weight(TypeId t);

namespace detail {
inline std::uint64_t weight_type(TypeId t);

inline std::uint64_t weight_functor(FunctorId f) {
  FunctorNode n = node_of(f);
  switch (n.kind) {
    case FunctorKind::Id: return 0;
    case FunctorKind::Const: return weight_type(TypeId{n.a});
    case FunctorKind::Sum: return 1 + std::max(weight_functor(FunctorId{n.a}), weight_functor(FunctorId{n.b}));
    case FunctorKind::Prod: return 1 + weight_functor(FunctorId{n.a}) + weight_functor(FunctorId{n.b});
  }
  return 0;
}

// Non-constructor vertices owned by one layer of a value of type t.
inline std::uint64_t weight_type(TypeId t) {
  TypeNode n = node_of(t);
  switch (n.kind) {
    case TypeKind::Unit:
    case TypeKind::SafeUnit: return 1;
    case TypeKind::Sum: return 1 + std::max(weight_type(TypeId{n.a}), weight_type(TypeId{n.b}));
    case TypeKind::Prod: return 1 + weight_type(TypeId{n.a}) + weight_type(TypeId{n.b});
    case TypeKind::Mu:
    case TypeKind::SafeMu: return 0;
  }
  return 0;
}

inline void datatypes_in(TypeId t, std::vector<TypeId>& out);

inline void datatypes_in(FunctorId f, std::vector<TypeId>& out) {
  FunctorNode n = node_of(f);
  if (n.kind == FunctorKind::Const) datatypes_in(TypeId{n.a}, out);
  if (n.kind == FunctorKind::Sum || n.kind == FunctorKind::Prod) {
    datatypes_in(FunctorId{n.a}, out);
    datatypes_in(FunctorId{n.b}, out);
  }
}

inline void datatypes_in(TypeId t, std::vector<TypeId>& out) {
  TypeNode n = node_of(t);
  switch (n.kind) {
    case TypeKind::Sum:
    case TypeKind::Prod:
      datatypes_in(TypeId{n.a}, out);
      datatypes_in(TypeId{n.b}, out);
      return;
    case TypeKind::Mu:
    case TypeKind::SafeMu: {
      TypeId d = norm_of(t);
      if (std::find(out.begin(), out.end(), d) != out.end()) return;
      out.push_back(d);
      datatypes_in(functor_of(d), out);
      return;
    }
    default: return;
  }
}
}  // namespace detail

inline std::uint64_t vertex_weight(TypeId t) {
  std::vector<TypeId> ds;
  detail::datatypes_in(t, ds);
  std::uint64_t k = 0;
  for (TypeId d : ds) k = std::max(k, detail::weight_functor(functor_of(d)));
  return 1 + k;
}

// Per-vertex charge of a DP fold step, plus the fold node itself.
inline std::uint64_t fold_cost_constant(TypeId d) {
  FunctorId p = functor_of(d);
  return 2 + static_cast<std::uint64_t>(functor_size(p)) + static_cast<std::uint64_t>(functor_ids(p));
}

struct Bounds {
  Polynomial size;  // q: residual-size bound
  Polynomial cost;  // p: DP cost bound
};

// Builds q and p by structural recursion over a checked term.
class BoundSynthesizer {
 public:
  BoundSynthesizer(Calculus level, const TypeNames* names = nullptr) : level_(level), names_(names) {}

  Bounds run(const Context& ctx, const Term& e) {
    ctx_ = ctx;
    return go(e);
  }

 private:
  TypeId type_of(const Term& e) { return TypeChecker(level_, names_).check_ground(ctx_, e); }

  Bounds under(Symbol x, TypeId t, const Term& body) {
    ctx_.emplace_back(x, t);
    Bounds b = go(body);
    ctx_.pop_back();
    return b;
  }

  static Polynomial var(Symbol x) { return Polynomial::variable(sym_name(x)); }

  Bounds go(const Term& e) {
    switch (e.kind) {
      case TermKind::Var: return {var(e.x), 1};
      case TermKind::Unit: return {0, 1};
      case TermKind::Lam: fail(ErrorCode::UnsupportedConstruct, "bare lambda has no bound");
      case TermKind::App: {
        const Term& f = *e.a;
        Bounds arg = go(*e.b);
        TypeId t = f.annot ? *f.annot : type_of(*e.b);
        Bounds body = under(f.x, t, *f.a);
        std::string z = sym_name(f.x);
        Polynomial q;
        switch (tier(t)) {
          case Tier::Normal: q = body.size.substitute(z, arg.size); break;
          case Tier::Safe: q = body.size.substitute(z, 0) + arg.size; break;
          case Tier::Mixed: q = body.size.substitute(z, arg.size) + arg.size; break;
        }
        return {q, Polynomial(1) + body.cost.substitute(z, arg.size) + arg.cost};
      }
      case TermKind::Pair: {
        Bounds a = go(*e.a);
        Bounds b = go(*e.b);
        return {a.size + b.size, Polynomial(1) + a.cost + b.cost};
      }
      case TermKind::Proj:
      case TermKind::Inj:
      case TermKind::Des:
      case TermKind::SafeDes:
      case TermKind::ToSafe:
      case TermKind::ToNorm: {
        Bounds a = go(*e.a);
        return {a.size, Polynomial(1) + a.cost};
      }
      case TermKind::Con:
      case TermKind::SafeCon: {
        Bounds a = go(*e.a);
        return {Polynomial(1) + a.size, Polynomial(1) + a.cost};
      }
      case TermKind::Case: {
        Bounds s = go(*e.a);
        TypeId st = type_of(*e.a);
        Bounds l = under(e.x, left(st), *e.b);
        Bounds r = under(e.y, right(st), *e.c);
        std::string x1 = sym_name(e.x), x2 = sym_name(e.y);
        return {l.size.substitute(x1, s.size) + r.size.substitute(x2, s.size),
                Polynomial(1) + s.cost + l.cost.substitute(x1, s.size) + r.cost.substitute(x2, s.size)};
      }
      case TermKind::Fold: {
        Bounds arg = go(*e.b);
        const Term& step = *e.a;
        TypeId z_type = step.annot ? *step.annot : apply_functor(functor_of(e.datatype), type_of(e));
        Bounds body = under(step.x, z_type, *step.a);
        std::string z = sym_name(step.x);
        Polynomial q1 = arg.size;
        Polynomial q = q1 * body.size.substitute(z, q1) + q1 * q1;
        Polynomial p = arg.cost + q1 * (body.cost.substitute(z, q1) + Polynomial(BigNat(fold_cost_constant(e.datatype))));
        return {q, p};
      }
      case TermKind::CS: {
        Bounds a = go(*e.a);
        return {Polynomial(1) + a.size,
                Polynomial(1) + a.cost + Polynomial(BigNat(vertex_weight(e.datatype))) * a.size};
      }
    }
    fail(ErrorCode::Internal, "bad term");
  }

  Calculus level_;
  const TypeNames* names_;
  Context ctx_;
};

inline Polynomial synthesize_size_bound(const Judgment& j, const TypeNames* names = nullptr) {
  return BoundSynthesizer(j.level, names).run(j.context, *j.subject).size;
}

inline Polynomial synthesize_cost_bound(const Judgment& j, const TypeNames* names = nullptr) {
  return BoundSynthesizer(j.level, names).run(j.context, *j.subject).cost;
}

inline Bounds synthesize_bounds(const Judgment& j, const TypeNames* names = nullptr) {
  return BoundSynthesizer(j.level, names).run(j.context, *j.subject);
}

}  // namespace ramrec
