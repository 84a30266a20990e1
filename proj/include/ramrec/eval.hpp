// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ramrec/heap.hpp"
#include "ramrec/term.hpp"

namespace ramrec {

enum class Semantics : std::uint8_t { TD, DP };

inline const char* semantics_name(Semantics s) { return s == Semantics::TD ? "td" : "dp"; }

struct Meter {
  std::uint64_t nodes = 0;
  std::uint64_t fold_steps = 0;
  std::uint64_t memo_hits = 0;
  std::uint64_t cs_charge = 0;
  std::uint64_t limit = UINT64_MAX;  // StepBudgetExceeded once nodes pass this
};

// Stack-like environment; lookups hit the most recent binding.
using Env = std::vector<std::pair<Symbol, VertexId>>;

// Deliberate evaluator faults for mutation smoke tests.
enum class Fault : std::uint8_t { None, SwapPair, DropSucc };
inline thread_local Fault g_fault = Fault::None;

struct FaultScope {
  explicit FaultScope(Fault f) : saved(g_fault) { g_fault = f; }
  ~FaultScope() { g_fault = saved; }
  Fault saved;
};

// ---------------------------------------------------------------------------
// Functor reduction

// A function term: a lambda, or the partial application fold_δ(λz.e0).
struct FnTerm {
  TermPtr lam;
  TypeId datatype;
  TermPtr step;

  static FnTerm of_lambda(TermPtr l) { return FnTerm{std::move(l), TypeId{}, nullptr}; }
  static FnTerm of_fold(TypeId d, TermPtr step) { return FnTerm{nullptr, d, std::move(step)}; }
  bool is_fold() const { return step != nullptr; }
};

inline TermPtr apply_fn(const FnTerm& f, TermPtr arg) {
  if (f.is_fold()) return mk::fold(f.datatype, f.step, std::move(arg));
  return mk::app(f.lam, std::move(arg));
}

namespace detail {
// Generated binders start with '%' so they never collide with source names.
inline Symbol gen_binder() {
  static const Symbol s = sym("%w");
  return s;
}
}  // namespace detail

// (Id f) ~> f;  (C_A f) ~> λx.x;  products pair up, sums case-split.
inline FnTerm reduce_functor(FunctorId p, const FnTerm& f) {
  FunctorNode n = node_of(p);
  Symbol w = detail::gen_binder();
  switch (n.kind) {
    case FunctorKind::Id: return f;
    case FunctorKind::Const: return FnTerm::of_lambda(mk::lam(w, std::nullopt, mk::var(w)));
    case FunctorKind::Prod: {
      FnTerm l = reduce_functor(FunctorId{n.a}, f);
      FnTerm r = reduce_functor(FunctorId{n.b}, f);
      return FnTerm::of_lambda(
          mk::lam(w, std::nullopt, mk::pair(apply_fn(l, mk::proj(1, mk::var(w))), apply_fn(r, mk::proj(2, mk::var(w))))));
    }
    case FunctorKind::Sum: {
      FnTerm l = reduce_functor(FunctorId{n.a}, f);
      FnTerm r = reduce_functor(FunctorId{n.b}, f);
      return FnTerm::of_lambda(mk::lam(
          w, std::nullopt,
          mk::case_of(mk::var(w), w, mk::inj(1, apply_fn(l, mk::var(w))), w, mk::inj(2, apply_fn(r, mk::var(w))))));
    }
  }
  return f;
}

inline TermPtr reduce_functor(FunctorId p, TermPtr f) {
  FnTerm g = reduce_functor(p, FnTerm::of_lambda(std::move(f)));
  return g.lam;
}

// Premise of rule Fold: f(g(D e)) with g the functor reduction of P against fold_δ f.
inline TermPtr fold_premise(const Term& fold) {
  FunctorId p = functor_of(fold.datatype);
  FnTerm g = reduce_functor(p, FnTerm::of_fold(fold.datatype, fold.a));
  return mk::app(fold.a, apply_fn(g, mk::des(fold.datatype, fold.b)));
}

// Caches fold premises per Fold node for the lifetime of an evaluation.
class UnrollCache {
 public:
  const Term& premise(const Term& fold) {
    auto it = cache_.find(&fold);
    if (it == cache_.end()) it = cache_.emplace(&fold, fold_premise(fold)).first;
    return *it->second;
  }

 private:
  std::unordered_map<const Term*, TermPtr> cache_;
};

// ---------------------------------------------------------------------------
// Evaluator

class Evaluator {
 public:
  Evaluator(Heap& heap, Semantics sem, Meter& meter) : heap_(heap), sem_(sem), meter_(meter) {}

  VertexId run(const Term& e, const Env& theta) {
    env_ = theta;
    return eval(e);
  }

 private:
  [[noreturn]] static void stuck(const char* what) {
    fail(ErrorCode::Internal, std::string("evaluation stuck: ") + what + " (ill-typed closure)");
  }

  VertexId lookup(Symbol x) const {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it)
      if (it->first == x) return it->second;
    fail(ErrorCode::Internal, "unbound variable '" + sym_name(x) + "' at run time");
  }

  VertexId bind_eval(Symbol x, VertexId v, const Term& body) {
    env_.emplace_back(x, v);
    VertexId r = eval(body);
    env_.pop_back();
    return r;
  }

  VertexId eval(const Term& e) {
    if (++meter_.nodes > meter_.limit)
      fail(ErrorCode::StepBudgetExceeded, "evaluation exceeded " + std::to_string(meter_.limit) + " nodes");
    switch (e.kind) {
      case TermKind::Var: return lookup(e.x);
      case TermKind::Lam: stuck("bare lambda");
      case TermKind::App: {
        VertexId v = eval(*e.b);
        return bind_eval(e.a->x, v, *e.a->a);
      }
      case TermKind::Unit: return heap_.unit();
      case TermKind::Pair: {
        VertexId a = eval(*e.a);
        VertexId b = eval(*e.b);
        if (g_fault == Fault::SwapPair && heap_.at(a).kind == heap_.at(b).kind) std::swap(a, b);
        return heap_.pair(a, b);
      }
      case TermKind::Proj: {
        VertexId v = eval(*e.a);
        const Vertex& x = heap_.at(v);
        if (x.kind != VertexKind::Pair) stuck("projection from non-pair");
        return e.index == 1 ? x.c0 : x.c1;
      }
      case TermKind::Inj: return heap_.inj(e.index, eval(*e.a));
      case TermKind::Case: {
        VertexId v = eval(*e.a);
        const Vertex& x = heap_.at(v);
        if (x.kind != VertexKind::Inj) stuck("case on non-injection");
        return x.slot == 1 ? bind_eval(e.x, x.c0, *e.b) : bind_eval(e.y, x.c0, *e.c);
      }
      case TermKind::Con:
      case TermKind::SafeCon: {
        VertexId v = eval(*e.a);
        if (g_fault == Fault::DropSucc && heap_.at(v).kind == VertexKind::Inj && heap_.at(v).slot == 2) {
          const Vertex& inner = heap_.at(heap_.at(v).c0);
          if (inner.kind == VertexKind::Con) return heap_.at(v).c0;
        }
        return heap_.con(v);
      }
      case TermKind::Des:
      case TermKind::SafeDes: {
        VertexId v = eval(*e.a);
        const Vertex& x = heap_.at(v);
        if (x.kind != VertexKind::Con) stuck("destructor on non-constructor");
        return x.c0;
      }
      case TermKind::ToSafe:
      case TermKind::ToNorm: return eval(*e.a);
      case TermKind::CS: {
        VertexId v = eval(*e.a);
        ValueRef r{v, e.datatype};
        std::uint64_t charge = total_vertices(heap_, r);
        meter_.cs_charge += charge;
        meter_.nodes += charge;
        return make_nat(heap_, compressed_size(heap_, r));
      }
      case TermKind::Fold:
        if (sem_ == Semantics::TD) {
          meter_.nodes += static_cast<std::uint64_t>(functor_size(functor_of(e.datatype)));
          ++meter_.fold_steps;
          return eval(unroll_.premise(e));
        }
        return dp_fold(e);
    }
    stuck("unknown term");
  }

  // Recursion children of a δ-constructor's payload: vertices at Id positions of P.
  void id_children(FunctorId p, VertexId x, std::vector<VertexId>& out) const {
    FunctorNode n = node_of(p);
    const Vertex& v = heap_.at(x);
    switch (n.kind) {
      case FunctorKind::Id: out.push_back(x); return;
      case FunctorKind::Const: return;
      case FunctorKind::Sum:
        if (v.kind != VertexKind::Inj) stuck("sum position holds a non-injection");
        id_children(FunctorId{v.slot == 1 ? n.a : n.b}, v.c0, out);
        return;
      case FunctorKind::Prod:
        if (v.kind != VertexKind::Pair) stuck("product position holds a non-pair");
        id_children(FunctorId{n.a}, v.c0, out);
        id_children(FunctorId{n.b}, v.c1, out);
        return;
    }
  }

  // Functor-shaped view of a payload with recursion positions replaced by memoized results.
  VertexId view(FunctorId p, VertexId x, const std::unordered_map<VertexId, VertexId>& memo) {
    FunctorNode n = node_of(p);
    const Vertex v = heap_.at(x);
    switch (n.kind) {
      case FunctorKind::Id:
        ++meter_.memo_hits;
        ++meter_.nodes;
        return memo.at(x);
      case FunctorKind::Const: return x;
      case FunctorKind::Sum: return heap_.inj(v.slot, view(FunctorId{v.slot == 1 ? n.a : n.b}, v.c0, memo));
      case FunctorKind::Prod: {
        VertexId a = view(FunctorId{n.a}, v.c0, memo);
        VertexId b = view(FunctorId{n.b}, v.c1, memo);
        return heap_.pair(a, b);
      }
    }
    stuck("bad functor");
  }

  VertexId dp_fold(const Term& e) {
    FunctorId p = functor_of(e.datatype);
    const std::uint64_t charge = 1 + static_cast<std::uint64_t>(functor_size(p));
    VertexId root = eval(*e.b);

    std::vector<VertexId> order;
    std::unordered_set<VertexId> seen;
    std::vector<std::pair<VertexId, bool>> stack{{root, false}};
    std::vector<VertexId> kids;
    while (!stack.empty()) {
      auto [u, expanded] = stack.back();
      stack.pop_back();
      if (expanded) {
        order.push_back(u);
        continue;
      }
      if (!seen.insert(u).second) continue;
      if (heap_.at(u).kind != VertexKind::Con) stuck("fold over a non-constructor");
      stack.emplace_back(u, true);
      kids.clear();
      id_children(p, heap_.at(u).c0, kids);
      for (auto it = kids.rbegin(); it != kids.rend(); ++it)
        if (!seen.count(*it)) stack.emplace_back(*it, false);
    }

    std::unordered_map<VertexId, VertexId> memo;
    const Term& step = *e.a;
    for (VertexId u : order) {
      meter_.nodes += charge;
      ++meter_.fold_steps;
      VertexId z = view(p, heap_.at(u).c0, memo);
      memo.emplace(u, bind_eval(step.x, z, *step.a));
    }
    return memo.at(root);
  }

  Heap& heap_;
  Semantics sem_;
  Meter& meter_;
  Env env_;
  UnrollCache unroll_;
};

inline VertexId evaluate(Semantics sem, const Term& e, const Env& theta, Heap& heap, Meter& meter) {
  return Evaluator(heap, sem, meter).run(e, theta);
}

inline VertexId eval_td(const Term& e, const Env& theta, Heap& heap, Meter& meter) {
  return evaluate(Semantics::TD, e, theta, heap, meter);
}

inline VertexId eval_dp(const Term& e, const Env& theta, Heap& heap, Meter& meter) {
  return evaluate(Semantics::DP, e, theta, heap, meter);
}

inline std::uint64_t cost_td(const Term& e, const Env& theta, Heap& heap) {
  Meter m;
  eval_td(e, theta, heap, m);
  return m.nodes;
}

inline std::uint64_t cost_dp(const Term& e, const Env& theta, Heap& heap) {
  Meter m;
  eval_dp(e, theta, heap, m);
  return m.nodes;
}

}  // namespace ramrec
