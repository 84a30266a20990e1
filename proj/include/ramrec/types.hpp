// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "ramrec/error.hpp"

namespace ramrec {

struct TypeId {
  std::uint32_t v = 0;
  friend bool operator==(TypeId, TypeId) = default;
  friend auto operator<=>(TypeId, TypeId) = default;
};

struct FunctorId {
  std::uint32_t v = 0;
  friend bool operator==(FunctorId, FunctorId) = default;
  friend auto operator<=>(FunctorId, FunctorId) = default;
};

enum class TypeKind : std::uint8_t { Unit, SafeUnit, Sum, Prod, Mu, SafeMu };
enum class FunctorKind : std::uint8_t { Id, Const, Sum, Prod };
enum class Tier : std::uint8_t { Normal, Safe, Mixed };

// Sum/Prod: a, b are TypeIds. Mu/SafeMu: a is a FunctorId.
struct TypeNode {
  TypeKind kind;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  friend bool operator==(const TypeNode&, const TypeNode&) = default;
};

// Const: a is a TypeId. Sum/Prod: a, b are FunctorIds.
struct FunctorNode {
  FunctorKind kind;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  friend bool operator==(const FunctorNode&, const FunctorNode&) = default;
};

namespace detail {
struct NodeHash {
  template <class N>
  std::size_t operator()(const N& n) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(n.kind);
    h = h * 0x9E3779B97F4A7C15ull + n.a;
    h = h * 0x9E3779B97F4A7C15ull + n.b;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};
}  // namespace detail

// Process-wide hash-consing table for types and functors; structural equality is id equality.
class TypeArena {
 public:
  static TypeArena& global() {
    static TypeArena arena;
    return arena;
  }

  TypeId intern(TypeNode n) { return TypeId{intern_in(types_, type_index_, n)}; }
  FunctorId intern(FunctorNode n) { return FunctorId{intern_in(functors_, functor_index_, n)}; }

  TypeNode node(TypeId t) const {
    std::shared_lock lock(mu_);
    return types_.at(t.v);
  }
  FunctorNode node(FunctorId f) const {
    std::shared_lock lock(mu_);
    return functors_.at(f.v);
  }

 private:
  TypeArena() = default;

  template <class N, class Index>
  std::uint32_t intern_in(std::deque<N>& store, Index& index, const N& n) {
    {
      std::shared_lock lock(mu_);
      auto it = index.find(n);
      if (it != index.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    auto [it, inserted] = index.try_emplace(n, static_cast<std::uint32_t>(store.size()));
    if (inserted) store.push_back(n);
    return it->second;
  }

  mutable std::shared_mutex mu_;
  std::deque<TypeNode> types_;
  std::deque<FunctorNode> functors_;
  std::unordered_map<TypeNode, std::uint32_t, detail::NodeHash> type_index_;
  std::unordered_map<FunctorNode, std::uint32_t, detail::NodeHash> functor_index_;
};

inline TypeNode node_of(TypeId t) { return TypeArena::global().node(t); }
inline FunctorNode node_of(FunctorId f) { return TypeArena::global().node(f); }

inline TypeId unit_type() { return TypeArena::global().intern(TypeNode{TypeKind::Unit}); }
inline TypeId safe_unit_type() { return TypeArena::global().intern(TypeNode{TypeKind::SafeUnit}); }
inline TypeId sum_type(TypeId a, TypeId b) { return TypeArena::global().intern(TypeNode{TypeKind::Sum, a.v, b.v}); }
inline TypeId prod_type(TypeId a, TypeId b) { return TypeArena::global().intern(TypeNode{TypeKind::Prod, a.v, b.v}); }
inline TypeId mu_type(FunctorId f) { return TypeArena::global().intern(TypeNode{TypeKind::Mu, f.v}); }
inline TypeId safe_mu_type(FunctorId f) { return TypeArena::global().intern(TypeNode{TypeKind::SafeMu, f.v}); }

inline FunctorId f_id() { return TypeArena::global().intern(FunctorNode{FunctorKind::Id}); }
inline FunctorId f_const(TypeId t) { return TypeArena::global().intern(FunctorNode{FunctorKind::Const, t.v}); }
inline FunctorId f_sum(FunctorId a, FunctorId b) { return TypeArena::global().intern(FunctorNode{FunctorKind::Sum, a.v, b.v}); }
inline FunctorId f_prod(FunctorId a, FunctorId b) { return TypeArena::global().intern(FunctorNode{FunctorKind::Prod, a.v, b.v}); }

inline TypeId left(TypeId t) { return TypeId{node_of(t).a}; }
inline TypeId right(TypeId t) { return TypeId{node_of(t).b}; }
inline TypeId component(TypeId t, int j) { return j == 1 ? left(t) : right(t); }
inline FunctorId functor_of(TypeId t) { return FunctorId{node_of(t).a}; }
inline TypeKind kind_of(TypeId t) { return node_of(t).kind; }
inline bool is_mu(TypeId t) {
  auto k = kind_of(t);
  return k == TypeKind::Mu || k == TypeKind::SafeMu;
}

// ---------------------------------------------------------------------------
// Tiers

inline TypeId safe_of(TypeId t) {
  TypeNode n = node_of(t);
  switch (n.kind) {
    case TypeKind::Unit:
    case TypeKind::SafeUnit: return safe_unit_type();
    case TypeKind::Sum: return sum_type(safe_of(TypeId{n.a}), safe_of(TypeId{n.b}));
    case TypeKind::Prod: return prod_type(safe_of(TypeId{n.a}), safe_of(TypeId{n.b}));
    case TypeKind::Mu:
    case TypeKind::SafeMu: return safe_mu_type(FunctorId{n.a});
  }
  return t;
}

inline TypeId norm_of(TypeId t) {
  TypeNode n = node_of(t);
  switch (n.kind) {
    case TypeKind::Unit:
    case TypeKind::SafeUnit: return unit_type();
    case TypeKind::Sum: return sum_type(norm_of(TypeId{n.a}), norm_of(TypeId{n.b}));
    case TypeKind::Prod: return prod_type(norm_of(TypeId{n.a}), norm_of(TypeId{n.b}));
    case TypeKind::Mu:
    case TypeKind::SafeMu: return mu_type(FunctorId{n.a});
  }
  return t;
}

inline Tier tier(TypeId t) {
  TypeNode n = node_of(t);
  switch (n.kind) {
    case TypeKind::Unit:
    case TypeKind::Mu: return Tier::Normal;
    case TypeKind::SafeUnit:
    case TypeKind::SafeMu: return Tier::Safe;
    case TypeKind::Sum:
    case TypeKind::Prod: {
      Tier l = tier(TypeId{n.a});
      Tier r = tier(TypeId{n.b});
      return l == r ? l : Tier::Mixed;
    }
  }
  return Tier::Mixed;
}

inline bool is_normal(TypeId t) { return tier(t) == Tier::Normal; }
inline bool is_safe(TypeId t) { return tier(t) == Tier::Safe; }

inline const char* tier_name(Tier t) {
  switch (t) {
    case Tier::Normal: return "normal";
    case Tier::Safe: return "safe";
    case Tier::Mixed: return "mixed";
  }
  return "mixed";
}

// ---------------------------------------------------------------------------
// Functors

inline TypeId apply_functor(FunctorId f, TypeId x) {
  FunctorNode n = node_of(f);
  switch (n.kind) {
    case FunctorKind::Id: return x;
    case FunctorKind::Const: return TypeId{n.a};
    case FunctorKind::Sum: return sum_type(apply_functor(FunctorId{n.a}, x), apply_functor(FunctorId{n.b}, x));
    case FunctorKind::Prod: return prod_type(apply_functor(FunctorId{n.a}, x), apply_functor(FunctorId{n.b}, x));
  }
  return x;
}

// One-step unfolding: μP ↦ P(μP), safe μP ↦ safe(P(μP)).
inline TypeId unfold(TypeId t) {
  TypeNode n = node_of(t);
  if (n.kind == TypeKind::Mu) return apply_functor(FunctorId{n.a}, t);
  if (n.kind == TypeKind::SafeMu) return safe_of(apply_functor(FunctorId{n.a}, mu_type(FunctorId{n.a})));
  fail(ErrorCode::Internal, "unfold of a non-inductive type");
}

inline int degree(FunctorId f) {
  FunctorNode n = node_of(f);
  switch (n.kind) {
    case FunctorKind::Id: return 1;
    case FunctorKind::Const: return 0;
    case FunctorKind::Sum: return std::max(degree(FunctorId{n.a}), degree(FunctorId{n.b}));
    case FunctorKind::Prod: return degree(FunctorId{n.a}) + degree(FunctorId{n.b});
  }
  return 0;
}

// Number of functor nodes; the per-unrolling charge of the functor reduction.
inline int functor_size(FunctorId f) {
  FunctorNode n = node_of(f);
  if (n.kind == FunctorKind::Sum || n.kind == FunctorKind::Prod)
    return 1 + functor_size(FunctorId{n.a}) + functor_size(FunctorId{n.b});
  return 1;
}

// Number of Id leaves.
inline int functor_ids(FunctorId f) {
  FunctorNode n = node_of(f);
  switch (n.kind) {
    case FunctorKind::Id: return 1;
    case FunctorKind::Const: return 0;
    default: return functor_ids(FunctorId{n.a}) + functor_ids(FunctorId{n.b});
  }
}

// ---------------------------------------------------------------------------
// Inhabitation

namespace detail {
// Evaluates P at the empty type: true iff P(0) is inhabited.
inline bool functor_at_empty(FunctorId f, const std::function<bool(TypeId)>& inhabited) {
  FunctorNode n = node_of(f);
  switch (n.kind) {
    case FunctorKind::Id: return false;
    case FunctorKind::Const: return inhabited(TypeId{n.a});
    case FunctorKind::Sum: return functor_at_empty(FunctorId{n.a}, inhabited) || functor_at_empty(FunctorId{n.b}, inhabited);
    case FunctorKind::Prod: return functor_at_empty(FunctorId{n.a}, inhabited) && functor_at_empty(FunctorId{n.b}, inhabited);
  }
  return false;
}
}  // namespace detail

inline bool is_inhabited(TypeId t) {
  TypeNode n = node_of(t);
  switch (n.kind) {
    case TypeKind::Unit:
    case TypeKind::SafeUnit: return true;
    case TypeKind::Sum: return is_inhabited(TypeId{n.a}) || is_inhabited(TypeId{n.b});
    case TypeKind::Prod: return is_inhabited(TypeId{n.a}) && is_inhabited(TypeId{n.b});
    case TypeKind::Mu:
    case TypeKind::SafeMu: return detail::functor_at_empty(FunctorId{n.a}, [](TypeId c) { return is_inhabited(c); });
  }
  return false;
}

inline bool functor_inhabited_at_empty(FunctorId f) {
  return detail::functor_at_empty(f, [](TypeId c) { return is_inhabited(c); });
}

// ---------------------------------------------------------------------------
// Classification

struct Classification {
  bool sequential = false;
  bool hereditarily_sequential = false;
  Tier tier = Tier::Normal;
  bool branching() const { return !sequential; }
};

inline bool is_sequential(TypeId t) {
  TypeNode n = node_of(t);
  switch (n.kind) {
    case TypeKind::Unit:
    case TypeKind::SafeUnit: return true;
    case TypeKind::Sum:
    case TypeKind::Prod: return is_sequential(TypeId{n.a}) && is_sequential(TypeId{n.b});
    case TypeKind::Mu:
    case TypeKind::SafeMu: return degree(FunctorId{n.a}) <= 1;
  }
  return false;
}

inline bool is_hereditarily_sequential(TypeId t);

inline bool functor_hereditarily_sequential(FunctorId f) {
  FunctorNode n = node_of(f);
  switch (n.kind) {
    case FunctorKind::Id: return true;
    case FunctorKind::Const: return is_hereditarily_sequential(TypeId{n.a});
    default: return functor_hereditarily_sequential(FunctorId{n.a}) && functor_hereditarily_sequential(FunctorId{n.b});
  }
}

inline bool is_hereditarily_sequential(TypeId t) {
  TypeNode n = node_of(t);
  switch (n.kind) {
    case TypeKind::Unit:
    case TypeKind::SafeUnit: return true;
    case TypeKind::Sum:
    case TypeKind::Prod: return is_hereditarily_sequential(TypeId{n.a}) && is_hereditarily_sequential(TypeId{n.b});
    case TypeKind::Mu:
    case TypeKind::SafeMu:
      return degree(FunctorId{n.a}) <= 1 && functor_hereditarily_sequential(FunctorId{n.a});
  }
  return false;
}

inline Classification classify(TypeId t) {
  return Classification{is_sequential(t), is_hereditarily_sequential(t), tier(t)};
}

// ---------------------------------------------------------------------------
// Standard datatypes

inline TypeId nat_type() { return mu_type(f_sum(f_const(unit_type()), f_id())); }
inline TypeId tree_type() { return mu_type(f_sum(f_const(unit_type()), f_prod(f_id(), f_id()))); }
inline TypeId list_type(TypeId elem) {
  return mu_type(f_sum(f_const(unit_type()), f_prod(f_const(elem), f_id())));
}

// ---------------------------------------------------------------------------
// Arrow types (top level only)

struct Type {
  std::optional<TypeId> arg;
  TypeId result;
  bool is_arrow() const { return arg.has_value(); }
  friend bool operator==(const Type&, const Type&) = default;
};

}  // namespace ramrec

template <>
struct std::hash<ramrec::TypeId> {
  std::size_t operator()(ramrec::TypeId t) const noexcept { return t.v; }
};
template <>
struct std::hash<ramrec::FunctorId> {
  std::size_t operator()(ramrec::FunctorId f) const noexcept { return f.v; }
};
