// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "ramrec/eval.hpp"
#include "ramrec/heap.hpp"
#include "ramrec/term.hpp"
#include "ramrec/typecheck.hpp"

namespace ramrec {

// Subgraph of a value's dag; edges are those induced by the vertex set.
struct Span {
  std::vector<VertexId> vertices;  // sorted, unique

  bool empty() const { return vertices.empty(); }
  bool contains(VertexId v) const { return std::binary_search(vertices.begin(), vertices.end(), v); }
  friend bool operator==(const Span&, const Span&) = default;
};

namespace detail {
inline void span_into(const Heap& h, TypeId t, VertexId v, bool normal_side, std::set<VertexId>& out,
                      std::set<std::pair<VertexId, TypeId>>& seen) {
  if (!seen.emplace(v, t).second) return;
  switch (tier(t)) {
    case Tier::Normal:
      if (normal_side)
        for (VertexId u : reachable(h, v)) out.insert(u);
      return;
    case Tier::Safe:
      if (!normal_side)
        for (VertexId u : reachable(h, v)) out.insert(u);
      return;
    case Tier::Mixed: break;
  }
  out.insert(v);
  const Vertex& x = h.at(v);
  if (kind_of(t) == TypeKind::Sum) {
    if (x.kind != VertexKind::Inj) fail(ErrorCode::TypeMismatch, "vertex does not match a sum type");
    span_into(h, component(t, x.slot), x.c0, normal_side, out, seen);
  } else if (kind_of(t) == TypeKind::Prod) {
    if (x.kind != VertexKind::Pair) fail(ErrorCode::TypeMismatch, "vertex does not match a product type");
    span_into(h, left(t), x.c0, normal_side, out, seen);
    span_into(h, right(t), x.c1, normal_side, out, seen);
  } else {
    fail(ErrorCode::TypeMismatch, "mixed type that is neither a sum nor a product");
  }
}

inline Span span_of(const std::set<VertexId>& s) { return Span{std::vector<VertexId>(s.begin(), s.end())}; }
}  // namespace detail

inline Span normal_span(const Heap& h, TypeId t, VertexId v) {
  std::set<VertexId> out;
  std::set<std::pair<VertexId, TypeId>> seen;
  detail::span_into(h, t, v, true, out, seen);
  return detail::span_of(out);
}

inline Span safe_span(const Heap& h, TypeId t, VertexId v) {
  std::set<VertexId> out;
  std::set<std::pair<VertexId, TypeId>> seen;
  detail::span_into(h, t, v, false, out, seen);
  return detail::span_of(out);
}

inline Span whole_span(const Heap& h, VertexId v) {
  auto r = reachable(h, v);
  std::sort(r.begin(), r.end());
  return Span{std::move(r)};
}

inline Span span_union(const Span& a, const Span& b) {
  Span r;
  std::set_union(a.vertices.begin(), a.vertices.end(), b.vertices.begin(), b.vertices.end(), std::back_inserter(r.vertices));
  return r;
}

inline Span span_minus(const Span& a, const Span& b) {
  Span r;
  std::set_difference(a.vertices.begin(), a.vertices.end(), b.vertices.begin(), b.vertices.end(),
                      std::back_inserter(r.vertices));
  return r;
}

inline Span nonnormal_span(const Heap& h, TypeId t, VertexId v) {
  return span_minus(whole_span(h, v), normal_span(h, t, v));
}

// Constructor vertices in the span.
inline std::size_t size(const Heap& h, const Span& s) {
  std::size_t n = 0;
  for (VertexId v : s.vertices) n += h.at(v).kind == VertexKind::Con;
  return n;
}

inline std::vector<std::pair<VertexId, VertexId>> edges(const Heap& h, const Span& s) {
  std::vector<std::pair<VertexId, VertexId>> out;
  for (VertexId v : s.vertices) {
    const Vertex& x = h.at(v);
    if (x.c0 != kNoVertex && s.contains(x.c0)) out.emplace_back(v, x.c0);
    if (x.c1 != kNoVertex && s.contains(x.c1)) out.emplace_back(v, x.c1);
  }
  return out;
}

// ⟦x⟧θ for each context variable: size of the normal span of θ(x).
inline std::map<std::string, BigNat> variable_residuals(const Heap& h, const Context& ctx, const Env& theta) {
  std::map<std::string, BigNat> out;
  for (const auto& [x, t] : ctx) {
    for (auto it = theta.rbegin(); it != theta.rend(); ++it)
      if (it->first == x) {
        out[sym_name(x)] = size(h, normal_span(h, t, it->second));
        break;
      }
  }
  return out;
}

// Residual size of Γ ⊢ e : γ at θ, given the value v of eθ.
inline std::size_t residual_size_of(const Heap& h, const Context& ctx, const Term& e, TypeId gamma, const Env& theta,
                                    VertexId v) {
  Span sharp = normal_span(h, gamma, v);
  Span rest = span_minus(whole_span(h, v), sharp);
  Span claimed;
  for (Symbol x : free_vars(e)) {
    TypeId t{};
    bool found = false;
    for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
      if (it->first == x) {
        t = it->second;
        found = true;
        break;
      }
    if (!found) continue;
    for (auto it = theta.rbegin(); it != theta.rend(); ++it)
      if (it->first == x) {
        claimed = span_union(claimed, safe_span(h, t, it->second));
        break;
      }
  }
  return size(h, sharp) + size(h, span_minus(rest, claimed));
}

// Evaluates the judgment under DP and returns its residual size.
inline std::size_t residual_size(const Judgment& j, const Env& theta, Heap& h) {
  Meter m;
  VertexId v = eval_dp(*j.subject, theta, h, m);
  return residual_size_of(h, j.context, *j.subject, j.type, theta, v);
}

}  // namespace ramrec
