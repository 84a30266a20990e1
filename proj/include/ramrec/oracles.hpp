// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <string>
#include <unordered_map>

#include "ramrec/heap.hpp"
#include "ramrec/type_print.hpp"

// Brute-force reference implementations used as test oracles. Exponential in the worst case.
namespace ramrec::oracle {

// Printed tree unfolding of a vertex, tagged with its type.
inline std::string unfolding(const Heap& h, VertexId v) {
  const Vertex& x = h.at(v);
  switch (x.kind) {
    case VertexKind::Unit: return "U";
    case VertexKind::Inj: return (x.slot == 1 ? "L(" : "R(") + unfolding(h, x.c0) + ")";
    case VertexKind::Pair: return "P(" + unfolding(h, x.c0) + "," + unfolding(h, x.c1) + ")";
    case VertexKind::Con: return "C(" + unfolding(h, x.c0) + ")";
  }
  return "?";
}

inline bool bisimilar(const Heap& h, ValueRef v, ValueRef w) {
  return norm_of(v.type) == norm_of(w.type) && unfolding(h, v.root) == unfolding(h, w.root);
}

// Number of distinct (type, unfolding) classes among constructor vertices.
inline std::size_t compressed_size(const Heap& h, ValueRef v) {
  auto types = vertex_types(h, v);
  std::set<std::pair<TypeId, std::string>> classes;
  for (VertexId u : reachable(h, v.root))
    if (h.at(u).kind == VertexKind::Con) classes.emplace(types.at(u), unfolding(h, u));
  return classes.size();
}

// Sharing-free copy.
inline VertexId unshare(Heap& h, VertexId v) {
  Vertex x = h.at(v);
  switch (x.kind) {
    case VertexKind::Unit: return h.unit();
    case VertexKind::Inj: return h.inj(x.slot, unshare(h, x.c0));
    case VertexKind::Pair: {
      VertexId a = unshare(h, x.c0);
      return h.pair(a, unshare(h, x.c1));
    }
    case VertexKind::Con: return h.con(unshare(h, x.c0));
  }
  return kNoVertex;
}

}  // namespace ramrec::oracle
