// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ramrec/error.hpp"
#include "ramrec/type_print.hpp"
#include "ramrec/types.hpp"

namespace ramrec {

using BigNat = boost::multiprecision::cpp_int;
using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

enum class VertexKind : std::uint8_t { Unit, Inj, Pair, Con };

// Children always have smaller ids than their parents, so id order is a topological order.
struct Vertex {
  VertexKind kind = VertexKind::Unit;
  std::uint8_t slot = 0;  // injection index for Inj
  VertexId c0 = kNoVertex;
  VertexId c1 = kNoVertex;
};

struct ValueRef {
  VertexId root = kNoVertex;
  TypeId type;
};

class Heap {
 public:
  VertexId unit() { return push({VertexKind::Unit, 0, kNoVertex, kNoVertex}); }
  VertexId inj(int j, VertexId c) { return push({VertexKind::Inj, static_cast<std::uint8_t>(j), check(c), kNoVertex}); }
  VertexId pair(VertexId a, VertexId b) { return push({VertexKind::Pair, 0, check(a), check(b)}); }
  VertexId con(VertexId c) { return push({VertexKind::Con, 0, check(c), kNoVertex}); }

  const Vertex& at(VertexId v) const { return vertices_[v]; }
  std::size_t vertex_count() const { return vertices_.size(); }
  bool contains(VertexId v) const { return v < vertices_.size(); }
  void reserve(std::size_t n) { vertices_.reserve(n); }

 private:
  VertexId check(VertexId c) const {
    if (c >= vertices_.size()) fail(ErrorCode::Internal, "dangling child vertex");
    return c;
  }
  VertexId push(Vertex v) {
    vertices_.push_back(v);
    return static_cast<VertexId>(vertices_.size() - 1);
  }

  std::vector<Vertex> vertices_;
};

inline int arity(VertexKind k) {
  switch (k) {
    case VertexKind::Unit: return 0;
    case VertexKind::Pair: return 2;
    default: return 1;
  }
}

// Reachable vertices in ascending id order (children before parents).
inline std::vector<VertexId> reachable(const Heap& h, VertexId root) {
  std::vector<VertexId> out;
  std::unordered_set<VertexId> seen;
  std::vector<VertexId> stack{root};
  seen.insert(root);
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    out.push_back(v);
    const Vertex& x = h.at(v);
    for (VertexId c : {x.c0, x.c1}) {
      if (c != kNoVertex && seen.insert(c).second) stack.push_back(c);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::size_t size(const Heap& h, VertexId root) {
  std::size_t n = 0;
  for (VertexId v : reachable(h, root))
    if (h.at(v).kind == VertexKind::Con) ++n;
  return n;
}
inline std::size_t size(const Heap& h, ValueRef v) { return size(h, v.root); }

inline std::size_t total_vertices(const Heap& h, VertexId root) { return reachable(h, root).size(); }
inline std::size_t total_vertices(const Heap& h, ValueRef v) { return total_vertices(h, v.root); }

inline BigNat tree_size(const Heap& h, VertexId root) {
  std::unordered_map<VertexId, BigNat> ts;
  for (VertexId v : reachable(h, root)) {
    const Vertex& x = h.at(v);
    BigNat n = x.kind == VertexKind::Con ? 1 : 0;
    if (x.c0 != kNoVertex) n += ts.at(x.c0);
    if (x.c1 != kNoVertex) n += ts.at(x.c1);
    ts.emplace(v, std::move(n));
  }
  return ts.at(root);
}
inline BigNat tree_size(const Heap& h, ValueRef v) { return tree_size(h, v.root); }

inline std::uint64_t tree_size_u64(const Heap& h, ValueRef v) {
  BigNat n = tree_size(h, v);
  if (n > std::numeric_limits<std::uint64_t>::max()) fail(ErrorCode::Overflow, "tree size exceeds 64 bits");
  return static_cast<std::uint64_t>(n);
}

// Derived (normal) type of every reachable vertex; validates the labeling against the type.
inline std::unordered_map<VertexId, TypeId> vertex_types(const Heap& h, ValueRef v) {
  std::unordered_map<VertexId, TypeId> types;
  std::vector<VertexId> order = reachable(h, v.root);
  types.emplace(v.root, norm_of(v.type));
  auto assign = [&](VertexId c, TypeId t) {
    auto [it, inserted] = types.emplace(c, t);
    if (!inserted && it->second != t) fail(ErrorCode::TypeMismatch, "shared vertex reached at two different types");
  };
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Vertex& x = h.at(*it);
    TypeId t = types.at(*it);
    TypeKind k = kind_of(t);
    switch (x.kind) {
      case VertexKind::Unit:
        if (k != TypeKind::Unit) fail(ErrorCode::TypeMismatch, "unit vertex at type " + print_type(t));
        break;
      case VertexKind::Inj:
        if (k != TypeKind::Sum || (x.slot != 1 && x.slot != 2))
          fail(ErrorCode::TypeMismatch, "injection vertex at type " + print_type(t));
        assign(x.c0, component(t, x.slot));
        break;
      case VertexKind::Pair:
        if (k != TypeKind::Prod) fail(ErrorCode::TypeMismatch, "pair vertex at type " + print_type(t));
        assign(x.c0, left(t));
        assign(x.c1, right(t));
        break;
      case VertexKind::Con:
        if (k != TypeKind::Mu) fail(ErrorCode::TypeMismatch, "constructor vertex at type " + print_type(t));
        assign(x.c0, unfold(t));
        break;
    }
  }
  return types;
}

inline void validate(const Heap& h, ValueRef v) { (void)vertex_types(h, v); }

inline bool bisimilar(const Heap& h1, VertexId v, const Heap& h2, VertexId w) {
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::pair<VertexId, VertexId>> work{{v, w}};
  while (!work.empty()) {
    auto [a, b] = work.back();
    work.pop_back();
    if (!seen.insert((static_cast<std::uint64_t>(a) << 32) | b).second) continue;
    const Vertex& x = h1.at(a);
    const Vertex& y = h2.at(b);
    if (x.kind != y.kind || x.slot != y.slot) return false;
    if (x.c0 != kNoVertex) work.emplace_back(x.c0, y.c0);
    if (x.c1 != kNoVertex) work.emplace_back(x.c1, y.c1);
  }
  return true;
}

inline bool bisimilar(const Heap& h1, ValueRef v, const Heap& h2, ValueRef w) {
  if (norm_of(v.type) != norm_of(w.type))
    fail(ErrorCode::TypeMismatch, "bisimilarity between values of different types");
  return bisimilar(h1, v.root, h2, w.root);
}
inline bool bisimilar(const Heap& h, ValueRef v, ValueRef w) { return bisimilar(h, v, h, w); }

namespace detail {

struct ShapeKey {
  TypeId type;
  VertexKind kind;
  std::uint8_t slot;
  std::uint32_t c0, c1;
  friend bool operator==(const ShapeKey&, const ShapeKey&) = default;
};

struct ShapeKeyHash {
  std::size_t operator()(const ShapeKey& k) const noexcept {
    std::uint64_t h = k.type.v;
    h = h * 0x100000001B3ull + static_cast<std::uint64_t>(k.kind) * 7 + k.slot;
    h = h * 0x100000001B3ull + k.c0;
    h = h * 0x100000001B3ull + k.c1;
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

// Bisimilarity classes by bottom-up hash-consing; returns vertex -> class id (classes numbered densely).
inline std::unordered_map<VertexId, std::uint32_t> bisim_classes(const Heap& h, ValueRef v,
                                                                 std::vector<VertexId>* representatives = nullptr) {
  auto types = vertex_types(h, v);
  std::unordered_map<ShapeKey, std::uint32_t, ShapeKeyHash> table;
  std::unordered_map<VertexId, std::uint32_t> cls;
  for (VertexId u : reachable(h, v.root)) {
    const Vertex& x = h.at(u);
    ShapeKey key{types.at(u), x.kind, x.slot, x.c0 == kNoVertex ? kNoVertex : cls.at(x.c0),
                 x.c1 == kNoVertex ? kNoVertex : cls.at(x.c1)};
    auto [it, inserted] = table.try_emplace(key, static_cast<std::uint32_t>(table.size()));
    if (inserted && representatives) representatives->push_back(u);
    cls.emplace(u, it->second);
  }
  return cls;
}

}  // namespace detail

inline std::size_t compressed_size(const Heap& h, ValueRef v) {
  std::vector<VertexId> reps;
  detail::bisim_classes(h, v, &reps);
  std::size_t n = 0;
  for (VertexId r : reps)
    if (h.at(r).kind == VertexKind::Con) ++n;
  return n;
}

// Maximally shared bisimilar copy, appended to the same heap.
inline ValueRef compress(Heap& h, ValueRef v) {
  std::vector<VertexId> reps;
  auto cls = detail::bisim_classes(h, v, &reps);
  std::vector<VertexId> fresh(reps.size(), kNoVertex);
  for (std::size_t c = 0; c < reps.size(); ++c) {
    Vertex x = h.at(reps[c]);
    switch (x.kind) {
      case VertexKind::Unit: fresh[c] = h.unit(); break;
      case VertexKind::Inj: fresh[c] = h.inj(x.slot, fresh[cls.at(x.c0)]); break;
      case VertexKind::Pair: fresh[c] = h.pair(fresh[cls.at(x.c0)], fresh[cls.at(x.c1)]); break;
      case VertexKind::Con: fresh[c] = h.con(fresh[cls.at(x.c0)]); break;
    }
  }
  return ValueRef{fresh[cls.at(v.root)], v.type};
}

// Rooted, edge-ordered, label-preserving isomorphism of the reachable dags.
inline bool isomorphic(const Heap& h1, VertexId v, const Heap& h2, VertexId w) {
  std::unordered_map<VertexId, VertexId> fwd, bwd;
  std::vector<std::pair<VertexId, VertexId>> work{{v, w}};
  while (!work.empty()) {
    auto [a, b] = work.back();
    work.pop_back();
    auto f = fwd.find(a);
    auto g = bwd.find(b);
    if (f != fwd.end() || g != bwd.end()) {
      if (f == fwd.end() || g == bwd.end() || f->second != b || g->second != a) return false;
      continue;
    }
    fwd.emplace(a, b);
    bwd.emplace(b, a);
    const Vertex& x = h1.at(a);
    const Vertex& y = h2.at(b);
    if (x.kind != y.kind || x.slot != y.slot) return false;
    if (x.c0 != kNoVertex) work.emplace_back(x.c0, y.c0);
    if (x.c1 != kNoVertex) work.emplace_back(x.c1, y.c1);
  }
  return true;
}

// ---------------------------------------------------------------------------
// Numerals (nat = mu(C_unit + Id))

inline VertexId make_nat(Heap& h, std::uint64_t n) {
  VertexId v = h.con(h.inj(1, h.unit()));
  for (std::uint64_t i = 0; i < n; ++i) v = h.con(h.inj(2, v));
  return v;
}

inline std::optional<std::uint64_t> read_nat(const Heap& h, VertexId v) {
  std::uint64_t n = 0;
  for (;;) {
    const Vertex& c = h.at(v);
    if (c.kind != VertexKind::Con) return std::nullopt;
    const Vertex& i = h.at(c.c0);
    if (i.kind != VertexKind::Inj) return std::nullopt;
    if (i.slot == 1) return n;
    ++n;
    v = i.c0;
  }
}

// ---------------------------------------------------------------------------
// Graphviz

inline std::string to_dot(const Heap& h, ValueRef v, const TypeNames* names = nullptr) {
  auto types = vertex_types(h, v);
  std::ostringstream os;
  os << "digraph value {\n  node [shape=box, fontname=monospace];\n";
  for (VertexId u : reachable(h, v.root)) {
    const Vertex& x = h.at(u);
    std::string label;
    switch (x.kind) {
      case VertexKind::Unit: label = "()"; break;
      case VertexKind::Inj: label = "inj" + std::to_string(x.slot); break;
      case VertexKind::Pair: label = "pair"; break;
      case VertexKind::Con: label = "con " + print_type(types.at(u), names); break;
    }
    os << "  v" << u << " [label=\"" << label << "\"];\n";
    if (x.c0 != kNoVertex) os << "  v" << u << " -> v" << x.c0 << (x.kind == VertexKind::Pair ? " [label=\"1\"]" : "") << ";\n";
    if (x.c1 != kNoVertex) os << "  v" << u << " -> v" << x.c1 << " [label=\"2\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace ramrec
