// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>
#include <string>
#include <unordered_map>
#include <vector>

#include "ramrec/eval.hpp"
#include "ramrec/heap.hpp"
#include "ramrec/syntax.hpp"
#include "ramrec/typecheck.hpp"

namespace ramrec {

enum class VtgKind : std::uint8_t { Unit, Inj1, Inj2, Pair, Mu };

struct VtgItem {
  VtgKind kind = VtgKind::Unit;
  std::string type;  // empty for Unit
  std::uint32_t addr1 = 0;
  std::uint32_t addr2 = 0;
  friend bool operator==(const VtgItem&, const VtgItem&) = default;
};

// items[0] is u_{n-1} (the root); items[n-1-i] has address i.
struct VtgList {
  std::vector<VtgItem> items;
  friend bool operator==(const VtgList&, const VtgList&) = default;

  std::size_t size() const { return items.size(); }
  const VtgItem& at_address(std::size_t i) const { return items[items.size() - 1 - i]; }
};

inline const char* vtg_kind_name(VtgKind k) {
  switch (k) {
    case VtgKind::Unit: return "unit";
    case VtgKind::Inj1: return "inj1";
    case VtgKind::Inj2: return "inj2";
    case VtgKind::Pair: return "pair";
    case VtgKind::Mu: return "mu";
  }
  return "unit";
}

// Canonical list for the compressed form of v: addresses follow a left-to-right post-order DFS.
inline VtgList serialize(const Heap& h, ValueRef v, const TypeNames* names = nullptr) {
  std::vector<VertexId> reps;
  auto cls = detail::bisim_classes(h, v, &reps);
  auto types = vertex_types(h, v);

  std::vector<std::uint32_t> addr(reps.size(), UINT32_MAX);
  std::vector<std::uint32_t> order;
  std::vector<std::pair<std::uint32_t, bool>> stack{{cls.at(v.root), false}};
  std::vector<bool> seen(reps.size(), false);
  while (!stack.empty()) {
    auto [c, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      addr[c] = static_cast<std::uint32_t>(order.size());
      order.push_back(c);
      continue;
    }
    if (seen[c]) continue;
    seen[c] = true;
    stack.emplace_back(c, true);
    const Vertex& x = h.at(reps[c]);
    if (x.c1 != kNoVertex && !seen[cls.at(x.c1)]) stack.emplace_back(cls.at(x.c1), false);
    if (x.c0 != kNoVertex && !seen[cls.at(x.c0)]) stack.emplace_back(cls.at(x.c0), false);
  }

  std::unordered_map<TypeId, std::string> type_strings;
  auto type_string = [&](TypeId t) -> const std::string& {
    auto it = type_strings.find(t);
    if (it == type_strings.end()) it = type_strings.emplace(t, print_type(t, names)).first;
    return it->second;
  };

  VtgList out;
  out.items.reserve(order.size());
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    VertexId r = reps[*it];
    const Vertex& x = h.at(r);
    VtgItem item;
    switch (x.kind) {
      case VertexKind::Unit: item.kind = VtgKind::Unit; break;
      case VertexKind::Inj:
        item.kind = x.slot == 1 ? VtgKind::Inj1 : VtgKind::Inj2;
        item.type = type_string(types.at(r));
        item.addr1 = addr[cls.at(x.c0)];
        break;
      case VertexKind::Pair:
        item.kind = VtgKind::Pair;
        item.type = type_string(types.at(r));
        item.addr1 = addr[cls.at(x.c0)];
        item.addr2 = addr[cls.at(x.c1)];
        break;
      case VertexKind::Con:
        item.kind = VtgKind::Mu;
        item.type = type_string(types.at(r));
        item.addr1 = addr[cls.at(x.c0)];
        break;
    }
    out.items.push_back(std::move(item));
  }
  return out;
}

enum class DeserializeMode : std::uint8_t { Strict, Lenient };

inline ValueRef deserialize(TypeId gamma, const VtgList& list, Heap& h, const TypeNames* names = nullptr,
                            DeserializeMode mode = DeserializeMode::Strict) {
  auto bad = [](const std::string& msg) -> void { fail(ErrorCode::RepresentationError, msg); };
  const std::size_t n = list.size();
  if (n == 0) bad("empty vertex list");
  static const TypeNames empty_names;
  const TypeNames& nm = names ? *names : empty_names;

  std::unordered_map<std::string, TypeId> parsed;
  auto type_of = [&](const std::string& s, std::size_t i) {
    auto it = parsed.find(s);
    if (it != parsed.end()) return it->second;
    TypeId t;
    try {
      t = norm_of(parse_type(s, nm));
    } catch (const Error& e) {
      fail(ErrorCode::RepresentationError, "item " + std::to_string(i) + ": bad type string '" + s + "': " + e.what());
    }
    parsed.emplace(s, t);
    return t;
  };

  std::vector<std::optional<TypeId>> expected(n);
  expected[n - 1] = norm_of(gamma);
  auto expect = [&](std::uint32_t a, TypeId t, std::size_t from) {
    if (a >= from) bad("item " + std::to_string(from) + " refers to address " + std::to_string(a) + " (not smaller)");
    if (expected[a] && *expected[a] != t)
      bad("address " + std::to_string(a) + " is used at two different types");
    expected[a] = t;
  };

  for (std::size_t i = n; i-- > 0;) {
    const VtgItem& item = list.at_address(i);
    if (!expected[i]) {
      if (mode == DeserializeMode::Strict) bad("item at address " + std::to_string(i) + " is unreachable");
      continue;
    }
    TypeId t = *expected[i];
    TypeKind k = kind_of(t);
    std::string where = "address " + std::to_string(i) + ": ";
    switch (item.kind) {
      case VtgKind::Unit:
        if (k != TypeKind::Unit) bad(where + "unit item at type " + print_type(t, names));
        break;
      case VtgKind::Inj1:
      case VtgKind::Inj2:
        if (k != TypeKind::Sum) bad(where + "injection item at type " + print_type(t, names));
        if (type_of(item.type, i) != t) bad(where + "type string '" + item.type + "' does not match " + print_type(t, names));
        expect(item.addr1, component(t, item.kind == VtgKind::Inj1 ? 1 : 2), i);
        break;
      case VtgKind::Pair:
        if (k != TypeKind::Prod) bad(where + "pair item at type " + print_type(t, names));
        if (type_of(item.type, i) != t) bad(where + "type string '" + item.type + "' does not match " + print_type(t, names));
        expect(item.addr1, left(t), i);
        expect(item.addr2, right(t), i);
        break;
      case VtgKind::Mu:
        if (k != TypeKind::Mu) bad(where + "constructor item at type " + print_type(t, names));
        if (type_of(item.type, i) != t) bad(where + "type string '" + item.type + "' does not match " + print_type(t, names));
        expect(item.addr1, unfold(t), i);
        break;
    }
  }

  std::vector<VertexId> vertex(n, kNoVertex);
  for (std::size_t i = 0; i < n; ++i) {
    if (!expected[i]) continue;
    const VtgItem& item = list.at_address(i);
    switch (item.kind) {
      case VtgKind::Unit: vertex[i] = h.unit(); break;
      case VtgKind::Inj1: vertex[i] = h.inj(1, vertex[item.addr1]); break;
      case VtgKind::Inj2: vertex[i] = h.inj(2, vertex[item.addr1]); break;
      case VtgKind::Pair: vertex[i] = h.pair(vertex[item.addr1], vertex[item.addr2]); break;
      case VtgKind::Mu: vertex[i] = h.con(vertex[item.addr1]); break;
    }
  }
  return ValueRef{vertex[n - 1], gamma};
}

// ---------------------------------------------------------------------------
// Default values

inline VertexId default_value(TypeId t, Heap& h);

inline VertexId default_payload(FunctorId f, TypeId self, Heap& h) {
  FunctorNode n = node_of(f);
  switch (n.kind) {
    case FunctorKind::Id: return default_value(self, h);
    case FunctorKind::Const: return default_value(TypeId{n.a}, h);
    case FunctorKind::Sum:
      if (functor_inhabited_at_empty(FunctorId{n.a})) return h.inj(1, default_payload(FunctorId{n.a}, self, h));
      return h.inj(2, default_payload(FunctorId{n.b}, self, h));
    case FunctorKind::Prod: {
      VertexId a = default_payload(FunctorId{n.a}, self, h);
      return h.pair(a, default_payload(FunctorId{n.b}, self, h));
    }
  }
  return kNoVertex;
}

// Smallest-depth value of an inhabited type.
inline VertexId default_value(TypeId t, Heap& h) {
  TypeNode n = node_of(t);
  switch (n.kind) {
    case TypeKind::Unit:
    case TypeKind::SafeUnit: return h.unit();
    case TypeKind::Sum:
      if (is_inhabited(TypeId{n.a})) return h.inj(1, default_value(TypeId{n.a}, h));
      return h.inj(2, default_value(TypeId{n.b}, h));
    case TypeKind::Prod: {
      VertexId a = default_value(TypeId{n.a}, h);
      return h.pair(a, default_value(TypeId{n.b}, h));
    }
    case TypeKind::Mu:
    case TypeKind::SafeMu: {
      FunctorId f{n.a};
      if (!functor_inhabited_at_empty(f)) fail(ErrorCode::UninhabitedType, "no default value for an empty type");
      return h.con(default_payload(f, mu_type(f), h));
    }
  }
  return kNoVertex;
}

// Total variant: any list that does not represent a γ-value yields the default γ-value.
inline ValueRef deserialize_or_default(TypeId gamma, const VtgList& list, Heap& h, const TypeNames* names = nullptr) {
  try {
    return deserialize(gamma, list, h, names);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RepresentationError) throw;
    return ValueRef{default_value(gamma, h), gamma};
  }
}

// ---------------------------------------------------------------------------
// JSON wire form

inline nlohmann::json to_json(const VtgList& list) {
  nlohmann::json arr = nlohmann::json::array();
  for (const VtgItem& it : list.items) {
    nlohmann::json j;
    j["kind"] = vtg_kind_name(it.kind);
    if (it.kind != VtgKind::Unit) j["type"] = it.type;
    if (it.kind == VtgKind::Pair) {
      j["addr1"] = it.addr1;
      j["addr2"] = it.addr2;
    } else if (it.kind != VtgKind::Unit) {
      j["addr"] = it.addr1;
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

inline VtgList vtg_from_json(const nlohmann::json& arr) {
  auto bad = [](const std::string& msg) { fail(ErrorCode::RepresentationError, msg); };
  if (!arr.is_array()) bad("vertex list must be a JSON array");
  VtgList out;
  for (const auto& j : arr) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) bad("each item needs a string 'kind'");
    std::string k = j["kind"];
    VtgItem it;
    auto need_addr = [&](const char* key) -> std::uint32_t {
      if (!j.contains(key) || !j[key].is_number_unsigned()) bad(std::string("item needs a natural '") + key + "'");
      return j[key].get<std::uint32_t>();
    };
    if (k == "unit") {
      it.kind = VtgKind::Unit;
    } else {
      if (k == "inj1") it.kind = VtgKind::Inj1;
      else if (k == "inj2") it.kind = VtgKind::Inj2;
      else if (k == "pair") it.kind = VtgKind::Pair;
      else if (k == "mu") it.kind = VtgKind::Mu;
      else bad("unknown item kind '" + k + "'");
      if (!j.contains("type") || !j["type"].is_string()) bad("item needs a string 'type'");
      it.type = j["type"];
      if (it.kind == VtgKind::Pair) {
        it.addr1 = need_addr("addr1");
        it.addr2 = need_addr("addr2");
      } else {
        it.addr1 = need_addr("addr");
      }
    }
    out.items.push_back(std::move(it));
  }
  return out;
}

// ---------------------------------------------------------------------------
// In-language reification: vtg as a list of vertex values

struct VtgTypes {
  TypeId nat, str, vertex, vtg;
};

inline VtgTypes vtg_types() {
  TypeId nat = nat_type();
  TypeId str = list_type(nat);
  FunctorId s = f_const(str), n = f_const(nat);
  FunctorId vert = f_sum(f_const(unit_type()),
                         f_sum(f_prod(s, n), f_sum(f_prod(s, n), f_sum(f_prod(s, f_prod(n, n)), f_prod(s, n)))));
  TypeId vertex = mu_type(vert);
  return {nat, str, vertex, list_type(vertex)};
}

namespace detail {
inline VertexId make_string(Heap& h, const std::string& s) {
  VertexId list = h.con(h.inj(1, h.unit()));
  for (auto it = s.rbegin(); it != s.rend(); ++it)
    list = h.con(h.inj(2, h.pair(make_nat(h, static_cast<unsigned char>(*it)), list)));
  return list;
}
}  // namespace detail

// Sharing-free S1 value of type vtg representing the list.
inline ValueRef as_s1_value(const VtgList& list, Heap& h) {
  VtgTypes t = vtg_types();
  VertexId out = h.con(h.inj(1, h.unit()));
  for (auto it = list.items.rbegin(); it != list.items.rend(); ++it) {
    VertexId payload = kNoVertex;
    switch (it->kind) {
      case VtgKind::Unit: payload = h.inj(1, h.unit()); break;
      case VtgKind::Inj1:
        payload = h.inj(2, h.inj(1, h.pair(detail::make_string(h, it->type), make_nat(h, it->addr1))));
        break;
      case VtgKind::Inj2:
        payload = h.inj(2, h.inj(2, h.inj(1, h.pair(detail::make_string(h, it->type), make_nat(h, it->addr1)))));
        break;
      case VtgKind::Pair: {
        VertexId s = detail::make_string(h, it->type);
        VertexId a = make_nat(h, it->addr1);
        VertexId b = make_nat(h, it->addr2);
        payload = h.inj(2, h.inj(2, h.inj(2, h.inj(1, h.pair(s, h.pair(a, b))))));
        break;
      }
      case VtgKind::Mu:
        payload = h.inj(2, h.inj(2, h.inj(2, h.inj(2, h.pair(detail::make_string(h, it->type), make_nat(h, it->addr1))))));
        break;
    }
    out = h.con(h.inj(2, h.pair(h.con(payload), out)));
  }
  return ValueRef{out, t.vtg};
}

// size(as_s1_value(list)) in closed form.
inline std::uint64_t vtg_size(const VtgList& list) {
  auto str = [](const std::string& s) {
    std::uint64_t n = s.size() + 1;
    for (unsigned char c : s) n += c + 1u;
    return n;
  };
  std::uint64_t n = 1 + list.size();
  for (const VtgItem& it : list.items) {
    n += 1;
    switch (it.kind) {
      case VtgKind::Unit: break;
      case VtgKind::Pair: n += str(it.type) + (it.addr1 + 1u) + (it.addr2 + 1u); break;
      default: n += str(it.type) + (it.addr1 + 1u); break;
    }
  }
  return n;
}

// ---------------------------------------------------------------------------
// Factorization: deserialize ∘ f ∘ serialize, checked against direct evaluation.

struct PipelineResult {
  ValueRef value;
  bool agrees = false;
};

inline PipelineResult factor_pipeline(const Judgment& f, ValueRef v, Heap& h, const TypeNames* names = nullptr) {
  if (f.context.size() != 1) fail(ErrorCode::UsageError, "factor_pipeline needs a one-argument function");
  TypeId g1 = f.context[0].second;
  TypeId g0 = f.type;
  VtgList l1 = serialize(h, v, names);
  ValueRef v1 = deserialize(g1, l1, h, names);
  Meter m;
  VertexId r = eval_dp(*f.subject, Env{{f.context[0].first, v1.root}}, h, m);
  VtgList l0 = serialize(h, ValueRef{r, g0}, names);
  ValueRef out = deserialize(g0, l0, h, names);
  VertexId direct = eval_dp(*f.subject, Env{{f.context[0].first, v.root}}, h, m);
  return {out, bisimilar(h, out, ValueRef{direct, g0})};
}

}  // namespace ramrec
