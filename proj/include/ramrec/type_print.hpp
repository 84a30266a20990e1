// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <unordered_map>

#include "ramrec/types.hpp"

namespace ramrec {

// Declared datatype names; aliases for structural μ types.
class TypeNames {
 public:
  void add(const std::string& name, TypeId t) {
    by_name_[name] = t;
    by_type_.try_emplace(t, name);
  }
  const std::string* name_of(TypeId t) const {
    auto it = by_type_.find(t);
    return it == by_type_.end() ? nullptr : &it->second;
  }
  std::optional<TypeId> lookup(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }
  const std::unordered_map<std::string, TypeId>& all() const { return by_name_; }

 private:
  std::unordered_map<std::string, TypeId> by_name_;
  std::unordered_map<TypeId, std::string> by_type_;
};

namespace detail {

// prec: 0 = sum context, 1 = product operand, 2 = atom required.
inline void print_type_into(std::string& out, TypeId t, const TypeNames* names, int prec, int depth);

inline void print_functor_into(std::string& out, FunctorId f, const TypeNames* names, int prec, int depth) {
  FunctorNode n = node_of(f);
  switch (n.kind) {
    case FunctorKind::Id: out += "t" + std::to_string(depth); return;
    case FunctorKind::Const: print_type_into(out, TypeId{n.a}, names, prec, depth + 1); return;
    case FunctorKind::Sum:
    case FunctorKind::Prod: {
      bool sum = n.kind == FunctorKind::Sum;
      int mine = sum ? 0 : 1;
      if (prec > mine) out += '(';
      print_functor_into(out, FunctorId{n.a}, names, mine + 1, depth);
      out += sum ? " + " : " * ";
      print_functor_into(out, FunctorId{n.b}, names, mine, depth);
      if (prec > mine) out += ')';
      return;
    }
  }
}

inline void print_type_into(std::string& out, TypeId t, const TypeNames* names, int prec, int depth) {
  TypeNode n = node_of(t);
  switch (n.kind) {
    case TypeKind::Unit: out += "unit"; return;
    case TypeKind::SafeUnit: out += "safe unit"; return;
    case TypeKind::Sum:
    case TypeKind::Prod: {
      bool sum = n.kind == TypeKind::Sum;
      int mine = sum ? 0 : 1;
      if (prec > mine) out += '(';
      print_type_into(out, TypeId{n.a}, names, mine + 1, depth);
      out += sum ? " + " : " * ";
      print_type_into(out, TypeId{n.b}, names, mine, depth);
      if (prec > mine) out += ')';
      return;
    }
    case TypeKind::Mu:
    case TypeKind::SafeMu: {
      TypeId base = mu_type(FunctorId{n.a});
      if (n.kind == TypeKind::SafeMu) out += "safe ";
      if (names != nullptr) {
        if (const std::string* s = names->name_of(base)) {
          out += *s;
          return;
        }
      }
      // Binders are numbered by nesting depth, so the body of a constant refers to t<depth+1>.
      out += "(mu t" + std::to_string(depth) + ". ";
      print_functor_into(out, FunctorId{n.a}, names, 0, depth);
      out += ')';
      return;
    }
  }
}

}  // namespace detail

inline std::string print_type(TypeId t, const TypeNames* names = nullptr) {
  std::string out;
  detail::print_type_into(out, t, names, 0, 0);
  return out;
}

inline std::string print_functor(FunctorId f, const TypeNames* names = nullptr) {
  std::string out;
  detail::print_functor_into(out, f, names, 0, 0);
  return out;
}

inline std::string print_type(const Type& t, const TypeNames* names = nullptr) {
  if (!t.is_arrow()) return print_type(t.result, names);
  return print_type(*t.arg, names) + " -> " + print_type(t.result, names);
}

}  // namespace ramrec
