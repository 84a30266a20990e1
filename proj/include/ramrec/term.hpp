// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ramrec/symbol.hpp"
#include "ramrec/types.hpp"

namespace ramrec {

enum class TermKind : std::uint8_t {
  Var,
  Lam,
  App,
  Unit,
  Pair,
  Proj,
  Inj,
  Case,
  Con,
  Des,
  Fold,
  SafeCon,
  SafeDes,
  ToSafe,
  ToNorm,
  CS,
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Core term. Field use by kind:
//   Var x            Lam x [annot] a         App a b (a is a Lam)
//   Pair a b         Proj index a            Inj index a
//   Case a x b y c   Con/Des/SafeCon/SafeDes/CS datatype a
//   Fold datatype a b (a is the step Lam)    ToSafe/ToNorm a
struct Term {
  TermKind kind = TermKind::Unit;
  int index = 0;
  Symbol x;
  Symbol y;
  std::optional<TypeId> annot;
  TypeId datatype;
  TermPtr a, b, c;
};

namespace mk {

inline TermPtr node(Term t) { return std::make_shared<const Term>(std::move(t)); }

inline TermPtr var(Symbol x) {
  Term t;
  t.kind = TermKind::Var;
  t.x = x;
  return node(std::move(t));
}
inline TermPtr var(std::string_view x) { return var(sym(x)); }

inline TermPtr lam(Symbol x, std::optional<TypeId> annot, TermPtr body) {
  Term t;
  t.kind = TermKind::Lam;
  t.x = x;
  t.annot = annot;
  t.a = std::move(body);
  return node(std::move(t));
}

inline TermPtr app(TermPtr f, TermPtr arg) {
  Term t;
  t.kind = TermKind::App;
  t.a = std::move(f);
  t.b = std::move(arg);
  return node(std::move(t));
}

inline TermPtr unit() { return node(Term{}); }

inline TermPtr pair(TermPtr l, TermPtr r) {
  Term t;
  t.kind = TermKind::Pair;
  t.a = std::move(l);
  t.b = std::move(r);
  return node(std::move(t));
}

inline TermPtr proj(int j, TermPtr e) {
  Term t;
  t.kind = TermKind::Proj;
  t.index = j;
  t.a = std::move(e);
  return node(std::move(t));
}

inline TermPtr inj(int j, TermPtr e) {
  Term t;
  t.kind = TermKind::Inj;
  t.index = j;
  t.a = std::move(e);
  return node(std::move(t));
}

inline TermPtr case_of(TermPtr subject, Symbol x1, TermPtr e1, Symbol x2, TermPtr e2) {
  Term t;
  t.kind = TermKind::Case;
  t.a = std::move(subject);
  t.x = x1;
  t.b = std::move(e1);
  t.y = x2;
  t.c = std::move(e2);
  return node(std::move(t));
}

inline TermPtr unary(TermKind k, TypeId datatype, TermPtr e) {
  Term t;
  t.kind = k;
  t.datatype = datatype;
  t.a = std::move(e);
  return node(std::move(t));
}

inline TermPtr con(TypeId d, TermPtr e) { return unary(TermKind::Con, d, std::move(e)); }
inline TermPtr des(TypeId d, TermPtr e) { return unary(TermKind::Des, d, std::move(e)); }
inline TermPtr scon(TypeId d, TermPtr e) { return unary(TermKind::SafeCon, d, std::move(e)); }
inline TermPtr sdes(TypeId d, TermPtr e) { return unary(TermKind::SafeDes, d, std::move(e)); }
inline TermPtr cs(TypeId d, TermPtr e) { return unary(TermKind::CS, d, std::move(e)); }
inline TermPtr to_safe(TermPtr e) { return unary(TermKind::ToSafe, TypeId{}, std::move(e)); }
inline TermPtr to_norm(TermPtr e) { return unary(TermKind::ToNorm, TypeId{}, std::move(e)); }

inline TermPtr fold(TypeId d, TermPtr step, TermPtr arg) {
  Term t;
  t.kind = TermKind::Fold;
  t.datatype = d;
  t.a = std::move(step);
  t.b = std::move(arg);
  return node(std::move(t));
}

inline TermPtr let(Symbol x, std::optional<TypeId> annot, TermPtr bound, TermPtr body) {
  return app(lam(x, annot, std::move(body)), std::move(bound));
}

}  // namespace mk

inline const char* term_kind_name(TermKind k) {
  switch (k) {
    case TermKind::Var: return "Var";
    case TermKind::Lam: return "Lam";
    case TermKind::App: return "App";
    case TermKind::Unit: return "Unit";
    case TermKind::Pair: return "Pair";
    case TermKind::Proj: return "Proj";
    case TermKind::Inj: return "Inj";
    case TermKind::Case: return "Case";
    case TermKind::Con: return "Con";
    case TermKind::Des: return "Des";
    case TermKind::Fold: return "Fold";
    case TermKind::SafeCon: return "SafeCon";
    case TermKind::SafeDes: return "SafeDes";
    case TermKind::ToSafe: return "ToSafe";
    case TermKind::ToNorm: return "ToNorm";
    case TermKind::CS: return "CS";
  }
  return "?";
}

// Free variables, in first-occurrence order.
inline void free_vars_into(const Term& t, std::vector<Symbol>& bound, std::vector<Symbol>& out) {
  auto is_bound = [&](Symbol s) { return std::find(bound.begin(), bound.end(), s) != bound.end(); };
  switch (t.kind) {
    case TermKind::Var:
      if (!is_bound(t.x) && std::find(out.begin(), out.end(), t.x) == out.end()) out.push_back(t.x);
      return;
    case TermKind::Lam:
      bound.push_back(t.x);
      free_vars_into(*t.a, bound, out);
      bound.pop_back();
      return;
    case TermKind::Case:
      free_vars_into(*t.a, bound, out);
      bound.push_back(t.x);
      free_vars_into(*t.b, bound, out);
      bound.back() = t.y;
      free_vars_into(*t.c, bound, out);
      bound.pop_back();
      return;
    default:
      if (t.a) free_vars_into(*t.a, bound, out);
      if (t.b) free_vars_into(*t.b, bound, out);
      if (t.c) free_vars_into(*t.c, bound, out);
      return;
  }
}

inline std::vector<Symbol> free_vars(const Term& t) {
  std::vector<Symbol> bound, out;
  free_vars_into(t, bound, out);
  return out;
}

// α-equivalence (binder annotations must agree).
inline bool alpha_equivalent(const Term& l, const Term& r, std::vector<std::pair<Symbol, Symbol>>& env) {
  if (l.kind != r.kind) return false;
  switch (l.kind) {
    case TermKind::Var: {
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        if (it->first == l.x || it->second == r.x) return it->first == l.x && it->second == r.x;
      }
      return l.x == r.x;
    }
    case TermKind::Lam: {
      if (l.annot != r.annot) return false;
      env.emplace_back(l.x, r.x);
      bool ok = alpha_equivalent(*l.a, *r.a, env);
      env.pop_back();
      return ok;
    }
    case TermKind::Case: {
      if (!alpha_equivalent(*l.a, *r.a, env)) return false;
      env.emplace_back(l.x, r.x);
      bool ok = alpha_equivalent(*l.b, *r.b, env);
      env.back() = {l.y, r.y};
      ok = ok && alpha_equivalent(*l.c, *r.c, env);
      env.pop_back();
      return ok;
    }
    default:
      if (l.index != r.index || l.datatype != r.datatype) return false;
      if (static_cast<bool>(l.a) != static_cast<bool>(r.a) || static_cast<bool>(l.b) != static_cast<bool>(r.b) ||
          static_cast<bool>(l.c) != static_cast<bool>(r.c))
        return false;
      if (l.a && !alpha_equivalent(*l.a, *r.a, env)) return false;
      if (l.b && !alpha_equivalent(*l.b, *r.b, env)) return false;
      if (l.c && !alpha_equivalent(*l.c, *r.c, env)) return false;
      return true;
  }
}

inline bool alpha_equivalent(const Term& l, const Term& r) {
  std::vector<std::pair<Symbol, Symbol>> env;
  return alpha_equivalent(l, r, env);
}

inline std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  if (t.a) n += term_size(*t.a);
  if (t.b) n += term_size(*t.b);
  if (t.c) n += term_size(*t.c);
  return n;
}

}  // namespace ramrec
