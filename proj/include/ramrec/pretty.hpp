// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "ramrec/desugar.hpp"
#include "ramrec/term.hpp"
#include "ramrec/type_print.hpp"

namespace ramrec {

class PrettyPrinter {
 public:
  explicit PrettyPrinter(const CoreProgram* program = nullptr) : program_(program) {}

  std::string term(const Term& t) {
    std::string out;
    print(out, t, false);
    return out;
  }

  std::string program(const CoreProgram& p) {
    std::string out = std::string("%calculus ") + calculus_name(p.level) + "\n\n";
    for (const auto& d : p.datatypes) {
      out += "datatype " + d.name + " =";
      FunctorId f = functor_of(d.type);
      for (std::size_t i = 0; i < d.ctors.size(); ++i) {
        out += i == 0 ? " " : " | ";
        out += d.ctors[i];
        FunctorId part = ctor_functor(f, static_cast<int>(i) + 1, static_cast<int>(d.ctors.size()));
        const CtorInfo& c = p.ctors.at(d.ctors[i]);
        if (!c.nullary) out += " of " + print_type(apply_functor(part, d.type), &p.names);
      }
      out += "\n";
    }
    if (!p.datatypes.empty()) out += "\n";
    for (const auto& [name, t] : p.defs) out += "def " + name + " = " + term(*t) + "\n\n";
    if (p.main) out += "main = " + term(**p.main) + "\n";
    return out;
  }

 private:
  static FunctorId ctor_functor(FunctorId f, int index, int count) {
    for (int i = 1; i < index; ++i) f = FunctorId{node_of(f).b};
    return index < count ? FunctorId{node_of(f).a} : f;
  }

  std::string type(TypeId t) const { return print_type(t, program_ ? &program_->names : nullptr); }

  static bool open(const Term& t) {
    switch (t.kind) {
      case TermKind::Lam:
      case TermKind::Case: return true;
      case TermKind::App: return true;
      default: return false;
    }
  }

  // Constructor recognized from the injection chain under a Con/SafeCon node.
  const CtorInfo* match_ctor(TypeId d, const Term& arg, const Term*& payload, bool safe) const {
    if (!program_) return nullptr;
    const DatatypeInfo* info = program_->datatype(d);
    if (!info) return nullptr;
    int k = static_cast<int>(info->ctors.size());
    const Term* t = &arg;
    int i = 1;
    while (i < k && t->kind == TermKind::Inj && t->index == 2) {
      t = t->a.get();
      ++i;
    }
    if (i < k) {
      if (t->kind != TermKind::Inj || t->index != 1) return nullptr;
      t = t->a.get();
    }
    const CtorInfo& c = program_->ctors.at(info->ctors[i - 1]);
    if (c.nullary && !safe && t->kind != TermKind::Unit) return nullptr;
    if (c.nullary && safe && !(t->kind == TermKind::ToSafe && t->a->kind == TermKind::Unit)) return nullptr;
    payload = t;
    return &c;
  }

  void atom(std::string& out, const Term& t) {
    bool paren = open(t) || !is_atomic(t);
    if (paren) out += '(';
    print(out, t, false);
    if (paren) out += ')';
  }

  bool is_atomic(const Term& t) const {
    switch (t.kind) {
      case TermKind::Var:
      case TermKind::Unit:
      case TermKind::Pair: return true;
      case TermKind::Con:
      case TermKind::SafeCon: {
        const Term* payload = nullptr;
        const CtorInfo* c = match_ctor(t.datatype, *t.a, payload, t.kind == TermKind::SafeCon);
        return c && c->nullary;
      }
      default: return false;
    }
  }

  void print(std::string& out, const Term& t, bool nested) {
    (void)nested;
    switch (t.kind) {
      case TermKind::Var: out += sym_name(t.x); return;
      case TermKind::Unit: out += "()"; return;
      case TermKind::Pair:
        out += '(';
        print(out, *t.a, false);
        out += ", ";
        print(out, *t.b, false);
        out += ')';
        return;
      case TermKind::Proj:
        out += t.index == 1 ? "fst " : "snd ";
        atom(out, *t.a);
        return;
      case TermKind::Inj:
        out += t.index == 1 ? "inl " : "inr ";
        atom(out, *t.a);
        return;
      case TermKind::Lam:
        out += "fn ";
        binder(out, t);
        out += " => ";
        print(out, *t.a, false);
        return;
      case TermKind::App: {
        const Term& f = *t.a;
        out += "let ";
        if (f.annot) {
          out += sym_name(f.x) + " : " + type(*f.annot);
        } else {
          out += sym_name(f.x);
        }
        out += " = ";
        bool paren = open(*t.b);
        if (paren) out += '(';
        print(out, *t.b, false);
        if (paren) out += ')';
        out += " in ";
        print(out, *f.a, false);
        return;
      }
      case TermKind::Case: {
        out += "case ";
        bool paren = open(*t.a);
        if (paren) out += '(';
        print(out, *t.a, false);
        if (paren) out += ')';
        out += " of inl " + sym_name(t.x) + " => ";
        paren = open(*t.b);
        if (paren) out += '(';
        print(out, *t.b, false);
        if (paren) out += ')';
        out += " | inr " + sym_name(t.y) + " => ";
        print(out, *t.c, false);
        return;
      }
      case TermKind::Con:
      case TermKind::SafeCon: {
        const Term* payload = nullptr;
        if (const CtorInfo* c = match_ctor(t.datatype, *t.a, payload, t.kind == TermKind::SafeCon)) {
          if (t.kind == TermKind::SafeCon) out += "S.";
          out += c->name;
          if (!c->nullary) {
            out += ' ';
            atom(out, *payload);
          }
          return;
        }
        out += (t.kind == TermKind::Con ? "con[" : "scon[") + type(t.datatype) + "] ";
        atom(out, *t.a);
        return;
      }
      case TermKind::Des: out += "des[" + type(t.datatype) + "] "; atom(out, *t.a); return;
      case TermKind::SafeDes: out += "sdes[" + type(t.datatype) + "] "; atom(out, *t.a); return;
      case TermKind::CS: out += "cs[" + type(t.datatype) + "] "; atom(out, *t.a); return;
      case TermKind::ToSafe: out += "toSafe "; atom(out, *t.a); return;
      case TermKind::ToNorm: out += "toNorm "; atom(out, *t.a); return;
      case TermKind::Fold:
        out += "fold[" + type(t.datatype) + "] ";
        atom(out, *t.a);
        out += ' ';
        atom(out, *t.b);
        return;
    }
  }

  void binder(std::string& out, const Term& lam) {
    if (lam.annot) {
      out += "(" + sym_name(lam.x) + " : " + type(*lam.annot) + ")";
    } else {
      out += sym_name(lam.x);
    }
  }

  const CoreProgram* program_;
};

inline std::string pretty(const Term& t, const CoreProgram* program = nullptr) { return PrettyPrinter(program).term(t); }
inline std::string pretty_program(const CoreProgram& p) { return PrettyPrinter(&p).program(p); }

}  // namespace ramrec
