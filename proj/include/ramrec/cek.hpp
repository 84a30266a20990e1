// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ramrec/eval.hpp"
#include "ramrec/pretty.hpp"

namespace ramrec {

enum class RecordKind : std::uint8_t { App1, App2, Pair1, Pair2, Proj, Inj, Case1, Case2, Constr, Destr, CS };

struct Record {
  RecordKind kind;
  const Term* term = nullptr;  // App1: the lambda; Pair1: e2; Case1: the case term; CS: the CS term
  VertexId value = kNoVertex;  // Pair2
  int index = 0;               // Proj, Inj
};

struct CekState {
  const Term* expr = nullptr;  // context is an expression when non-null
  VertexId value = kNoVertex;  // otherwise a value
  Env env;
  std::vector<Record> kont;

  bool is_value() const { return expr == nullptr; }
  bool is_final() const { return is_value() && kont.empty(); }
};

struct TraceLine {
  std::string rule;
  std::string context;
  std::size_t kdepth = 0;
};

struct CekResult {
  VertexId value = kNoVertex;
  std::uint64_t steps = 0;
  std::vector<TraceLine> trace;
};

class CekMachine {
 public:
  explicit CekMachine(Heap& heap, const CoreProgram* program = nullptr) : heap_(heap), program_(program) {}

  static CekState init(const Term& e, const Env& theta) {
    CekState s;
    s.expr = &e;
    s.env = theta;
    return s;
  }

  // Fires exactly one rule; returns its name.
  const char* step(CekState& s) {
    if (s.is_final()) fail(ErrorCode::StuckState, "step on a final state");
    if (!s.is_value()) return step_expr(s);
    return step_value(s);
  }

  CekResult run(const Term& e, const Env& theta, bool trace = false, std::optional<std::uint64_t> max_steps = {}) {
    CekState s = init(e, theta);
    CekResult r;
    while (!s.is_final()) {
      if (max_steps && r.steps >= *max_steps)
        fail(ErrorCode::StepBudgetExceeded, "step budget of " + std::to_string(*max_steps) + " exhausted");
      std::string ctx = trace ? describe(s) : std::string();
      const char* rule = step(s);
      ++r.steps;
      if (trace) r.trace.push_back({rule, std::move(ctx), s.kont.size()});
    }
    r.value = s.value;
    return r;
  }

  std::string describe(const CekState& s) const {
    if (s.is_value()) {
      static const char* names[] = {"unit", "inj", "pair", "con"};
      return "value #" + std::to_string(s.value) + " " + names[static_cast<int>(heap_.at(s.value).kind)];
    }
    std::string t = pretty(*s.expr, program_);
    if (t.size() > 72) t = t.substr(0, 69) + "...";
    return t;
  }

 private:
  [[noreturn]] static void stuck(const char* what) { fail(ErrorCode::StuckState, std::string("CEK stuck: ") + what); }

  void to_value(CekState& s, VertexId v) {
    s.expr = nullptr;
    s.value = v;
  }
  void to_expr(CekState& s, const Term& e) { s.expr = &e; }

  const char* step_expr(CekState& s) {
    const Term& e = *s.expr;
    switch (e.kind) {
      case TermKind::Var:
        for (auto it = s.env.rbegin(); it != s.env.rend(); ++it) {
          if (it->first == e.x) {
            to_value(s, it->second);
            return "R1";
          }
        }
        stuck("unbound variable");
      case TermKind::App:
        s.kont.push_back({RecordKind::App1, e.a.get()});
        to_expr(s, *e.b);
        return "R2a";
      case TermKind::Unit: to_value(s, heap_.unit()); return "R4";
      case TermKind::Pair:
        s.kont.push_back({RecordKind::Pair1, e.b.get()});
        to_expr(s, *e.a);
        return "R4a";
      case TermKind::Proj:
        s.kont.push_back({RecordKind::Proj, nullptr, kNoVertex, e.index});
        to_expr(s, *e.a);
        return "R5a";
      case TermKind::Inj:
        s.kont.push_back({RecordKind::Inj, nullptr, kNoVertex, e.index});
        to_expr(s, *e.a);
        return "R6a";
      case TermKind::Case:
        s.kont.push_back({RecordKind::Case1, &e});
        to_expr(s, *e.a);
        return "R7a";
      case TermKind::Con:
      case TermKind::SafeCon:
        s.kont.push_back({RecordKind::Constr});
        to_expr(s, *e.a);
        return "R8a";
      case TermKind::Des:
      case TermKind::SafeDes:
        s.kont.push_back({RecordKind::Destr});
        to_expr(s, *e.a);
        return "R9a";
      case TermKind::Fold: to_expr(s, unroll_.premise(e)); return "R10";
      case TermKind::ToSafe:
      case TermKind::ToNorm: to_expr(s, *e.a); return "R11";
      case TermKind::CS:
        s.kont.push_back({RecordKind::CS, &e});
        to_expr(s, *e.a);
        return "R12a";
      case TermKind::Lam: stuck("bare lambda");
    }
    stuck("unknown term");
  }

  const char* step_value(CekState& s) {
    Record r = s.kont.back();
    s.kont.pop_back();
    VertexId v = s.value;
    const Vertex x = heap_.at(v);
    switch (r.kind) {
      case RecordKind::App1:
        s.env.emplace_back(r.term->x, v);
        s.kont.push_back({RecordKind::App2});
        to_expr(s, *r.term->a);
        return "R2b";
      case RecordKind::App2: s.env.pop_back(); return "R2c";
      case RecordKind::Pair1:
        s.kont.push_back({RecordKind::Pair2, nullptr, v});
        to_expr(s, *r.term);
        return "R4b";
      case RecordKind::Pair2: to_value(s, heap_.pair(r.value, v)); return "R4c";
      case RecordKind::Proj:
        if (x.kind != VertexKind::Pair) stuck("projection from non-pair");
        to_value(s, r.index == 1 ? x.c0 : x.c1);
        return "R5b";
      case RecordKind::Inj: to_value(s, heap_.inj(r.index, v)); return "R6b";
      case RecordKind::Case1: {
        if (x.kind != VertexKind::Inj) stuck("case on non-injection");
        const Term& c = *r.term;
        s.env.emplace_back(x.slot == 1 ? c.x : c.y, x.c0);
        s.kont.push_back({RecordKind::Case2});
        to_expr(s, x.slot == 1 ? *c.b : *c.c);
        return "R7b";
      }
      case RecordKind::Case2: s.env.pop_back(); return "R7c";
      case RecordKind::Constr: to_value(s, heap_.con(v)); return "R8b";
      case RecordKind::Destr:
        if (x.kind != VertexKind::Con) stuck("destructor on non-constructor");
        to_value(s, x.c0);
        return "R9b";
      case RecordKind::CS:
        to_value(s, make_nat(heap_, compressed_size(heap_, ValueRef{v, r.term->datatype})));
        return "R12b";
    }
    stuck("unknown record");
  }

  Heap& heap_;
  const CoreProgram* program_;
  UnrollCache unroll_;
};

inline CekResult cek_run(const Term& e, const Env& theta, Heap& heap, bool trace = false,
                         std::optional<std::uint64_t> max_steps = {}, const CoreProgram* program = nullptr) {
  return CekMachine(heap, program).run(e, theta, trace, max_steps);
}

// Environment depth minus the number of pending pops; zero on every reachable state of a closed run.
inline std::ptrdiff_t stack_discipline_gap(const CekState& s, std::size_t base) {
  std::ptrdiff_t pops = 0;
  for (const Record& r : s.kont)
    if (r.kind == RecordKind::App2 || r.kind == RecordKind::Case2) ++pops;
  return static_cast<std::ptrdiff_t>(s.env.size()) - static_cast<std::ptrdiff_t>(base) - pops;
}

}  // namespace ramrec
