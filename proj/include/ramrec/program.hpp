// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ramrec/desugar.hpp"
#include "ramrec/eval.hpp"
#include "ramrec/heap.hpp"
#include "ramrec/typecheck.hpp"

namespace ramrec {

// A parsed, desugared and fully checked program.
struct Program {
  std::string path;
  CoreProgram core;
  std::vector<Judgment> judgments;  // one per def, then main

  Calculus level() const { return core.level; }
  const TypeNames& names() const { return core.names; }

  const Judgment* find(const std::string& name) const {
    for (const auto& j : judgments)
      if (j.name == name) return &j;
    return nullptr;
  }
  const Judgment& get(const std::string& name) const {
    if (const Judgment* j = find(name)) return *j;
    fail(ErrorCode::UsageError, "no definition named '" + name + "'");
  }
  const Judgment* main() const { return find("main"); }
};

inline Program load_program(std::string_view source, std::string path = "<input>", CheckOptions options = {}) {
  Program p;
  p.path = std::move(path);
  p.core = desugar(parse(source));
  auto check = [&](const std::string& name, const TermPtr& t) {
    try {
      return judgment_of(name, t, p.core.level, &p.core.names, options);
    } catch (const Error& e) {
      SourcePos at = e.pos().line > 0 ? e.pos() : p.core.positions[name];
      fail(e.code(), "in '" + name + "': " + e.what(), at);
    }
  };
  for (const auto& [name, t] : p.core.defs) p.judgments.push_back(check(name, t));
  if (p.core.main) {
    Judgment j = check("main", *p.core.main);
    if (!j.context.empty()) fail(ErrorCode::TypeMismatch, "main must be a ground expression", p.core.positions["main"]);
    p.judgments.push_back(std::move(j));
  }
  return p;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Program load_program_file(const std::string& path, CheckOptions options = {}) {
  return load_program(read_file(path), path, options);
}

// Application of a function judgment to an argument value: binds its parameter.
inline Env bind_args(const Judgment& j, const std::vector<VertexId>& args) {
  if (args.size() != j.context.size()) fail(ErrorCode::UsageError, "wrong number of arguments for '" + j.name + "'");
  Env env;
  for (std::size_t i = 0; i < args.size(); ++i) env.emplace_back(j.context[i].first, args[i]);
  return env;
}

// ---------------------------------------------------------------------------
// Value printing

class ValuePrinter {
 public:
  ValuePrinter(const Heap& h, const CoreProgram* program) : heap_(h), program_(program) {}

  // Prints the unfolding, or a summary when the unfolding is large.
  std::string print(ValueRef v, std::size_t limit = 4096) {
    BigNat ts = tree_size(heap_, v);
    std::size_t tv = reachable(heap_, v.root).size();
    if (ts > limit || tv > 4 * limit) {
      return "<value size=" + std::to_string(size(heap_, v)) + " ts=" + ts.str() + ">";
    }
    std::string out;
    value(out, v.root, norm_of(v.type), 0);
    return out;
  }

 private:
  void value(std::string& out, VertexId x, TypeId t, int prec) {
    const Vertex& v = heap_.at(x);
    switch (v.kind) {
      case VertexKind::Unit: out += "()"; return;
      case VertexKind::Pair:
        out += '(';
        value(out, v.c0, left(t), 0);
        out += ", ";
        value(out, v.c1, right(t), 0);
        out += ')';
        return;
      case VertexKind::Inj:
        if (prec > 0) out += '(';
        out += v.slot == 1 ? "inl " : "inr ";
        value(out, v.c0, component(t, v.slot), 1);
        if (prec > 0) out += ')';
        return;
      case VertexKind::Con: constructor(out, x, t, prec); return;
    }
  }

  void constructor(std::string& out, VertexId x, TypeId t, int prec) {
    if (t == nat_type()) {
      if (auto n = read_nat(heap_, x)) {
        out += std::to_string(*n);
        return;
      }
    }
    const DatatypeInfo* info = program_ ? program_->datatype(t) : nullptr;
    if (!info) {
      if (prec > 0) out += '(';
      out += "con ";
      value(out, heap_.at(x).c0, unfold(t), 1);
      if (prec > 0) out += ')';
      return;
    }
    if (list_like(*info)) {
      list(out, x, t, *info);
      return;
    }
    int k = static_cast<int>(info->ctors.size());
    VertexId payload = heap_.at(x).c0;
    TypeId pt = unfold(t);
    int i = 1;
    while (i < k && heap_.at(payload).kind == VertexKind::Inj && heap_.at(payload).slot == 2) {
      pt = right(pt);
      payload = heap_.at(payload).c0;
      ++i;
    }
    if (i < k) {
      pt = left(pt);
      payload = heap_.at(payload).c0;
    }
    const CtorInfo& c = program_->ctors.at(info->ctors[i - 1]);
    if (c.nullary) {
      out += c.name;
      return;
    }
    if (prec > 0) out += '(';
    out += c.name + " ";
    value(out, payload, pt, 1);
    if (prec > 0) out += ')';
  }

  bool list_like(const DatatypeInfo& d) const {
    return d.ctors.size() == 2 && d.ctors[0] == "Nil" && d.ctors[1] == "Cons";
  }

  void list(std::string& out, VertexId x, TypeId t, const DatatypeInfo&) {
    TypeId elem = left(right(unfold(t)));
    out += '[';
    bool first = true;
    for (;;) {
      const Vertex& inj = heap_.at(heap_.at(x).c0);
      if (inj.slot == 1) break;
      const Vertex& cell = heap_.at(inj.c0);
      if (!first) out += ", ";
      first = false;
      value(out, cell.c0, elem, 0);
      x = cell.c1;
    }
    out += ']';
  }

  const Heap& heap_;
  const CoreProgram* program_;
};

inline std::string format_value(const Heap& h, ValueRef v, const CoreProgram* program = nullptr) {
  return ValuePrinter(h, program).print(v);
}

}  // namespace ramrec
