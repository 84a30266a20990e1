// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <string>
#include <unordered_map>

#include "ramrec/eval.hpp"
#include "ramrec/program.hpp"
#include "ramrec/random_values.hpp"
#include "ramrec/spans.hpp"
#include "ramrec/type_print.hpp"
#include "ramrec/typecheck.hpp"

namespace ramrec {

// Simultaneous traversal of the normal spans of a (type t) and b (type t), building a bijection.
class SpanIsomorphism {
 public:
  explicit SpanIsomorphism(const Heap& h) : h_(h) {}

  bool check(TypeId t, VertexId a, VertexId b) {
    if (tier(t) == Tier::Safe) return true;
    if (!seen_.emplace(a, b, t).second) return true;
    if (!bind(a, b)) return false;
    const Vertex& x = h_.at(a);
    const Vertex& y = h_.at(b);
    if (x.kind != y.kind || x.slot != y.slot) return false;
    if (tier(t) == Tier::Normal) return normal(a, b);
    if (kind_of(t) == TypeKind::Sum) return check(component(t, x.slot), x.c0, y.c0);
    return check(left(t), x.c0, y.c0) && check(right(t), x.c1, y.c1);
  }

 private:
  bool bind(VertexId a, VertexId b) {
    auto [fi, fnew] = fwd_.emplace(a, b);
    auto [bi, bnew] = bwd_.emplace(b, a);
    return fi->second == b && bi->second == a;
  }

  bool normal(VertexId a, VertexId b) {
    std::vector<std::pair<VertexId, VertexId>> stack{{a, b}};
    while (!stack.empty()) {
      auto [u, w] = stack.back();
      stack.pop_back();
      const Vertex& x = h_.at(u);
      const Vertex& y = h_.at(w);
      if (x.kind != y.kind || x.slot != y.slot) return false;
      for (auto [cu, cw] : {std::pair{x.c0, y.c0}, std::pair{x.c1, y.c1}}) {
        if (cu == kNoVertex) continue;
        bool fresh = !fwd_.count(cu) && !bwd_.count(cw);
        if (!bind(cu, cw)) return false;
        if (fresh) stack.emplace_back(cu, cw);
      }
    }
    return true;
  }

  const Heap& h_;
  std::unordered_map<VertexId, VertexId> fwd_, bwd_;
  std::set<std::tuple<VertexId, VertexId, TypeId>> seen_;
};

inline bool normal_spans_isomorphic(const Heap& h, TypeId t, VertexId a, VertexId b) {
  return SpanIsomorphism(h).check(t, a, b);
}

// Copy of v with the same normal span and freshly drawn safe parts.
inline VertexId resample_safe(Heap& h, TypeId t, VertexId v, RandomValues& gen, std::size_t budget) {
  switch (tier(t)) {
    case Tier::Normal: return v;
    case Tier::Safe: return gen.generate_more(t, h, budget);
    case Tier::Mixed: break;
  }
  Vertex x = h.at(v);
  if (kind_of(t) == TypeKind::Sum) return h.inj(x.slot, resample_safe(h, component(t, x.slot), x.c0, gen, budget));
  VertexId a = resample_safe(h, left(t), x.c0, gen, budget);
  return h.pair(a, resample_safe(h, right(t), x.c1, gen, budget));
}

inline bool has_safe_part(TypeId t) {
  switch (tier(t)) {
    case Tier::Normal: return false;
    case Tier::Safe: return true;
    case Tier::Mixed: return true;
  }
  return false;
}

struct NiOptions {
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::size_t max_constructors = 12;
  Semantics semantics = Semantics::DP;
};

struct NiReport {
  std::string judgment;
  std::size_t trials = 0;
  bool passed = true;
  bool vacuous = false;
  std::string note;
  std::string counterexample;
};

// Assembly ⟨θ(x1), …, θ(xn), v⟩ and its type.
inline std::pair<VertexId, TypeId> assembly(Heap& h, const Context& ctx, const Env& theta, VertexId v, TypeId gamma) {
  VertexId root = v;
  TypeId t = gamma;
  for (std::size_t i = ctx.size(); i-- > 0;) {
    root = h.pair(theta[i].second, root);
    t = prod_type(ctx[i].second, t);
  }
  return {root, t};
}

inline NiReport check_normal_invariance(const Judgment& j, const NiOptions& opt = {},
                                        const CoreProgram* program = nullptr) {
  const TypeNames* names = program ? &program->names : nullptr;
  NiReport report;
  report.judgment = j.name;
  bool any_safe = false;
  for (const auto& [x, t] : j.context) any_safe = any_safe || has_safe_part(t);
  if (!any_safe) {
    report.vacuous = true;
    report.note = "no safe degrees of freedom in the context";
  } else if (is_safe(j.type) && std::none_of(j.context.begin(), j.context.end(), [](const auto& b) { return !is_safe(b.second); })) {
    report.vacuous = true;
    report.note = "safe result over a safe context";
  }

  RandomValues gen(opt.seed, RandomValueOptions{opt.max_constructors, 0.25, 0.7});
  for (std::size_t trial = 0; trial < opt.trials; ++trial) {
    Heap h;
    Env theta, theta2;
    for (const auto& [x, t] : j.context) theta.emplace_back(x, gen.generate_sized(t, h));
    for (std::size_t i = 0; i < j.context.size(); ++i)
      theta2.emplace_back(j.context[i].first,
                          resample_safe(h, j.context[i].second, theta[i].second, gen, 1 + gen.pick(opt.max_constructors)));
    Meter m1, m2;
    VertexId v1 = evaluate(opt.semantics, *j.subject, theta, h, m1);
    VertexId v2 = evaluate(opt.semantics, *j.subject, theta2, h, m2);
    auto [a1, t] = assembly(h, j.context, theta, v1, j.type);
    auto [a2, t2] = assembly(h, j.context, theta2, v2, j.type);
    ++report.trials;
    if (!normal_spans_isomorphic(h, t, a1, a2)) {
      report.passed = false;
      report.vacuous = false;
      std::string ce = "trial " + std::to_string(trial) + ":";
      for (std::size_t i = 0; i < j.context.size(); ++i) {
        TypeId ct = j.context[i].second;
        ce += " " + sym_name(j.context[i].first) + " = " + format_value(h, ValueRef{theta[i].second, ct}, program) + " vs " +
              format_value(h, ValueRef{theta2[i].second, ct}, program) + ";";
      }
      ce += " results " + format_value(h, ValueRef{v1, j.type}, program) + " vs " + format_value(h, ValueRef{v2, j.type}, program) + " at type " +
            print_type(j.type, names);
      report.counterexample = ce;
      return report;
    }
  }
  return report;
}

}  // namespace ramrec
