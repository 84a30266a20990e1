// SPDX-License-Identifier: Apache-2.0
#include "ramrec/eval.hpp"
#include "ramrec/pretty.hpp"
#include "ramrec/random_values.hpp"
#include "test_util.hpp"

using namespace ramrec;
using ramrec::testing::apply;
using ramrec::testing::corpus;

namespace {
VertexId run_main(const Program& p, Heap& h, Semantics s, Meter& m) { return evaluate(s, *p.main()->subject, {}, h, m); }
}  // namespace

TEST(Eval, CorpusMains) {
  const std::pair<const char*, std::uint64_t> cases[] = {{"plus_prime.s1", 5}, {"times_prime.s1", 12}, {"plus.s1", 5},
                                                         {"times.s1", 12},     {"sum_lst.s1", 6},      {"height_grow.s1", 20},
                                                         {"tree_size.s1", 2047}, {"height_cs.s1", 12}};
  for (auto [file, want] : cases) {
    Heap h;
    Meter m;
    EXPECT_EQ(read_nat(h, run_main(corpus(file), h, Semantics::DP, m)), want) << file;
  }
}

TEST(Eval, TopDownAgreesWithDynamicProgramming) {
  RandomValues gen(21, {8, 0.3, 0.6});
  for (const char* file : {"height_grow.s1", "plus.s1", "times.s1", "times_prime.s1", "sum_lst.s1", "height_cs.s1", "tree_size.s1"}) {
    const Program& p = corpus(file);
    for (const Judgment& j : p.judgments) {
      if (j.context.empty()) continue;
      for (int i = 0; i < 20; ++i) {
        Heap h;
        VertexId x = gen.generate_sized(j.context[0].second, h);
        VertexId a = apply(j, x, h, Semantics::TD);
        VertexId b = apply(j, x, h, Semantics::DP);
        EXPECT_TRUE(bisimilar(h, ValueRef{a, j.type}, ValueRef{b, j.type})) << file << " " << j.name;
      }
    }
  }
}

TEST(Eval, HeightOfGrow) {
  const Program& p = corpus("height_grow.s1");
  for (std::uint64_t m : {0u, 1u, 3u, 10u, 40u}) {
    Heap h;
    VertexId g = apply(p.get("grow"), make_nat(h, m), h);
    EXPECT_EQ(read_nat(h, apply(p.get("height"), g, h)), m);
  }
}

TEST(Eval, DynamicProgrammingCostIsPolynomial) {
  const Program& p = corpus("height_grow.s1");
  for (std::uint64_t m = 1; m <= 60; ++m) {
    Heap h;
    VertexId g = apply(p.get("grow"), make_nat(h, m), h);
    std::uint64_t c = cost_dp(*p.get("height").subject, Env{{p.get("height").context[0].first, g}}, h);
    EXPECT_LE(c, 20 * (m + 1) * (m + 1) * (m + 1)) << m;
  }
}

TEST(Eval, TopDownCostIsExponential) {
  const Program& p = corpus("height_grow.s1");
  for (std::uint64_t m = 5; m <= 12; ++m) {
    Heap h;
    VertexId g = apply(p.get("grow"), make_nat(h, m), h);
    Meter meter;
    evaluate(Semantics::TD, *p.get("height").subject, Env{{p.get("height").context[0].first, g}}, h, meter);
    EXPECT_GE(meter.nodes, std::uint64_t{1} << m);
    EXPECT_GE(meter.fold_steps, (std::uint64_t{1} << (m + 1)) - 1);
  }
}

TEST(Eval, ResultSizeBoundedByInputPlusCost) {
  RandomValues gen(22, {10, 0.3, 0.6});
  for (const char* file : {"height_grow.s1", "times.s1", "sum_lst.s1"}) {
    for (const Judgment& j : corpus(file).judgments) {
      if (j.context.empty()) continue;
      for (Semantics s : {Semantics::TD, Semantics::DP}) {
        Heap h;
        VertexId x = gen.generate_sized(j.context[0].second, h);
        Meter m;
        VertexId v = evaluate(s, *j.subject, Env{{j.context[0].first, x}}, h, m);
        EXPECT_LE(size(h, v), size(h, x) + m.nodes) << j.name;
      }
    }
  }
}

TEST(Eval, LeafCosts) {
  Heap h;
  Symbol x = sym("x");
  EXPECT_EQ(cost_dp(*mk::var(x), Env{{x, h.unit()}}, h), 1u);
  EXPECT_EQ(cost_td(*mk::unit(), {}, h), 1u);
  EXPECT_EQ(cost_td(*mk::pair(mk::unit(), mk::unit()), {}, h), 3u);
}

TEST(Eval, FunctorReductionForLists) {
  TypeId list = list_type(nat_type());
  Symbol z = sym("z");
  TermPtr step = mk::lam(z, std::nullopt, mk::unit());
  TermPtr premise = fold_premise(*mk::fold(list, step, mk::var("xs")));
  ASSERT_EQ(premise->kind, TermKind::App);
  const Term& g_app = *premise->b;
  ASSERT_EQ(g_app.kind, TermKind::App);
  Symbol w = sym("w"), w1 = sym("w1"), w2 = sym("w2"), px = sym("px"), py = sym("py");
  TermPtr expected = mk::lam(
      w, std::nullopt,
      mk::case_of(mk::var(w), w1, mk::inj(1, mk::app(mk::lam(px, std::nullopt, mk::var(px)), mk::var(w1))), w2,
                  mk::inj(2, mk::app(mk::lam(px, std::nullopt,
                                             mk::pair(mk::app(mk::lam(py, std::nullopt, mk::var(py)), mk::proj(1, mk::var(px))),
                                                      mk::fold(list, step, mk::proj(2, mk::var(px))))),
                                     mk::var(w2)))));
  EXPECT_TRUE(alpha_equivalent(*g_app.a, *expected)) << pretty(*g_app.a);
}

TEST(Eval, NodeLimit) {
  const Program& p = corpus("height_grow.s1");
  Heap h;
  Meter m;
  m.limit = 1000;
  EXPECT_EQ(ramrec::testing::error_of([&] { evaluate(Semantics::TD, *p.main()->subject, {}, h, m); }),
            ErrorCode::StepBudgetExceeded);
}

TEST(Eval, CompressedSizePrimitive) {
  const Program& p = corpus("height_cs.s1");
  Heap h;
  Meter m;
  VertexId v = run_main(p, h, Semantics::DP, m);
  EXPECT_EQ(read_nat(h, v), 12u);
  EXPECT_GT(m.cs_charge, 0u);
}

TEST(Eval, InjectedFaultsAreObservable) {
  const Program& p = corpus("plus.s1");
  Heap h;
  Meter m;
  {
    FaultScope f(Fault::DropSucc);
    EXPECT_NE(read_nat(h, run_main(p, h, Semantics::DP, m)), 5u);
  }
  EXPECT_EQ(read_nat(h, run_main(p, h, Semantics::DP, m)), 5u);
}
