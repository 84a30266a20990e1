// SPDX-License-Identifier: Apache-2.0
#include "ramrec/bounds.hpp"
#include "ramrec/noninterference.hpp"
#include "ramrec/polynomial.hpp"
#include "ramrec/random_values.hpp"
#include "ramrec/spans.hpp"
#include "ramrec/treesize_gen.hpp"
#include "test_util.hpp"

using namespace ramrec;
using ramrec::testing::corpus;
using ramrec::testing::error_of;

TEST(Spans, NormalAndSafeTypes) {
  Heap h;
  VertexId n = make_nat(h, 4);
  EXPECT_EQ(normal_span(h, nat_type(), n).vertices, whole_span(h, n).vertices);
  EXPECT_TRUE(safe_span(h, nat_type(), n).vertices.empty());
  EXPECT_TRUE(normal_span(h, safe_of(nat_type()), n).vertices.empty());
  EXPECT_EQ(safe_span(h, safe_of(nat_type()), n).vertices, whole_span(h, n).vertices);
}

TEST(Spans, MixedPair) {
  Heap h;
  TypeId t = prod_type(nat_type(), safe_of(nat_type()));
  VertexId v = h.pair(make_nat(h, 2), make_nat(h, 5));
  EXPECT_EQ(size(h, normal_span(h, t, v)), 3u);
  EXPECT_EQ(size(h, safe_span(h, t, v)), 6u);
  EXPECT_EQ(size(h, nonnormal_span(h, t, v)), 6u);
}

TEST(Spans, NormalAndSafeCoverTheValue) {
  RandomValues gen(51, {10, 0.4, 0.6});
  TypeId t = prod_type(list_type(nat_type()), safe_of(tree_type()));
  for (int i = 0; i < 100; ++i) {
    Heap h;
    VertexId v = gen.generate_sized(t, h);
    Span all = span_union(normal_span(h, t, v), safe_span(h, t, v));
    EXPECT_EQ(all.vertices, whole_span(h, v).vertices);
    EXPECT_EQ(nonnormal_span(h, t, v).vertices, span_minus(whole_span(h, v), normal_span(h, t, v)).vertices);
  }
}

TEST(ResidualSize, Variables) {
  Heap h;
  Symbol x = sym("x");
  VertexId n = make_nat(h, 3);
  Judgment normal{"x", Calculus::RS1, {{x, nat_type()}}, mk::var(x), nat_type()};
  Judgment safe{"x", Calculus::RS1, {{x, safe_of(nat_type())}}, mk::var(x), safe_of(nat_type())};
  EXPECT_EQ(residual_size(normal, Env{{x, n}}, h), 4u);
  EXPECT_EQ(residual_size(safe, Env{{x, n}}, h), 0u);
}

TEST(ResidualSize, SafeAdditionCountsOnlyNewConstructors) {
  const Judgment& j = corpus("plus_prime.s1").get("plus'");
  for (std::uint64_t a = 0; a < 6; ++a)
    for (std::uint64_t b = 0; b < 6; ++b) {
      Heap h;
      Env theta{{j.context[0].first, h.pair(make_nat(h, a), make_nat(h, b))}};
      EXPECT_EQ(residual_size(j, theta, h), b) << a << "," << b;
    }
}

TEST(Polynomial, Arithmetic) {
  Polynomial x = Polynomial::variable("x"), y = Polynomial::variable("y");
  Polynomial p = (x + 1) * (x + y);
  EXPECT_EQ(p.degree(), 2u);
  EXPECT_EQ(p.evaluate({{"x", 2}, {"y", 3}}), 15);
  EXPECT_EQ(p.substitute("y", x).evaluate({{"x", 2}}), 12);
  EXPECT_EQ(x.pow(3).evaluate({{"x", 5}}), 125);
  EXPECT_EQ(Polynomial(0).to_string(), "0");
  EXPECT_EQ((x * x * 2 + x * 2).to_string(), "2*[x]^2 + 2*[x]");
  EXPECT_EQ(p.variables(), (std::vector<std::string>{"x", "y"}));
}

TEST(Bounds, BaseCases) {
  Symbol x = sym("x");
  Context ctx{{x, nat_type()}};
  BoundSynthesizer s(Calculus::RS1);
  Bounds u = s.run(ctx, *mk::unit());
  EXPECT_EQ(u.size.to_string(), "0");
  EXPECT_EQ(u.cost.to_string(), "1");
  Bounds v = s.run(ctx, *mk::var(x));
  EXPECT_EQ(v.size.to_string(), "[x]");
  EXPECT_EQ(v.cost.to_string(), "1");
  Bounds p = s.run(ctx, *mk::pair(mk::var(x), mk::var(x)));
  EXPECT_EQ(p.size.to_string(), "2*[x]");
  EXPECT_EQ(p.cost.to_string(), "3");
  Bounds c = s.run(ctx, *mk::con(nat_type(), mk::inj(2, mk::var(x))));
  EXPECT_EQ(c.size.to_string(), "[x] + 1");
}

TEST(Bounds, SafeAddition) {
  const Program& p = corpus("plus_prime.s1");
  Bounds b = synthesize_bounds(p.get("plus'"), &p.names());
  EXPECT_EQ(b.size.degree(), 2u);
  EXPECT_EQ(b.cost.degree(), 1u);
}

TEST(Bounds, HoldOnRandomEnvironments) {
  RandomValues gen(52, {12, 0.25, 0.7});
  for (const char* file : {"plus.s1", "times.s1", "times_prime.s1", "sum_lst.s1", "height_cs.s1"}) {
    const Program& p = corpus(file);
    for (const Judgment& j : p.judgments) {
      if (j.context.empty()) continue;
      Bounds b = synthesize_bounds(j, &p.names());
      for (int i = 0; i < 50; ++i) {
        Heap h;
        Env theta{{j.context[0].first, gen.generate_sized(j.context[0].second, h)}};
        auto at = variable_residuals(h, j.context, theta);
        Meter m;
        VertexId v = eval_dp(*j.subject, theta, h, m);
        EXPECT_LE(BigNat(residual_size_of(h, j.context, *j.subject, j.type, theta, v)), b.size.evaluate(at)) << j.name;
        EXPECT_LE(BigNat(m.nodes), b.cost.evaluate(at)) << j.name;
      }
    }
  }
}

TEST(Noninterference, CorpusPasses) {
  for (const char* file : {"plus_prime.s1", "times_prime.s1", "sum_lst.s1"}) {
    const Program& p = corpus(file);
    for (const Judgment& j : p.judgments) {
      NiReport r = check_normal_invariance(j, NiOptions{200, 7, 10, Semantics::DP}, &p.core);
      EXPECT_TRUE(r.passed) << j.name << ": " << r.counterexample;
    }
  }
}

TEST(Noninterference, LeakIsCaught) {
  Program p = load_program("%calculus rs1\ndatatype nat = Zero | Succ of nat\ndef leak ((x, y) : nat * safe nat) = toNorm y\n",
                           "<leak>", CheckOptions{false});
  NiReport r = check_normal_invariance(p.get("leak"), NiOptions{200, 7, 10, Semantics::DP}, &p.core);
  EXPECT_FALSE(r.passed);
  EXPECT_FALSE(r.counterexample.empty());
  EXPECT_EQ(error_of([] {
              load_program("%calculus rs1\ndatatype nat = Zero | Succ of nat\ndef leak ((x, y) : nat * safe nat) = toNorm y\n");
            }),
            ErrorCode::SideConditionToNorm);
}

namespace {
Judgment tree_size_judgment(TypeId t) { return judgment_of("ts", gen_tree_size(t), Calculus::RS1); }
}  // namespace

TEST(TreeSizeGen, SmallTypes) {
  Heap h;
  EXPECT_EQ(read_nat(h, ramrec::testing::apply(tree_size_judgment(unit_type()), h.unit(), h)), 0u);
  EXPECT_EQ(read_nat(h, ramrec::testing::apply(tree_size_judgment(nat_type()), make_nat(h, 4), h)), 5u);
  EXPECT_EQ(error_of([] { gen_tree_size(tree_type()); }), ErrorCode::NotHereditarilySequential);
  EXPECT_EQ(error_of([] { gen_tree_size(safe_of(nat_type())); }), ErrorCode::TypeMismatch);
}

TEST(TreeSizeGen, MatchesUnfoldingOnRandomValues) {
  RandomValues gen(53, {12, 0.4, 0.6});
  for (TypeId t : {nat_type(), list_type(nat_type()), list_type(list_type(nat_type())),
                   sum_type(nat_type(), prod_type(unit_type(), list_type(nat_type())))}) {
    Judgment j = tree_size_judgment(t);
    Bounds b = synthesize_bounds(j);
    for (int i = 0; i < 40; ++i) {
      Heap h;
      VertexId v = gen.generate_sized(t, h);
      VertexId r = ramrec::testing::apply(j, v, h);
      BigNat ts = tree_size(h, v);
      EXPECT_EQ(BigNat(*read_nat(h, r)), ts);
      auto at = variable_residuals(h, j.context, Env{{j.context[0].first, v}});
      EXPECT_LE(ts + 1, b.size.evaluate(at));
    }
  }
}
