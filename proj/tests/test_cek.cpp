// SPDX-License-Identifier: Apache-2.0
#include <regex>

#include "ramrec/cek.hpp"
#include "ramrec/random_values.hpp"
#include "test_util.hpp"

using namespace ramrec;
using ramrec::testing::corpus;

TEST(Cek, AgreesWithTopDownOnMains) {
  for (const char* file : {"plus_prime.s1", "times_prime.s1", "plus.s1", "times.s1", "sum_lst.s1", "tree_size.s1", "ltree.s1",
                           "height_cs.s1"}) {
    const Program& p = corpus(file);
    Heap h;
    Meter m;
    VertexId v = eval_td(*p.main()->subject, {}, h, m);
    CekResult r = cek_run(*p.main()->subject, {}, h, false, std::nullopt, &p.core);
    EXPECT_TRUE(bisimilar(h, ValueRef{v, p.main()->type}, ValueRef{r.value, p.main()->type})) << file;
    EXPECT_LE(r.steps, 3 * m.nodes) << file;
  }
}

TEST(Cek, AgreesOnRandomArguments) {
  RandomValues gen(31, {7, 0.3, 0.6});
  for (const char* file : {"height_grow.s1", "times.s1", "sum_lst.s1", "height_cs.s1"}) {
    const Program& p = corpus(file);
    for (const Judgment& j : p.judgments) {
      if (j.context.empty()) continue;
      for (int i = 0; i < 10; ++i) {
        Heap h;
        Env theta{{j.context[0].first, gen.generate_sized(j.context[0].second, h)}};
        Meter m;
        VertexId v = eval_td(*j.subject, theta, h, m);
        CekResult r = cek_run(*j.subject, theta, h);
        EXPECT_TRUE(bisimilar(h, ValueRef{v, j.type}, ValueRef{r.value, j.type})) << j.name;
        EXPECT_LE(r.steps, 3 * m.nodes) << j.name;
      }
    }
  }
}

TEST(Cek, TraceFormat) {
  const Program& p = corpus("plus.s1");
  Heap h;
  CekResult r = cek_run(*p.main()->subject, {}, h, true, std::nullopt, &p.core);
  ASSERT_EQ(r.trace.size(), r.steps);
  std::regex rule("R(1|2[abc]|4[abc]?|5[ab]|6[ab]|7[abc]|8[ab]|9[ab]|10|11|12[ab])");
  for (const TraceLine& t : r.trace) EXPECT_TRUE(std::regex_match(t.rule, rule)) << t.rule;
  EXPECT_EQ(r.trace.front().kdepth, 1u);
}

TEST(Cek, EnvironmentFollowsStackDiscipline) {
  const Program& p = corpus("times_prime.s1");
  Heap h;
  CekMachine machine(h, &p.core);
  CekState s = CekMachine::init(*p.main()->subject, {});
  std::size_t steps = 0;
  while (!s.is_final()) {
    machine.step(s);
    ++steps;
    ASSERT_EQ(stack_discipline_gap(s, 0), 0) << "after step " << steps;
  }
  EXPECT_EQ(read_nat(h, s.value), 12u);
}

TEST(Cek, StepBudget) {
  const Program& p = corpus("times.s1");
  Heap h;
  EXPECT_EQ(ramrec::testing::error_of([&] { cek_run(*p.main()->subject, {}, h, false, 10); }), ErrorCode::StepBudgetExceeded);
}

TEST(Cek, StepOnFinalStateIsAnError) {
  Heap h;
  CekMachine machine(h);
  CekState s = CekMachine::init(*mk::unit(), {});
  machine.step(s);
  ASSERT_TRUE(s.is_final());
  EXPECT_EQ(ramrec::testing::error_of([&] { machine.step(s); }), ErrorCode::StuckState);
}
