// SPDX-License-Identifier: Apache-2.0
#include "ramrec/pretty.hpp"
#include "ramrec/program.hpp"
#include "test_util.hpp"

using namespace ramrec;
using ramrec::testing::error_of;

namespace {
const char* kNat = "%calculus rs1\ndatatype nat = Zero | Succ of nat\n";

Program load(const std::string& body, const char* header = kNat) { return load_program(std::string(header) + body); }
}  // namespace

TEST(Lexer, CommentsNest) {
  auto toks = Lexer("a (* x (* y *) z *) b -- tail\nc").tokenize();
  ASSERT_EQ(toks.size(), 4u);
  EXPECT_EQ(toks[0].text, "a");
  EXPECT_EQ(toks[1].text, "b");
  EXPECT_EQ(toks[2].text, "c");
  EXPECT_EQ(toks[2].pos.line, 2);
}

TEST(Lexer, UnterminatedComment) {
  EXPECT_EQ(error_of([] { Lexer("(* open").tokenize(); }), ErrorCode::ParseError);
}

TEST(Parser, Pragma) {
  EXPECT_EQ(parse("%calculus rs1.1\nmain = ()").level, Calculus::RS1_1);
  EXPECT_EQ(parse("main = ()").level, Calculus::S1);
  EXPECT_EQ(error_of([] { parse("%calculus rs2\nmain = ()"); }), ErrorCode::ParseError);
}

TEST(Parser, ErrorPosition) {
  try {
    parse("main =\n  (fst ");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_EQ(e.pos().line, 2);
  }
}

TEST(Parser, TypePrecedence) {
  TypeNames names;
  names.add("nat", nat_type());
  EXPECT_EQ(parse_type("unit + nat * nat", names), sum_type(unit_type(), prod_type(nat_type(), nat_type())));
  EXPECT_EQ(parse_type("nat * nat * unit", names), prod_type(nat_type(), prod_type(nat_type(), unit_type())));
  EXPECT_EQ(parse_type("mu t. unit + t", names), nat_type());
  EXPECT_EQ(parse_type("safe nat", names), safe_of(nat_type()));
  EXPECT_EQ(error_of([&] { parse_type("tree", names); }), ErrorCode::UnknownDatatype);
}

TEST(Desugar, ConstructorInjections) {
  Program p = load_program("datatype c = A | B of unit | C\nmain = B ()");
  const Term& m = *p.main()->subject;
  ASSERT_EQ(m.kind, TermKind::Con);
  ASSERT_EQ(m.a->kind, TermKind::Inj);
  EXPECT_EQ(m.a->index, 2);
  EXPECT_EQ(m.a->a->kind, TermKind::Inj);
  EXPECT_EQ(m.a->a->index, 1);
  Program q = load_program("datatype c = A | B of unit | C\nmain = C");
  const Term& c = *q.main()->subject;
  EXPECT_EQ(c.a->index, 2);
  EXPECT_EQ(c.a->a->index, 2);
  EXPECT_EQ(c.a->a->a->kind, TermKind::Unit);
}

TEST(Desugar, NumeralsAndLists) {
  Program p = load_program("datatype nat = Zero | Succ of nat\ndatatype list = Nil | Cons of nat * list\nmain = [2, 0]");
  Heap h;
  Meter m;
  VertexId v = eval_dp(*p.main()->subject, {}, h, m);
  EXPECT_EQ(format_value(h, ValueRef{v, p.main()->type}, &p.core), "[2, 0]");
  EXPECT_EQ(size(h, v), 3u + 3u + 1u);
}

TEST(Desugar, DuplicateAndUnknownNames) {
  EXPECT_EQ(error_of([] { load("def f (x : nat) = x\ndef f (x : nat) = x\n"); }), ErrorCode::DuplicateName);
  EXPECT_EQ(error_of([] { load("datatype nat = Z\n"); }), ErrorCode::DuplicateName);
  EXPECT_EQ(error_of([] { load("main = y\n"); }), ErrorCode::UnknownVariable);
  EXPECT_EQ(error_of([] { load("main = case Zero of Zero => Zero | Pred n => n\n"); }), ErrorCode::UnknownConstructor);
  EXPECT_EQ(error_of([] { load_program("datatype e = E of e\nmain = ()"); }), ErrorCode::UninhabitedType);
}

TEST(Typecheck, LevelViolations) {
  EXPECT_EQ(error_of([] { load_program("datatype nat = Zero | Succ of nat\ndef f (x : safe nat) = x"); }),
            ErrorCode::LevelViolation);
  EXPECT_EQ(error_of([] { load("main = cs[nat] 3\n"); }), ErrorCode::LevelViolation);
  EXPECT_NO_THROW(load("main = cs[nat] 3\n", "%calculus rs1.1\ndatatype nat = Zero | Succ of nat\n"));
}

TEST(Typecheck, Mismatches) {
  EXPECT_EQ(error_of([] { load("def f (x : nat) = fst x\n"); }), ErrorCode::TypeMismatch);
  EXPECT_EQ(error_of([] { load("def f ((x, y) : nat * safe nat) = (x, y)\nmain = f(1, 2)\n"); }), ErrorCode::TypeMismatch);
  EXPECT_EQ(error_of([] { load("def f (x : nat) = Succ (toSafe x)\n"); }), ErrorCode::TypeMismatch);
}

TEST(Typecheck, SideConditions) {
  EXPECT_EQ(error_of([] { load("def f (y : safe nat) = toNorm (S.Succ y)\n"); }), ErrorCode::SideConditionToNorm);
  EXPECT_NO_THROW(load("def f (y : nat) = toNorm (S.Succ (toSafe y))\n"));
  EXPECT_EQ(error_of([] { load("def f (y : safe nat) = case y of S.Zero => Zero | S.Succ m => Succ Zero\n"); }),
            ErrorCode::SideConditionCase);
  EXPECT_NO_THROW(load("def f (y : safe nat) = case y of S.Zero => S.Zero | S.Succ m => m\n"));
  EXPECT_EQ(error_of([] {
              load("def f (y : safe nat) = fold[nat] (fn (w : unit + safe nat) => case w of inl u => y | inr n => n) y\n");
            }),
            ErrorCode::SideConditionFoldNormal);
}

TEST(Typecheck, RamifiedJudgments) {
  Program p = load(
      "def plus' ((x, y) : safe nat * nat) =\n"
      "  fold[nat] (fn (w : unit + safe nat) => case w of inl u => x | inr n => S.Succ n) y\n");
  const Judgment& j = p.get("plus'");
  EXPECT_EQ(print_type(Type{j.context[0].second, j.type}, &p.names()), "safe nat * nat -> safe nat");
}

TEST(Typecheck, ErrorsCarryDefinitionPosition) {
  try {
    load("\n\ndef bad (y : safe nat) = toNorm y\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SideConditionToNorm);
    EXPECT_EQ(e.pos().line, 5);
    EXPECT_NE(std::string(e.what()).find("'bad'"), std::string::npos);
  }
}

TEST(Pretty, RoundTripsThroughTheParser) {
  for (const char* f : {"height_grow.s1", "plus_prime.s1", "sum_lst.s1", "height_cs.s1", "ltree.s1", "times.s1"}) {
    const Program& p = ramrec::testing::corpus(f);
    std::string text = pretty_program(p.core);
    Program q = load_program(text);
    ASSERT_EQ(p.judgments.size(), q.judgments.size()) << f;
    for (std::size_t i = 0; i < p.judgments.size(); ++i) {
      EXPECT_EQ(p.judgments[i].type, q.judgments[i].type) << f << " " << p.judgments[i].name;
    }
    Heap h1, h2;
    Meter m1, m2;
    VertexId a = eval_dp(*p.main()->subject, {}, h1, m1);
    VertexId b = eval_dp(*q.main()->subject, {}, h2, m2);
    EXPECT_TRUE(bisimilar(h1, ValueRef{a, p.main()->type}, h2, ValueRef{b, q.main()->type})) << f;
  }
}

TEST(Pretty, Constructors) {
  const Program& p = ramrec::testing::corpus("ltree.s1");
  EXPECT_EQ(pretty(*p.main()->subject, &p.core), "Leaf");
}
