// SPDX-License-Identifier: Apache-2.0
#include "ramrec/type_print.hpp"
#include "ramrec/types.hpp"
#include "test_util.hpp"

using namespace ramrec;

TEST(Types, HashConsing) {
  EXPECT_EQ(nat_type(), mu_type(f_sum(f_const(unit_type()), f_id())));
  EXPECT_EQ(prod_type(nat_type(), unit_type()), prod_type(nat_type(), unit_type()));
  EXPECT_NE(sum_type(nat_type(), unit_type()), sum_type(unit_type(), nat_type()));
}

TEST(Types, SafeAndNormForms) {
  TypeId n = nat_type();
  TypeId sn = safe_of(n);
  EXPECT_EQ(kind_of(sn), TypeKind::SafeMu);
  EXPECT_EQ(norm_of(sn), n);
  EXPECT_EQ(safe_of(sn), sn);
  EXPECT_EQ(safe_of(prod_type(n, unit_type())), prod_type(sn, safe_unit_type()));
  EXPECT_EQ(norm_of(prod_type(sn, n)), prod_type(n, n));
}

TEST(Types, Tiers) {
  TypeId n = nat_type(), sn = safe_of(nat_type());
  EXPECT_EQ(tier(n), Tier::Normal);
  EXPECT_EQ(tier(sn), Tier::Safe);
  EXPECT_EQ(tier(prod_type(sn, n)), Tier::Mixed);
  EXPECT_EQ(tier(sum_type(sn, sn)), Tier::Safe);
  EXPECT_EQ(tier(unit_type()), Tier::Normal);
}

TEST(Types, FunctorAction) {
  FunctorId p = f_sum(f_const(unit_type()), f_prod(f_const(nat_type()), f_id()));
  EXPECT_EQ(apply_functor(p, tree_type()), sum_type(unit_type(), prod_type(nat_type(), tree_type())));
  EXPECT_EQ(unfold(mu_type(p)), apply_functor(p, mu_type(p)));
  EXPECT_EQ(unfold(safe_of(nat_type())), safe_of(sum_type(unit_type(), nat_type())));
}

TEST(Types, DegreeAndCounts) {
  EXPECT_EQ(degree(functor_of(nat_type())), 1);
  EXPECT_EQ(degree(functor_of(tree_type())), 2);
  EXPECT_EQ(degree(f_const(unit_type())), 0);
  EXPECT_EQ(functor_size(functor_of(nat_type())), 3);
  EXPECT_EQ(functor_ids(functor_of(tree_type())), 2);
}

TEST(Types, Inhabitation) {
  EXPECT_TRUE(is_inhabited(nat_type()));
  EXPECT_TRUE(is_inhabited(tree_type()));
  EXPECT_FALSE(is_inhabited(mu_type(f_id())));
  EXPECT_FALSE(is_inhabited(mu_type(f_prod(f_const(unit_type()), f_id()))));
  EXPECT_FALSE(is_inhabited(prod_type(nat_type(), mu_type(f_id()))));
  EXPECT_TRUE(is_inhabited(sum_type(nat_type(), mu_type(f_id()))));
}

TEST(Types, Classification) {
  EXPECT_TRUE(is_sequential(nat_type()));
  EXPECT_FALSE(is_sequential(tree_type()));
  EXPECT_TRUE(is_hereditarily_sequential(list_type(nat_type())));
  EXPECT_FALSE(is_hereditarily_sequential(list_type(tree_type())));
  EXPECT_FALSE(is_hereditarily_sequential(prod_type(nat_type(), tree_type())));
  Classification c = classify(safe_of(list_type(nat_type())));
  EXPECT_TRUE(c.hereditarily_sequential);
  EXPECT_EQ(c.tier, Tier::Safe);
}

TEST(Types, Printing) {
  TypeNames names;
  names.add("nat", nat_type());
  EXPECT_EQ(print_type(nat_type()), "(mu t0. unit + t0)");
  EXPECT_EQ(print_type(nat_type(), &names), "nat");
  EXPECT_EQ(print_type(safe_of(nat_type()), &names), "safe nat");
  EXPECT_EQ(print_type(prod_type(nat_type(), prod_type(nat_type(), nat_type())), &names), "nat * nat * nat");
  EXPECT_EQ(print_type(prod_type(prod_type(nat_type(), nat_type()), nat_type()), &names), "(nat * nat) * nat");
  EXPECT_EQ(print_type(sum_type(unit_type(), prod_type(nat_type(), nat_type())), &names), "unit + nat * nat");
  EXPECT_EQ(print_type(prod_type(sum_type(unit_type(), unit_type()), nat_type()), &names), "(unit + unit) * nat");
}

TEST(Types, PrintParseRoundTrip) {
  TypeNames names;
  names.add("nat", nat_type());
  for (TypeId t : {nat_type(), tree_type(), list_type(nat_type()), safe_of(prod_type(nat_type(), tree_type())),
                   sum_type(unit_type(), prod_type(safe_of(nat_type()), nat_type()))}) {
    EXPECT_EQ(parse_type(print_type(t), TypeNames{}), t) << print_type(t);
    EXPECT_EQ(parse_type(print_type(t, &names), names), t) << print_type(t, &names);
  }
}
