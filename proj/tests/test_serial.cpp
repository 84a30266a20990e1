// SPDX-License-Identifier: Apache-2.0
#include "ramrec/oracles.hpp"
#include "ramrec/random_values.hpp"
#include "ramrec/serial.hpp"
#include "test_util.hpp"

using namespace ramrec;
using ramrec::testing::apply;
using ramrec::testing::corpus;
using ramrec::testing::error_of;

TEST(Serial, UnitIsOneItem) {
  Heap h;
  VtgList l = serialize(h, ValueRef{h.unit(), unit_type()});
  ASSERT_EQ(l.size(), 1u);
  EXPECT_EQ(l.items[0].kind, VtgKind::Unit);
  EXPECT_EQ(to_json(l).dump(), R"([{"kind":"unit"}])");
}

TEST(Serial, LeafLiteral) {
  const Program& p = corpus("ltree.s1");
  Heap h;
  Meter m;
  VertexId v = eval_dp(*p.main()->subject, {}, h, m);
  nlohmann::json j = to_json(serialize(h, ValueRef{v, p.main()->type}, &p.names()));
  EXPECT_EQ(j, nlohmann::json::parse(R"([
    {"kind":"mu","type":"ltree","addr":1},
    {"kind":"inj1","type":"unit + nat * ltree * ltree","addr":0},
    {"kind":"unit"}])")) << j.dump();
}

TEST(Serial, RootComesFirstAndAddressesPointDown) {
  RandomValues gen(41, {12, 0.4, 0.6});
  for (int i = 0; i < 200; ++i) {
    Heap h;
    TypeId t = i % 2 ? tree_type() : list_type(nat_type());
    VtgList l = serialize(h, ValueRef{gen.generate_sized(t, h), t});
    for (std::size_t a = 0; a < l.size(); ++a) {
      const VtgItem& it = l.at_address(a);
      if (it.kind != VtgKind::Unit) {
      EXPECT_LT(it.addr1, a);
    }
      if (it.kind == VtgKind::Pair) {
      EXPECT_LT(it.addr2, a);
    }
    }
    EXPECT_EQ(l.items[0].kind, VtgKind::Mu);
  }
}

TEST(Serial, RoundTripAndCanonicity) {
  RandomValues gen(42, {14, 0.4, 0.6});
  for (TypeId t : {nat_type(), tree_type(), list_type(tree_type()), prod_type(nat_type(), safe_of(tree_type()))}) {
    for (int i = 0; i < 100; ++i) {
      Heap h;
      ValueRef v{gen.generate_sized(t, h), t};
      VtgList l = serialize(h, v);
      ValueRef back = deserialize(t, l, h);
      EXPECT_TRUE(bisimilar(h, v, back));
      EXPECT_EQ(size(h, back), compressed_size(h, v));
      EXPECT_EQ(serialize(h, back), l);
      EXPECT_EQ(vtg_from_json(to_json(l)), l);
      ValueRef u{oracle::unshare(h, v.root), t};
      EXPECT_EQ(serialize(h, u), l);
    }
  }
}

TEST(Serial, SharingIsInvisible) {
  const Program& p = corpus("height_grow.s1");
  Heap h;
  VertexId g = apply(p.get("grow"), make_nat(h, 2), h);
  ValueRef v{g, tree_type()};
  ValueRef u{oracle::unshare(h, g), tree_type()};
  EXPECT_NE(total_vertices(h, v), total_vertices(h, u));
  EXPECT_EQ(serialize(h, v), serialize(h, u));
}

TEST(Serial, RejectsMalformedLists) {
  Heap h;
  VtgList unit_list{{VtgItem{}}};
  EXPECT_EQ(error_of([&] { deserialize(nat_type(), unit_list, h); }), ErrorCode::RepresentationError);
  VtgList dangling = vtg_from_json(nlohmann::json::parse(R"([{"kind":"mu","type":"mu","addr":5},{"kind":"unit"}])"));
  EXPECT_EQ(error_of([&] { deserialize(nat_type(), dangling, h); }), ErrorCode::RepresentationError);
  EXPECT_EQ(error_of([&] { deserialize(unit_type(), VtgList{}, h); }), ErrorCode::RepresentationError);
}

TEST(Serial, StrictRejectsUnreachableItems) {
  Heap h;
  VtgList l = serialize(h, ValueRef{make_nat(h, 1), nat_type()});
  l.items.push_back(VtgItem{});
  for (auto& it : l.items)
    if (it.kind != VtgKind::Unit) {
      ++it.addr1;
    }
  EXPECT_EQ(error_of([&] { deserialize(nat_type(), l, h); }), ErrorCode::RepresentationError);
  ValueRef v = deserialize(nat_type(), l, h, nullptr, DeserializeMode::Lenient);
  EXPECT_EQ(read_nat(h, v.root), 1u);
}

TEST(Serial, TotalVariantFallsBackToDefault) {
  Heap h;
  ValueRef v = deserialize_or_default(nat_type(), VtgList{}, h);
  EXPECT_EQ(read_nat(h, v.root), 0u);
  ValueRef t = deserialize_or_default(tree_type(), VtgList{{VtgItem{}}}, h);
  EXPECT_EQ(size(h, t), 1u);
}

TEST(Serial, InLanguageSize) {
  RandomValues gen(43, {10, 0.3, 0.6});
  for (int i = 0; i < 100; ++i) {
    Heap h;
    VtgList l = serialize(h, ValueRef{gen.generate_sized(tree_type(), h), tree_type()});
    ValueRef s = as_s1_value(l, h);
    EXPECT_EQ(vtg_size(l), size(h, s));
  }
}

TEST(Serial, FactorizationPipeline) {
  {
    const Program& p = corpus("height_grow.s1");
    Heap h;
    ValueRef g{apply(p.get("grow"), make_nat(h, 3), h), tree_type()};
    PipelineResult r = factor_pipeline(p.get("height"), g, h, &p.names());
    EXPECT_TRUE(r.agrees);
    EXPECT_EQ(read_nat(h, r.value.root), 3u);
  }
  {
    const Program& p = corpus("sum_lst.s1");
    const Judgment& f = p.get("sumLst");
    Heap h;
    VertexId nil = h.con(h.inj(1, h.unit()));
    VertexId xs = nil;
    for (std::uint64_t k : {3u, 2u, 1u}) xs = h.con(h.inj(2, h.pair(make_nat(h, k), xs)));
    PipelineResult r = factor_pipeline(f, ValueRef{xs, f.context[0].second}, h, &p.names());
    EXPECT_TRUE(r.agrees);
    EXPECT_EQ(read_nat(h, r.value.root), 6u);
  }
}
