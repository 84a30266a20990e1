// SPDX-License-Identifier: Apache-2.0
#include "ramrec/heap.hpp"
#include "ramrec/oracles.hpp"
#include "ramrec/random_values.hpp"
#include "test_util.hpp"

using namespace ramrec;

namespace {
VertexId leaf(Heap& h) { return h.con(h.inj(1, h.unit())); }
VertexId branch(Heap& h, VertexId l, VertexId r) { return h.con(h.inj(2, h.pair(l, r))); }

// Complete binary tree of height m with one shared vertex per level.
VertexId shared_tree(Heap& h, int m) {
  VertexId t = leaf(h);
  for (int i = 0; i < m; ++i) t = branch(h, t, t);
  return t;
}

VertexId unshared_tree(Heap& h, int m) { return m == 0 ? leaf(h) : branch(h, unshared_tree(h, m - 1), unshared_tree(h, m - 1)); }
}  // namespace

TEST(Heap, Numerals) {
  Heap h;
  VertexId three = make_nat(h, 3);
  EXPECT_EQ(read_nat(h, three), 3u);
  EXPECT_EQ(size(h, three), 4u);
  EXPECT_EQ(total_vertices(h, three), 9u);
}

TEST(Heap, ChildrenPrecedeParents) {
  Heap h;
  VertexId t = shared_tree(h, 5);
  for (VertexId v : reachable(h, t)) {
    const Vertex& x = h.at(v);
    if (x.c0 != kNoVertex) {
      EXPECT_LT(x.c0, v);
    }
    if (x.c1 != kNoVertex) {
      EXPECT_LT(x.c1, v);
    }
  }
  auto r = reachable(h, t);
  EXPECT_TRUE(std::is_sorted(r.begin(), r.end()));
}

TEST(Heap, SharingSizes) {
  for (int m = 0; m <= 30; ++m) {
    Heap h;
    ValueRef v{shared_tree(h, m), tree_type()};
    EXPECT_EQ(size(h, v), static_cast<std::size_t>(m + 1));
    EXPECT_EQ(tree_size(h, v), (BigNat(1) << (m + 1)) - 1);
    EXPECT_EQ(compressed_size(h, v), static_cast<std::size_t>(m + 1));
  }
  Heap h;
  ValueRef big{shared_tree(h, 200), tree_type()};
  EXPECT_EQ(tree_size(h, big), (BigNat(1) << 201) - 1);
  EXPECT_EQ(ramrec::testing::error_of([&] { tree_size_u64(h, big); }), ErrorCode::Overflow);
}

TEST(Heap, BisimilarityIgnoresSharing) {
  Heap h;
  ValueRef a{shared_tree(h, 6), tree_type()};
  ValueRef b{unshared_tree(h, 6), tree_type()};
  ValueRef c{shared_tree(h, 5), tree_type()};
  EXPECT_TRUE(bisimilar(h, a, b));
  EXPECT_FALSE(bisimilar(h, a, c));
  EXPECT_FALSE(isomorphic(h, a.root, h, b.root));
  EXPECT_TRUE(isomorphic(h, a.root, h, shared_tree(h, 6)));
  EXPECT_EQ(ramrec::testing::error_of([&] { bisimilar(h, a, ValueRef{make_nat(h, 2), nat_type()}); }),
            ErrorCode::TypeMismatch);
}

TEST(Heap, CompressionMatchesOracle) {
  RandomValues gen(11, {10, 0.4, 0.6});
  for (TypeId t : {nat_type(), tree_type(), list_type(nat_type()), list_type(tree_type())}) {
    for (int i = 0; i < 100; ++i) {
      Heap h;
      ValueRef v{gen.generate_sized(t, h), t};
      ValueRef c = compress(h, v);
      EXPECT_EQ(size(h, c), oracle::compressed_size(h, v));
      EXPECT_TRUE(oracle::bisimilar(h, v, c));
      ValueRef cc = compress(h, c);
      EXPECT_TRUE(isomorphic(h, c.root, h, cc.root));
    }
  }
}

TEST(Heap, UnshareIsBisimilarAndTreeShaped) {
  Heap h;
  ValueRef v{shared_tree(h, 4), tree_type()};
  ValueRef u{oracle::unshare(h, v.root), tree_type()};
  EXPECT_TRUE(bisimilar(h, v, u));
  EXPECT_EQ(BigNat(size(h, u)), tree_size(h, v));
}

TEST(Heap, VertexTypesRejectIllTypedGraphs) {
  Heap h;
  VertexId bad = h.con(h.inj(2, h.unit()));
  EXPECT_EQ(ramrec::testing::error_of([&] { validate(h, ValueRef{bad, nat_type()}); }), ErrorCode::TypeMismatch);
  EXPECT_NO_THROW(validate(h, ValueRef{make_nat(h, 4), nat_type()}));
}

TEST(Heap, VertexCountIsLinearInSize) {
  RandomValues gen(12, {40, 0.3, 0.7});
  for (int i = 0; i < 200; ++i) {
    Heap h;
    VertexId n = gen.generate_sized(nat_type(), h);
    VertexId t = gen.generate_sized(tree_type(), h);
    EXPECT_LE(total_vertices(h, n), 3 * (1 + size(h, n)));
    EXPECT_LE(total_vertices(h, t), 4 * (1 + size(h, t)));
  }
}

TEST(Heap, Dot) {
  Heap h;
  std::string dot = to_dot(h, ValueRef{make_nat(h, 1), nat_type()});
  EXPECT_NE(dot.find("digraph"), std::string::npos);
  EXPECT_NE(dot.find("->"), std::string::npos);
}
