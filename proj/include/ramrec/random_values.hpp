// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <unordered_map>
#include <vector>

#include "ramrec/heap.hpp"
#include "ramrec/types.hpp"

namespace ramrec {

struct RandomValueOptions {
  std::size_t max_constructors = 16;  // budget on freshly created constructor vertices
  double share_probability = 0.25;    // chance of reusing an earlier vertex of the same type
  double grow_probability = 0.75;     // chance of taking the recursive branch while budget remains
};

// Seeded generator of random values with sharing; tier marks are ignored (values are untyped graphs).
class RandomValues {
 public:
  explicit RandomValues(std::uint64_t seed, RandomValueOptions options = {}) : rng_(seed), options_(options) {}

  std::mt19937_64& rng() { return rng_; }
  RandomValueOptions& options() { return options_; }

  VertexId generate(TypeId t, Heap& h) {
    budget_ = options_.max_constructors;
    pools_.clear();
    return gen(norm_of(t), h);
  }

  // Like generate, with a budget drawn uniformly from [1, max_constructors].
  VertexId generate_sized(TypeId t, Heap& h) {
    std::uniform_int_distribution<std::size_t> d(1, std::max<std::size_t>(1, options_.max_constructors));
    std::size_t keep = options_.max_constructors;
    options_.max_constructors = d(rng_);
    VertexId v = generate(t, h);
    options_.max_constructors = keep;
    return v;
  }

  // Continues with the current pools so later values may share with earlier ones.
  VertexId generate_more(TypeId t, Heap& h, std::size_t budget) {
    budget_ = budget;
    return gen(norm_of(t), h);
  }

  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

 private:
  VertexId gen(TypeId t, Heap& h) {
    auto& pool = pools_[t];
    if (!pool.empty() && coin(options_.share_probability)) return pool[pick(pool.size())];
    VertexId v = fresh(t, h);
    pool.push_back(v);
    return v;
  }

  VertexId fresh(TypeId t, Heap& h) {
    TypeNode n = node_of(t);
    switch (n.kind) {
      case TypeKind::Unit:
      case TypeKind::SafeUnit: return h.unit();
      case TypeKind::Sum: {
        bool l = is_inhabited(TypeId{n.a}), r = is_inhabited(TypeId{n.b});
        int slot = l && r ? (coin(0.5) ? 1 : 2) : (l ? 1 : 2);
        return h.inj(slot, gen(TypeId{slot == 1 ? n.a : n.b}, h));
      }
      case TypeKind::Prod: {
        VertexId a = gen(TypeId{n.a}, h);
        return h.pair(a, gen(TypeId{n.b}, h));
      }
      case TypeKind::Mu:
      case TypeKind::SafeMu: {
        if (budget_ > 0) --budget_;
        return h.con(payload(FunctorId{n.a}, t, h));
      }
    }
    return kNoVertex;
  }

  VertexId payload(FunctorId f, TypeId self, Heap& h) {
    FunctorNode n = node_of(f);
    switch (n.kind) {
      case FunctorKind::Id: return gen(self, h);
      case FunctorKind::Const: return gen(TypeId{n.a}, h);
      case FunctorKind::Sum: {
        FunctorId a{n.a}, b{n.b};
        bool base_a = functor_inhabited_at_empty(a);
        int slot;
        if (budget_ == 0) {
          slot = base_a ? 1 : 2;
        } else {
          int ida = functor_ids(a), idb = functor_ids(b);
          if (ida == idb) slot = coin(0.5) ? 1 : 2;
          else {
            int grow = ida > idb ? 1 : 2;
            slot = coin(options_.grow_probability) ? grow : 3 - grow;
          }
        }
        return h.inj(slot, payload(slot == 1 ? a : b, self, h));
      }
      case FunctorKind::Prod: {
        VertexId a = payload(FunctorId{n.a}, self, h);
        return h.pair(a, payload(FunctorId{n.b}, self, h));
      }
    }
    return kNoVertex;
  }

  std::mt19937_64 rng_;
  RandomValueOptions options_;
  std::size_t budget_ = 0;
  std::unordered_map<TypeId, std::vector<VertexId>> pools_;
};

}  // namespace ramrec
