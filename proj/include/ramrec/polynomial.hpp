// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "ramrec/heap.hpp"

namespace ramrec {

// Multivariate polynomial with natural coefficients in expanded monomial form.
class Polynomial {
 public:
  using Monomial = std::map<std::string, unsigned>;  // variable -> exponent; empty = constant term

  Polynomial() = default;
  Polynomial(BigNat c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) terms_[{}] = std::move(c);
  }
  Polynomial(int c) : Polynomial(BigNat(c)) {}  // NOLINT(google-explicit-constructor)

  static Polynomial variable(const std::string& x) {
    Polynomial p;
    p.terms_[Monomial{{x, 1u}}] = 1;
    return p;
  }

  const std::map<Monomial, BigNat>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) {
      unsigned k = 0;
      for (const auto& [x, e] : m) k += e;
      d = std::max(d, k);
    }
    return d;
  }

  std::vector<std::string> variables() const {
    std::vector<std::string> out;
    for (const auto& [m, c] : terms_)
      for (const auto& [x, e] : m) out.push_back(x);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a;
    for (const auto& [m, c] : b.terms_) r.terms_[m] += c;
    return r;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m = ma;
        for (const auto& [x, e] : mb) m[x] += e;
        r.terms_[m] += ca * cb;
      }
    return r;
  }

  Polynomial& operator+=(const Polynomial& b) { return *this = *this + b; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

  Polynomial pow(unsigned e) const {
    Polynomial r(1);
    for (unsigned i = 0; i < e; ++i) r = r * *this;
    return r;
  }

  // q[x ← p]
  Polynomial substitute(const std::string& x, const Polynomial& p) const {
    Polynomial r;
    for (const auto& [m, c] : terms_) {
      auto it = m.find(x);
      if (it == m.end()) {
        r.terms_[m] += c;
        continue;
      }
      Monomial rest = m;
      unsigned e = it->second;
      rest.erase(x);
      Polynomial mono;
      mono.terms_[rest] = c;
      r += mono * p.pow(e);
    }
    return r;
  }

  // Value with unlisted variables taken as 0.
  BigNat evaluate(const std::map<std::string, BigNat>& at) const {
    BigNat total = 0;
    for (const auto& [m, c] : terms_) {
      BigNat t = c;
      for (const auto& [x, e] : m) {
        auto it = at.find(x);
        if (it == at.end()) {
          t = 0;
          break;
        }
        BigNat base = it->second;
        for (unsigned i = 0; i < e; ++i) t *= base;
      }
      total += t;
    }
    return total;
  }

  // Canonical text: monomials by descending total degree, then lexicographically.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<const Monomial*, const BigNat*>> order;
    for (const auto& [m, c] : terms_) order.emplace_back(&m, &c);
    auto deg = [](const Monomial& m) {
      unsigned k = 0;
      for (const auto& [x, e] : m) k += e;
      return k;
    };
    std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) { return deg(*a.first) > deg(*b.first); });
    std::string out;
    for (const auto& [m, c] : order) {
      if (!out.empty()) out += " + ";
      std::string mono;
      for (const auto& [x, e] : *m) {
        if (!mono.empty()) mono += "*";
        mono += "[" + x + "]";
        if (e > 1) mono += "^" + std::to_string(e);
      }
      if (mono.empty()) out += c->str();
      else if (*c == 1) out += mono;
      else out += c->str() + "*" + mono;
    }
    return out;
  }

 private:
  std::map<Monomial, BigNat> terms_;
};

}  // namespace ramrec
