// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

namespace ramrec {

// Interned identifier. Id 0 is the empty name.
struct Symbol {
  std::uint32_t id = 0;
  friend bool operator==(Symbol, Symbol) = default;
  explicit operator bool() const { return id != 0; }
};

class SymbolTable {
 public:
  static SymbolTable& global() {
    static SymbolTable table;
    return table;
  }

  Symbol intern(std::string_view name) {
    {
      std::shared_lock lock(mu_);
      auto it = index_.find(std::string(name));
      if (it != index_.end()) return Symbol{it->second};
    }
    std::unique_lock lock(mu_);
    auto [it, inserted] = index_.try_emplace(std::string(name), static_cast<std::uint32_t>(names_.size()));
    if (inserted) names_.emplace_back(name);
    return Symbol{it->second};
  }

  const std::string& name(Symbol s) const {
    std::shared_lock lock(mu_);
    return names_.at(s.id);
  }

 private:
  SymbolTable() { intern(""); }

  mutable std::shared_mutex mu_;
  std::deque<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

inline Symbol sym(std::string_view name) { return SymbolTable::global().intern(name); }
inline const std::string& sym_name(Symbol s) { return SymbolTable::global().name(s); }

}  // namespace ramrec

template <>
struct std::hash<ramrec::Symbol> {
  std::size_t operator()(ramrec::Symbol s) const noexcept { return s.id; }
};
