// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gtest/gtest.h>

#include <string>

#include "ramrec/program.hpp"

namespace ramrec::testing {

inline std::string corpus_path(const std::string& file) { return std::string(RAMREC_CORPUS_DIR) + "/" + file; }

inline const Program& corpus(const std::string& file) {
  static std::map<std::string, Program> cache;
  auto it = cache.find(file);
  if (it == cache.end()) it = cache.emplace(file, load_program_file(corpus_path(file))).first;
  return it->second;
}

inline ErrorCode error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

inline VertexId apply(const Judgment& j, VertexId arg, Heap& h, Semantics s = Semantics::DP) {
  Meter m;
  return evaluate(s, *j.subject, Env{{j.context.at(0).first, arg}}, h, m);
}

}  // namespace ramrec::testing
