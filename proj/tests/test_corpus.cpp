// SPDX-License-Identifier: Apache-2.0
#include <filesystem>

#include "test_util.hpp"

using namespace ramrec;
namespace fs = std::filesystem;

namespace {
std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

std::vector<fs::path> sources(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".s1") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}
}  // namespace

TEST(Corpus, MainsMatchSidecars) {
  auto files = sources(RAMREC_CORPUS_DIR);
  ASSERT_FALSE(files.empty());
  for (const fs::path& f : files) {
    fs::path expected = fs::path(f).replace_extension(".expected");
    ASSERT_TRUE(fs::exists(expected)) << f;
    Program p = load_program_file(f.string());
    ASSERT_NE(p.main(), nullptr) << f;
    for (Semantics s : {Semantics::DP, Semantics::TD}) {
      if (s == Semantics::TD && f.stem() == "height_grow") continue;
      Heap h;
      Meter m;
      VertexId v = evaluate(s, *p.main()->subject, {}, h, m);
      EXPECT_EQ(format_value(h, ValueRef{v, p.main()->type}, &p.core), trim(read_file(expected.string()))) << f;
    }
  }
}

TEST(Corpus, NegativesFailWithExpectedCode) {
  auto files = sources(fs::path(RAMREC_CORPUS_DIR) / "negative");
  ASSERT_FALSE(files.empty());
  for (const fs::path& f : files) {
    std::string want = trim(read_file(fs::path(f).replace_extension(".expected").string()));
    try {
      load_program_file(f.string());
      ADD_FAILURE() << f << " was accepted";
    } catch (const Error& e) {
      EXPECT_EQ(std::string(error_code_name(e.code())), want) << f;
      EXPECT_GT(e.pos().line, 0) << f;
    }
  }
}
