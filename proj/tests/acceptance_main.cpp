// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <cstdlib>
#include <string>

#include "ramrec/acceptance.hpp"

int main(int argc, char** argv) {
  using namespace ramrec::acceptance;
  Options o;
  o.corpus = argc > 1 ? argv[1] : RAMREC_CORPUS_DIR;
  if (const char* env = std::getenv("RAMREC_CORPUS_DIR")) o.corpus = env;
  if (const char* env = std::getenv("RAMREC_SEED")) o.seed = std::stoull(env);
  int failed = 0;
  run_all(o, [&](const Result& r) {
    std::printf("criterion %2d %-4s %-26s %7.3fs  %s\n", r.id, r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  });
  std::printf("%s: %d of 12 criteria failed\n", failed ? "FAIL" : "PASS", failed);
  return failed ? 1 : 0;
}
