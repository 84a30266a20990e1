// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "ramrec/bounds.hpp"
#include "ramrec/cek.hpp"
#include "ramrec/noninterference.hpp"
#include "ramrec/oracles.hpp"
#include "ramrec/program.hpp"
#include "ramrec/random_values.hpp"
#include "ramrec/serial.hpp"
#include "ramrec/spans.hpp"

namespace ramrec::acceptance {

// Pinned tolerances and budgets.
inline constexpr double kGrowSeconds = 1.0;
inline constexpr double kHeightSeconds = 5.0;
inline constexpr double kHeightSlopeMax = 3.5;
inline constexpr double kCompressSeconds = 30.0;
inline constexpr double kBoundsSeconds = 60.0;
inline constexpr std::uint64_t kVtgConstant = 800;  // fitted offline, worst observed ratio 696
inline constexpr std::uint64_t kCekMaxSteps = 50'000'000;
inline constexpr std::uint64_t kCekMainBudget = 5'000'000;  // mains with larger TD cost are skipped
inline constexpr std::size_t kNiTrials = 1000;
inline constexpr std::size_t kBoundTrials = 200;

struct Result {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct Options {
  std::filesystem::path corpus;
  std::uint64_t seed = 20240601;
};

struct Corpus {
  std::vector<Program> programs;
  std::vector<std::pair<std::string, std::string>> negatives;  // path, expected code
  std::vector<std::string> load_errors;

  const Program* find(const std::string& file) const {
    for (const auto& p : programs)
      if (std::filesystem::path(p.path).filename() == file) return &p;
    return nullptr;
  }
  const Program& get(const std::string& file) const {
    if (const Program* p = find(file)) return *p;
    fail(ErrorCode::IoError, "corpus program '" + file + "' is missing");
  }
};

inline Corpus load_corpus(const std::filesystem::path& dir) {
  Corpus c;
  if (!std::filesystem::is_directory(dir)) return c;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".s1") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      c.programs.push_back(load_program_file(f.string()));
    } catch (const Error& e) {
      c.load_errors.push_back(f.filename().string() + ": " + e.what());
    }
  }
  std::filesystem::path neg = dir / "negative";
  if (std::filesystem::is_directory(neg)) {
    std::vector<std::filesystem::path> nf;
    for (const auto& e : std::filesystem::directory_iterator(neg))
      if (e.path().extension() == ".s1") nf.push_back(e.path());
    std::sort(nf.begin(), nf.end());
    for (const auto& f : nf) {
      std::filesystem::path exp = f;
      exp.replace_extension(".expected");
      std::string code = std::filesystem::exists(exp) ? read_file(exp.string()) : "";
      while (!code.empty() && std::isspace(static_cast<unsigned char>(code.back()))) code.pop_back();
      c.negatives.emplace_back(f.string(), code);
    }
  }
  return c;
}

namespace detail {
using Clock = std::chrono::steady_clock;

inline double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

inline VertexId apply(const Judgment& j, VertexId arg, Heap& h, Semantics s, Meter& m) {
  return evaluate(s, *j.subject, Env{{j.context.at(0).first, arg}}, h, m);
}

// Ordinary least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline bool ramified(const Program& p) { return p.level() != Calculus::S1; }
}  // namespace detail

// 1: grow(m) has m+1 constructor vertices and tree size 2^(m+1)-1.
inline Result sharing_blowup(const Corpus& c, const Options&) {
  Result r{1, "sharing blow-up", false, {}, 0};
  const Program& p = c.get("height_grow.s1");
  const Judgment& grow = p.get("grow");
  auto t0 = detail::Clock::now();
  bool ok = true;
  std::string bad;
  for (std::uint64_t m = 1; m <= 20; ++m) {
    Heap h;
    Meter meter;
    VertexId v = detail::apply(grow, make_nat(h, m), h, Semantics::DP, meter);
    BigNat want = (BigNat(1) << (m + 1)) - 1;
    if (size(h, v) != m + 1 || tree_size(h, v) != want) {
      ok = false;
      bad = "m=" + std::to_string(m) + " size=" + std::to_string(size(h, v)) + " ts=" + tree_size(h, v).str();
      break;
    }
  }
  double secs = detail::since(t0);
  const Program& ts = c.get("tree_size.s1");
  for (std::uint64_t m = 1; ok && m <= 10; ++m) {
    Heap h;
    Meter meter;
    VertexId g = detail::apply(ts.get("grow"), make_nat(h, m), h, Semantics::DP, meter);
    VertexId n = detail::apply(ts.get("treeSize"), g, h, Semantics::DP, meter);
    if (read_nat(h, n) != (std::uint64_t{1} << (m + 1)) - 1) {
      ok = false;
      bad = "treeSize(grow " + std::to_string(m) + ") is wrong";
    }
  }
  r.seconds = secs;
  r.passed = ok && secs < kGrowSeconds;
  r.detail = ok ? "m=1..20 exact, treeSize program agrees for m<=10" : bad;
  return r;
}

// 2: height(grow(m)) = m under DP with polynomial cost growth.
inline Result height_dp(const Corpus& c, const Options&) {
  Result r{2, "height under DP", false, {}, 0};
  const Program& p = c.get("height_grow.s1");
  const Judgment& grow = p.get("grow");
  const Judgment& height = p.get("height");
  auto t0 = detail::Clock::now();
  std::vector<double> xs, ys;
  std::string bad;
  for (std::uint64_t m = 1; m <= 60; ++m) {
    Heap h;
    Meter gm, hm;
    VertexId g = detail::apply(grow, make_nat(h, m), h, Semantics::DP, gm);
    VertexId v = detail::apply(height, g, h, Semantics::DP, hm);
    if (read_nat(h, v) != m) {
      bad = "wrong height at m=" + std::to_string(m);
      break;
    }
    if (m >= 20) {
      xs.push_back(static_cast<double>(m + 1));
      ys.push_back(static_cast<double>(hm.nodes));
    }
  }
  r.seconds = detail::since(t0);
  if (!bad.empty()) {
    r.detail = bad;
    return r;
  }
  double slope = detail::loglog_slope(xs, ys);
  char buf[96];
  std::snprintf(buf, sizeof buf, "log-log slope %.3f (limit %.1f), cost_dp(60)=%.0f", slope, kHeightSlopeMax, ys.back());
  r.detail = buf;
  r.passed = slope <= kHeightSlopeMax && r.seconds < kHeightSeconds;
  return r;
}

// 3: TD cost of height(grow(m)) is exponential.
inline Result td_blowup(const Corpus& c, const Options&) {
  Result r{3, "TD blow-up", false, {}, 0};
  const Program& p = c.get("height_grow.s1");
  auto t0 = detail::Clock::now();
  r.passed = true;
  std::uint64_t last = 0;
  for (std::uint64_t m = 5; m <= 14; ++m) {
    Heap h;
    Meter gm, hm;
    VertexId g = detail::apply(p.get("grow"), make_nat(h, m), h, Semantics::DP, gm);
    detail::apply(p.get("height"), g, h, Semantics::TD, hm);
    std::uint64_t calls = (std::uint64_t{1} << (m + 1)) - 1;
    if (hm.nodes < (std::uint64_t{1} << m) || hm.fold_steps < calls) {
      r.passed = false;
      r.detail = "m=" + std::to_string(m) + " cost_td=" + std::to_string(hm.nodes);
      break;
    }
    last = hm.nodes;
  }
  r.seconds = detail::since(t0);
  if (r.passed) r.detail = "cost_td >= 2^m and step calls >= 2^(m+1)-1 for m=5..14; cost_td(14)=" + std::to_string(last);
  return r;
}

inline std::vector<std::pair<TypeId, const TypeNames*>> sample_types(const Corpus& c) {
  const Program& lst = c.get("sum_lst.s1");
  const Program& lt = c.get("ltree.s1");
  return {{nat_type(), &lst.names()},
          {*lst.names().lookup("list"), &lst.names()},
          {tree_type(), &c.get("height_grow.s1").names()},
          {*lt.names().lookup("ltree"), &lt.names()}};
}

// 4: compression reaches the bisimulation-quotient minimum.
inline Result compression(const Corpus& c, const Options& o) {
  Result r{4, "compression exactness", false, {}, 0};
  auto types = sample_types(c);
  RandomValues gen(o.seed ^ 0x4, {8, 0.4, 0.6});
  auto t0 = detail::Clock::now();
  std::size_t done = 0, shrunk = 0;
  r.passed = true;
  while (done < 1000) {
    TypeId t = types[done % types.size()].first;
    Heap h;
    VertexId v = gen.generate_sized(t, h);
    if (size(h, v) > 8) continue;
    ValueRef ref{v, t};
    std::size_t want = oracle::compressed_size(h, ref);
    ValueRef packed = compress(h, ref);
    shrunk += want < size(h, ref);
    if (size(h, packed) != want || compressed_size(h, ref) != want || !oracle::bisimilar(h, ref, packed)) {
      r.passed = false;
      r.detail = "mismatch on sample " + std::to_string(done);
      break;
    }
    ++done;
  }
  r.seconds = detail::since(t0);
  if (r.passed) r.detail = "1000 dags with <= 8 constructors, " + std::to_string(shrunk) + " of them compressible";
  r.passed = r.passed && r.seconds < kCompressSeconds;
  return r;
}

// 5: serialization is canonical and round-trips.
inline Result canonical_serialization(const Corpus& c, const Options& o) {
  Result r{5, "canonical serialization", false, {}, 0};
  auto types = sample_types(c);
  RandomValues gen(o.seed ^ 0x5, {10, 0.35, 0.6});
  auto t0 = detail::Clock::now();
  std::size_t equal_pairs = 0;
  r.passed = true;
  for (std::size_t i = 0; i < 500 && r.passed; ++i) {
    auto [t, names] = types[i % types.size()];
    Heap h;
    VertexId v = gen.generate_sized(t, h);
    VertexId w;
    switch (i % 3) {
      case 0: w = oracle::unshare(h, v); break;
      case 1: w = compress(h, ValueRef{v, t}).root; break;
      default: w = gen.generate_sized(t, h); break;
    }
    ValueRef vv{v, t}, ww{w, t};
    VtgList lv = serialize(h, vv, names), lw = serialize(h, ww, names);
    bool same = oracle::bisimilar(h, vv, ww);
    equal_pairs += same;
    ValueRef back = deserialize(t, lv, h, names);
    if ((lv == lw) != same || !oracle::bisimilar(h, vv, back) || size(h, back) != compressed_size(h, vv)) {
      r.passed = false;
      r.detail = "failure on pair " + std::to_string(i);
    }
  }
  r.seconds = detail::since(t0);
  if (r.passed) r.detail = "500 pairs (" + std::to_string(equal_pairs) + " bisimilar), all round-trips exact";
  return r;
}

// 6: the ltree Leaf literal.
inline Result leaf_literal(const Corpus& c, const Options&) {
  Result r{6, "ltree Leaf literal", false, {}, 0};
  const Program& p = c.get("ltree.s1");
  Heap h;
  Meter m;
  VertexId v = eval_dp(*p.main()->subject, {}, h, m);
  VtgList got = serialize(h, ValueRef{v, p.main()->type}, &p.names());
  VtgList want{{{VtgKind::Mu, "ltree", 1, 0}, {VtgKind::Inj1, "unit + nat * ltree * ltree", 0, 0}, {VtgKind::Unit, "", 0, 0}}};
  r.passed = got == want;
  r.detail = to_json(got).dump();
  return r;
}

// 7: vtg size is quadratic in value size.
inline Result vtg_quadratic(const Corpus& c, const Options& o) {
  Result r{7, "vtg size bound", false, {}, 0};
  auto types = sample_types(c);
  RandomValues gen(o.seed ^ 0x7, {200, 0.25, 0.9});
  auto t0 = detail::Clock::now();
  double worst = 0;
  std::size_t done = 0, largest = 0;
  r.passed = true;
  while (done < 1000) {
    auto [t, names] = types[done % types.size()];
    Heap h;
    VertexId v = gen.generate_sized(t, h);
    std::size_t n = size(h, v);
    if (n > 200) continue;
    largest = std::max(largest, n);
    std::uint64_t s = vtg_size(serialize(h, ValueRef{v, t}, names));
    worst = std::max(worst, static_cast<double>(s) / static_cast<double>((n + 1) * (n + 1)));
    if (s > kVtgConstant * (n + 1) * (n + 1)) r.passed = false;
    ++done;
  }
  r.seconds = detail::since(t0);
  char buf[128];
  std::snprintf(buf, sizeof buf, "c=%llu, worst ratio %.1f, largest size %zu", static_cast<unsigned long long>(kVtgConstant),
                worst, largest);
  r.detail = buf;
  return r;
}

// 8: ramified typing of the sample programs and the negative tests.
inline Result ramified_typing(const Corpus& c, const Options&) {
  Result r{8, "ramified typing", false, {}, 0};
  struct Want {
    const char* file;
    const char* def;
    const char* type;
  };
  const Want wants[] = {
      {"plus_prime.s1", "plus'", "safe nat * nat -> safe nat"},
      {"times_prime.s1", "times'", "nat * nat -> safe nat"},
      {"plus.s1", "plus", "nat * nat -> nat"},
      {"times.s1", "times", "nat * nat -> nat"},
      {"sum_lst.s1", "sumLst", "list -> nat"},
  };
  r.passed = true;
  std::string detail;
  for (const Want& w : wants) {
    const Program* p = c.find(w.file);
    std::string got = "missing";
    if (p && p->find(w.def)) {
      const Judgment& j = p->get(w.def);
      got = print_type(Type{j.context.at(0).second, j.type}, &p->names());
    }
    if (got != w.type) {
      r.passed = false;
      detail += std::string(w.def) + " : " + got + "; ";
    }
  }
  if (c.negatives.size() != 3) {
    r.passed = false;
    detail += "expected 3 negative programs; ";
  }
  for (const auto& [path, code] : c.negatives) {
    std::string got = "accepted";
    try {
      load_program_file(path);
    } catch (const Error& e) {
      got = error_code_name(e.code());
    }
    if (got != code) {
      r.passed = false;
      detail += std::filesystem::path(path).filename().string() + " gave " + got + "; ";
    }
  }
  r.detail = r.passed ? "5 judgments match, 3 negatives rejected with expected codes" : detail;
  return r;
}

// 9: CEK runs agree with TD and take at most three steps per TD node.
inline Result cek_fidelity(const Corpus& c, const Options& o) {
  Result r{9, "CEK fidelity", false, {}, 0};
  auto t0 = detail::Clock::now();
  RandomValues gen(o.seed ^ 0x9, {6, 0.25, 0.6});
  std::size_t runs = 0, skipped = 0;
  double worst = 0;
  r.passed = true;
  auto one = [&](const Program& p, const Judgment& j, Heap& h, const Env& theta, const std::string& label) {
    Meter m;
    VertexId v = eval_td(*j.subject, theta, h, m);
    CekResult k = cek_run(*j.subject, theta, h, false, kCekMaxSteps, &p.core);
    ++runs;
    worst = std::max(worst, static_cast<double>(k.steps) / static_cast<double>(m.nodes));
    if (!bisimilar(h, ValueRef{v, j.type}, ValueRef{k.value, j.type}) || k.steps > 3 * m.nodes) {
      r.passed = false;
      r.detail = label + ": steps=" + std::to_string(k.steps) + " cost_td=" + std::to_string(m.nodes);
    }
  };
  for (const Program& p : c.programs) {
    for (const Judgment& j : p.judgments) {
      std::string label = std::filesystem::path(p.path).filename().string() + ":" + j.name;
      if (j.context.empty()) {
        Heap h;
        Meter probe;
        probe.limit = kCekMainBudget;
        try {
          eval_td(*j.subject, {}, h, probe);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::StepBudgetExceeded) throw;
          ++skipped;
          continue;
        }
        one(p, j, h, {}, label);
        continue;
      }
      for (int trial = 0; trial < 10 && r.passed; ++trial) {
        Heap h;
        Env theta{{j.context[0].first, gen.generate_sized(j.context[0].second, h)}};
        one(p, j, h, theta, label);
      }
    }
  }
  r.seconds = detail::since(t0);
  if (r.passed) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu runs, worst steps/cost_td %.3f, %zu main(s) over the TD budget skipped", runs, worst,
                  skipped);
    r.detail = buf;
  }
  return r;
}

// 10: residual size and DP cost stay below the synthesized bounds.
inline Result bound_soundness(const Corpus& c, const Options& o) {
  Result r{10, "bound soundness", false, {}, 0};
  auto t0 = detail::Clock::now();
  RandomValues gen(o.seed ^ 0x10, {12, 0.25, 0.7});
  std::size_t judgments = 0;
  r.passed = true;
  for (const Program& p : c.programs) {
    if (!detail::ramified(p)) continue;
    for (const Judgment& j : p.judgments) {
      if (j.context.empty()) continue;
      ++judgments;
      Bounds b = synthesize_bounds(j, &p.names());
      for (std::size_t trial = 0; trial < kBoundTrials && r.passed; ++trial) {
        Heap h;
        Env theta;
        for (const auto& [x, t] : j.context) theta.emplace_back(x, gen.generate_sized(t, h));
        auto at = variable_residuals(h, j.context, theta);
        Meter m;
        VertexId v = eval_dp(*j.subject, theta, h, m);
        BigNat res = residual_size_of(h, j.context, *j.subject, j.type, theta, v);
        if (res > b.size.evaluate(at) || BigNat(m.nodes) > b.cost.evaluate(at)) {
          r.passed = false;
          r.detail = j.name + ": residual=" + res.str() + " q=" + b.size.evaluate(at).str() +
                     " cost=" + std::to_string(m.nodes) + " p=" + b.cost.evaluate(at).str();
        }
      }
    }
  }
  r.seconds = detail::since(t0);
  if (r.passed) r.detail = std::to_string(judgments) + " judgments x " + std::to_string(kBoundTrials) + " environments";
  r.passed = r.passed && r.seconds < kBoundsSeconds;
  return r;
}

inline constexpr const char* kToNormMutant = R"(%calculus rs1
datatype nat = Zero | Succ of nat

def leak ((x, y) : nat * safe nat) = toNorm y
)";

// 11: noninterference holds on the corpus and catches the toNorm mutant.
inline Result noninterference(const Corpus& c, const Options& o) {
  Result r{11, "noninterference", false, {}, 0};
  auto t0 = detail::Clock::now();
  std::size_t checked = 0, vacuous = 0;
  r.passed = true;
  for (const Program& p : c.programs) {
    for (const Judgment& j : p.judgments) {
      if (j.context.empty()) continue;
      ++checked;
      NiReport rep = check_normal_invariance(j, NiOptions{kNiTrials, o.seed ^ 0x11, 10, Semantics::DP}, &p.core);
      vacuous += rep.vacuous;
      if (!rep.passed) {
        r.passed = false;
        r.detail = j.name + ": " + rep.counterexample;
        break;
      }
    }
    if (!r.passed) break;
  }
  Program mutant = load_program(kToNormMutant, "<mutant>", CheckOptions{false});
  NiReport mrep = check_normal_invariance(mutant.get("leak"), NiOptions{kNiTrials, o.seed ^ 0x12, 10, Semantics::DP}, &mutant.core);
  if (mrep.passed) {
    r.passed = false;
    r.detail = "toNorm mutant was not caught";
  }
  r.seconds = detail::since(t0);
  if (r.passed)
    r.detail = std::to_string(checked) + " judgments pass (" + std::to_string(vacuous) + " vacuous); mutant caught after " +
               std::to_string(mrep.trials) + " trial(s)";
  return r;
}

// 12: deserialize . f . serialize agrees with direct DP evaluation.
inline Result factorization(const Corpus& c, const Options& o) {
  Result r{12, "factorization", false, {}, 0};
  auto t0 = detail::Clock::now();
  RandomValues gen(o.seed ^ 0x12, {10, 0.3, 0.7});
  const std::pair<const char*, const char*> fs[] = {{"height_grow.s1", "height"}, {"sum_lst.s1", "sumLst"}, {"plus.s1", "plus"}};
  r.passed = true;
  for (auto [file, def] : fs) {
    const Program& p = c.get(file);
    const Judgment& f = p.get(def);
    for (int i = 0; i < 100; ++i) {
      Heap h;
      ValueRef v{gen.generate_sized(f.context[0].second, h), f.context[0].second};
      if (!factor_pipeline(f, v, h, &p.names()).agrees) {
        r.passed = false;
        r.detail = std::string(def) + " disagrees on input " + format_value(h, v, &p.core);
        break;
      }
    }
  }
  r.seconds = detail::since(t0);
  if (r.passed) r.detail = "height, sumLst, plus on 100 inputs each";
  return r;
}

inline std::vector<Result> run_all(const Options& o, const std::function<void(const Result&)>& on_result = {}) {
  Corpus c = load_corpus(o.corpus);
  using Fn = Result (*)(const Corpus&, const Options&);
  const Fn fns[] = {sharing_blowup, height_dp,  td_blowup,        compression,    canonical_serialization, leaf_literal,
                    vtg_quadratic,  ramified_typing, cek_fidelity, bound_soundness, noninterference,         factorization};
  std::vector<Result> out;
  int id = 1;
  for (Fn f : fns) {
    Result r;
    try {
      r = f(c, o);
    } catch (const Error& e) {
      r = Result{id, "criterion " + std::to_string(id), false, std::string(error_code_name(e.code())) + ": " + e.what(), 0};
    }
    ++id;
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace ramrec::acceptance
