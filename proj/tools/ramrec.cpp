// SPDX-License-Identifier: Apache-2.0
// ramrec: command-line front end.

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "ramrec/acceptance.hpp"
#include "ramrec/bounds.hpp"
#include "ramrec/cek.hpp"
#include "ramrec/noninterference.hpp"
#include "ramrec/program.hpp"
#include "ramrec/serial.hpp"

using nlohmann::json;
using namespace ramrec;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240601;
constexpr std::size_t kPrettyLimit = 4096;

std::uint64_t seed_or_env(std::uint64_t seed, bool explicit_seed) {
  if (explicit_seed) return seed;
  if (const char* s = std::getenv("RAMREC_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      fail(ErrorCode::UsageError, std::string("RAMREC_SEED is not a number: ") + s);
    }
  }
  return seed;
}

const Judgment& ground(const Program& p, const std::string& name) {
  const Judgment* j = name.empty() ? p.main() : p.find(name);
  if (!j) fail(ErrorCode::UsageError, name.empty() ? "program has no main; pass --expr NAME" : "no definition named '" + name + "'");
  if (!j->context.empty()) fail(ErrorCode::UsageError, "'" + j->name + "' takes an argument; choose a ground definition");
  return *j;
}

std::string judgment_type(const Program& p, const Judgment& j) {
  if (j.context.empty()) return print_type(j.type, &p.names());
  return print_type(Type{j.context[0].second, j.type}, &p.names());
}

json value_json(const Heap& h, ValueRef v, const Program& p) {
  json r;
  r["pretty"] = ValuePrinter(h, &p.core).print(v, kPrettyLimit);
  r["type"] = print_type(v.type, &p.names());
  r["size"] = size(h, v);
  r["compressed_size"] = compressed_size(h, v);
  r["total_vertices"] = total_vertices(h, v);
  BigNat ts = tree_size(h, v);
  if (ts <= BigNat(std::numeric_limits<std::uint64_t>::max())) r["tree_size"] = ts.convert_to<std::uint64_t>();
  else r["tree_size"] = nullptr;
  r["tree_size_text"] = ts.str();
  return r;
}

void print_value_text(const json& v) {
  std::cout << v["pretty"].get<std::string>() << " : " << v["type"].get<std::string>() << "\n";
  std::cout << "  size " << v["size"] << ", compressed " << v["compressed_size"] << ", tree size "
            << v["tree_size_text"].get<std::string>() << "\n";
}

void write_dot(const std::string& path, const Heap& h, ValueRef v, const Program& p) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  out << to_dot(h, v, &p.names());
}

struct Cli {
  bool json_out = false;
};

int cmd_check(const std::string& file, const Cli& cli) {
  Program p = load_program_file(file);
  json out;
  out["program"] = file;
  out["calculus"] = calculus_name(p.level());
  out["judgments"] = json::array();
  for (const Judgment& j : p.judgments) {
    Classification c = classify(j.type);
    json e;
    e["name"] = j.name;
    e["type"] = judgment_type(p, j);
    e["result_tier"] = tier_name(c.tier);
    e["result_hereditarily_sequential"] = c.hereditarily_sequential;
    out["judgments"].push_back(e);
  }
  if (cli.json_out) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "calculus " << calculus_name(p.level()) << "\n";
    for (const auto& e : out["judgments"]) std::cout << e["name"].get<std::string>() << " : " << e["type"].get<std::string>() << "\n";
  }
  return 0;
}

int cmd_run(const std::string& file, const std::string& expr, const std::string& sem_name, bool meter_flag,
            const std::string& dot, std::uint64_t max_nodes, const Cli& cli) {
  Program p = load_program_file(file);
  const Judgment& j = ground(p, expr);
  Semantics sem;
  if (sem_name == "td") sem = Semantics::TD;
  else if (sem_name == "dp") sem = Semantics::DP;
  else fail(ErrorCode::UsageError, "--semantics must be td or dp");
  Heap h;
  Meter m;
  if (max_nodes) m.limit = max_nodes;
  auto t0 = std::chrono::steady_clock::now();
  VertexId v = evaluate(sem, *j.subject, {}, h, m);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ValueRef r{v, j.type};
  if (!dot.empty()) write_dot(dot, h, r, p);
  json out;
  out["program"] = file;
  out["calculus"] = calculus_name(p.level());
  out["expr"] = j.name;
  out["semantics"] = semantics_name(sem);
  out["result"] = value_json(h, r, p);
  out["meter"] = {{"nodes", m.nodes}, {"fold_steps", m.fold_steps}, {"memo_hits", m.memo_hits}, {"cs_charge", m.cs_charge}};
  out["timings"] = {{"seconds", secs}};
  if (cli.json_out) {
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  print_value_text(out["result"]);
  if (meter_flag)
    std::cout << "  cost " << m.nodes << " nodes (" << m.fold_steps << " fold steps, " << m.memo_hits << " memo hits, "
              << m.cs_charge << " cs charge), " << secs << " s\n";
  return 0;
}

int cmd_cek(const std::string& file, const std::string& expr, bool trace, std::uint64_t max_steps, const Cli& cli) {
  Program p = load_program_file(file);
  const Judgment& j = ground(p, expr);
  Heap h;
  CekResult r = cek_run(*j.subject, {}, h, trace, max_steps, &p.core);
  ValueRef v{r.value, j.type};
  if (cli.json_out) {
    json out;
    out["program"] = file;
    out["expr"] = j.name;
    out["steps"] = r.steps;
    out["result"] = value_json(h, v, p);
    if (trace) {
      out["trace"] = json::array();
      for (const TraceLine& t : r.trace) out["trace"].push_back({{"rule", t.rule}, {"context", t.context}, {"kdepth", t.kdepth}});
    }
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  for (const TraceLine& t : r.trace) std::cout << t.rule << " | " << t.context << " | " << t.kdepth << "\n";
  std::cout << ValuePrinter(h, &p.core).print(v, kPrettyLimit) << " : " << print_type(j.type, &p.names()) << "\n";
  std::cout << "  " << r.steps << " steps\n";
  return 0;
}

int cmd_compress(const std::string& file, const std::string& expr, const std::string& dot, const Cli& cli) {
  Program p = load_program_file(file);
  const Judgment& j = ground(p, expr);
  Heap h;
  Meter m;
  ValueRef v{eval_dp(*j.subject, {}, h, m), j.type};
  ValueRef c = compress(h, v);
  if (!dot.empty()) write_dot(dot, h, c, p);
  json out;
  out["program"] = file;
  out["expr"] = j.name;
  out["size"] = size(h, v);
  out["total_vertices"] = total_vertices(h, v);
  out["compressed_size"] = size(h, c);
  out["compressed_total_vertices"] = total_vertices(h, c);
  out["tree_size"] = tree_size(h, v).str();
  out["bisimilar"] = bisimilar(h, v, c);
  if (cli.json_out) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "size " << out["size"] << " -> " << out["compressed_size"] << " constructor vertices, "
              << out["total_vertices"] << " -> " << out["compressed_total_vertices"] << " vertices, tree size "
              << out["tree_size"].get<std::string>() << "\n";
  }
  return 0;
}

int cmd_serialize(const std::string& file, const std::string& expr) {
  Program p = load_program_file(file);
  const Judgment& j = ground(p, expr);
  Heap h;
  Meter m;
  ValueRef v{eval_dp(*j.subject, {}, h, m), j.type};
  std::cout << to_json(serialize(h, v, &p.names())).dump() << "\n";
  return 0;
}

int cmd_deserialize(const std::string& type_text, const std::string& file, const std::string& input, bool lenient,
                    bool total, const Cli& cli) {
  Program p;
  if (!file.empty()) p = load_program_file(file);
  TypeId t = parse_type(type_text, p.names());
  std::string text;
  if (input.empty() || input == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    text = read_file(input);
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::RepresentationError, std::string("input is not JSON: ") + e.what());
  }
  VtgList list = vtg_from_json(doc);
  Heap h;
  ValueRef v = total ? deserialize_or_default(t, list, h, &p.names())
                     : deserialize(t, list, h, &p.names(), lenient ? DeserializeMode::Lenient : DeserializeMode::Strict);
  json out = value_json(h, v, p);
  if (cli.json_out) std::cout << out.dump(2) << "\n";
  else print_value_text(out);
  return 0;
}

int cmd_bounds(const std::string& file, const Cli& cli) {
  Program p = load_program_file(file);
  json out;
  out["program"] = file;
  out["calculus"] = calculus_name(p.level());
  out["bounds"] = json::array();
  for (const Judgment& j : p.judgments) {
    Bounds b = synthesize_bounds(j, &p.names());
    out["bounds"].push_back({{"name", j.name},
                             {"type", judgment_type(p, j)},
                             {"size_bound", b.size.to_string()},
                             {"cost_bound", b.cost.to_string()},
                             {"size_degree", b.size.degree()},
                             {"cost_degree", b.cost.degree()}});
  }
  if (cli.json_out) {
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  for (const auto& e : out["bounds"]) {
    std::cout << e["name"].get<std::string>() << " : " << e["type"].get<std::string>() << "\n";
    std::cout << "  q = " << e["size_bound"].get<std::string>() << "\n";
    std::cout << "  p = " << e["cost_bound"].get<std::string>() << "\n";
  }
  return 0;
}

int cmd_ni(const std::string& file, const std::string& def, std::size_t trials, std::uint64_t seed, bool mutant,
           const Cli& cli) {
  CheckOptions opts;
  opts.enforce_to_norm = !mutant;
  Program p = load_program_file(file, opts);
  json out;
  out["program"] = file;
  out["seed"] = seed;
  out["trials"] = trials;
  out["results"] = json::array();
  bool all = true;
  for (const Judgment& j : p.judgments) {
    if (j.context.empty() || (!def.empty() && j.name != def)) continue;
    NiReport r = check_normal_invariance(j, NiOptions{trials, seed, 10, Semantics::DP}, &p.core);
    all = all && r.passed;
    json e{{"name", j.name}, {"passed", r.passed}, {"vacuous", r.vacuous}, {"trials", r.trials}};
    e["note"] = r.note;
    e["counterexample"] = r.counterexample;
    out["results"].push_back(e);
  }
  if (!def.empty() && out["results"].empty()) fail(ErrorCode::UsageError, "no function definition named '" + def + "'");
  out["passed"] = all;
  if (cli.json_out) {
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& e : out["results"]) {
      std::cout << (e["passed"].get<bool>() ? "pass " : "FAIL ") << e["name"].get<std::string>() << " (" << e["trials"]
                << " trials" << (e["vacuous"].get<bool>() ? ", vacuous" : "") << ")\n";
      if (!e["passed"].get<bool>()) std::cout << "  " << e["counterexample"].get<std::string>() << "\n";
    }
  }
  return all ? 0 : 1;
}

int cmd_corpus(const std::string& dir, std::uint64_t seed, const Cli& cli) {
  acceptance::Corpus probe = acceptance::load_corpus(dir);
  if (probe.programs.empty()) {
    std::cerr << "warning: no programs found in '" << dir << "'\n";
    if (cli.json_out) std::cout << json{{"corpus", dir}, {"criteria", json::array()}, {"passed", true}}.dump(2) << "\n";
    return 0;
  }
  for (const std::string& e : probe.load_errors) std::cerr << "warning: " << e << "\n";
  acceptance::Options o;
  o.corpus = dir;
  o.seed = seed;
  json out;
  out["corpus"] = dir;
  out["seed"] = seed;
  out["criteria"] = json::array();
  bool all = true;
  acceptance::run_all(o, [&](const acceptance::Result& r) {
    all = all && r.passed;
    out["criteria"].push_back(
        {{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
    if (!cli.json_out) std::printf("%2d  %-4s  %-26s %s\n", r.id, r.passed ? "pass" : "FAIL", r.name.c_str(), r.detail.c_str());
  });
  out["passed"] = all;
  if (cli.json_out) std::cout << out.dump(2) << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ramrec: interpreter and analysis toolkit for ramified structural recursion"};
  app.require_subcommand(1);
  Cli cli;
  app.add_flag("--json", cli.json_out, "Emit JSON on stdout");

  std::string file, expr, dot, sem = "dp", type_text, input, def, dir = "corpus";
  bool meter = false, trace = false, lenient = false, total = false, mutant = false;
  std::uint64_t max_steps = 10'000'000, max_nodes = 0, seed = kDefaultSeed;
  std::size_t trials = 1000;

  auto with_json = [&](CLI::App* c) { c->add_flag("--json", cli.json_out, "Emit JSON on stdout"); };

  auto* check = app.add_subcommand("check", "Typecheck a program and print its judgments");
  check->add_option("file", file, "Program file")->required();
  with_json(check);

  auto* run = app.add_subcommand("run", "Evaluate main (or --expr NAME)");
  run->add_option("file", file, "Program file")->required();
  run->add_option("--expr", expr, "Ground definition to evaluate");
  run->add_option("--semantics", sem, "td or dp")->check(CLI::IsMember({"td", "dp"}));
  run->add_flag("--meter", meter, "Print the cost meter");
  run->add_option("--dump-dot", dot, "Write the result graph in DOT format");
  run->add_option("--max-nodes", max_nodes, "Abort after this many derivation nodes");
  with_json(run);

  auto* cek = app.add_subcommand("cek", "Run main on the CEK machine");
  cek->add_option("file", file, "Program file")->required();
  cek->add_option("--expr", expr, "Ground definition to run");
  cek->add_flag("--trace", trace, "Print one line per machine step");
  cek->add_option("--max-steps", max_steps, "Step budget");
  with_json(cek);

  auto* comp = app.add_subcommand("compress", "Report sizes before and after maximal sharing");
  comp->add_option("file", file, "Program file")->required();
  comp->add_option("--expr", expr, "Ground definition to evaluate");
  comp->add_option("--dump-dot", dot, "Write the compressed graph in DOT format");
  with_json(comp);

  auto* ser = app.add_subcommand("serialize", "Print the vertex list of a value as JSON");
  ser->add_option("file", file, "Program file")->required();
  ser->add_option("--expr", expr, "Ground definition to evaluate");
  with_json(ser);

  auto* des = app.add_subcommand("deserialize", "Rebuild a value from a JSON vertex list");
  des->add_option("--type", type_text, "Target type")->required();
  des->add_option("--program", file, "Program whose datatype names the type strings use");
  des->add_option("--input", input, "JSON file (default: stdin)");
  des->add_flag("--lenient", lenient, "Ignore unreachable items");
  des->add_flag("--total", total, "Return the default value on malformed input");
  with_json(des);

  auto* bounds = app.add_subcommand("bounds", "Synthesize size and cost bounds per definition");
  bounds->add_option("file", file, "Program file")->required();
  with_json(bounds);

  auto* ni = app.add_subcommand("ni-check", "Randomized noninterference check");
  ni->add_option("file", file, "Program file")->required();
  ni->add_option("--def", def, "Only this definition");
  ni->add_option("--trials", trials, "Trials per definition");
  auto* seed_opt = ni->add_option("--seed", seed, "Random seed (default: RAMREC_SEED or built-in)");
  ni->add_flag("--mutant", mutant, "Disable the toNorm side condition");
  with_json(ni);

  auto* corpus = app.add_subcommand("corpus", "Run the acceptance criteria over a corpus directory");
  corpus->add_option("dir", dir, "Corpus directory");
  auto* corpus_seed = corpus->add_option("--seed", seed, "Random seed (default: RAMREC_SEED or built-in)");
  with_json(corpus);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*check) return cmd_check(file, cli);
    if (*run) return cmd_run(file, expr, sem, meter, dot, max_nodes, cli);
    if (*cek) return cmd_cek(file, expr, trace, max_steps, cli);
    if (*comp) return cmd_compress(file, expr, dot, cli);
    if (*ser) return cmd_serialize(file, expr);
    if (*des) return cmd_deserialize(type_text, file, input, lenient, total, cli);
    if (*bounds) return cmd_bounds(file, cli);
    if (*ni) return cmd_ni(file, def, trials, seed_or_env(seed, seed_opt->count() > 0), mutant, cli);
    if (*corpus) return cmd_corpus(dir, seed_or_env(seed, corpus_seed->count() > 0), cli);
  } catch (const Error& e) {
    std::cerr << "error[" << error_code_name(e.code()) << "]";
    if (e.pos().line > 0) std::cerr << " " << (file.empty() ? "<input>" : file) << ":" << e.pos().line << ":" << e.pos().column;
    std::cerr << ": " << e.what() << "\n";
    if (cli.json_out)
      std::cout << json{{"error", {{"code", error_code_name(e.code())}, {"message", e.what()}, {"line", e.pos().line},
                                   {"column", e.pos().column}}}}
                       .dump(2)
                << "\n";
    return is_user_error(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
