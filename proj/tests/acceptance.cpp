// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rr/capability.hpp"
#include "rr/cli.hpp"
#include "rr/dsl.hpp"
#include "rr/interpreter.hpp"
#include "rr/kb.hpp"
#include "rr/redescription.hpp"
#include "rr/tasks.hpp"

using namespace rr;

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

std::string fixture(const std::string& file) { return std::string(RR_FIXTURE_DIR) + "/" + file; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

UnitSet parse_file(const std::string& file) {
  auto r = dsl::parse({slurp(fixture(file)), file});
  if (!r.ok()) throw std::runtime_error(dsl::format(r.errors.front()));
  return r.units;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<TraceEvent> projection(const Trace& t) {
  std::vector<TraceEvent> out;
  for (const auto& e : t) {
    if (e.kind == EventKind::PointedTo || e.kind == EventKind::Said) out.push_back({e.kind, e.arg, 0});
  }
  return out;
}

// Flags recomputed here rather than through check_principles.
struct Flags {
  bool one_to_one = false, stable_order = false, cardinality = false;
};

Flags recount(const Trace& trace, const std::vector<std::string>& targets, std::int64_t answer) {
  const auto numerals = default_numerals();
  Flags f;
  std::multiset<std::string> pointed;
  std::vector<std::string> said;
  for (const auto& e : trace) {
    if (e.kind == EventKind::PointedTo) pointed.insert(e.arg);
    if (e.kind == EventKind::Said) said.push_back(e.arg);
  }
  f.one_to_one = pointed == std::multiset<std::string>(targets.begin(), targets.end());
  if (said.size() >= 2 && said[said.size() - 1] == said[said.size() - 2]) said.pop_back();
  f.stable_order = said.size() <= numerals.size();
  for (std::size_t i = 0; f.stable_order && i < said.size(); ++i) f.stable_order = said[i] == numerals[i];
  f.cardinality = answer == static_cast<std::int64_t>(targets.size());
  return f;
}

// --- 1 -----------------------------------------------------------------------

Check fixture_fidelity() {
  Check c;
  const auto t0 = Clock::now();
  std::istringstream manifest(slurp(fixture("manifest.tsv")));
  std::string line;
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> expected;  // file -> (name, level)
  bool in_units = false;
  while (std::getline(manifest, line)) {
    if (line == "[units]") { in_units = true; continue; }
    if (!line.empty() && line[0] == '[') { in_units = false; continue; }
    if (!in_units || line.empty()) continue;
    std::istringstream row(line);
    std::string file, name, level;
    std::getline(row, file, '\t');
    std::getline(row, name, '\t');
    std::getline(row, level, '\t');
    expected[file].push_back({name, level});
  }
  UnitSet all;
  int units = 0;
  for (const auto& [file, rows] : expected) {
    const std::string text = slurp(fixture(file));
    auto parsed = dsl::parse({text, file});
    if (!parsed.ok()) { c.fail(file + ": " + dsl::format(parsed.errors.front())); continue; }
    if (dsl::print_canonical(parsed.units).text != text) c.fail(file + " does not round-trip");
    for (const auto& [name, level] : rows) {
      auto it = std::find_if(parsed.units.begin(), parsed.units.end(), [&](const ConceptUnit& u) {
        return u.name == name && std::string(to_string(u.level)) == level;
      });
      if (it == parsed.units.end()) c.fail(file + " lacks " + name + "@" + level);
    }
    for (auto& u : parsed.units) {
      if (find_unit(all, u.name) && u.is_globals()) continue;
      all.push_back(u);
      ++units;
    }
  }
  // Same-name units at different levels validate separately.
  for (Level l : kAllLevels) {
    UnitSet level_set;
    for (const auto& u : all) {
      if (u.level == l || (u.is_globals() && l >= Level::E2)) level_set.push_back(u);
    }
    for (const auto& d : validate_set(level_set)) c.fail(format(d));
  }
  const double secs = seconds_since(t0);
  if (secs >= 1.0) c.fail("took " + std::to_string(secs) + " s");
  if (c.ok) c.detail = std::to_string(expected.size()) + " files, " + std::to_string(units) + " units, " + std::to_string(secs) + " s";
  return c;
}

// --- 2 -----------------------------------------------------------------------

Check phase_one(ConceptUnit& e1_out) {
  Check c;
  const auto t0 = Clock::now();
  World w3 = make_counting_world({"Apple", 3, Arrangement::Line, "apples", 0});
  World w4 = make_counting_world({"Apple", 4, Arrangement::Line, "apples", 0});
  ConceptUnit i3 = parse_file("i_counting_apples.rr").front();
  ConceptUnit i4 = synthesize_instance(demonstrate_counting(w4), w4, "apples", "Counting_apples_4");
  E1Result r;
  try {
    r = antiunify_instances({i3, i4});
  } catch (const std::exception& e) {
    c.fail(std::string("P1 threw: ") + e.what());
    return c;
  }
  e1_out = r.unit;
  if (r.unit.level != Level::E1 || !validate(r.unit).empty()) c.fail("(a) result breaks E1 discipline");

  ExecOptions as_apples;
  as_apples.caller_domain = "apples";
  for (auto [inst, world] : {std::pair{&i3, &w3}, std::pair{&i4, &w4}}) {
    ExecOptions self = as_apples;
    self.caller_unit = inst->name;
    try {
      Trace want = execute({*inst}, *inst, kEntranceOp, {}, *world, self).trace;
      Trace got = execute({r.unit}, r.unit, "Counting", {}, *world, as_apples).trace;
      if (projection(want) != projection(got)) c.fail("(b) projection differs for " + inst->name);
    } catch (const std::exception& e) {
      c.fail(std::string("(b) ") + e.what());
    }
  }

  int correct = 0;
  for (int n = 1; n <= 20; ++n) {
    for (unsigned seed : {0u, 1u, 2u}) {
      World w = make_counting_world({"Apple", n, Arrangement::Scattered, "apples", seed});
      try {
        auto res = execute({r.unit}, r.unit, "Counting", {}, w, as_apples);
        Flags f = recount(res.trace, w.containers.at("apples"), res.value.number);
        if (res.value.kind == ValueKind::Int && f.one_to_one && f.stable_order && f.cardinality) ++correct;
      } catch (const std::exception&) {
      }
    }
  }
  if (correct != 60) c.fail("(c) " + std::to_string(correct) + "/60 correct");
  const double secs = seconds_since(t0);
  if (secs >= 5.0) c.fail("took " + std::to_string(secs) + " s");
  if (c.ok) c.detail = "E1 valid, projections equal, 60/60 counts, " + std::to_string(secs) + " s";
  return c;
}

// --- 3 -----------------------------------------------------------------------

Check phases_two_three(const ConceptUnit& e1) {
  Check c;
  try {
    PassResult e2 = generalize_to_e2(e1);
    auto d2 = structural_diff(parse_file("e2_counting.rr"), e2.units);
    if (!d2.empty()) c.fail("E2: " + d2.front());
    PassResult e3 = decompose_to_e3(e2.units);
    auto d3 = structural_diff(parse_file("e3_counting.rr"), e3.units);
    if (!d3.empty()) c.fail("E3: " + d3.front());
    if (c.ok) c.detail = "E2 and E3 structural diffs empty";
  } catch (const std::exception& e) {
    c.fail(e.what());
  }
  return c;
}

// --- 4 -----------------------------------------------------------------------

Check matrix_diff() {
  Check c;
  std::ostringstream out, err;
  int code = cli::run({"--kb", RR_FIXTURE_DIR, "matrix", "--diff"}, out, err);
  if (code != 0) c.fail("exit " + std::to_string(code) + ": " + err.str());
  if (c.ok) c.detail = "matrix --diff exit 0";
  return c;
}

// --- 5 -----------------------------------------------------------------------

Check principles(const UnitSet& kb) {
  Check c;
  const Level levels[] = {Level::E1, Level::E2, Level::E3};
  const char* kinds[] = {"Apple", "Pencil", "Cup", "Block"};
  const Arrangement arrangements[] = {Arrangement::Line, Arrangement::Square, Arrangement::Circle, Arrangement::Scattered};
  std::mt19937 rng(2024);
  int good = 0;
  for (int i = 0; i < 100; ++i) {
    Level level = levels[i % 3];
    std::string kind = level == Level::E1 ? "Apple" : kinds[rng() % 4];
    std::string container = kind == "Apple" ? "apples" : "things";
    int n = 1 + static_cast<int>(rng() % 20);
    unsigned seed = static_cast<unsigned>(rng() % 1000);
    CountingWorld spec{kind, n, arrangements[rng() % 4], container, seed};
    Task t = make_counting_task(TaskId::T3, seed, spec, kind == "Apple" ? "apples" : "things");
    TaskResult r = run_task_detailed(t, kb, level);
    if (!r.outcome.is_solved() || r.run.values.empty()) {
      c.fail(std::string(to_string(level)) + " " + t.description + ": " + r.outcome.reason);
      continue;
    }
    PrincipleReport p = check_principles(r.run.trace, t.world, default_numerals());
    Flags f = recount(r.run.trace, t.world.containers.at(container), r.run.values.back().number);
    if (p.one_to_one && p.stable_order && p.cardinality && f.one_to_one && f.stable_order && f.cardinality) {
      ++good;
    } else {
      c.fail(std::string(to_string(level)) + " " + t.description + " breaks a principle");
    }
  }
  const std::vector<unsigned> seeds{0, 1, 2, 3, 4};
  for (Level l : levels) {
    if (!judge_order_irrelevance(kb, l, seeds)) c.fail(std::string("order irrelevance at ") + std::string(to_string(l)));
  }
  for (Level l : {Level::E2, Level::E3}) {
    for (unsigned s : {0u, 1u, 2u}) {
      if (!judge_object_irrelevance(kb, l, s)) c.fail(std::string("object irrelevance at ") + std::string(to_string(l)));
    }
  }
  if (c.ok) c.detail = std::to_string(good) + "/100 runs, order and object irrelevance hold";
  return c;
}

// --- 6 -----------------------------------------------------------------------

Check conservation(const UnitSet& kb) {
  Check c;
  for (unsigned seed : {0u, 1u, 2u}) {
    TaskResult r = run_task_detailed(build_task(TaskId::T8, seed), kb, Level::E3);
    if (!r.outcome.is_solved()) { c.fail("E3 seed " + std::to_string(seed) + ": " + r.outcome.reason); continue; }
    if (r.run.step_starts.size() < 2) { c.fail("no mutation step"); continue; }
    auto after = std::count_if(r.run.trace.begin() + static_cast<std::ptrdiff_t>(r.run.step_starts[1]), r.run.trace.end(),
                               [](const TraceEvent& e) { return e.kind == EventKind::PointedTo; });
    if (after != 0) c.fail("E3 seed " + std::to_string(seed) + " recounted");
  }
  Outcome e2 = run_task(build_task(TaskId::T8, 0), kb, Level::E2);
  if (e2.is_solved()) c.fail("T8 solved at E2");
  if (c.ok) c.detail = "E3 solved without recount for seeds 0-2; E2 " + std::string(to_string(e2.kind));
  return c;
}

// --- 7 -----------------------------------------------------------------------

struct Member {
  const ConceptUnit* unit;
  std::string name;
  bool is_operation;
};

Check visibility(const UnitSet& all) {
  Check c;
  std::vector<Member> members;
  for (const auto& u : all) {
    if (u.is_globals()) continue;
    for (const auto& a : u.attributes) members.push_back({&u, a.name, false});
    for (const auto& op : u.operations) {
      if (op.params.empty()) members.push_back({&u, op.name, true});
    }
  }
  std::mt19937 rng(77);
  World world = make_counting_world({"Apple", 3, Arrangement::Line, "apples", 0});
  int denied = 0, allowed = 0;
  for (int i = 0; i < 50; ++i) {
    const Member& m = members[rng() % members.size()];
    const bool cross = rng() % 4 != 0;
    const std::string domain = cross ? "probe" : m.unit->domain;
    const Visibility v = member_visibility(*m.unit, m.name);
    const std::string access = m.unit->name + (m.is_operation ? "." + m.name + "()" : "." + m.name);
    std::string text = "@level(E2)\n@domain(" + domain + ")\nclass Probe {\npublic:\n    int x;\n    void Go() {\n        ";
    text += (m.is_operation ? access : "x = " + access) + ";\n    }\n}\n";
    auto parsed = dsl::parse({text, "probe"});
    if (!parsed.ok()) { c.fail("probe does not parse: " + dsl::format(parsed.errors.front())); continue; }
    const ConceptUnit& probe = parsed.units.front();
    UnitSet kb;
    for (const auto& u : all) {
      if (u.level == m.unit->level || u.is_globals()) kb.push_back(u);
    }
    kb.push_back(probe);
    ExecOptions o;
    o.caller_domain = domain;
    o.step_limit = 2000;
    bool violation = false;
    try {
      execute(kb, probe, "Go", {}, world, o);
    } catch (const ExecError& e) {
      violation = e.kind() == ExecErrorKind::AccessViolation;
    }
    const bool expect_denied = v == Visibility::Private || (v == Visibility::Protected && cross);
    if (cross && v != Visibility::Public) ++denied;
    if (v == Visibility::Public) ++allowed;
    if (violation != expect_denied) {
      c.fail(access + " (" + std::string(to_string(v)) + ") from " + domain + (violation ? " raised" : " did not raise"));
    }
  }
  if (denied == 0 || allowed == 0) c.fail("suite lacks denied or public cases");
  if (c.ok) c.detail = "50 cases, " + std::to_string(denied) + " cross-domain denials, " + std::to_string(allowed) + " public calls";
  return c;
}

// --- 8 -----------------------------------------------------------------------

Check retention() {
  Check c;
  KnowledgeBase kb;
  kb.add(parse_file("i_counting_apples.rr").front());
  std::vector<std::pair<std::string, World>> episodes{
      {"CountingApples", make_counting_world({"Apple", 3, Arrangement::Line, "apples", 0})}};
  for (int n : {4, 5}) {
    World w = make_counting_world({"Apple", n, Arrangement::Line, "apples", 0});
    episodes.push_back({record_instance(kb, demonstrate_counting(w), w, "apples").name, w});
  }
  auto previous = kb.unit_counts();
  for (int round = 0; round < 8; ++round) {
    practice(kb, kDefaultSeeds);
    auto reports = advance(kb, kDefaultThreshold);
    auto counts = kb.unit_counts();
    for (Level l : kAllLevels) {
      if (counts[l] < previous[l]) c.fail(std::string(to_string(l)) + " count dropped");
    }
    previous = counts;
    if (reports.empty()) break;
  }
  for (Level l : kAllLevels) {
    if (previous[l] == 0) c.fail(std::string("no ") + std::string(to_string(l)) + " units after all phases");
  }
  for (const auto& [name, world] : episodes) {
    const ConceptUnit* u = kb.find(name, Level::I);
    if (!u) { c.fail(name + " lost"); continue; }
    ExecOptions self;
    self.caller_domain = u->domain;
    self.caller_unit = u->name;
    try {
      Trace t = execute(kb.units(), *u, kEntranceOp, {}, world, self).trace;
      if (t != demonstrate_counting(world)) c.fail(name + " replays differently");
    } catch (const std::exception& e) {
      c.fail(name + ": " + e.what());
    }
  }
  std::vector<double> publicness;
  std::ostringstream shape;
  for (Level l : kAllLevels) {
    UnitSet at;
    for (const auto& u : kb.units()) {
      if (u.level == l && !u.is_globals()) at.push_back(u);
    }
    publicness.push_back(level_metrics(at).publicness());
    shape << (l == Level::I ? "" : " ") << to_string(l) << "=" << publicness.back();
  }
  for (std::size_t i = 1; i < publicness.size(); ++i) {
    if (publicness[i] < publicness[i - 1]) c.fail("publicness falls: " + shape.str());
  }
  if (publicness.back() <= publicness.front()) c.fail("no shift toward Public: " + shape.str());
  if (c.ok) c.detail = "counts non-decreasing, 3 instances replay, publicness " + shape.str();
  return c;
}

// --- 9 -----------------------------------------------------------------------

std::string run_process(const std::string& command) {
  std::string out;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(command.c_str(), "r"), pclose);
  if (!pipe) return out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), n);
  return out;
}

std::string harness_run(const std::string& trace_dir) {
  const std::string rr = std::string(RR_CLI_PATH) + " --kb " + RR_FIXTURE_DIR + " --format tsv ";
  std::string all = run_process(rr + "matrix");
  for (TaskId t : kAllTasks) {
    for (Level l : kAllLevels) {
      for (unsigned seed : {0u, 1u}) {
        const std::string task = to_string(t), level(to_string(l)), s = std::to_string(seed);
        std::string row = run_process(rr + "run --task " + task + " --level " + level + " --seed " + s + " --trace-dir " +
                                      trace_dir);
        all += row.substr(0, row.rfind('\t'));  // trace path differs between runs
        all += "\n" + slurp(trace_dir + "/" + task + "_" + level + "_" + s + ".tsv");
      }
    }
  }
  return all;
}

Check determinism() {
  Check c;
  const std::string base = "acceptance_traces";
  std::string a = harness_run(base + "_a");
  std::string b = harness_run(base + "_b");
  if (a.empty()) c.fail("harness produced no output");
  if (a != b) c.fail("runs differ");
  std::filesystem::remove_all(base + "_a");
  std::filesystem::remove_all(base + "_b");
  if (c.ok) c.detail = std::to_string(a.size()) + " bytes identical across two runs";
  return c;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int n, const char* name, const Check& c) {
    std::cout << (c.ok ? "PASS" : "FAIL") << " " << n << " " << name << ": " << c.detail << std::endl;
    if (!c.ok) ++failures;
  };
  auto guarded = [](auto&& fn) {
    try {
      return fn();
    } catch (const std::exception& e) {
      Check c;
      c.fail(std::string("exception: ") + e.what());
      return c;
    }
  };

  UnitSet kb;
  try {
    kb = load(RR_FIXTURE_DIR).units();
  } catch (const std::exception& e) {
    std::cerr << "cannot load fixtures: " << e.what() << "\n";
  }
  ConceptUnit e1;
  report(1, "fixture-fidelity", guarded(fixture_fidelity));
  report(2, "phase1-reproduction", guarded([&] { return phase_one(e1); }));
  report(3, "p2-p3-structure", guarded([&] { return phases_two_three(e1); }));
  report(4, "capability-matrix", guarded(matrix_diff));
  report(5, "counting-principles", guarded([&] { return principles(kb); }));
  report(6, "conservation", guarded([&] { return conservation(kb); }));
  report(7, "visibility", guarded([&] { return visibility(kb); }));
  report(8, "retention-monotonicity", guarded(retention));
  report(9, "determinism", guarded(determinism));
  return failures == 0 ? 0 : 1;
}
