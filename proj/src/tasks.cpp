#include "rr/tasks.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace rr {

std::string to_string(TaskId id) { return "T" + std::to_string(static_cast<int>(id)); }

TaskId parse_task_id(std::string_view text) {
  for (TaskId id : kAllTasks) {
    if (to_string(id) == text) return id;
  }
  throw UnknownTaskId("unknown task id '" + std::string(text) + "'");
}

std::string_view to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::Solved: return "Solved";
    case OutcomeKind::Failed: return "Failed";
    case OutcomeKind::Inaccessible: return "Inaccessible";
  }
  return "?";
}

std::optional<OutcomeKind> parse_outcome_kind(std::string_view text) {
  for (auto k : {OutcomeKind::Solved, OutcomeKind::Failed, OutcomeKind::Inaccessible}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

int numeral_value(const std::string& token, const std::vector<std::string>& numerals) {
  auto it = std::find(numerals.begin(), numerals.end(), token);
  return it == numerals.end() ? 0 : static_cast<int>(it - numerals.begin()) + 1;
}

namespace {

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

constexpr Arrangement kArrangements[] = {Arrangement::Line, Arrangement::Square, Arrangement::Circle,
                                         Arrangement::Scattered};

struct TaskRng {
  Rng rng;
  TaskRng(TaskId id, unsigned seed) : rng(static_cast<std::uint64_t>(seed) * 1000003u + static_cast<std::uint64_t>(id)) {}
  int between(int lo, int hi) { return lo + static_cast<int>(rng.pick(static_cast<std::size_t>(hi - lo + 1))); }
  Arrangement arrangement() { return kArrangements[rng.pick(4)]; }
};

std::vector<std::string> said_tokens(const Trace& trace, std::size_t from = 0, std::size_t to = SIZE_MAX) {
  std::vector<std::string> out;
  for (std::size_t i = from; i < std::min(to, trace.size()); ++i) {
    if (trace[i].kind == EventKind::Said) out.push_back(trace[i].arg);
  }
  return out;
}

std::size_t count_events(const Trace& trace, EventKind kind, std::size_t from = 0, std::size_t to = SIZE_MAX) {
  std::size_t n = 0;
  for (std::size_t i = from; i < std::min(to, trace.size()); ++i) n += trace[i].kind == kind;
  return n;
}

std::size_t step_end(const TaskRun& run, std::size_t step) {
  return step + 1 < run.step_starts.size() ? run.step_starts[step + 1] : run.trace.size();
}

Verdict counting_verdict(const TaskRun& run, std::size_t step, const World& before) {
  if (run.values.size() <= step) return {false, "no answer"};
  const auto numerals = default_numerals();
  Trace events(run.trace.begin() + static_cast<std::ptrdiff_t>(run.step_starts[step]),
               run.trace.begin() + static_cast<std::ptrdiff_t>(step_end(run, step)));
  const auto& items = before.containers.at(before.focus);
  const Value& v = run.values[step];
  std::int64_t answer = 0;
  if (v.kind == ValueKind::Int) {
    answer = v.number;
  } else {
    auto said = said_tokens(events);
    answer = said.empty() ? 0 : numeral_value(said.back(), numerals);
  }
  if (answer != static_cast<std::int64_t>(items.size())) {
    return {false, "answered " + std::to_string(answer) + " for " + std::to_string(items.size()) + " objects"};
  }
  PrincipleReport p = check_principles(events, before, numerals);
  if (!p.one_to_one) return {false, "objects not pointed to exactly once"};
  if (!p.stable_order) return {false, "numerals out of the stable order"};
  return {true, {}};
}

}  // namespace

World make_counting_world(const CountingWorld& spec) {
  World w;
  w.entities["ROOM1"] = {"Room", ""};
  w.entities["TABLE1"] = {"Table", "ROOM1"};
  w.entities["ME"] = {"Person", "ROOM1"};
  w.arrangements["TABLE1"] = spec.arrangement;
  auto& items = w.containers[spec.container];
  for (int i = 1; i <= spec.count; ++i) {
    std::string id = upper(spec.kind) + std::to_string(i);
    w.entities[id] = {spec.kind, "TABLE1"};
    items.push_back(id);
  }
  w.focus = spec.container;
  w.rng_seed = spec.rng_seed;
  return w;
}

Task make_counting_task(TaskId id, unsigned seed, const CountingWorld& spec, std::string caller_domain) {
  Task t;
  t.id = id;
  t.seed = seed;
  t.world = make_counting_world(spec);
  t.caller_domain = std::move(caller_domain);
  t.description = "count " + std::to_string(spec.count) + " " + spec.kind + " (" + std::string(to_string(spec.arrangement)) + ")";
  t.steps.push_back({"Counting", "Counting", {}, {}, {}});
  t.success = [](const TaskRun& run) { return counting_verdict(run, 0, run.world_before); };
  return t;
}

namespace {

Task fetch_task(TaskId id, unsigned seed, const std::string& kind, const std::string& container, int n,
                std::vector<int> ks, std::string caller) {
  Task t;
  t.id = id;
  t.seed = seed;
  t.world = make_counting_world({kind, n, Arrangement::Scattered, container, seed});
  t.caller_domain = std::move(caller);
  t.description = "fetch";
  for (int k : ks) {
    t.description += " " + std::to_string(k);
    t.steps.push_back({"Counting", "FetchObjects", {container, static_cast<std::int64_t>(k)}, {}, {}});
  }
  t.description += " of " + std::to_string(n) + " " + kind;
  t.success = [ks, container](const TaskRun& run) -> Verdict {
    const auto& pool = run.world_before.containers.at(container);
    for (std::size_t s = 0; s < ks.size(); ++s) {
      if (s >= run.values.size()) return {false, "no answer"};
      const std::size_t from = run.step_starts[s], to = step_end(run, s);
      auto said = said_tokens(run.trace, from, to);
      if (std::find(said.begin(), said.end(), "Error") != said.end()) {
        return {false, "said Error: fewer than " + std::to_string(ks[s]) + " objects"};
      }
      std::set<std::string> taken;
      for (std::size_t i = from; i < to; ++i) {
        const auto& e = run.trace[i];
        if (e.kind != EventKind::TookAway) continue;
        if (std::find(pool.begin(), pool.end(), e.arg) == pool.end()) return {false, "took away " + e.arg};
        taken.insert(e.arg);
      }
      if (static_cast<int>(taken.size()) != ks[s] || count_events(run.trace, EventKind::TookAway, from, to) != taken.size()) {
        return {false, "took away " + std::to_string(taken.size()) + " objects, wanted " + std::to_string(ks[s])};
      }
      const Value& v = run.values[s];
      if (v.kind != ValueKind::Int || v.number != ks[s]) return {false, "answered " + v.describe()};
    }
    return {true, {}};
  };
  return t;
}

}  // namespace

Task build_task(TaskId id, unsigned seed, const TaskOptions& options) {
  TaskRng r(id, seed);
  auto sized = [&](int lo, int hi) { return options.size ? *options.size : r.between(lo, hi); };
  switch (id) {
    case TaskId::T1: {
      Task t = make_counting_task(id, seed, {"Apple", 3, Arrangement::Line, "apples", 0}, "apples");
      t.description = "the memorized row of three apples";
      return t;
    }
    case TaskId::T2:
      return make_counting_task(id, seed, {"Apple", 3, Arrangement::Scattered, "apples", seed}, "apples");
    case TaskId::T3: {
      int n = options.size ? *options.size : r.between(1, 19);
      if (!options.size && n >= 3) ++n;  // any cardinality but the memorized one
      return make_counting_task(id, seed, {"Apple", n, r.arrangement(), "apples", seed}, "apples");
    }
    case TaskId::T4: {
      const bool cups = seed % 2 == 1;
      int n = sized(1, 20);
      return make_counting_task(id, seed, {cups ? "Cup" : "Pencil", n, r.arrangement(), cups ? "cups" : "pencils", seed},
                                cups ? "cups" : "pencils");
    }
    case TaskId::T5:
      return fetch_task(id, seed, "Banana", "bananas", sized(5, 20), {5}, "shopping");
    case TaskId::T6:
      return fetch_task(id, seed, "Block", "blocks", sized(12, 20), {5, 7}, "comparison");
    case TaskId::T7: {
      Task t;
      t.id = id;
      t.seed = seed;
      t.caller_domain = "transport";
      const int n = options.size ? *options.size : 10;
      World& w = t.world;
      w.entities["ME"] = {"Person", ""};
      w.entities["CAR1"] = {"Car", ""};
      w.entities["STOP1"] = {"Place", ""};
      w.arrangements["CAR1"] = Arrangement::Line;
      w.arrangements["STOP1"] = Arrangement::Scattered;
      for (int i = 1; i <= n; ++i) {
        w.entities["SEAT" + std::to_string(i)] = {"Seat", "CAR1"};
        w.containers["Seats_of_Car"].push_back("SEAT" + std::to_string(i));
        w.entities["CHILD" + std::to_string(i)] = {"Child", "STOP1"};
        w.containers["Passengers"].push_back("CHILD" + std::to_string(i));
      }
      w.cardinal_sums["Seats_of_Car"] = n;
      w.focus = "Passengers";
      w.rng_seed = seed;
      t.description = "how many children can sit on a bus with " + std::to_string(n) + " seats";
      t.steps.push_back({"Counting", "OneToOneMap", {std::string("Seats_of_Car"), std::string("Passengers")}, {}, {}});
      t.success = [n](const TaskRun& run) -> Verdict {
        auto it = run.world_after.cardinal_sums.find("Passengers");
        if (it == run.world_after.cardinal_sums.end()) return {false, "passenger count unknown"};
        if (it->second != n) return {false, "passenger count " + std::to_string(it->second)};
        return {true, {}};
      };
      return t;
    }
    case TaskId::T8: {
      const int n = options.size ? *options.size : 16;
      Task t = make_counting_task(id, seed, {"Apple", n, Arrangement::Square, "apples", seed}, "apples");
      t.description = "conservation of " + std::to_string(n) + " apples from SQUARE to CIRCLE";
      t.steps.push_back({"Counting", "Counting", {}, [](World& w) { w.arrangements["TABLE1"] = Arrangement::Circle; },
                         "arrange in a CIRCLE"});
      t.success = [n](const TaskRun& run) -> Verdict {
        Verdict first = counting_verdict(run, 0, run.world_before);
        if (!first.solved) return first;
        if (run.values.size() < 2) return {false, "no second answer"};
        const Value& v = run.values[1];
        if (v.kind != ValueKind::Int || v.number != n) return {false, "after rearranging answered " + v.describe()};
        std::size_t pointed = count_events(run.trace, EventKind::PointedTo, run.step_starts[1]);
        if (pointed) return {false, "recounted after rearranging: " + std::to_string(pointed) + " PointedTo events"};
        return {true, {}};
      };
      return t;
    }
    case TaskId::T9: {
      Task t;
      t.id = id;
      t.seed = seed;
      t.caller_domain = "candy";
      int a = options.heap_a, b = options.heap_b;
      if (seed % 2 == 1) std::swap(a, b);
      World& w = t.world;
      w.entities["ME"] = {"Person", ""};
      w.entities["HEAP_A"] = {"Heap", ""};
      w.entities["HEAP_B"] = {"Heap", ""};
      w.arrangements["HEAP_A"] = Arrangement::Scattered;
      w.arrangements["HEAP_B"] = Arrangement::Scattered;
      for (int i = 1; i <= a; ++i) {
        w.entities["CANDY_A" + std::to_string(i)] = {"Candy", "HEAP_A"};
        w.containers["heap_a"].push_back("CANDY_A" + std::to_string(i));
      }
      for (int i = 1; i <= b; ++i) {
        w.entities["CANDY_B" + std::to_string(i)] = {"Candy", "HEAP_B"};
        w.containers["heap_b"].push_back("CANDY_B" + std::to_string(i));
      }
      w.focus = "heap_a";
      w.rng_seed = seed;
      t.description = "which heap has more candy: " + std::to_string(a) + " or " + std::to_string(b);
      t.steps.push_back({"Counting", "OneToOneMap", {std::string("heap_a"), std::string("heap_b")}, {}, {}});
      t.success = [a, b](const TaskRun& run) -> Verdict {
        const std::int64_t expected = a > b ? 1 : (a < b ? -1 : 0);
        if (run.values.empty() || run.values[0].kind != ValueKind::Int) return {false, "no comparison"};
        if (run.values[0].number != expected) return {false, "judged " + std::to_string(run.values[0].number)};
        std::size_t said = count_events(run.trace, EventKind::Said);
        if (said >= static_cast<std::size_t>(std::min(a, b))) return {false, "counted the heaps"};
        return {true, {}};
      };
      return t;
    }
  }
  throw UnknownTaskId("unknown task id");
}

UnitSet units_at(const UnitSet& kb, Level level) {
  UnitSet out;
  for (const auto& u : kb) {
    if (u.is_globals() ? level >= Level::E2 : u.level == level) out.push_back(u);
  }
  return out;
}

TaskResult run_task_detailed(const Task& task, const UnitSet& kb, Level level, const RunOptions& options) {
  const UnitSet units = units_at(kb, level);
  TaskResult result;
  TaskRun& run = result.run;
  run.world_before = task.world;
  World world = task.world;
  auto finish = [&](Outcome o) {
    run.world_after = world;
    result.outcome = std::move(o);
    return result;
  };

  for (const auto& step : task.steps) {
    if (step.before) step.before(world);
    run.step_starts.push_back(run.trace.size());

    std::vector<const ConceptUnit*> candidates;
    for (const auto& u : units) {
      if (u.name == step.concept_name) candidates.push_back(&u);
    }
    if (candidates.empty()) {
      for (const auto& u : units) {
        if (!u.is_globals() && u.name.rfind(step.concept_name, 0) == 0) candidates.push_back(&u);
      }
    }
    if (candidates.empty()) {
      return finish(Outcome::inaccessible("no " + step.concept_name + " at level " + std::string(to_string(level))));
    }

    std::vector<Value> args;
    for (const auto& a : step.args) {
      if (const auto* n = std::get_if<std::int64_t>(&a)) {
        args.push_back(Value::integer(*n));
      } else {
        const auto& name = std::get<std::string>(a);
        if (!world.containers.count(name)) return finish(Outcome::failed("no container " + name));
        args.push_back(container_value(world, name));
      }
    }

    std::optional<ExecResult> done;
    std::optional<ExecError> error;
    for (const auto* unit : candidates) {
      ExecOptions exec;
      exec.caller_domain = task.caller_domain;
      exec.step_limit = options.step_limit;
      exec.numerals = options.numerals;
      std::string op = step.op;
      if (unit->kind == UnitKind::Instance && op == step.concept_name) {
        // A recorded instance can only replay itself.
        op = std::string(kEntranceOp);
        exec.caller_unit = unit->name;
      }
      result.solver = unit->name;
      try {
        done = execute(units, *unit, op, args, world, exec);
        break;
      } catch (const ExecError& e) {
        if (!error || error->kind() == ExecErrorKind::SetupMismatch) error = e;
        if (e.kind() != ExecErrorKind::SetupMismatch) break;
      }
    }
    if (!done) {
      const bool hidden = error->kind() == ExecErrorKind::AccessViolation || error->kind() == ExecErrorKind::MissingOperation;
      return finish(hidden ? Outcome::inaccessible(error->what()) : Outcome::failed(error->what()));
    }
    for (auto e : done->trace) {
      e.seq = static_cast<int>(run.trace.size());
      run.trace.push_back(std::move(e));
    }
    run.values.push_back(done->value);
    world = std::move(done->world);
  }
  run.world_after = world;
  Verdict v = task.success(run);
  result.outcome = v.solved ? Outcome::solved() : Outcome::failed(v.reason);
  return result;
}

Outcome run_task(const Task& task, const UnitSet& kb, Level level, const RunOptions& options) {
  return run_task_detailed(task, kb, level, options).outcome;
}

PrincipleReport check_principles(const Trace& trace, const World& world, const std::vector<std::string>& numerals) {
  PrincipleReport r;
  std::vector<std::string> targets;
  if (auto it = world.containers.find(world.focus); it != world.containers.end()) targets = it->second;

  std::map<std::string, int> hits;
  std::vector<std::string> said;
  for (const auto& e : trace) {
    if (e.kind == EventKind::PointedTo) ++hits[e.arg];
    if (e.kind == EventKind::Said) said.push_back(e.arg);
  }
  r.one_to_one = hits.size() == targets.size() &&
                 std::all_of(targets.begin(), targets.end(), [&](const std::string& t) {
                   auto it = hits.find(t);
                   return it != hits.end() && it->second == 1;
                 });

  std::vector<std::string> sequence = said;
  if (sequence.size() >= 2 && sequence.back() == sequence[sequence.size() - 2]) sequence.pop_back();
  r.stable_order = sequence.size() <= numerals.size() && std::equal(sequence.begin(), sequence.end(), numerals.begin());

  const int last = said.empty() ? 0 : numeral_value(said.back(), numerals);
  r.cardinality = said.empty() ? targets.empty() : last == static_cast<int>(targets.size());
  return r;
}

bool judge_order_irrelevance(const UnitSet& kb, Level level, const std::vector<unsigned>& seeds, int count) {
  std::set<std::vector<std::string>> orders;
  for (unsigned seed : seeds) {
    Task t = make_counting_task(TaskId::T3, seed, {"Apple", count, Arrangement::Scattered, "apples", seed}, "apples");
    TaskResult r = run_task_detailed(t, kb, level);
    if (!r.outcome.is_solved()) return false;
    std::vector<std::string> order;
    for (const auto& e : r.run.trace) {
      if (e.kind == EventKind::PointedTo) order.push_back(e.arg);
    }
    orders.insert(order);
  }
  return count < 2 || seeds.size() < 2 || orders.size() >= 2;
}

bool judge_object_irrelevance(const UnitSet& kb, Level level, unsigned seed) {
  return run_task(build_task(TaskId::T3, seed), kb, level).is_solved() &&
         run_task(build_task(TaskId::T4, seed), kb, level).is_solved();
}

Trace demonstrate_counting(const World& world, const std::vector<std::string>& numerals) {
  Trace trace;
  auto it = world.containers.find(world.focus);
  if (it == world.containers.end() || it->second.empty()) return trace;
  auto emit = [&](EventKind kind, const std::string& arg) { trace.push_back({kind, arg, static_cast<int>(trace.size())}); };
  const auto& items = it->second;
  for (std::size_t i = 0; i < items.size() && i < numerals.size(); ++i) {
    emit(EventKind::Moved, "HAND");
    emit(EventKind::PointedTo, items[i]);
    emit(EventKind::Said, numerals[i]);
  }
  emit(EventKind::Said, trace.back().arg);
  return trace;
}

std::string world_fingerprint(const World& world) {
  std::string text;
  for (const auto& [id, e] : world.entities) text += "e " + id + " " + e.kind + " " + e.group + "\n";
  for (const auto& [g, a] : world.arrangements) text += "a " + g + " " + std::string(to_string(a)) + "\n";
  for (const auto& [name, ids] : world.containers) {
    text += "c " + name;
    for (const auto& id : ids) text += " " + id;
    text += "\n";
  }
  for (const auto& [name, n] : world.cardinal_sums) text += "s " + name + " " + std::to_string(n) + "\n";
  text += "f " + world.focus + "\nr " + std::to_string(world.rng_seed) + "\n";
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = hex[h & 0xf];
  return out;
}

}  // namespace rr
