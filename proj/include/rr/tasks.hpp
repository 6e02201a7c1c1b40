#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rr/interpreter.hpp"
#include "rr/ir.hpp"

namespace rr {

enum class TaskId { T1 = 1, T2, T3, T4, T5, T6, T7, T8, T9 };

inline constexpr TaskId kAllTasks[] = {TaskId::T1, TaskId::T2, TaskId::T3, TaskId::T4, TaskId::T5,
                                       TaskId::T6, TaskId::T7, TaskId::T8, TaskId::T9};

std::string to_string(TaskId id);

class UnknownTaskId : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

TaskId parse_task_id(std::string_view text);  // throws UnknownTaskId

enum class OutcomeKind { Solved, Failed, Inaccessible };

struct Outcome {
  OutcomeKind kind = OutcomeKind::Failed;
  std::string reason;  // empty when Solved

  static Outcome solved() { return {OutcomeKind::Solved, {}}; }
  static Outcome failed(std::string why) { return {OutcomeKind::Failed, std::move(why)}; }
  static Outcome inaccessible(std::string why) { return {OutcomeKind::Inaccessible, std::move(why)}; }
  bool is_solved() const { return kind == OutcomeKind::Solved; }
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

std::string_view to_string(OutcomeKind kind);
std::optional<OutcomeKind> parse_outcome_kind(std::string_view text);

// Query argument: a world container (passed as a list) or an integer.
using TaskArg = std::variant<std::string, std::int64_t>;

struct TaskStep {
  std::string concept_name;
  std::string op;
  std::vector<TaskArg> args;
  std::function<void(World&)> before;  // world change applied before the query
  std::string before_label;
};

struct TaskRun {
  World world_before;
  Trace trace;                        // all steps, renumbered consecutively
  std::vector<std::size_t> step_starts;  // index of each step's first event
  std::vector<Value> values;
  World world_after;
};

struct Verdict {
  bool solved = false;
  std::string reason;
};

struct Task {
  TaskId id = TaskId::T1;
  unsigned seed = 0;
  std::string description;
  World world;
  std::string caller_domain;
  std::vector<TaskStep> steps;
  std::function<Verdict(const TaskRun&)> success;
};

struct TaskOptions {
  std::optional<int> size;  // overrides the seeded cardinality where a task has one
  int heap_a = 7;
  int heap_b = 8;
};

Task build_task(TaskId id, unsigned seed, const TaskOptions& options = {});

struct RunOptions {
  int step_limit = kDefaultStepLimit;
  std::vector<std::string> numerals = default_numerals();
};

struct TaskResult {
  Outcome outcome;
  std::string solver;  // unit that answered the last executed step
  TaskRun run;  // events up to the point of failure
};

// Runs `task` against the units of `level` in `kb` (plus Globals from E2 up).
TaskResult run_task_detailed(const Task& task, const UnitSet& kb, Level level, const RunOptions& options = {});
Outcome run_task(const Task& task, const UnitSet& kb, Level level, const RunOptions& options = {});

// Units visible to a run at `level`.
UnitSet units_at(const UnitSet& kb, Level level);

// --- counting worlds ---------------------------------------------------------

struct CountingWorld {
  std::string kind = "Apple";  // entity kind; ids are the uppercased kind plus an ordinal
  int count = 3;
  Arrangement arrangement = Arrangement::Line;
  std::string container = "apples";
  std::uint64_t rng_seed = 0;
};

// ME in ROOM1, TABLE1 in ROOM1, the objects on TABLE1 in one container.
World make_counting_world(const CountingWorld& spec);

// Counting query on the focus container; solved when the answer is the
// container's size and pointing and numerals follow the principles.
Task make_counting_task(TaskId id, unsigned seed, const CountingWorld& spec, std::string caller_domain);

// --- counting principles -----------------------------------------------------

struct PrincipleReport {
  bool one_to_one = false;
  bool stable_order = false;
  bool object_irrelevance = false;  // cross-task; see judge_object_irrelevance
  bool order_irrelevance = false;   // cross-trace; see judge_order_irrelevance
  bool cardinality = false;
};

// Per-trace flags against the world's focus container. The two cross-trace
// flags are left false.
PrincipleReport check_principles(const Trace& trace, const World& world, const std::vector<std::string>& numerals);

// Position of `token` in `numerals`, 1-based; 0 when absent.
int numeral_value(const std::string& token, const std::vector<std::string>& numerals);

// The same world counted under each selection seed: every run solved and at
// least two distinct pointing orders seen.
bool judge_order_irrelevance(const UnitSet& kb, Level level, const std::vector<unsigned>& seeds, int count = 6);

// T3 and T4 both solved for `seed`.
bool judge_object_irrelevance(const UnitSet& kb, Level level, unsigned seed);

// A teacher's counting of the focus container, in container order:
// Move(HAND), PointTo, Say per object, then the last numeral again.
Trace demonstrate_counting(const World& world, const std::vector<std::string>& numerals = default_numerals());

// Stable identity of a world, for counting distinct practice worlds.
std::string world_fingerprint(const World& world);

}  // namespace rr
