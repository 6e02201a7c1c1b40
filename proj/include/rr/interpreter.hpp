#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rr/ir.hpp"

namespace rr {

enum class Arrangement { Line, Square, Circle, Scattered };

std::string_view to_string(Arrangement arrangement);
std::optional<Arrangement> parse_arrangement(std::string_view text);

struct Entity {
  std::string kind;
  std::string group;  // where the entity is (a room, a table, a heap); empty when nowhere
  friend bool operator==(const Entity&, const Entity&) = default;
};

// Simulated environment. Containers hold ordered entity ids; `cardinal_sums`
// records the known cardinal sum of a container, which survives
// rearrangement and is forgotten when an entity leaves the container.
struct World {
  std::map<std::string, Entity> entities;
  std::map<std::string, Arrangement> arrangements;
  std::map<std::string, std::vector<std::string>> containers;
  std::map<std::string, std::int64_t> cardinal_sums;
  std::string focus;  // container that unqualified set attributes bind to
  std::uint64_t rng_seed = 0;

  // Broken invariants, empty when the world is consistent.
  std::vector<std::string> check() const;
  friend bool operator==(const World&, const World&) = default;
};

enum class ValueKind { Nothing, Int, Bool, Token, List, UnitRef };

struct Value {
  ValueKind kind = ValueKind::Nothing;
  std::int64_t number = 0;
  std::string text;                     // Token, UnitRef
  std::vector<std::string> items;       // List
  std::optional<std::size_t> cursor;    // List: position of the last First()/Next()
  std::string origin;                   // List: world container it was bound from
  std::optional<std::int64_t> cardinal; // List: known cardinal sum

  static Value nothing() { return {}; }
  static Value integer(std::int64_t n);
  static Value boolean(bool b);
  static Value token(std::string t);
  static Value list(std::vector<std::string> items, std::string origin = {});
  static Value unit(std::string name);

  bool truthy() const;
  std::string describe() const;
  friend bool operator==(const Value&, const Value&) = default;
};

// A world container as a list value, carrying any known cardinal sum.
Value container_value(const World& world, const std::string& container);

enum class EventKind { PointedTo, Said, Moved, TookAway };

std::string_view to_string(EventKind kind);

struct TraceEvent {
  EventKind kind = EventKind::Said;
  std::string arg;
  int seq = 0;
  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

using Trace = std::vector<TraceEvent>;

// `seq<TAB>verb<TAB>arg` per line.
std::string dump_trace(const Trace& trace);

enum class ExecErrorKind {
  AccessViolation,
  UnboundName,
  TypeMismatch,
  SetupMismatch,
  StepLimitExceeded,
  EmptyCollection,
  MissingOperation,
};

std::string_view to_string(ExecErrorKind kind);

class ExecError : public std::runtime_error {
 public:
  ExecError(ExecErrorKind kind, const std::string& message);
  ExecErrorKind kind() const { return kind_; }

 private:
  ExecErrorKind kind_;
};

struct ExecResult {
  Trace trace;
  Value value;
  int steps = 0;
  World world;  // world after execution; the input world is left untouched
};

std::vector<std::string> default_numerals();  // ONE .. TWENTY

inline constexpr int kDefaultStepLimit = 10000;

struct ExecOptions {
  std::string caller_domain;
  std::string caller_unit;  // empty for an external caller
  int step_limit = kDefaultStepLimit;
  std::vector<std::string> numerals = default_numerals();
};

ExecResult execute(const UnitSet& kb, const ConceptUnit& target, std::string_view op, const std::vector<Value>& args,
                   const World& world, const ExecOptions& options);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

 private:
  std::mt19937_64 engine_;
};

struct PrimitiveResult {
  std::optional<TraceEvent> event;  // seq left at 0; the caller numbers events
  Value value;
};

// Applies one primitive. `subject` is the receiver: the acting agent for
// Move/PointTo/Say/TakeAway, the collection for the others (mutated in place).
PrimitiveResult eval_primitive(Verb verb, Value& subject, const std::optional<Value>& arg, World& world, Rng& rng);

// Evaluates a level-I setup predicate (In/On/InLine) against the world.
bool setup_holds(std::string_view predicate, const std::vector<std::string>& args, const World& world);

}  // namespace rr
