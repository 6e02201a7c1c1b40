#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rr/ir.hpp"

namespace rr {

enum class Phase { P1, P2, P3 };

std::string_view to_string(Phase phase);

struct PhaseReport {
  Phase phase = Phase::P1;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<std::string> rules_applied;
  std::vector<std::pair<std::string, std::string>> dropped;  // (item, reason)
  std::vector<std::pair<std::string, std::string>> details;  // (rule, detail), in application order
};

// `rule<TAB>detail` per line, starting with a `phase` line.
std::string serialize(const PhaseReport& report);

enum class PassErrorKind { NoCommonSkeleton, DomainMismatch, NotE1, NotE2, InvalidInput };

std::string_view to_string(PassErrorKind kind);

class PassError : public std::runtime_error {
 public:
  PassError(PassErrorKind kind, const std::string& message);
  PassErrorKind kind() const { return kind_; }

 private:
  PassErrorKind kind_;
};

struct RollRegion {
  std::size_t start = 0;   // index into the body
  std::size_t period = 0;  // statements per iteration
  std::size_t count = 0;   // iterations, >= 2
  std::size_t length() const { return period * count; }
  friend bool operator==(const RollRegion&, const RollRegion&) = default;
};

inline constexpr std::size_t kMaxRollPeriod = 5;

// The best rollable run of agent actions in `body`: each iteration repeats the
// same verbs and receivers; every argument slot is either fixed across
// iterations or takes pairwise distinct values, and at least one slot varies.
// Ties go to larger coverage, then smaller period, then earlier start.
std::optional<RollRegion> find_roll_region(const std::vector<Statement>& body);

// Maps a constant name to its declared type name; empty when unknown.
using TypeLookup = std::function<std::string(const std::string&)>;

// Replaces the best region with list locals, a cursor per varying slot and a
// While loop. Statements outside the region are kept verbatim.
std::vector<Statement> loop_roll(const std::vector<Statement>& body, const TypeLookup& types = {});

struct E1Result {
  ConceptUnit unit;
  PhaseReport report;
};

// I -> E1.
E1Result antiunify_instances(const std::vector<ConceptUnit>& instances);

struct PassResult {
  UnitSet units;
  PhaseReport report;
};

// E1 -> E2. The result holds `Globals` first, then the generalized class.
PassResult generalize_to_e2(const ConceptUnit& e1);

// E2 -> E3. `e2` is the class plus the `Globals` unit it befriends.
PassResult decompose_to_e3(const UnitSet& e2);

struct MasteryEntry {
  std::string unit;
  Level level = Level::I;
  std::string world;  // task id and world, e.g. "T3:2"
  bool success = false;
  long tick = 0;
  friend bool operator==(const MasteryEntry&, const MasteryEntry&) = default;
};

class MasteryLog {
 public:
  // Ticks must strictly increase; std::invalid_argument otherwise.
  void append(MasteryEntry entry);
  // Appends with the next tick.
  void record(std::string unit, Level level, std::string world, bool success);

  const std::vector<MasteryEntry>& entries() const { return entries_; }
  long last_tick() const { return entries_.empty() ? 0 : entries_.back().tick; }

 private:
  std::vector<MasteryEntry> entries_;
};

struct MasteryStatus {
  bool ready = false;
  int count = 0;  // distinct successful worlds
};

inline constexpr int kDefaultThreshold = 3;

MasteryStatus mastery_check(const MasteryLog& log, const ConceptUnit& unit, int threshold);

// CountingApples -> Counting for domain "apples"; names without the suffix are kept.
std::string strip_domain_suffix(const std::string& name, const std::string& domain);

}  // namespace rr
