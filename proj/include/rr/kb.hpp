#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rr/interpreter.hpp"
#include "rr/ir.hpp"
#include "rr/redescription.hpp"

namespace rr {

enum class KbErrorKind { EmptyTrace, DuplicateUnit, InvalidUnit, IoFailure, ParseFailure };

std::string_view to_string(KbErrorKind kind);

class KbError : public std::runtime_error {
 public:
  KbError(KbErrorKind kind, const std::string& message);
  KbErrorKind kind() const { return kind_; }

 private:
  KbErrorKind kind_;
};

// Units keyed by (name, level) plus the practice log.
class KnowledgeBase {
 public:
  const UnitSet& units() const { return units_; }
  const MasteryLog& log() const { return log_; }
  MasteryLog& log() { return log_; }
  const TypeRegistry& registry() const { return default_registry(); }

  // Rejects a duplicate (name, level) or a unit that fails validation.
  void add(ConceptUnit unit);
  bool contains(const std::string& name, Level level) const { return find(name, level) != nullptr; }
  const ConceptUnit* find(const std::string& name, Level level) const;
  const ConceptUnit* globals() const;

  // Cross-unit checks: friends exist, E3 units cooperate.
  std::vector<Diagnostic> check() const;

  std::map<Level, int> unit_counts() const;

 private:
  UnitSet units_;
  MasteryLog log_;
};

// Records a demonstrated episode as a level-I instance named
// `Counting_<domain>_<ordinal>` and logs it as a success in its world.
const ConceptUnit& record_instance(KnowledgeBase& kb, const Trace& trace, const World& world, const std::string& domain);

// Builds the instance without adding it.
ConceptUnit synthesize_instance(const Trace& trace, const World& world, const std::string& domain, const std::string& name);

// Runs T1..T3 over `seeds` at every level present and logs the outcomes.
void practice(KnowledgeBase& kb, const std::vector<unsigned>& seeds);

// Fires at most one ready phase per domain; never removes units.
std::vector<PhaseReport> advance(KnowledgeBase& kb, int threshold);

// Directory with `manifest.tsv` and one `.rr` file per unit.
void save(const KnowledgeBase& kb, const std::filesystem::path& dir);
KnowledgeBase load(const std::filesystem::path& dir);

}  // namespace rr
