#include "rr/capability.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <sstream>

namespace rr {

CapabilityMatrix build_matrix(const std::map<Level, UnitSet>& kb, const std::vector<unsigned>& seeds,
                              const RunOptions& options) {
  CapabilityMatrix m;
  m.seeds_used = seeds;
  for (Level level : kAllLevels) {
    auto it = kb.find(level);
    const bool present = it != kb.end() && std::any_of(it->second.begin(), it->second.end(), [&](const ConceptUnit& u) {
                           return !u.is_globals() && u.level == level;
                         });
    if (!present) throw MissingLevel("no units at level " + std::string(to_string(level)));
    for (TaskId task : kAllTasks) {
      Outcome cell = Outcome::solved();
      for (unsigned seed : seeds) {
        Outcome o = run_task(build_task(task, seed), it->second, level, options);
        if (!o.is_solved()) {
          cell = o;
          break;
        }
      }
      m.cells[{level, task}] = cell;
    }
  }
  return m;
}

OutcomeKind expected_outcome(Level level, TaskId task) {
  constexpr auto S = OutcomeKind::Solved, F = OutcomeKind::Failed, X = OutcomeKind::Inaccessible;
  static const std::map<Level, std::vector<OutcomeKind>> golden{
      {Level::I, {S, F, F, F, X, X, X, F, X}},
      {Level::E1, {S, S, S, X, X, X, X, F, X}},
      {Level::E2, {S, S, S, S, S, S, X, F, X}},
      {Level::E3, {S, S, S, S, S, S, S, S, S}},
  };
  return golden.at(level).at(static_cast<std::size_t>(task) - 1);
}

std::vector<std::string> compare_expected(const CapabilityMatrix& m) {
  std::vector<std::string> diffs;
  for (Level level : kAllLevels) {
    for (TaskId task : kAllTasks) {
      const std::string key = std::string(to_string(level)) + "\t" + to_string(task);
      const std::string expected(to_string(expected_outcome(level, task)));
      auto it = m.cells.find({level, task});
      if (it == m.cells.end()) {
        diffs.push_back(key + "\t" + expected + "\tmissing");
      } else if (it->second.kind != expected_outcome(level, task)) {
        diffs.push_back(key + "\t" + expected + "\t" + std::string(to_string(it->second.kind)));
      }
    }
  }
  return diffs;
}

std::string render_table(const CapabilityMatrix& m) {
  std::ostringstream os;
  auto row = [&](std::string head, const std::vector<std::string>& cells) {
    std::ostringstream line;
    line << std::left << std::setw(6) << head;
    for (const auto& c : cells) line << std::setw(14) << c;
    std::string text = line.str();
    text.erase(text.find_last_not_of(' ') + 1);
    os << text << "\n";
  };
  std::vector<std::string> header;
  for (TaskId t : kAllTasks) header.push_back(to_string(t));
  row("level", header);
  for (Level level : kAllLevels) {
    std::vector<std::string> cells;
    for (TaskId t : kAllTasks) {
      auto it = m.cells.find({level, t});
      cells.push_back(it == m.cells.end() ? "-" : std::string(to_string(it->second.kind)));
    }
    row(std::string(to_string(level)), cells);
  }
  return os.str();
}

std::string render_tsv(const CapabilityMatrix& m) {
  std::ostringstream os;
  for (const auto& [key, outcome] : m.cells) {
    os << to_string(key.first) << "\t" << to_string(key.second) << "\t" << to_string(outcome.kind) << "\n";
  }
  return os.str();
}

namespace {

std::string words(const std::string& name) {
  std::string out;
  for (std::size_t i = 0; i < name.size(); ++i) {
    const char c = name[i];
    if (c == '_') {
      if (!out.empty() && out.back() != ' ') out += ' ';
      continue;
    }
    const bool boundary = i > 0 && std::isupper(static_cast<unsigned char>(c)) &&
                          (std::islower(static_cast<unsigned char>(name[i - 1])) ||
                           (i + 1 < name.size() && std::islower(static_cast<unsigned char>(name[i + 1]))));
    if (boundary && !out.empty() && out.back() != ' ') out += ' ';
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string article(const std::string& noun) {
  return std::string(std::string("AEIOUaeiou").find(noun.front()) != std::string::npos ? "An " : "A ") + noun;
}

std::string describe_type(const TypeRef& type) {
  TypeInfo info = default_registry().lookup(type);
  switch (info.category) {
    case TypeCategory::Int: return "a number";
    case TypeCategory::Bool: return "yes or no";
    case TypeCategory::Token: return type.name == "Sound" ? "a numeral" : "a " + words(type.name);
    case TypeCategory::Collection: return info.ordered ? "an ordered list" : "a set";
    default: return "a " + words(type.name);
  }
}

}  // namespace

std::string verbalize(const ConceptUnit& unit) {
  if (unit.level != Level::E3) {
    throw NotE3(unit.name + " is at level " + std::string(to_string(unit.level)) + "; only E3 concepts can be put into words");
  }
  std::ostringstream os;
  const std::string subject = article(unit.name);
  for (const auto& a : unit.attributes) {
    if (a.visibility != Visibility::Public) continue;
    if (a.name == "cardinalSum") {
      os << subject << " has a cardinal sum; the cardinal sum does not change when arrangement changes.\n";
    } else if (default_registry().lookup(a.type).category == TypeCategory::Bool) {
      os << subject << " records a yes-or-no fact: " << words(a.name) << ".\n";
    } else if (a.is_const) {
      os << subject << " knows the fixed " << words(a.name) << ".\n";
    } else {
      os << subject << " has " << words(a.name) << ", which is " << describe_type(a.type) << ".\n";
    }
  }
  for (const auto& op : unit.operations) {
    if (op.visibility != Visibility::Public) continue;
    os << subject << " can " << op.name << " (" << words(op.name) << ")";
    std::size_t sets = 0;
    for (const auto& p : op.params) sets += default_registry().is_collection(p.type);
    if (sets == 2 && op.params.size() == 2) {
      os << " across two sets";
    } else if (!op.params.empty()) {
      os << " given ";
      for (std::size_t i = 0; i < op.params.size(); ++i) {
        os << (i ? " and " : "") << describe_type(op.params[i].type);
      }
    }
    if (op.returns) os << ", giving " << describe_type(*op.returns);
    os << ".\n";
  }
  return os.str();
}

}  // namespace rr
