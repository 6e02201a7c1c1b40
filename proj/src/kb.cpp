#include "rr/kb.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "rr/dsl.hpp"
#include "rr/tasks.hpp"

namespace rr {

std::string_view to_string(KbErrorKind kind) {
  switch (kind) {
    case KbErrorKind::EmptyTrace: return "EmptyTrace";
    case KbErrorKind::DuplicateUnit: return "DuplicateUnit";
    case KbErrorKind::InvalidUnit: return "InvalidUnit";
    case KbErrorKind::IoFailure: return "IoFailure";
    case KbErrorKind::ParseFailure: return "ParseFailure";
  }
  return "?";
}

KbError::KbError(KbErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void KnowledgeBase::add(ConceptUnit unit) {
  if (contains(unit.name, unit.level)) {
    throw KbError(KbErrorKind::DuplicateUnit, unit.name + " already exists at level " + std::string(to_string(unit.level)));
  }
  auto diagnostics = validate(unit);
  if (!diagnostics.empty()) throw KbError(KbErrorKind::InvalidUnit, format(diagnostics.front()));
  units_.push_back(std::move(unit));
}

const ConceptUnit* KnowledgeBase::find(const std::string& name, Level level) const {
  for (const auto& u : units_) {
    if (u.name == name && u.level == level) return &u;
  }
  return nullptr;
}

const ConceptUnit* KnowledgeBase::globals() const { return find_unit(units_, kGlobalsUnit); }

std::vector<Diagnostic> KnowledgeBase::check() const { return validate_set(units_); }

std::map<Level, int> KnowledgeBase::unit_counts() const {
  std::map<Level, int> counts;
  for (Level l : kAllLevels) counts[l] = 0;
  for (const auto& u : units_) {
    if (!u.is_globals()) ++counts[u.level];
  }
  return counts;
}

// --- recording ---------------------------------------------------------------

namespace {

std::string capitalized(const std::string& token) {
  std::string out;
  for (std::size_t i = 0; i < token.size(); ++i) {
    const auto c = static_cast<unsigned char>(token[i]);
    out += static_cast<char>(i == 0 ? std::toupper(c) : std::tolower(c));
  }
  return out;
}

const Entity* entity(const World& world, const std::string& id) {
  auto it = world.entities.find(id);
  return it == world.entities.end() ? nullptr : &it->second;
}

}  // namespace

ConceptUnit synthesize_instance(const Trace& trace, const World& world, const std::string& domain, const std::string& name) {
  if (trace.empty()) throw KbError(KbErrorKind::EmptyTrace, "cannot record an empty trace");

  std::string agent = "ME";
  for (const auto& [id, e] : world.entities) {
    if (e.kind == "Person") {
      agent = id;
      break;
    }
  }
  std::vector<std::string> sounds, pointed, moved;
  auto remember = [](std::vector<std::string>& xs, const std::string& x) {
    if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
  };
  for (const auto& e : trace) {
    switch (e.kind) {
      case EventKind::Said: remember(sounds, e.arg); break;
      case EventKind::PointedTo:
      case EventKind::TookAway: remember(pointed, e.arg); break;
      case EventKind::Moved: remember(moved, e.arg); break;
    }
  }
  std::vector<std::string> rooms, places;
  auto walk = [&](const std::string& id) {
    const Entity* e = entity(world, id);
    std::set<std::string> seen;
    while (e && !e->group.empty() && seen.insert(e->group).second) {
      const Entity* g = entity(world, e->group);
      if (!g) break;
      remember(g->kind == "Room" ? rooms : places, e->group);
      e = g;
    }
  };
  walk(agent);
  for (const auto& p : pointed) walk(p);

  std::vector<std::pair<std::string, std::string>> constants;  // (type, name)
  std::set<std::string> declared;
  auto declare = [&](const std::string& type, const std::string& id) {
    if (declared.insert(id).second) constants.emplace_back(type, id);
  };
  auto kind_of = [&](const std::string& id) {
    const Entity* e = entity(world, id);
    return e ? e->kind : capitalized(id);
  };
  for (const auto& s : sounds) declare("Sound", s);
  declare("Person", agent);
  for (const auto& r : rooms) declare(kind_of(r), r);
  for (const auto& p : places) declare(kind_of(p), p);
  for (const auto& p : pointed) declare(kind_of(p), p);
  for (const auto& m : moved) declare(kind_of(m), m);

  std::vector<std::string> setups;
  auto place = [&](const std::string& id) {
    const Entity* e = entity(world, id);
    if (!e || e->group.empty() || !declared.count(e->group)) return;
    const Entity* g = entity(world, e->group);
    setups.push_back(std::string(g && g->kind == "Room" ? "In" : "On") + "(" + id + ", " + e->group + ")");
  };
  place(agent);
  for (const auto& p : pointed) place(p);
  std::vector<std::string> groups;
  for (const auto& p : pointed) {
    if (const Entity* e = entity(world, p); e && !e->group.empty()) remember(groups, e->group);
  }
  for (const auto& g : groups) {
    auto arr = world.arrangements.find(g);
    if (arr == world.arrangements.end() || arr->second != Arrangement::Line) continue;
    std::vector<std::string> row;
    for (const auto& p : pointed) {
      if (entity(world, p)->group == g) row.push_back(p);
    }
    std::vector<std::string> args(row);
    if (!setup_holds("InLine", args, world)) continue;
    std::string text = "InLine(";
    for (std::size_t i = 0; i < row.size(); ++i) text += (i ? ", " : "") + row[i];
    setups.push_back(text + ")");
  }

  std::ostringstream os;
  os << "@level(I)\n@domain(" << domain << ")\ninstance " << name << " {\nprivate:\n";
  for (const auto& [type, id] : constants) os << "    const " << type << " " << id << ";\n";
  for (const auto& s : setups) os << "    " << s << ";\n";
  for (const auto& e : trace) {
    switch (e.kind) {
      case EventKind::Moved: os << "    " << agent << ".Move(" << e.arg << ");\n"; break;
      case EventKind::PointedTo: os << "    " << agent << ".PointTo(" << e.arg << ");\n"; break;
      case EventKind::Said: os << "    " << agent << ".Say(" << e.arg << ");\n"; break;
      case EventKind::TookAway: os << "    " << agent << ".TakeAway(" << e.arg << ");\n"; break;
    }
  }
  os << "}\n";
  auto parsed = dsl::parse({os.str(), "<recorded>"});
  if (!parsed.ok()) throw KbError(KbErrorKind::InvalidUnit, "recorded episode is not expressible: " + dsl::format(parsed.errors.front()));
  return parsed.units.front();
}

const ConceptUnit& record_instance(KnowledgeBase& kb, const Trace& trace, const World& world, const std::string& domain) {
  std::string name;
  for (int k = 1;; ++k) {
    name = "Counting_" + domain + "_" + std::to_string(k);
    if (!kb.contains(name, Level::I)) break;
  }
  kb.add(synthesize_instance(trace, world, domain, name));
  kb.log().record(name, Level::I, "demo@" + world_fingerprint(world), true);
  return *kb.find(name, Level::I);
}

// --- practice and advancement ------------------------------------------------

void practice(KnowledgeBase& kb, const std::vector<unsigned>& seeds) {
  for (Level level : kAllLevels) {
    if (kb.unit_counts()[level] == 0) continue;
    for (TaskId t : {TaskId::T1, TaskId::T2, TaskId::T3}) {
      for (unsigned seed : seeds) {
        Task task = build_task(t, seed);
        TaskResult r = run_task_detailed(task, kb.units(), level);
        if (r.solver.empty()) continue;
        kb.log().record(r.solver, level, to_string(t) + "@" + world_fingerprint(task.world), r.outcome.is_solved());
      }
    }
  }
}

namespace {

int distinct_successes(const MasteryLog& log, const std::vector<const ConceptUnit*>& units) {
  std::set<std::string> worlds;
  for (const auto& e : log.entries()) {
    if (!e.success) continue;
    for (const auto* u : units) {
      if (u->name == e.unit && u->level == e.level) worlds.insert(e.world);
    }
  }
  return static_cast<int>(worlds.size());
}

void add_new(KnowledgeBase& kb, const UnitSet& units, PhaseReport& report) {
  std::vector<std::string> added;
  for (const auto& u : units) {
    if (kb.contains(u.name, u.level)) continue;
    kb.add(u);
    added.push_back(u.name);
  }
  report.outputs = added;
}

}  // namespace

std::vector<PhaseReport> advance(KnowledgeBase& kb, int threshold) {
  if (threshold < 1) throw std::invalid_argument("threshold must be at least 1");
  std::set<std::string> domains;
  for (const auto& u : kb.units()) {
    if (!u.is_globals()) domains.insert(u.domain);
  }
  std::vector<PhaseReport> reports;
  for (const auto& domain : domains) {
    std::vector<const ConceptUnit*> instances, e1, e2;
    for (const auto& u : kb.units()) {
      if (u.domain != domain || u.is_globals()) continue;
      if (u.level == Level::I && u.kind == UnitKind::Instance) instances.push_back(&u);
      if (u.level == Level::E1) e1.push_back(&u);
      if (u.level == Level::E2 && u.find_operation("Index", 1) && u.find_operation("OneToOneMap", 1)) e2.push_back(&u);
    }

    if (!instances.empty() && e1.empty()) {
      if (instances.size() < 2 || distinct_successes(kb.log(), instances) < threshold) continue;
      std::vector<ConceptUnit> inputs;
      for (const auto* u : instances) inputs.push_back(*u);
      try {
        E1Result r = antiunify_instances(inputs);
        add_new(kb, {r.unit}, r.report);
        reports.push_back(std::move(r.report));
      } catch (const PassError&) {
      }
      continue;
    }

    bool fired = false;
    for (const auto* u : e1) {
      if (kb.contains(strip_domain_suffix(u->name, u->domain), Level::E2)) continue;
      if (!mastery_check(kb.log(), *u, threshold).ready) continue;
      PassResult r = generalize_to_e2(*u);
      add_new(kb, r.units, r.report);
      reports.push_back(std::move(r.report));
      fired = true;
      break;
    }
    if (fired) continue;

    for (const auto* u : e2) {
      if (kb.contains(u->name, Level::E3)) continue;
      if (!mastery_check(kb.log(), *u, threshold).ready) continue;
      UnitSet inputs{*u};
      if (const ConceptUnit* g = kb.globals()) inputs.insert(inputs.begin(), *g);
      PassResult r = decompose_to_e3(inputs);
      add_new(kb, r.units, r.report);
      reports.push_back(std::move(r.report));
      break;
    }
  }
  return reports;
}

// --- persistence ---------------------------------------------------------------

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, '\t')) out.push_back(field);
  if (!line.empty() && line.back() == '\t') out.emplace_back();
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw KbError(KbErrorKind::IoFailure, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw KbError(KbErrorKind::IoFailure, "cannot write " + path.string());
}

std::string unit_key(const std::string& name, Level level) { return name + "/" + std::string(to_string(level)); }

}  // namespace

void save(const KnowledgeBase& kb, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw KbError(KbErrorKind::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
  std::ostringstream manifest;
  manifest << "[units]\n";
  for (const auto& u : kb.units()) {
    const std::string file = u.name + "." + std::string(to_string(u.level)) + ".rr";
    write_file(dir / file, dsl::print_canonical({u}).text);
    manifest << file << "\t" << u.name << "\t" << to_string(u.level) << "\t" << u.domain << "\n";
  }
  manifest << "[log]\n";
  for (const auto& e : kb.log().entries()) {
    manifest << unit_key(e.unit, e.level) << "\t" << e.world << "\t" << (e.success ? "Solved" : "Failed") << "\t" << e.tick
             << "\n";
  }
  write_file(dir / "manifest.tsv", manifest.str());
}

KnowledgeBase load(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw KbError(KbErrorKind::IoFailure, dir.string() + " is not a directory");
  KnowledgeBase kb;
  const auto manifest_path = dir / "manifest.tsv";
  if (!std::filesystem::exists(manifest_path)) return kb;

  std::istringstream manifest(read_file(manifest_path));
  std::map<std::string, UnitSet> files;
  std::string line, section;
  int line_no = 0;
  auto bad = [&](const std::string& why) -> KbError {
    return KbError(KbErrorKind::ParseFailure, manifest_path.string() + ":" + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(manifest, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line == "[units]" || line == "[log]") {
      section = line;
      continue;
    }
    const auto cols = split_tabs(line);
    if (section == "[units]") {
      if (cols.size() != 4) throw bad("expected file, name, level, domain");
      auto level = parse_level(cols[2]);
      if (!level) throw bad("unknown level '" + cols[2] + "'");
      if (!files.count(cols[0])) {
        auto parsed = dsl::parse({read_file(dir / cols[0]), (dir / cols[0]).string()});
        if (!parsed.ok()) throw KbError(KbErrorKind::ParseFailure, dsl::format(parsed.errors.front()));
        files[cols[0]] = std::move(parsed.units);
      }
      const UnitSet& units = files[cols[0]];
      auto it = std::find_if(units.begin(), units.end(),
                             [&](const ConceptUnit& u) { return u.name == cols[1] && u.level == *level; });
      if (it == units.end()) throw bad(cols[0] + " has no unit " + unit_key(cols[1], *level));
      if (it->domain != cols[3]) throw bad(cols[1] + " is in domain " + it->domain + ", manifest says " + cols[3]);
      try {
        kb.add(*it);
      } catch (const KbError& e) {
        throw bad(e.what());
      }
    } else if (section == "[log]") {
      if (cols.size() != 4) throw bad("expected unit, task, outcome, tick");
      auto slash = cols[0].rfind('/');
      auto level = slash == std::string::npos ? std::nullopt : parse_level(cols[0].substr(slash + 1));
      if (!level) throw bad("log unit must be name/level");
      auto outcome = parse_outcome_kind(cols[2]);
      if (!outcome) throw bad("unknown outcome '" + cols[2] + "'");
      long tick = 0;
      try {
        tick = std::stol(cols[3]);
      } catch (const std::exception&) {
        throw bad("bad tick '" + cols[3] + "'");
      }
      try {
        kb.log().append({cols[0].substr(0, slash), *level, cols[1], *outcome == OutcomeKind::Solved, tick});
      } catch (const std::invalid_argument& e) {
        throw bad(e.what());
      }
    } else {
      throw bad("row outside a section");
    }
  }
  return kb;
}

}  // namespace rr
