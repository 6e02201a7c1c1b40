#include "rr/redescription.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "rr/dsl.hpp"
#include "rr/interpreter.hpp"

namespace rr {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::P1: return "P1";
    case Phase::P2: return "P2";
    case Phase::P3: return "P3";
  }
  return "?";
}

std::string_view to_string(PassErrorKind kind) {
  switch (kind) {
    case PassErrorKind::NoCommonSkeleton: return "NoCommonSkeleton";
    case PassErrorKind::DomainMismatch: return "DomainMismatch";
    case PassErrorKind::NotE1: return "NotE1";
    case PassErrorKind::NotE2: return "NotE2";
    case PassErrorKind::InvalidInput: return "InvalidInput";
  }
  return "?";
}

PassError::PassError(PassErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

std::string serialize(const PhaseReport& report) {
  auto join = [](const std::vector<std::string>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + xs[i];
    return out;
  };
  std::ostringstream os;
  os << "phase\t" << to_string(report.phase) << "\n";
  os << "inputs\t" << join(report.inputs) << "\n";
  os << "outputs\t" << join(report.outputs) << "\n";
  for (const auto& [rule, detail] : report.details) os << rule << "\t" << detail << "\n";
  for (const auto& [item, reason] : report.dropped) os << "dropped\t" << item << ": " << reason << "\n";
  return os.str();
}

std::string strip_domain_suffix(const std::string& name, const std::string& domain) {
  if (domain.empty()) return name;
  std::string suffix = domain;
  suffix[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(suffix[0])));
  if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return name.substr(0, name.size() - suffix.size());
  }
  return name;
}

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

void note(PhaseReport& report, const std::string& rule, const std::string& detail) {
  if (std::find(report.rules_applied.begin(), report.rules_applied.end(), rule) == report.rules_applied.end()) {
    report.rules_applied.push_back(rule);
  }
  report.details.emplace_back(rule, detail);
}

// --- loop rolling ----------------------------------------------------------

struct ActionShape {
  Verb verb;
  std::string receiver;
  std::vector<std::string> args;
};

std::optional<ActionShape> shape_of(const Statement& s) {
  if (s.kind != StmtKind::Action || !s.expr.has_receiver) return std::nullopt;
  auto verb = parse_verb(s.expr.text);
  if (!verb || !is_agent_verb(*verb)) return std::nullopt;
  ActionShape shape{*verb, dsl::print_expr(*s.expr.receiver()), {}};
  for (const auto& a : s.expr.call_args()) shape.args.push_back(dsl::print_expr(a));
  return shape;
}

enum class SlotKind { Fixed, Varying, Invalid };

SlotKind classify(const std::vector<std::string>& values) {
  std::set<std::string> distinct(values.begin(), values.end());
  if (distinct.size() == 1) return SlotKind::Fixed;
  if (distinct.size() == values.size()) return SlotKind::Varying;
  return SlotKind::Invalid;
}

// Iterations whose verbs, receivers and arities line up with the first one.
std::size_t aligned_run(const std::vector<std::optional<ActionShape>>& shapes, std::size_t start, std::size_t period) {
  std::size_t k = 0;
  while (start + (k + 1) * period <= shapes.size()) {
    bool ok = true;
    for (std::size_t j = 0; j < period && ok; ++j) {
      const auto& a = shapes[start + k * period + j];
      const auto& b = shapes[start + j];
      ok = a && b && a->verb == b->verb && a->receiver == b->receiver && a->args.size() == b->args.size();
    }
    if (!ok) break;
    ++k;
  }
  return k;
}

bool slots_valid(const std::vector<std::optional<ActionShape>>& shapes, std::size_t start, std::size_t period,
                 std::size_t count) {
  bool any_varying = false;
  for (std::size_t j = 0; j < period; ++j) {
    for (std::size_t a = 0; a < shapes[start + j]->args.size(); ++a) {
      std::vector<std::string> values;
      for (std::size_t i = 0; i < count; ++i) values.push_back(shapes[start + i * period + j]->args[a]);
      SlotKind kind = classify(values);
      if (kind == SlotKind::Invalid) return false;
      any_varying = any_varying || kind == SlotKind::Varying;
    }
  }
  return any_varying;
}

}  // namespace

std::optional<RollRegion> find_roll_region(const std::vector<Statement>& body) {
  std::vector<std::optional<ActionShape>> shapes;
  for (const auto& s : body) shapes.push_back(shape_of(s));
  std::optional<RollRegion> best;
  auto better = [&](const RollRegion& r) {
    if (!best) return true;
    if (r.length() != best->length()) return r.length() > best->length();
    if (r.period != best->period) return r.period < best->period;
    return r.start < best->start;
  };
  for (std::size_t start = 0; start < body.size(); ++start) {
    for (std::size_t period = 1; period <= kMaxRollPeriod; ++period) {
      for (std::size_t k = aligned_run(shapes, start, period); k >= 2; --k) {
        if (slots_valid(shapes, start, period, k)) {
          RollRegion r{start, period, k};
          if (better(r)) best = r;
          break;
        }
      }
    }
  }
  return best;
}

namespace {

struct SlotRef {
  std::size_t offset;
  std::size_t arg;
};

std::string unique_name(std::string base, std::set<std::string>& taken) {
  std::string name = base;
  for (int i = 2; taken.count(name); ++i) name = base + std::to_string(i);
  taken.insert(name);
  return name;
}

void collect_names(const Expr& e, std::set<std::string>& out) {
  if (e.kind == ExprKind::Name) out.insert(e.text);
  for (const auto& c : e.children) collect_names(c, out);
}

void collect_names(const std::vector<Statement>& body, std::set<std::string>& out) {
  for (const auto& s : body) {
    if (s.kind == StmtKind::LocalDecl) out.insert(s.name);
    collect_names(s.expr, out);
    collect_names(s.target, out);
    for (const auto& a : s.args) collect_names(a, out);
    collect_names(s.body, out);
    collect_names(s.else_body, out);
  }
}

}  // namespace

std::vector<Statement> loop_roll(const std::vector<Statement>& body, const TypeLookup& types) {
  auto region = find_roll_region(body);
  if (!region) return body;
  const std::size_t start = region->start, period = region->period, count = region->count;

  std::vector<SlotRef> varying;
  for (std::size_t j = 0; j < period; ++j) {
    const auto args = body[start + j].expr.call_args();
    for (std::size_t a = 0; a < args.size(); ++a) {
      std::vector<std::string> values;
      for (std::size_t i = 0; i < count; ++i) {
        values.push_back(dsl::print_expr(body[start + i * period + j].expr.call_args()[a]));
      }
      if (classify(values) == SlotKind::Varying) varying.push_back({j, a});
    }
  }

  std::set<std::string> taken;
  collect_names(body, taken);
  std::vector<Statement> decls, fills, inits, advances;
  std::vector<std::string> cursors;
  for (const auto& slot : varying) {
    const Expr first_value = body[start + slot.offset].expr.call_args()[slot.arg];
    std::string element = types && first_value.kind == ExprKind::Name ? types(first_value.text) : "";
    TypeInfo info = default_registry().lookup(TypeRef{element});
    std::string list_type, list_base, cursor_base;
    if (info.category == TypeCategory::Entity && !element.empty()) {
      list_type = TypeRegistry::list_type_for(element).name;
      list_base = lower(list_type);
      cursor_base = "an_" + lower(element);
    } else if (element == "Sound") {
      list_type = "intList";
      list_base = "numerals";
      cursor_base = "numeral";
    } else {
      element = "Object";
      list_type = "objectList";
      list_base = "items";
      cursor_base = "item";
    }
    const std::string list = unique_name(list_base, taken);
    const std::string cursor = unique_name(cursor_base, taken);
    decls.push_back(Statement::local(list, TypeRef{list_type}));
    decls.push_back(Statement::local(cursor, TypeRef{element}));
    for (std::size_t i = 0; i < count; ++i) {
      Expr value = body[start + i * period + slot.offset].expr.call_args()[slot.arg];
      fills.push_back(Statement::action(Expr::call(Expr::name(list), "Append", {value})));
    }
    inits.push_back(Statement::assign(Expr::name(cursor), Expr::call(Expr::name(list), "First", {})));
    advances.push_back(Statement::assign(Expr::name(cursor), Expr::call(Expr::name(list), "Next", {})));
    cursors.push_back(cursor);
  }

  std::vector<Statement> loop_body;
  for (std::size_t j = 0; j < period; ++j) {
    Statement s = body[start + j];
    const std::size_t arg_base = s.expr.has_receiver ? 1 : 0;
    for (std::size_t v = 0; v < varying.size(); ++v) {
      if (varying[v].offset == j) s.expr.children[arg_base + varying[v].arg] = Expr::name(cursors[v]);
    }
    loop_body.push_back(std::move(s));
  }
  loop_body.insert(loop_body.end(), advances.begin(), advances.end());

  std::vector<Statement> out(body.begin(), body.begin() + static_cast<std::ptrdiff_t>(start));
  out.insert(out.end(), decls.begin(), decls.end());
  out.insert(out.end(), fills.begin(), fills.end());
  out.insert(out.end(), inits.begin(), inits.end());
  out.push_back(Statement::while_loop(Expr::binary("!=", Expr::name(cursors.front()), Expr::null()), std::move(loop_body)));
  out.insert(out.end(), body.begin() + static_cast<std::ptrdiff_t>(start + region->length()), body.end());
  return out;
}

// --- P1: anti-unification of instances -------------------------------------

namespace {

std::string class_name_for(const std::string& instance) {
  std::string base = instance;
  auto us = base.rfind('_');
  if (us != std::string::npos && us + 1 < base.size() &&
      std::all_of(base.begin() + static_cast<std::ptrdiff_t>(us) + 1, base.end(), [](unsigned char c) { return std::isdigit(c); })) {
    base.resize(us);
  }
  std::string out;
  bool upper_next = true;
  for (char c : base) {
    if (c == '_') {
      upper_next = true;
      continue;
    }
    out += upper_next ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
    upper_next = false;
  }
  return out;
}

UnitSet parse_generated(const std::string& text) {
  auto parsed = dsl::parse({text, "<generated>"});
  if (!parsed.ok()) throw std::logic_error("generated unit does not parse: " + dsl::format(parsed.errors.front()));
  return parsed.units;
}

struct Indented {
  std::ostringstream os;
  void line(int indent, const std::string& text) { os << std::string(static_cast<std::size_t>(indent) * 4, ' ') << text << "\n"; }
};

struct InstanceView {
  const ConceptUnit* unit = nullptr;
  std::vector<Statement> setups;
  std::vector<Statement> actions;
  std::size_t iterations = 0;
  std::optional<Statement> suffix;

  std::string type_of(const std::string& name) const {
    const Attribute* a = unit->find_attribute(name);
    return a && a->is_const ? a->type.name : "";
  }
};

[[noreturn]] void no_skeleton(const std::string& why) { throw PassError(PassErrorKind::NoCommonSkeleton, why); }

}  // namespace

E1Result antiunify_instances(const std::vector<ConceptUnit>& instances) {
  if (instances.size() < 2) throw PassError(PassErrorKind::InvalidInput, "anti-unification needs at least two instances");
  for (const auto& u : instances) {
    if (u.level != Level::I || u.kind != UnitKind::Instance) {
      throw PassError(PassErrorKind::InvalidInput, u.name + " is not a level-I instance");
    }
    if (!validate(u).empty()) throw PassError(PassErrorKind::InvalidInput, u.name + " does not validate");
    if (u.domain != instances.front().domain) {
      throw PassError(PassErrorKind::DomainMismatch,
                      u.name + " is in domain " + u.domain + ", expected " + instances.front().domain);
    }
  }
  const std::string domain = instances.front().domain;

  std::vector<InstanceView> views;
  for (const auto& u : instances) {
    InstanceView v;
    v.unit = &u;
    if (const Operation* op = u.entrance()) {
      for (const auto& s : op->body) (s.kind == StmtKind::Setup ? v.setups : v.actions).push_back(s);
    }
    views.push_back(std::move(v));
  }

  // Reference pattern from the first instance with a rollable region at its start.
  std::vector<ActionShape> pattern;
  const InstanceView* reference = nullptr;
  for (const auto& v : views) {
    auto region = find_roll_region(v.actions);
    if (!region || region->start != 0) continue;
    std::vector<ActionShape> p;
    for (std::size_t j = 0; j < region->period; ++j) p.push_back(*shape_of(v.actions[j]));
    if (!reference) {
      pattern = p;
      reference = &v;
      continue;
    }
    bool same = p.size() == pattern.size();
    for (std::size_t j = 0; same && j < p.size(); ++j) {
      same = p[j].verb == pattern[j].verb && p[j].receiver == pattern[j].receiver && p[j].args.size() == pattern[j].args.size();
    }
    if (!same) no_skeleton(v.unit->name + " repeats a different action pattern than " + reference->unit->name);
  }
  if (!reference) no_skeleton("no instance contains a repeated action block");
  const std::size_t period = pattern.size();

  for (auto& v : views) {
    std::size_t k = 0;
    while ((k + 1) * period <= v.actions.size()) {
      bool ok = true;
      for (std::size_t j = 0; j < period && ok; ++j) {
        auto shape = shape_of(v.actions[k * period + j]);
        ok = shape && shape->verb == pattern[j].verb && shape->receiver == pattern[j].receiver &&
             shape->args.size() == pattern[j].args.size();
      }
      if (!ok) break;
      ++k;
    }
    if (k == 0) no_skeleton(v.unit->name + " does not start with the repeated action block");
    const std::size_t rest = v.actions.size() - k * period;
    if (rest > 1) no_skeleton(v.unit->name + " has unexplained actions after the repeated block");
    v.iterations = k;
    if (rest == 1) v.suffix = v.actions.back();
  }

  // Classify argument slots over every iteration of every instance.
  std::optional<SlotRef> entity_slot, numeral_slot;
  std::string entity_kind;
  std::vector<std::string> retained;  // fixed action arguments kept as constants
  for (std::size_t j = 0; j < period; ++j) {
    for (std::size_t a = 0; a < pattern[j].args.size(); ++a) {
      std::set<std::string> all;
      std::set<std::string> types;
      for (const auto& v : views) {
        std::vector<std::string> values;
        for (std::size_t i = 0; i < v.iterations; ++i) values.push_back(shape_of(v.actions[i * period + j])->args[a]);
        if (values.size() > 1 && classify(values) == SlotKind::Invalid) {
          no_skeleton(v.unit->name + " repeats a value in a varying argument of " + std::string(to_string(pattern[j].verb)));
        }
        for (const auto& x : values) {
          all.insert(x);
          types.insert(v.type_of(x));
        }
      }
      if (types.size() != 1 || types.begin()->empty()) no_skeleton("argument types differ across instances");
      const std::string type = *types.begin();
      if (all.size() == 1) {
        if (std::find(retained.begin(), retained.end(), *all.begin()) == retained.end()) retained.push_back(*all.begin());
        continue;
      }
      if (type == "Sound") {
        if (numeral_slot) no_skeleton("more than one numeral sequence");
        numeral_slot = SlotRef{j, a};
      } else if (default_registry().lookup(TypeRef{type}).category == TypeCategory::Entity) {
        if (entity_slot) no_skeleton("more than one counted collection");
        entity_slot = SlotRef{j, a};
        entity_kind = type;
      } else {
        no_skeleton("argument of type " + type + " varies but is neither an entity nor a numeral");
      }
    }
  }
  if (!entity_slot) no_skeleton("no entity argument varies across iterations");

  const std::string agent = pattern.front().receiver;
  for (const auto& shape : pattern) {
    if (shape.receiver != agent) no_skeleton("actions have more than one agent");
  }
  for (const auto& v : views) {
    if (default_registry().lookup(TypeRef{v.type_of(agent)}).category != TypeCategory::Agent) {
      no_skeleton("receiver " + agent + " is not a person in " + v.unit->name);
    }
  }

  const auto numerals = default_numerals();
  for (const auto& v : views) {
    if (!numeral_slot) continue;
    for (std::size_t i = 0; i < v.iterations; ++i) {
      const std::string said = shape_of(v.actions[i * period + numeral_slot->offset])->args[numeral_slot->arg];
      if (i >= numerals.size() || said != numerals[i]) {
        no_skeleton(v.unit->name + " does not say numerals in the stable order");
      }
    }
  }
  const bool trailing = views.front().suffix.has_value();
  for (const auto& v : views) {
    if (v.suffix.has_value() != trailing) no_skeleton("instances disagree on the closing action");
    if (!v.suffix) continue;
    auto shape = shape_of(*v.suffix);
    const std::string last =
        numeral_slot ? shape_of(v.actions[(v.iterations - 1) * period + numeral_slot->offset])->args[numeral_slot->arg] : "";
    if (!numeral_slot || !shape || shape->verb != Verb::Say || shape->receiver != agent || shape->args.size() != 1 ||
        shape->args[0] != last) {
      no_skeleton(v.unit->name + " closes with an action other than repeating the last numeral");
    }
  }

  PhaseReport report;
  report.phase = Phase::P1;
  for (const auto& u : instances) report.inputs.push_back(u.name);

  const std::string set_type = TypeRegistry::set_type_for(entity_kind).name;
  const std::string list_type = TypeRegistry::list_type_for(entity_kind).name;
  const std::string set_name = lower(set_type);
  const std::string list_name = lower(list_type);
  const std::string element = "an_" + lower(entity_kind);
  const std::string class_name = class_name_for(instances.front().name);
  const std::string op_name = strip_domain_suffix(class_name, domain);

  note(report, "loop-roll",
       "period " + std::to_string(period) + " block rolled over " + std::to_string(views.size()) + " instances");
  note(report, "generalize-agent", agent + " -> Person p");
  note(report, "collect-entities", entity_kind + " constants -> " + set_type + " " + set_name);
  if (numeral_slot) note(report, "numeral-list", "Sound constants -> const intList numlist");

  std::set<std::string> kept(retained.begin(), retained.end());
  std::set<std::string> generalized{agent};
  std::set<std::string> dropped_names;
  for (const auto& v : views) {
    for (std::size_t i = 0; i < v.iterations; ++i) {
      generalized.insert(shape_of(v.actions[i * period + entity_slot->offset])->args[entity_slot->arg]);
      if (numeral_slot) generalized.insert(shape_of(v.actions[i * period + numeral_slot->offset])->args[numeral_slot->arg]);
    }
  }
  for (const auto& v : views) {
    for (const auto& a : v.unit->attributes) {
      if (kept.count(a.name) || generalized.count(a.name) || !dropped_names.insert(a.name).second) continue;
      report.dropped.emplace_back(a.name, "occasional: never an action argument");
      note(report, "drop-occasional", a.name);
    }
  }
  std::set<std::string> dropped_setups;
  for (const auto& v : views) {
    for (const auto& s : v.setups) {
      std::string text = s.name + "(";
      std::string reason = "ranges over loop-carried entities";
      for (std::size_t i = 0; i < s.args.size(); ++i) {
        const std::string arg = dsl::print_expr(s.args[i]);
        text += (i ? ", " : "") + arg;
        if (dropped_names.count(arg)) reason = "mentions occasional " + arg;
      }
      text += ")";
      if (!dropped_setups.insert(text).second) continue;
      report.dropped.emplace_back(text, reason);
      note(report, "drop-setup", text);
    }
  }
  note(report, "synthesize-result", "int result counts iterations");
  note(report, "protect-operation", op_name + " is protected");
  if (trailing) note(report, "return-result", "closing numeral repeated only for a non-empty count");

  // Loop body: the reference iteration with generalized names.
  std::vector<Statement> loop_body;
  for (std::size_t j = 0; j < period; ++j) {
    Statement s = reference->actions[j];
    s.expr.children[0] = Expr::name("p");
    if (entity_slot->offset == j) s.expr.children[1 + entity_slot->arg] = Expr::name(element);
    if (numeral_slot && numeral_slot->offset == j) s.expr.children[1 + numeral_slot->arg] = Expr::name("numeral");
    loop_body.push_back(std::move(s));
  }

  Indented out;
  out.line(0, "@level(E1)");
  out.line(0, "@domain(" + domain + ")");
  out.line(0, "class " + class_name + " {");
  out.line(0, "private:");
  if (numeral_slot) out.line(1, "const intList numlist;");
  for (const auto& name : retained) out.line(1, "const " + reference->type_of(name) + " " + name + ";");
  out.line(1, "Person p;");
  out.line(1, set_type + " " + set_name + ";");
  out.line(1, "int result;");
  out.line(0, "protected:");
  out.line(1, "int " + op_name + "() {");
  out.line(2, list_type + " " + list_name + ";");
  out.line(2, entity_kind + " " + element + ";");
  if (numeral_slot) out.line(2, "Sound numeral;");
  out.line(2, "Index(" + set_name + ") {");
  out.line(3, "while (!" + set_name + ".Empty()) {");
  out.line(4, element + " = " + set_name + ".SelectOneRandom();");
  out.line(4, list_name + ".Append(" + element + ");");
  out.line(4, set_name + ".Delete(" + element + ");");
  out.line(3, "}");
  out.line(2, "}");
  out.line(2, "OneToOneMap() {");
  out.line(3, "result = 0;");
  out.line(3, element + " = " + list_name + ".First();");
  if (numeral_slot) out.line(3, "numeral = numlist.First();");
  out.line(3, "while (" + element + " != NULL) {");
  out.os << dsl::print_statements(loop_body, 4);
  out.line(4, "result++;");
  out.line(4, element + " = " + list_name + ".Next();");
  if (numeral_slot) {
    out.line(4, "if (" + element + " != NULL) {");
    out.line(5, "numeral = numlist.Next();");
    out.line(4, "}");
  }
  out.line(3, "}");
  if (trailing) {
    out.line(3, "if (result > 0) {");
    out.line(4, "p.Say(numeral);");
    out.line(3, "}");
  }
  out.line(2, "}");
  out.line(2, "return result;");
  out.line(1, "}");
  out.line(0, "}");

  UnitSet units = parse_generated(out.os.str());
  E1Result result{std::move(units.front()), std::move(report)};
  result.report.outputs.push_back(result.unit.name);
  return result;
}

// --- P2: generalization to a cross-domain class ----------------------------

namespace {

void rename(Expr& e, const std::map<std::string, std::string>& names) {
  if (e.kind == ExprKind::Name) {
    if (auto it = names.find(e.text); it != names.end()) e.text = it->second;
  }
  for (auto& c : e.children) rename(c, names);
}

void rename(std::vector<Statement>& body, const std::map<std::string, std::string>& names) {
  for (auto& s : body) {
    if (s.kind == StmtKind::LocalDecl) {
      if (auto it = names.find(s.name); it != names.end()) s.name = it->second;
    }
    rename(s.expr, names);
    rename(s.target, names);
    for (auto& a : s.args) rename(a, names);
    rename(s.body, names);
    rename(s.else_body, names);
  }
}

// Replaces `recv.First()` / `recv.Next()` on `list` by `replacement`.
void replace_cursor_calls(Expr& e, const std::string& list, const Expr& replacement) {
  if (e.kind == ExprKind::Call && e.has_receiver && e.children[0].kind == ExprKind::Name && e.children[0].text == list &&
      (e.text == "First" || e.text == "Next")) {
    e = replacement;
    return;
  }
  for (auto& c : e.children) replace_cursor_calls(c, list, replacement);
}

void replace_cursor_calls(std::vector<Statement>& body, const std::string& list, const Expr& replacement) {
  for (auto& s : body) {
    replace_cursor_calls(s.expr, list, replacement);
    replace_cursor_calls(s.body, list, replacement);
    replace_cursor_calls(s.else_body, list, replacement);
  }
}

bool has_agent_action(const std::vector<Statement>& body) {
  return std::any_of(body.begin(), body.end(), [](const Statement& s) { return shape_of(s).has_value(); });
}

// The loop whose body performs the agent actions.
const Statement* find_action_loop(const std::vector<Statement>& body) {
  for (const auto& s : body) {
    if (s.kind == StmtKind::While && has_agent_action(s.body)) return &s;
    if (const Statement* inner = find_action_loop(s.body)) return inner;
  }
  return nullptr;
}

bool closes_with_numeral(const std::vector<Statement>& body) {
  for (const auto& s : body) {
    if (s.kind == StmtKind::If && has_agent_action(s.body)) return true;
    if (s.kind == StmtKind::Block && closes_with_numeral(s.body)) return true;
  }
  return false;
}

void collect_locals(const std::vector<Statement>& body, std::vector<const Statement*>& out) {
  for (const auto& s : body) {
    if (s.kind == StmtKind::LocalDecl) out.push_back(&s);
    collect_locals(s.body, out);
  }
}

bool mentions(const std::vector<Statement>& body, const std::string& name) {
  std::set<std::string> names;
  collect_names(body, names);
  return names.count(name) > 0;
}

}  // namespace

PassResult generalize_to_e2(const ConceptUnit& e1) {
  if (e1.level != Level::E1 || !validate(e1).empty()) {
    throw PassError(PassErrorKind::NotE1, e1.name + " does not satisfy E1 discipline");
  }
  const TypeRegistry& registry = default_registry();
  const Attribute* set_attr = nullptr;
  const Attribute* numlist = nullptr;
  const Attribute* agent = nullptr;
  for (const auto& a : e1.attributes) {
    TypeInfo info = registry.lookup(a.type);
    if (!a.is_const && info.category == TypeCategory::Collection && !info.ordered && !set_attr) set_attr = &a;
    if (a.is_const && a.type.name == "intList" && !numlist) numlist = &a;
    if (!a.is_const && info.category == TypeCategory::Agent && !agent) agent = &a;
  }
  const Operation* op = nullptr;
  for (const auto& o : e1.operations) {
    if (!op && count_loops(o.body) > 0) op = &o;
  }
  const Statement* loop = op ? find_action_loop(op->body) : nullptr;
  if (!set_attr || !agent || !loop || !e1.find_attribute("result")) {
    throw PassError(PassErrorKind::InvalidInput, e1.name + " has no counting core to generalize");
  }
  std::string list_local, element_local;
  std::vector<const Statement*> locals;
  collect_locals(op->body, locals);
  for (const auto* l : locals) {
    TypeInfo info = registry.lookup(l->type);
    if (info.category == TypeCategory::Collection && info.ordered && list_local.empty()) list_local = l->name;
    if (info.category == TypeCategory::Entity && element_local.empty()) element_local = l->name;
  }
  if (list_local.empty() || element_local.empty()) {
    throw PassError(PassErrorKind::InvalidInput, e1.name + " keeps no ordered list of counted objects");
  }

  PhaseReport report;
  report.phase = Phase::P2;
  report.inputs.push_back(e1.name);
  const std::string class_name = strip_domain_suffix(e1.name, e1.domain);

  note(report, "widen-collection", set_attr->type.name + " " + set_attr->name + " -> objectSet object_set");
  if (numlist) note(report, "hoist-numlist", "const intList " + numlist->name + " -> Globals, declared friend");

  std::vector<Statement> actions;
  for (const auto& s : loop->body) {
    auto shape = shape_of(s);
    if (!shape) continue;
    if (shape->verb == Verb::Move) {
      std::string text = dsl::print_expr(s.expr);
      report.dropped.emplace_back(text, "motor detail");
      note(report, "drop-motor-detail", text);
      continue;
    }
    actions.push_back(s);
  }
  std::map<std::string, std::string> names{{element_local, "an_object"}, {agent->name, "p"}};
  rename(actions, names);

  std::vector<const Attribute*> kept_consts;
  for (const auto& a : e1.attributes) {
    if (!a.is_const || &a == numlist) continue;
    if (mentions(actions, a.name)) {
      kept_consts.push_back(&a);
    } else {
      report.dropped.emplace_back(a.name, "used only by dropped motor detail");
      note(report, "drop-motor-detail", a.name);
    }
  }
  note(report, "promote-shared-local", list_local + " -> objectList object_list");
  note(report, "split-operation", op->name + " -> Index, OneToOneMap, GetResult, Counting");
  note(report, "publicize", "operations public, attributes protected");
  note(report, "synthesize-fetch", "FetchObjects(objectSet objects, int k)");
  const bool trailing = closes_with_numeral(op->body);

  Indented out;
  if (numlist) out.line(0, "const intList " + numlist->name + ";");
  out.line(0, "@level(E2)");
  out.line(0, "@domain(numbers)");
  out.line(0, "class " + class_name + " {");
  out.line(0, "protected:");
  if (numlist) out.line(1, "friend " + numlist->name + ";");
  for (const auto* a : kept_consts) out.line(1, "const " + a->type.name + " " + a->name + ";");
  out.line(1, "Person p;");
  out.line(1, "objectSet object_set;");
  out.line(1, "objectList object_list;");
  out.line(1, "int result;");
  out.line(0, "public:");
  out.line(1, "void Index(objectSet objects) {");
  out.line(2, "Object an_object;");
  out.line(2, "while (!objects.Empty()) {");
  out.line(3, "an_object = objects.SelectOneRandom();");
  out.line(3, "object_list.Append(an_object);");
  out.line(3, "objects.Delete(an_object);");
  out.line(2, "}");
  out.line(1, "}");
  out.line(1, "void OneToOneMap(objectList objects) {");
  out.line(2, "Object an_object;");
  if (numlist) out.line(2, "Sound numeral;");
  out.line(2, "result = 0;");
  out.line(2, "an_object = objects.First();");
  if (numlist) out.line(2, "numeral = " + numlist->name + ".First();");
  out.line(2, "while (an_object != NULL) {");
  out.os << dsl::print_statements(actions, 3);
  out.line(3, "result++;");
  out.line(3, "an_object = objects.Next();");
  if (numlist) {
    out.line(3, "if (an_object != NULL) {");
    out.line(4, "numeral = " + numlist->name + ".Next();");
    out.line(3, "}");
  }
  out.line(2, "}");
  if (trailing && numlist) {
    out.line(2, "if (result > 0) {");
    out.line(3, "p.Say(numeral);");
    out.line(2, "}");
  }
  out.line(1, "}");
  out.line(1, "int GetResult() {");
  out.line(2, "return result;");
  out.line(1, "}");
  out.line(1, "int " + class_name + "() {");
  out.line(2, "Index(object_set);");
  out.line(2, "OneToOneMap(object_list);");
  out.line(2, "return GetResult();");
  out.line(1, "}");
  out.line(1, "int FetchObjects(objectSet objects, int k) {");
  out.line(2, "int i;");
  out.line(2, "object_set = objects;");
  out.line(2, "if (" + class_name + "() < k) {");
  out.line(3, "p.Say(\"Error\");");
  out.line(3, "return 0;");
  out.line(2, "}");
  out.line(2, "i = 0;");
  out.line(2, "while (i < k) {");
  out.line(3, "p.TakeAway(objects.SelectOneRandom());");
  out.line(3, "i++;");
  out.line(2, "}");
  out.line(2, "return i;");
  out.line(1, "}");
  out.line(0, "}");

  PassResult result{parse_generated(out.os.str()), std::move(report)};
  for (const auto& u : result.units) result.report.outputs.push_back(u.name);
  return result;
}

// --- P3: decomposition into cooperating concepts ---------------------------

PassResult decompose_to_e3(const UnitSet& e2) {
  const ConceptUnit* cls = nullptr;
  for (const auto& u : e2) {
    if (u.is_globals()) continue;
    if (u.level != Level::E2 || !validate(u).empty()) {
      throw PassError(PassErrorKind::NotE2, u.name + " does not satisfy E2 discipline");
    }
    if (!cls && u.find_operation("Index", 1) && u.find_operation("OneToOneMap", 1)) cls = &u;
  }
  if (!cls) throw PassError(PassErrorKind::NotE2, "no E2 class with Index and OneToOneMap");
  const Operation* index = cls->find_operation("Index", 1);
  const Operation* map = cls->find_operation("OneToOneMap", 1);
  const Operation* driver = cls->find_operation(cls->name, 0);
  const Operation* fetch = cls->find_operation("FetchObjects", 2);
  if (!driver) throw PassError(PassErrorKind::NotE2, cls->name + " has no driver operation " + cls->name + "()");

  std::string numlist = "numlist";
  for (const auto& f : cls->friends) numlist = f.name;

  PhaseReport report;
  report.phase = Phase::P3;
  for (const auto& u : e2) report.inputs.push_back(u.name);

  std::vector<Statement> index_body;
  for (const auto& s : index->body) {
    if (s.kind != StmtKind::LocalDecl) index_body.push_back(s);
  }
  rename(index_body, {{index->params[0].name, "set1"}});
  std::vector<Statement> map_body;
  for (const auto& s : map->body) {
    if (s.kind != StmtKind::LocalDecl) map_body.push_back(s);
  }
  rename(map_body, {{map->params[0].name, "object_list"}});
  replace_cursor_calls(map_body, numlist, Expr::call(Expr::name("OrdinalNumber"), "GetNext", {}));
  note(report, "extract-ordinal", numlist + " cursor -> OrdinalNumber.GetNext()");
  note(report, "extract-set", "objectSet -> Set with cardinalSum and irrelevance flags");
  note(report, "inline-driver", "Index and OneToOneMap inlined into " + driver->name + "()");

  std::vector<std::string> local_lines;
  std::set<std::string> declared;
  auto declare = [&](const std::string& type, const std::string& name) {
    if (declared.insert(name).second) local_lines.push_back(type + " " + name + ";");
  };
  for (const auto& a : cls->attributes) {
    if (a.name == "object_list" || a.name == "result") declare(a.type.name, a.name);
  }
  std::vector<const Statement*> locals;
  collect_locals(index->body, locals);
  collect_locals(map->body, locals);
  for (const auto* l : locals) declare(l->type.name, l->name);
  report.dropped.emplace_back("GetResult", "result is local to Counting");

  Indented out;
  out.line(0, "@level(E3)");
  out.line(0, "@domain(numbers)");
  out.line(0, "class OrdinalNumber {");
  out.line(0, "public:");
  out.line(1, "const intList " + numlist + ";");
  out.line(1, "int current, pre, succ;");
  out.line(1, "Sound GetNext() {");
  out.line(2, "Sound numeral;");
  out.line(2, "if (current == 0) {");
  out.line(3, "numeral = " + numlist + ".First();");
  out.line(2, "} else {");
  out.line(3, "numeral = " + numlist + ".Next();");
  out.line(2, "}");
  out.line(2, "pre = current;");
  out.line(2, "current++;");
  out.line(2, "succ = current + 1;");
  out.line(2, "return numeral;");
  out.line(1, "}");
  out.line(1, "int GetPre() {");
  out.line(2, "return pre;");
  out.line(1, "}");
  out.line(1, "int GetCurrent() {");
  out.line(2, "return current;");
  out.line(1, "}");
  out.line(0, "}");
  out.line(0, "@level(E3)");
  out.line(0, "@domain(numbers)");
  out.line(0, "class Set {");
  out.line(0, "public:");
  out.line(1, "objectList objlist;");
  out.line(1, "Boolean item_type_be_similar, item_sequence, item_arrangement;");
  out.line(1, "int cardinalSum;");
  out.line(0, "}");
  out.line(0, "@level(E3)");
  out.line(0, "@domain(numbers)");
  out.line(0, "class " + cls->name + " {");
  out.line(0, "public:");
  out.line(1, "Person p;");
  out.line(1, "Set set1, set2;");
  out.line(1, "int " + driver->name + "() {");
  for (const auto& l : local_lines) out.line(2, l);
  out.line(2, "if (set1.cardinalSum != NULL) {");
  out.line(3, "return set1.cardinalSum;");
  out.line(2, "}");
  out.line(2, "OrdinalNumber.current = 0;");
  out.os << dsl::print_statements(index_body, 2) << dsl::print_statements(map_body, 2);
  out.line(2, "set1.cardinalSum = result;");
  out.line(2, "return result;");
  out.line(1, "}");
  out.line(1, "Boolean Can_Match_Discretely(Set set1, Set set2) {");
  out.line(2, "Object a;");
  out.line(2, "Object b;");
  out.line(2, "while (!set1.Empty() && !set2.Empty()) {");
  out.line(3, "a = set1.SelectOneRandom();");
  out.line(3, "b = set2.SelectOneRandom();");
  out.line(3, "p.PointTo(a);");
  out.line(3, "p.PointTo(b);");
  out.line(3, "set1.Delete(a);");
  out.line(3, "set2.Delete(b);");
  out.line(2, "}");
  out.line(2, "return set1.Empty() && set2.Empty();");
  out.line(1, "}");
  out.line(1, "int OneToOneMap(Set set1, Set set2) {");
  out.line(2, "if (Can_Match_Discretely(set1, set2)) {");
  out.line(3, "set2.cardinalSum = set1.cardinalSum;");
  out.line(3, "return 0;");
  out.line(2, "}");
  out.line(2, "while (!set1.Empty() && !set2.Empty()) {");
  out.line(3, "set1.Delete(set1.SelectOneRandom());");
  out.line(3, "set2.Delete(set2.SelectOneRandom());");
  out.line(2, "}");
  out.line(2, "if (set1.Empty()) {");
  out.line(3, "return -1;");
  out.line(2, "}");
  out.line(2, "return 1;");
  out.line(1, "}");
  note(report, "pairwise-matching", "Can_Match_Discretely(set1, set2), OneToOneMap(set1, set2)");
  if (fetch) {
    Operation carried = *fetch;
    for (auto& p : carried.params) {
      if (default_registry().is_collection(p.type)) p.type = TypeRef{"Set"};
    }
    rename(carried.body, {{"object_set", "set1"}});
    out.line(1, "int FetchObjects(" + carried.params[0].type.name + " " + carried.params[0].name + ", " +
                    carried.params[1].type.name + " " + carried.params[1].name + ") {");
    out.os << dsl::print_statements(carried.body, 2);
    out.line(1, "}");
    note(report, "carry-fetch", "FetchObjects now takes a Set");
  }
  out.line(0, "}");

  PassResult result{parse_generated(out.os.str()), std::move(report)};
  for (const auto& u : result.units) result.report.outputs.push_back(u.name);
  return result;
}

// --- mastery ---------------------------------------------------------------

void MasteryLog::append(MasteryEntry entry) {
  if (!entries_.empty() && entry.tick <= entries_.back().tick) {
    throw std::invalid_argument("mastery log ticks must strictly increase");
  }
  entries_.push_back(std::move(entry));
}

void MasteryLog::record(std::string unit, Level level, std::string world, bool success) {
  append({std::move(unit), level, std::move(world), success, last_tick() + 1});
}

MasteryStatus mastery_check(const MasteryLog& log, const ConceptUnit& unit, int threshold) {
  if (threshold < 1) throw std::invalid_argument("threshold must be at least 1");
  std::set<std::string> worlds;
  for (const auto& e : log.entries()) {
    if (e.success && e.unit == unit.name && e.level == unit.level) worlds.insert(e.world);
  }
  MasteryStatus status;
  status.count = static_cast<int>(worlds.size());
  status.ready = status.count >= threshold;
  return status;
}

}  // namespace rr
