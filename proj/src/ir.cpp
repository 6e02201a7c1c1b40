#include "rr/ir.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace rr {

std::string_view to_string(Level level) {
  switch (level) {
    case Level::I: return "I";
    case Level::E1: return "E1";
    case Level::E2: return "E2";
    case Level::E3: return "E3";
  }
  return "?";
}

std::string_view to_string(Visibility visibility) {
  switch (visibility) {
    case Visibility::Private: return "private";
    case Visibility::Protected: return "protected";
    case Visibility::Public: return "public";
  }
  return "?";
}

std::string_view to_string(UnitKind kind) { return kind == UnitKind::Instance ? "instance" : "class"; }

std::optional<Level> parse_level(std::string_view text) {
  for (Level level : kAllLevels) {
    if (to_string(level) == text) return level;
  }
  return std::nullopt;
}

std::optional<Visibility> parse_visibility(std::string_view text) {
  for (Visibility v : {Visibility::Private, Visibility::Protected, Visibility::Public}) {
    if (to_string(v) == text) return v;
  }
  return std::nullopt;
}

// --- Expr / Statement construction -----------------------------------------

Expr Expr::name(std::string id, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::Name;
  e.text = std::move(id);
  e.pos = pos;
  return e;
}

Expr Expr::integer(std::int64_t value) {
  Expr e;
  e.kind = ExprKind::Int;
  e.number = value;
  return e;
}

Expr Expr::string(std::string value) {
  Expr e;
  e.kind = ExprKind::String;
  e.text = std::move(value);
  return e;
}

Expr Expr::boolean(bool value) {
  Expr e;
  e.kind = ExprKind::Bool;
  e.number = value ? 1 : 0;
  return e;
}

Expr Expr::null() { return Expr{}; }

Expr Expr::member(Expr object, std::string member) {
  Expr e;
  e.kind = ExprKind::Member;
  e.text = std::move(member);
  e.children.push_back(std::move(object));
  return e;
}

Expr Expr::call(std::optional<Expr> receiver, std::string method, std::vector<Expr> args) {
  Expr e;
  e.kind = ExprKind::Call;
  e.text = std::move(method);
  if (receiver) {
    e.has_receiver = true;
    e.children.push_back(std::move(*receiver));
  }
  for (auto& a : args) e.children.push_back(std::move(a));
  return e;
}

Expr Expr::unary(std::string op, Expr operand) {
  Expr e;
  e.kind = ExprKind::Unary;
  e.text = std::move(op);
  e.children.push_back(std::move(operand));
  return e;
}

Expr Expr::binary(std::string op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = ExprKind::Binary;
  e.text = std::move(op);
  e.children.push_back(std::move(lhs));
  e.children.push_back(std::move(rhs));
  return e;
}

std::vector<Expr> Expr::call_args() const {
  return {children.begin() + (has_receiver ? 1 : 0), children.end()};
}

namespace {

constexpr std::pair<Verb, std::string_view> kVerbs[] = {
    {Verb::Move, "Move"},         {Verb::PointTo, "PointTo"},
    {Verb::Say, "Say"},           {Verb::TakeAway, "TakeAway"},
    {Verb::SelectOneRandom, "SelectOneRandom"}, {Verb::Append, "Append"},
    {Verb::Delete, "Delete"},     {Verb::Empty, "Empty"},
    {Verb::First, "First"},       {Verb::Next, "Next"},
};

}  // namespace

std::optional<Verb> parse_verb(std::string_view method) {
  for (auto [verb, name] : kVerbs) {
    if (name == method) return verb;
  }
  return std::nullopt;
}

std::string_view to_string(Verb verb) {
  for (auto [v, name] : kVerbs) {
    if (v == verb) return name;
  }
  return "?";
}

bool is_agent_verb(Verb verb) {
  return verb == Verb::Move || verb == Verb::PointTo || verb == Verb::Say || verb == Verb::TakeAway;
}

bool is_setup_predicate(std::string_view name) { return name == "In" || name == "On" || name == "InLine"; }

Statement Statement::setup(std::string predicate, std::vector<Expr> args) {
  Statement s;
  s.kind = StmtKind::Setup;
  s.name = std::move(predicate);
  s.args = std::move(args);
  return s;
}

Statement Statement::action(Expr call) {
  Statement s;
  s.kind = StmtKind::Action;
  s.expr = std::move(call);
  return s;
}

Statement Statement::call(Expr call) {
  Statement s;
  s.kind = StmtKind::Call;
  s.expr = std::move(call);
  return s;
}

Statement Statement::assign(Expr target, Expr value) {
  Statement s;
  s.kind = StmtKind::Assign;
  s.target = std::move(target);
  s.expr = std::move(value);
  return s;
}

Statement Statement::increment(Expr target) {
  Statement s;
  s.kind = StmtKind::Increment;
  s.target = std::move(target);
  return s;
}

Statement Statement::while_loop(Expr cond, std::vector<Statement> body) {
  Statement s;
  s.kind = StmtKind::While;
  s.expr = std::move(cond);
  s.body = std::move(body);
  return s;
}

Statement Statement::if_else(Expr cond, std::vector<Statement> then_body, std::vector<Statement> else_body) {
  Statement s;
  s.kind = StmtKind::If;
  s.expr = std::move(cond);
  s.body = std::move(then_body);
  s.else_body = std::move(else_body);
  return s;
}

Statement Statement::ret(std::optional<Expr> value) {
  Statement s;
  s.kind = StmtKind::Return;
  if (value) {
    s.has_expr = true;
    s.expr = std::move(*value);
  }
  return s;
}

Statement Statement::local(std::string name, TypeRef type) {
  Statement s;
  s.kind = StmtKind::LocalDecl;
  s.name = std::move(name);
  s.type = std::move(type);
  return s;
}

Statement Statement::block(std::string label, std::vector<Expr> args, std::vector<Statement> body) {
  Statement s;
  s.kind = StmtKind::Block;
  s.name = std::move(label);
  s.args = std::move(args);
  s.body = std::move(body);
  return s;
}

Statement expression_statement(Expr call) {
  if (call.kind == ExprKind::Call && call.has_receiver && parse_verb(call.text)) {
    return Statement::action(std::move(call));
  }
  return Statement::call(std::move(call));
}

// --- ConceptUnit -----------------------------------------------------------

const Attribute* ConceptUnit::find_attribute(std::string_view attr) const {
  for (const auto& a : attributes) {
    if (a.name == attr) return &a;
  }
  return nullptr;
}

const Operation* ConceptUnit::find_operation(std::string_view op) const {
  for (const auto& o : operations) {
    if (o.name == op) return &o;
  }
  return nullptr;
}

const Operation* ConceptUnit::find_operation(std::string_view op, std::size_t arity) const {
  for (const auto& o : operations) {
    if (o.name == op && o.params.size() == arity) return &o;
  }
  return nullptr;
}

const Operation* ConceptUnit::entrance() const {
  for (const auto& o : operations) {
    if (o.implicit) return &o;
  }
  return nullptr;
}

bool ConceptUnit::has_friend(std::string_view name) const {
  return std::any_of(friends.begin(), friends.end(), [&](const FriendDecl& f) { return f.name == name; });
}

const ConceptUnit* find_unit(const UnitSet& units, std::string_view name) {
  for (const auto& u : units) {
    if (u.name == name) return &u;
  }
  return nullptr;
}

// --- TypeRegistry ----------------------------------------------------------

namespace {

std::string upper_prefix(std::string_view kind) {
  std::string out;
  for (char c : kind.substr(0, 3)) out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return out;
}

bool is_prefixed_collection(std::string_view name, std::string_view suffix) {
  return name.size() == 4 + suffix.size() && name[3] == '_' && name.substr(4) == suffix &&
         std::all_of(name.begin(), name.begin() + 3, [](char c) { return std::isupper(static_cast<unsigned char>(c)); });
}

}  // namespace

TypeRegistry::TypeRegistry() {
  for (const char* t : {"int", "Number"}) add(t, {TypeCategory::Int, "", false});
  add("Boolean", {TypeCategory::Bool, "", false});
  for (const char* t : {"Sound", "Token", "Hand", "Arrangement", "Change"}) add(t, {TypeCategory::Token, "", false});
  add("Person", {TypeCategory::Agent, "", false});
  add("intList", {TypeCategory::Collection, "", true});
  add("objectSet", {TypeCategory::Collection, "", false});
  add("Set", {TypeCategory::Collection, "", false});
  add("objectList", {TypeCategory::Collection, "", true});
  add("List", {TypeCategory::Collection, "", true});
  add("Object", {TypeCategory::Entity, "", false});
}

void TypeRegistry::add(std::string name, TypeInfo info) { types_[std::move(name)] = std::move(info); }

TypeInfo TypeRegistry::lookup(const TypeRef& type) const {
  if (auto it = types_.find(type.name); it != types_.end()) return it->second;
  if (is_prefixed_collection(type.name, "Set")) return {TypeCategory::Collection, type.name.substr(0, 3), false};
  if (is_prefixed_collection(type.name, "List")) return {TypeCategory::Collection, type.name.substr(0, 3), true};
  if (!type.name.empty() && std::isupper(static_cast<unsigned char>(type.name[0]))) {
    return {TypeCategory::Entity, type.name, false};
  }
  return {};
}

bool TypeRegistry::accepts(const TypeRef& type, std::string_view kind) const {
  TypeInfo info = lookup(type);
  if (info.category == TypeCategory::Entity) return info.element_kind == "Object" || info.element_kind == kind;
  if (info.category != TypeCategory::Collection) return false;
  return info.element_kind.empty() || info.element_kind == upper_prefix(kind);
}

TypeRef TypeRegistry::widen(const TypeRef& type) const {
  TypeInfo info = lookup(type);
  if (info.category == TypeCategory::Collection && !info.element_kind.empty()) {
    return TypeRef{info.ordered ? "objectList" : "objectSet"};
  }
  if (info.category == TypeCategory::Entity) return TypeRef{"Object"};
  return type;
}

TypeRef TypeRegistry::set_type_for(std::string_view kind) { return TypeRef{upper_prefix(kind) + "_Set"}; }
TypeRef TypeRegistry::list_type_for(std::string_view kind) { return TypeRef{upper_prefix(kind) + "_List"}; }

const TypeRegistry& default_registry() {
  static const TypeRegistry registry;
  return registry;
}

// --- Validation ------------------------------------------------------------

namespace {

bool starts_upper(std::string_view s) { return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])); }

struct Validator {
  const ConceptUnit& unit;
  std::vector<Diagnostic> out;

  void report(std::string rule, std::string location, std::string message, SourcePos pos = {}) {
    out.push_back({std::move(rule), unit.name, std::move(location), std::move(message), pos});
  }

  void check_names(const Expr& e, const std::set<std::string>& scope, const std::string& where) {
    switch (e.kind) {
      case ExprKind::Name:
        if (scope.count(e.text) || unit.find_attribute(e.text) || unit.has_friend(e.text)) return;
        if (unit.level == Level::I) {
          report("LevelDiscipline", where, "level I bodies may only reference declared constants, found '" + e.text + "'",
                 e.pos);
        } else if (!starts_upper(e.text)) {
          report("UnboundName", where, "identifier '" + e.text + "' does not resolve", e.pos);
        }
        return;
      case ExprKind::Call:
        if (!e.has_receiver && !unit.find_operation(e.text)) {
          report("UnboundName", where, "operation '" + e.text + "' is not defined on " + unit.name, e.pos);
        }
        break;
      default:
        break;
    }
    for (const auto& c : e.children) check_names(c, scope, where);
  }

  void check_body(const std::vector<Statement>& body, const Operation& op, std::set<std::string>& scope) {
    const std::string where = unit.name + "." + op.name;
    for (const auto& s : body) {
      if (unit.level == Level::I && s.kind != StmtKind::Setup && s.kind != StmtKind::Action) {
        report("LevelDiscipline", where, "level I bodies are straight-line atomic actions and setup predicates", s.pos);
      }
      switch (s.kind) {
        case StmtKind::Setup:
          if (!is_setup_predicate(s.name)) report("UnknownPredicate", where, "unknown setup predicate " + s.name, s.pos);
          for (const auto& a : s.args) check_names(a, scope, where);
          break;
        case StmtKind::Action: {
          auto verb = parse_verb(s.expr.text);
          auto args = s.expr.call_args();
          if (verb && (*verb == Verb::PointTo || *verb == Verb::TakeAway || *verb == Verb::Say) && args.size() != 1) {
            report("ActionArity", where, std::string(to_string(*verb)) + " takes exactly one argument", s.pos);
          }
          check_names(s.expr, scope, where);
          break;
        }
        case StmtKind::Call:
          check_names(s.expr, scope, where);
          break;
        case StmtKind::Assign:
        case StmtKind::Increment:
          check_names(s.target, scope, where);
          if (s.kind == StmtKind::Assign) check_names(s.expr, scope, where);
          break;
        case StmtKind::While:
          if (s.body.empty()) report("EmptyLoop", where, "while bodies must be non-empty", s.pos);
          check_names(s.expr, scope, where);
          check_body(s.body, op, scope);
          break;
        case StmtKind::If:
          check_names(s.expr, scope, where);
          check_body(s.body, op, scope);
          check_body(s.else_body, op, scope);
          break;
        case StmtKind::Return:
          if (s.has_expr && !op.returns) report("ReturnInVoid", where, "return with a value in a void operation", s.pos);
          if (s.has_expr) check_names(s.expr, scope, where);
          break;
        case StmtKind::LocalDecl:
          scope.insert(s.name);
          break;
        case StmtKind::Block:
          for (const auto& a : s.args) check_names(a, scope, where);
          check_body(s.body, op, scope);
          break;
      }
    }
  }

  // Every local declared anywhere in the body, nested blocks included.
  static void collect_locals(const std::vector<Statement>& body, std::set<std::string>& scope) {
    for (const auto& s : body) {
      if (s.kind == StmtKind::LocalDecl) scope.insert(s.name);
      collect_locals(s.body, scope);
      collect_locals(s.else_body, scope);
    }
  }

  void run() {
    std::set<std::string> seen;
    for (const auto& a : unit.attributes) {
      if (!seen.insert(a.name).second) report("DuplicateMember", unit.name, "attribute '" + a.name + "' declared twice", a.pos);
      if (a.is_const && a.literal.kind == LiteralKind::Symbol && a.literal.text.empty()) {
        report("ConstLiteral", unit.name + "." + a.name, "const attribute carries no literal", a.pos);
      }
    }
    for (const auto& op : unit.operations) {
      std::set<std::string> scope;
      for (const auto& p : op.params) {
        if (!scope.insert(p.name).second) {
          report("DuplicateParam", unit.name + "." + op.name, "parameter '" + p.name + "' repeated", op.pos);
        }
      }
      collect_locals(op.body, scope);
      check_body(op.body, op, scope);
    }
    if (!unit.friends.empty() && unit.level < Level::E2) {
      report("LevelDiscipline", unit.name, "friend declarations require level E2 or above", unit.pos);
    }
    if (unit.is_globals()) {
      for (const auto& a : unit.attributes) {
        if (!a.is_const) report("GlobalsConst", unit.name + "." + a.name, "global attributes must be const", a.pos);
      }
      return;
    }
    check_level();
  }

  void check_level() {
    const std::string lvl(to_string(unit.level));
    auto violation = [&](const std::string& msg) { report("LevelDiscipline", unit.name, lvl + ": " + msg, unit.pos); };
    switch (unit.level) {
      case Level::I:
        if (unit.kind != UnitKind::Instance) violation("unit must be an instance");
        for (const auto& a : unit.attributes) {
          if (!a.is_const) violation("attribute '" + a.name + "' is not a bound constant");
          if (a.visibility != Visibility::Private) violation("attribute '" + a.name + "' is not private");
        }
        for (const auto& op : unit.operations) {
          if (op.visibility != Visibility::Private) violation("operation '" + op.name + "' is not private");
          if (!op.implicit) violation("operation '" + op.name + "' is a function definition; instances are straight-line");
          if (!op.params.empty()) violation("operation '" + op.name + "' takes parameters");
        }
        break;
      case Level::E1: {
        if (unit.kind != UnitKind::Class) violation("unit must be a class");
        for (const auto& op : unit.operations) {
          if (op.visibility == Visibility::Public) violation("operation '" + op.name + "' is more visible than protected");
        }
        bool has_var = std::any_of(unit.attributes.begin(), unit.attributes.end(), [](auto& a) { return !a.is_const; });
        if (!has_var) violation("no parameterized variable attribute");
        int loops = 0;
        for (const auto& op : unit.operations) loops += count_loops(op.body);
        if (loops == 0) violation("no loop");
        break;
      }
      case Level::E2: {
        if (unit.kind != UnitKind::Class) violation("unit must be a class");
        for (const auto& op : unit.operations) {
          if (op.visibility != Visibility::Public) violation("operation '" + op.name + "' is not public");
        }
        for (const auto& a : unit.attributes) {
          if (a.visibility == Visibility::Public) violation("attribute '" + a.name + "' is more visible than protected");
        }
        std::set<std::string> names;
        for (const auto& op : unit.operations) names.insert(op.name);
        if (names.size() < 2) violation("fewer than two distinct operations");
        break;
      }
      case Level::E3:
        if (unit.kind != UnitKind::Class) violation("unit must be a class");
        for (const auto& a : unit.attributes) {
          if (a.visibility != Visibility::Public) violation("attribute '" + a.name + "' is not public");
        }
        for (const auto& op : unit.operations) {
          if (op.visibility != Visibility::Public) violation("operation '" + op.name + "' is not public");
        }
        break;
    }
  }
};

void collect_referenced_units(const Expr& e, std::set<std::string>& out) {
  if (e.kind == ExprKind::Name && starts_upper(e.text)) out.insert(e.text);
  for (const auto& c : e.children) collect_referenced_units(c, out);
}

void collect_referenced_units(const std::vector<Statement>& body, std::set<std::string>& out) {
  for (const auto& s : body) {
    collect_referenced_units(s.expr, out);
    collect_referenced_units(s.target, out);
    for (const auto& a : s.args) collect_referenced_units(a, out);
    if (s.kind == StmtKind::LocalDecl) out.insert(s.type.name);
    collect_referenced_units(s.body, out);
    collect_referenced_units(s.else_body, out);
  }
}

std::set<std::string> referenced_units(const ConceptUnit& unit) {
  std::set<std::string> out;
  for (const auto& a : unit.attributes) out.insert(a.type.name);
  for (const auto& op : unit.operations) {
    for (const auto& p : op.params) out.insert(p.type.name);
    if (op.returns) out.insert(op.returns->name);
    collect_referenced_units(op.body, out);
  }
  out.erase(unit.name);
  return out;
}

}  // namespace

std::vector<Diagnostic> validate(const ConceptUnit& unit) {
  Validator v{unit, {}};
  v.run();
  return std::move(v.out);
}

std::vector<Diagnostic> validate_set(const UnitSet& units, const std::set<std::string>& external) {
  std::vector<Diagnostic> out;
  std::set<std::pair<std::string, Level>> keys;
  for (const auto& u : units) {
    auto d = validate(u);
    out.insert(out.end(), d.begin(), d.end());
    if (!keys.insert({u.name, u.level}).second) {
      out.push_back({"DuplicateUnit", u.name, u.name, "two units share name and level " + std::string(to_string(u.level)), u.pos});
    }
  }
  const ConceptUnit* globals = find_unit(units, kGlobalsUnit);
  for (const auto& u : units) {
    for (const auto& f : u.friends) {
      bool found = find_unit(units, f.name) || external.count(f.name) || (globals && globals->find_attribute(f.name));
      if (!found) out.push_back({"UnknownFriend", u.name, u.name, "friend '" + f.name + "' does not exist", u.pos});
    }
  }
  // E3 cooperation: each E3 unit is linked to at least one other unit.
  std::map<std::string, std::set<std::string>> links;
  for (const auto& u : units) {
    if (u.level != Level::E3) continue;
    for (const auto& r : referenced_units(u)) {
      links[u.name].insert(r);
      links[r].insert(u.name);
    }
  }
  std::set<std::string> known = external;
  for (const auto& u : units) known.insert(u.name);
  for (const auto& u : units) {
    if (u.level != Level::E3) continue;
    const auto& l = links[u.name];
    bool cooperates = std::any_of(l.begin(), l.end(), [&](const std::string& n) { return known.count(n) > 0; });
    if (!cooperates) {
      out.push_back({"LevelDiscipline", u.name, u.name, "E3: unit does not cooperate with any other unit", u.pos});
    }
  }
  return out;
}

std::string format(const Diagnostic& d) {
  std::ostringstream os;
  if (d.pos.line > 0) os << d.pos.line << ":" << d.pos.column << ": ";
  os << d.rule << " [" << d.location << "] " << d.message;
  return os.str();
}

// --- Metrics ---------------------------------------------------------------

int count_loops(const std::vector<Statement>& body) {
  int n = 0;
  for (const auto& s : body) {
    if (s.kind == StmtKind::While) ++n;
    n += count_loops(s.body) + count_loops(s.else_body);
  }
  return n;
}

int LevelMetrics::member_count() const {
  int n = 0;
  for (auto& [_, c] : visibility_histogram) n += c;
  return n;
}

double LevelMetrics::publicness() const {
  int total = member_count();
  if (total == 0) return 0.0;
  auto get = [&](Visibility v) {
    auto it = visibility_histogram.find(v);
    return it == visibility_histogram.end() ? 0 : it->second;
  };
  return (2.0 * get(Visibility::Public) + get(Visibility::Protected)) / (2.0 * total);
}

LevelMetrics level_metrics(const UnitSet& units) {
  LevelMetrics m;
  for (const auto& u : units) {
    ++m.unit_count;
    for (const auto& a : u.attributes) {
      if (a.is_const) ++m.const_count;
      ++m.visibility_histogram[a.visibility];
    }
    for (const auto& op : u.operations) {
      ++m.operation_count;
      m.param_count += static_cast<int>(op.params.size());
      ++m.visibility_histogram[op.visibility];
      m.loop_count += count_loops(op.body);
    }
  }
  return m;
}

// --- Access ----------------------------------------------------------------

Visibility member_visibility(const ConceptUnit& target, std::string_view member) {
  if (const auto* a = target.find_attribute(member)) return a->visibility;
  if (const auto* o = target.find_operation(member)) return o->visibility;
  throw UnknownMemberError("unknown member '" + std::string(member) + "' on " + target.name);
}

AccessDecision check_access(std::string_view caller_domain, std::string_view caller_unit, const ConceptUnit& target,
                            std::string_view member) {
  Visibility v = member_visibility(target, member);
  if (caller_unit == target.name || v == Visibility::Public) return {true, {}};
  if (!caller_unit.empty() && target.has_friend(caller_unit)) return {true, {}};
  if (v == Visibility::Protected && caller_domain == target.domain) return {true, {}};
  std::ostringstream os;
  os << target.name << "." << member << " is " << to_string(v) << " in domain '" << target.domain << "'; caller '"
     << caller_unit << "' in domain '" << caller_domain << "'";
  return {false, os.str()};
}

// --- Structure -------------------------------------------------------------

namespace {

void collect_calls(const Expr& e, const ConceptUnit& unit, const std::set<std::string>& locals,
                   std::set<std::string>& out) {
  if (e.kind == ExprKind::Call) {
    if (!e.has_receiver) {
      out.insert(e.text);
    } else if (!parse_verb(e.text)) {
      const Expr& r = *e.receiver();
      if (r.kind == ExprKind::Name && !locals.count(r.text) && !unit.find_attribute(r.text)) {
        out.insert(r.text + "." + e.text);
      }
    }
  }
  for (const auto& c : e.children) collect_calls(c, unit, locals, out);
}

void collect_calls(const std::vector<Statement>& body, const ConceptUnit& unit, const std::set<std::string>& locals,
                   std::set<std::string>& out) {
  for (const auto& s : body) {
    collect_calls(s.expr, unit, locals, out);
    collect_calls(s.target, unit, locals, out);
    for (const auto& a : s.args) collect_calls(a, unit, locals, out);
    collect_calls(s.body, unit, locals, out);
    collect_calls(s.else_body, unit, locals, out);
  }
}

std::set<std::string> op_calls(const ConceptUnit& unit, const Operation& op) {
  std::set<std::string> locals;
  for (const auto& p : op.params) locals.insert(p.name);
  Validator::collect_locals(op.body, locals);
  std::set<std::string> out;
  collect_calls(op.body, unit, locals, out);
  return out;
}

}  // namespace

std::set<std::string> call_targets(const ConceptUnit& unit) {
  std::set<std::string> out;
  for (const auto& op : unit.operations) {
    auto c = op_calls(unit, op);
    out.insert(c.begin(), c.end());
  }
  return out;
}

std::vector<std::string> structural_signature(const UnitSet& units) {
  std::vector<std::string> lines;
  for (const auto& u : units) {
    std::ostringstream head;
    head << "unit " << u.name << " " << to_string(u.kind) << " level=" << to_string(u.level)
         << " attributes=" << u.attributes.size() << " operations=" << u.operations.size()
         << " friends=" << u.friends.size();
    lines.push_back(head.str());
    for (const auto& f : u.friends) lines.push_back("friend " + u.name + " " + f.name);
    for (const auto& a : u.attributes) {
      lines.push_back("attribute " + u.name + "." + a.name + " " + std::string(to_string(a.visibility)) +
                      (a.is_const ? " const" : ""));
    }
    for (const auto& op : u.operations) {
      lines.push_back("operation " + u.name + "." + op.name + "/" + std::to_string(op.params.size()) + " " +
                      std::string(to_string(op.visibility)));
      for (const auto& c : op_calls(u, op)) lines.push_back("call " + u.name + "." + op.name + " -> " + c);
    }
  }
  std::sort(lines.begin(), lines.end());
  return lines;
}

std::vector<std::string> structural_diff(const UnitSet& expected, const UnitSet& actual) {
  auto e = structural_signature(expected);
  auto a = structural_signature(actual);
  std::vector<std::string> missing, extra, out;
  std::set_difference(e.begin(), e.end(), a.begin(), a.end(), std::back_inserter(missing));
  std::set_difference(a.begin(), a.end(), e.begin(), e.end(), std::back_inserter(extra));
  for (auto& m : missing) out.push_back("- " + m);
  for (auto& x : extra) out.push_back("+ " + x);
  return out;
}

}  // namespace rr
