#include "rr/interpreter.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace rr {

std::string_view to_string(Arrangement a) {
  switch (a) {
    case Arrangement::Line: return "LINE";
    case Arrangement::Square: return "SQUARE";
    case Arrangement::Circle: return "CIRCLE";
    case Arrangement::Scattered: return "SCATTERED";
  }
  return "?";
}

std::optional<Arrangement> parse_arrangement(std::string_view text) {
  for (Arrangement a : {Arrangement::Line, Arrangement::Square, Arrangement::Circle, Arrangement::Scattered}) {
    if (to_string(a) == text) return a;
  }
  return std::nullopt;
}

std::vector<std::string> World::check() const {
  std::vector<std::string> problems;
  for (const auto& [name, ids] : containers) {
    for (const auto& id : ids) {
      if (!entities.count(id)) problems.push_back("container " + name + " holds unknown entity " + id);
    }
  }
  for (const auto& [group, _] : arrangements) {
    bool used = entities.count(group) > 0;
    for (const auto& [id, e] : entities) used = used || e.group == group;
    if (!used) problems.push_back("arrangement for unknown group " + group);
  }
  if (!focus.empty() && !containers.count(focus)) problems.push_back("focus container " + focus + " missing");
  return problems;
}

// --- Value -----------------------------------------------------------------

Value Value::integer(std::int64_t n) {
  Value v;
  v.kind = ValueKind::Int;
  v.number = n;
  return v;
}

Value Value::boolean(bool b) {
  Value v;
  v.kind = ValueKind::Bool;
  v.number = b ? 1 : 0;
  return v;
}

Value Value::token(std::string t) {
  Value v;
  v.kind = ValueKind::Token;
  v.text = std::move(t);
  return v;
}

Value Value::list(std::vector<std::string> items, std::string origin) {
  Value v;
  v.kind = ValueKind::List;
  v.items = std::move(items);
  v.origin = std::move(origin);
  return v;
}

Value Value::unit(std::string name) {
  Value v;
  v.kind = ValueKind::UnitRef;
  v.text = std::move(name);
  return v;
}

bool Value::truthy() const {
  switch (kind) {
    case ValueKind::Nothing: return false;
    case ValueKind::Int:
    case ValueKind::Bool: return number != 0;
    case ValueKind::List: return !items.empty();
    default: return true;
  }
}

std::string Value::describe() const {
  switch (kind) {
    case ValueKind::Nothing: return "Nothing";
    case ValueKind::Int: return "Int(" + std::to_string(number) + ")";
    case ValueKind::Bool: return number ? "Bool(true)" : "Bool(false)";
    case ValueKind::Token: return "Token(" + text + ")";
    case ValueKind::UnitRef: return "Unit(" + text + ")";
    case ValueKind::List: {
      std::string out = "List(";
      for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
      return out + ")";
    }
  }
  return "?";
}

Value container_value(const World& world, const std::string& container) {
  auto it = world.containers.find(container);
  Value v = Value::list(it == world.containers.end() ? std::vector<std::string>{} : it->second, container);
  if (auto c = world.cardinal_sums.find(container); c != world.cardinal_sums.end()) v.cardinal = c->second;
  return v;
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::PointedTo: return "PointedTo";
    case EventKind::Said: return "Said";
    case EventKind::Moved: return "Moved";
    case EventKind::TookAway: return "TookAway";
  }
  return "?";
}

std::string dump_trace(const Trace& trace) {
  std::ostringstream os;
  for (const auto& e : trace) os << e.seq << "\t" << to_string(e.kind) << "\t" << e.arg << "\n";
  return os.str();
}

std::string_view to_string(ExecErrorKind kind) {
  switch (kind) {
    case ExecErrorKind::AccessViolation: return "AccessViolation";
    case ExecErrorKind::UnboundName: return "UnboundName";
    case ExecErrorKind::TypeMismatch: return "TypeMismatch";
    case ExecErrorKind::SetupMismatch: return "SetupMismatch";
    case ExecErrorKind::StepLimitExceeded: return "StepLimitExceeded";
    case ExecErrorKind::EmptyCollection: return "EmptyCollection";
    case ExecErrorKind::MissingOperation: return "MissingOperation";
  }
  return "?";
}

ExecError::ExecError(ExecErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

std::vector<std::string> default_numerals() {
  return {"ONE",      "TWO",     "THREE",    "FOUR",     "FIVE",    "SIX",       "SEVEN",
          "EIGHT",    "NINE",    "TEN",      "ELEVEN",   "TWELVE",  "THIRTEEN",  "FOURTEEN",
          "FIFTEEN",  "SIXTEEN", "SEVENTEEN", "EIGHTEEN", "NINETEEN", "TWENTY"};
}

bool setup_holds(std::string_view predicate, const std::vector<std::string>& args, const World& world) {
  auto find = [&](const std::string& id) -> const Entity* {
    auto it = world.entities.find(id);
    return it == world.entities.end() ? nullptr : &it->second;
  };
  if (predicate == "In" || predicate == "On") {
    if (args.size() != 2) return false;
    const Entity* e = find(args[0]);
    return e && find(args[1]) && e->group == args[1];
  }
  if (predicate == "InLine") {
    if (args.empty()) return false;
    const Entity* first = find(args[0]);
    if (!first || first->group.empty()) return false;
    const std::string& group = first->group;
    auto arr = world.arrangements.find(group);
    if (arr == world.arrangements.end() || arr->second != Arrangement::Line) return false;
    std::set<std::string> expected(args.begin(), args.end());
    std::set<std::string> actual;
    for (const auto& [id, e] : world.entities) {
      if (e.group == group && e.kind == first->kind) actual.insert(id);
    }
    return expected == actual;
  }
  return false;
}

namespace {

bool all_in_line(const std::vector<std::string>& items, const World& world) {
  for (const auto& id : items) {
    auto e = world.entities.find(id);
    if (e == world.entities.end() || e->second.group.empty()) return false;
    auto a = world.arrangements.find(e->second.group);
    if (a == world.arrangements.end() || a->second != Arrangement::Line) return false;
  }
  return true;
}

std::string display(const Value& v) {
  switch (v.kind) {
    case ValueKind::Token:
    case ValueKind::UnitRef: return v.text;
    case ValueKind::Int: return std::to_string(v.number);
    case ValueKind::List: return v.origin.empty() ? v.describe() : v.origin;
    default: return v.describe();
  }
}

// Removes the item at `pos`; a cursor at or past it steps back so that Next()
// still yields the item that followed.
void erase_item(Value& list, std::vector<std::string>::iterator pos) {
  const auto index = static_cast<std::size_t>(pos - list.items.begin());
  list.items.erase(pos);
  if (!list.cursor || *list.cursor < index) return;
  if (*list.cursor == 0) {
    list.cursor.reset();
  } else {
    --*list.cursor;
  }
}

const std::string& entity_arg(const std::optional<Value>& arg, const World& world, Verb verb) {
  if (!arg || arg->kind != ValueKind::Token) {
    throw ExecError(ExecErrorKind::TypeMismatch,
                    std::string(to_string(verb)) + " expects an entity, got " + (arg ? arg->describe() : "nothing"));
  }
  if (!world.entities.count(arg->text)) {
    throw ExecError(ExecErrorKind::UnboundName, "no entity " + arg->text + " in the world");
  }
  return arg->text;
}

}  // namespace

PrimitiveResult eval_primitive(Verb verb, Value& subject, const std::optional<Value>& arg, World& world, Rng& rng) {
  PrimitiveResult r;
  auto need_list = [&] {
    if (subject.kind != ValueKind::List) {
      throw ExecError(ExecErrorKind::TypeMismatch, std::string(to_string(verb)) + " on non-collection " + subject.describe());
    }
  };
  switch (verb) {
    case Verb::Move:
      r.event = TraceEvent{EventKind::Moved, arg ? display(*arg) : "", 0};
      break;
    case Verb::PointTo:
      r.event = TraceEvent{EventKind::PointedTo, entity_arg(arg, world, verb), 0};
      break;
    case Verb::Say:
      if (!arg || (arg->kind != ValueKind::Token && arg->kind != ValueKind::Int)) {
        throw ExecError(ExecErrorKind::TypeMismatch, "Say expects a token, got " + (arg ? arg->describe() : "nothing"));
      }
      r.event = TraceEvent{EventKind::Said, display(*arg), 0};
      break;
    case Verb::TakeAway: {
      const std::string id = entity_arg(arg, world, verb);
      for (auto& [name, ids] : world.containers) {
        auto it = std::find(ids.begin(), ids.end(), id);
        if (it != ids.end()) {
          ids.erase(it);
          world.cardinal_sums.erase(name);
        }
      }
      r.event = TraceEvent{EventKind::TookAway, id, 0};
      break;
    }
    case Verb::SelectOneRandom:
      need_list();
      if (subject.items.empty()) throw ExecError(ExecErrorKind::EmptyCollection, "SelectOneRandom on an empty collection");
      // A row is scanned from its start; any other layout is sampled.
      r.value = Value::token(all_in_line(subject.items, world) ? subject.items.front()
                                                                : subject.items[rng.pick(subject.items.size())]);
      break;
    case Verb::Append:
      need_list();
      if (!arg || arg->kind != ValueKind::Token) throw ExecError(ExecErrorKind::TypeMismatch, "Append expects an element");
      subject.items.push_back(arg->text);
      break;
    case Verb::Delete: {
      need_list();
      if (!arg || arg->kind != ValueKind::Token) throw ExecError(ExecErrorKind::TypeMismatch, "Delete expects an element");
      auto it = std::find(subject.items.begin(), subject.items.end(), arg->text);
      if (it != subject.items.end()) erase_item(subject, it);
      break;
    }
    case Verb::Empty:
      need_list();
      r.value = Value::boolean(subject.items.empty());
      break;
    case Verb::First:
      need_list();
      subject.cursor = 0;
      if (!subject.items.empty()) r.value = Value::token(subject.items.front());
      break;
    case Verb::Next:
      need_list();
      subject.cursor = subject.cursor ? std::min(*subject.cursor + 1, subject.items.size()) : 0;
      if (*subject.cursor < subject.items.size()) r.value = Value::token(subject.items[*subject.cursor]);
      break;
  }
  return r;
}

// --- Machine ---------------------------------------------------------------

namespace {

using Slots = std::map<std::string, Value>;

struct Frame {
  const ConceptUnit* unit;
  const Operation* op;
  Slots locals;
};

struct Flow {
  bool returned = false;
  Value value;
};

class Machine {
 public:
  Machine(const UnitSet& kb, const ConceptUnit& target, const World& world, const ExecOptions& options)
      : kb_(kb), target_(target), world_(world), options_(options), rng_(world.rng_seed) {}

  ExecResult run(std::string_view op_name, const std::vector<Value>& args) {
    const Operation* op = target_.find_operation(op_name, args.size());
    if (!op && target_.kind == UnitKind::Instance && op_name == kEntranceOp) op = target_.entrance();
    if (!op) {
      throw ExecError(ExecErrorKind::MissingOperation,
                      target_.name + " has no operation " + std::string(op_name) + "/" + std::to_string(args.size()));
    }
    auto access = check_access(options_.caller_domain, options_.caller_unit, target_, op->name);
    if (!access.allowed) throw ExecError(ExecErrorKind::AccessViolation, access.reason);
    ExecResult result;
    result.value = invoke(target_, *op, args);
    result.trace = std::move(trace_);
    result.steps = steps_;
    result.world = std::move(world_);
    return result;
  }

 private:
  const ConceptUnit& unit_named(const std::string& name) {
    if (name == target_.name) return target_;
    if (const auto* u = find_unit(kb_, name)) return *u;
    throw ExecError(ExecErrorKind::UnboundName, "no unit " + name);
  }

  bool is_unit(const std::string& name) const { return name == target_.name || find_unit(kb_, name); }

  void step() {
    if (++steps_ > options_.step_limit) {
      throw ExecError(ExecErrorKind::StepLimitExceeded, "more than " + std::to_string(options_.step_limit) + " steps");
    }
  }

  Value default_value(const TypeRef& type, bool bind_to_world, const std::string& name) {
    TypeInfo info = default_registry().lookup(type);
    switch (info.category) {
      case TypeCategory::Int: return Value::integer(0);
      case TypeCategory::Bool: return Value::boolean(false);
      case TypeCategory::Agent: {
        for (const auto& [id, e] : world_.entities) {
          if (e.kind == "Person") return Value::token(id);
        }
        return Value::token("ME");
      }
      case TypeCategory::Collection: {
        if (!bind_to_world || info.ordered) return Value::list({});
        std::string source = world_.containers.count(name) ? name : world_.focus;
        if (source.empty() || !world_.containers.count(source)) return Value::list({});
        Value v = container_value(world_, source);
        for (const auto& id : v.items) {
          const auto& kind = world_.entities.at(id).kind;
          if (!default_registry().accepts(type, kind)) {
            throw ExecError(ExecErrorKind::TypeMismatch,
                            "attribute " + name + " of type " + type.name + " cannot hold " + kind + " " + id);
          }
        }
        return v;
      }
      default: return Value::nothing();
    }
  }

  Slots& state_of(const ConceptUnit& unit) {
    auto it = states_.find(unit.name);
    if (it != states_.end()) return it->second;
    Slots slots;
    for (const auto& a : unit.attributes) {
      if (a.is_const) {
        switch (a.literal.kind) {
          case LiteralKind::Int: slots[a.name] = Value::integer(a.literal.number); break;
          case LiteralKind::String: slots[a.name] = Value::token(a.literal.text); break;
          case LiteralKind::Symbol:
            if (default_registry().lookup(a.type).category == TypeCategory::Collection) {
              slots[a.name] = Value::list(options_.numerals);
            } else {
              slots[a.name] = Value::token(a.literal.text);
            }
            break;
        }
      } else {
        slots[a.name] = default_value(a.type, true, a.name);
      }
    }
    return states_.emplace(unit.name, std::move(slots)).first->second;
  }

  const ConceptUnit* globals() const { return find_unit(kb_, kGlobalsUnit); }

  // Storage for a name visible from the current frame, or nullptr.
  Value* slot(const std::string& name) {
    Frame& f = frames_.back();
    if (auto it = f.locals.find(name); it != f.locals.end()) return &it->second;
    Slots& own = state_of(*f.unit);
    if (auto it = own.find(name); it != own.end()) return &it->second;
    if (const ConceptUnit* g = globals(); g && g != f.unit && g->find_attribute(name)) {
      return &state_of(*g).at(name);
    }
    return nullptr;
  }

  void require_access(const ConceptUnit& target, const std::string& member) {
    const Frame& f = frames_.back();
    auto access = check_access(f.unit->domain, f.unit->name, target, member);
    if (!access.allowed) throw ExecError(ExecErrorKind::AccessViolation, access.reason);
  }

  Value* lvalue(const Expr& e) {
    if (e.kind == ExprKind::Name) {
      if (Value* v = slot(e.text)) return v;
      throw ExecError(ExecErrorKind::UnboundName, "'" + e.text + "' is not bound");
    }
    if (e.kind == ExprKind::Member && e.children[0].kind == ExprKind::Name) {
      const std::string& obj = e.children[0].text;
      if (!slot(obj) && is_unit(obj)) {
        const ConceptUnit& u = unit_named(obj);
        if (!u.find_attribute(e.text)) throw ExecError(ExecErrorKind::UnboundName, obj + " has no attribute " + e.text);
        require_access(u, e.text);
        return &state_of(u).at(e.text);
      }
    }
    return nullptr;
  }

  Value eval(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Name: {
        if (Value* v = slot(e.text)) return *v;
        if (is_unit(e.text)) return Value::unit(e.text);
        throw ExecError(ExecErrorKind::UnboundName, "'" + e.text + "' is not bound");
      }
      case ExprKind::Int: return Value::integer(e.number);
      case ExprKind::String: return Value::token(e.text);
      case ExprKind::Bool: return Value::boolean(e.number != 0);
      case ExprKind::Null: return Value::nothing();
      case ExprKind::Member: return eval_member(e);
      case ExprKind::Call: return eval_call(e);
      case ExprKind::Unary: {
        Value v = eval(e.children[0]);
        if (e.text == "!") return Value::boolean(!v.truthy());
        if (v.kind != ValueKind::Int) throw ExecError(ExecErrorKind::TypeMismatch, "negation of " + v.describe());
        return Value::integer(-v.number);
      }
      case ExprKind::Binary: return eval_binary(e);
    }
    return {};
  }

  Value eval_member(const Expr& e) {
    Value obj = eval(e.children[0]);
    if (obj.kind == ValueKind::UnitRef) {
      const ConceptUnit& u = unit_named(obj.text);
      if (!u.find_attribute(e.text)) throw ExecError(ExecErrorKind::UnboundName, obj.text + " has no attribute " + e.text);
      require_access(u, e.text);
      return state_of(u).at(e.text);
    }
    if (obj.kind == ValueKind::List) {
      if (e.text == "cardinalSum") {
        if (!obj.origin.empty()) {
          auto c = world_.cardinal_sums.find(obj.origin);
          return c == world_.cardinal_sums.end() ? Value::nothing() : Value::integer(c->second);
        }
        return obj.cardinal ? Value::integer(*obj.cardinal) : Value::nothing();
      }
      if (e.text == "objlist") return obj;
      if (e.text == "arrangement") {
        if (!obj.items.empty()) {
          const auto& group = world_.entities.at(obj.items.front()).group;
          if (auto a = world_.arrangements.find(group); a != world_.arrangements.end()) {
            return Value::token(std::string(to_string(a->second)));
          }
        }
        return Value::nothing();
      }
    }
    throw ExecError(ExecErrorKind::TypeMismatch, obj.describe() + " has no member " + e.text);
  }

  void assign_member(const Expr& target, const Value& value) {
    if (Value* direct = lvalue(target)) {
      *direct = value;
      return;
    }
    Value* obj = lvalue(target.children[0]);
    if (!obj || obj->kind != ValueKind::List) {
      throw ExecError(ExecErrorKind::TypeMismatch, "cannot assign to " + target.text);
    }
    if (target.text == "cardinalSum") {
      if (value.kind == ValueKind::Int) {
        obj->cardinal = value.number;
        if (!obj->origin.empty()) world_.cardinal_sums[obj->origin] = value.number;
      } else {
        obj->cardinal.reset();
        if (!obj->origin.empty()) world_.cardinal_sums.erase(obj->origin);
      }
      return;
    }
    if (target.text == "arrangement") {
      auto a = value.kind == ValueKind::Token ? parse_arrangement(value.text) : std::nullopt;
      if (!a) throw ExecError(ExecErrorKind::TypeMismatch, "not an arrangement: " + value.describe());
      std::set<std::string> groups;
      for (const auto& id : obj->items) groups.insert(world_.entities.at(id).group);
      for (const auto& g : groups) world_.arrangements[g] = *a;
      return;
    }
    throw ExecError(ExecErrorKind::TypeMismatch, "cannot assign member " + target.text);
  }

  Value eval_binary(const Expr& e) {
    const std::string& op = e.text;
    if (op == "&&") return Value::boolean(eval(e.children[0]).truthy() && eval(e.children[1]).truthy());
    if (op == "||") return Value::boolean(eval(e.children[0]).truthy() || eval(e.children[1]).truthy());
    Value l = eval(e.children[0]);
    Value r = eval(e.children[1]);
    if (op == "==" || op == "!=") {
      bool eq;
      if (l.kind == ValueKind::List && r.kind == ValueKind::List) {
        eq = l.items == r.items;
      } else if ((l.kind == ValueKind::Int || l.kind == ValueKind::Bool) &&
                 (r.kind == ValueKind::Int || r.kind == ValueKind::Bool)) {
        eq = l.number == r.number;
      } else {
        eq = l.kind == r.kind && l.text == r.text;
      }
      return Value::boolean(op == "==" ? eq : !eq);
    }
    if (l.kind != ValueKind::Int || r.kind != ValueKind::Int) {
      throw ExecError(ExecErrorKind::TypeMismatch, l.describe() + " " + op + " " + r.describe());
    }
    if (op == "<") return Value::boolean(l.number < r.number);
    if (op == ">") return Value::boolean(l.number > r.number);
    if (op == "<=") return Value::boolean(l.number <= r.number);
    if (op == ">=") return Value::boolean(l.number >= r.number);
    if (op == "+") return Value::integer(l.number + r.number);
    if (op == "-") return Value::integer(l.number - r.number);
    throw ExecError(ExecErrorKind::TypeMismatch, "unknown operator " + op);
  }

  Value eval_call(const Expr& e) {
    std::vector<Value> args;
    for (const auto& a : e.call_args()) args.push_back(eval(a));
    if (!e.has_receiver) {
      const ConceptUnit& self = *frames_.back().unit;
      const Operation* op = self.find_operation(e.text, args.size());
      if (!op) throw ExecError(ExecErrorKind::MissingOperation, self.name + " has no operation " + e.text);
      return invoke(self, *op, args);
    }
    const Expr& recv = *e.receiver();
    if (auto verb = parse_verb(e.text)) {
      std::optional<Value> arg;
      if (!args.empty()) arg = args.front();
      Value* subject = lvalue(recv);
      Value temp;
      if (!subject) {
        temp = eval(recv);
        subject = &temp;
      }
      PrimitiveResult r = eval_primitive(*verb, *subject, arg, world_, rng_);
      if (r.event) {
        r.event->seq = static_cast<int>(trace_.size());
        if (r.event->kind == EventKind::TookAway) forget(r.event->arg);
        trace_.push_back(*r.event);
      }
      return r.value;
    }
    Value target = eval(recv);
    if (target.kind != ValueKind::UnitRef) {
      throw ExecError(ExecErrorKind::TypeMismatch, "cannot call " + e.text + " on " + target.describe());
    }
    const ConceptUnit& u = unit_named(target.text);
    const Operation* op = u.find_operation(e.text, args.size());
    if (!op) {
      throw ExecError(ExecErrorKind::MissingOperation,
                      u.name + " has no operation " + e.text + "/" + std::to_string(args.size()));
    }
    require_access(u, op->name);
    return invoke(u, *op, args);
  }

  // An entity taken away leaves every collection the program holds.
  void forget(const std::string& id) {
    auto purge = [&](Slots& slots) {
      for (auto& [_, v] : slots) {
        if (v.kind != ValueKind::List) continue;
        auto it = std::find(v.items.begin(), v.items.end(), id);
        if (it != v.items.end()) {
          erase_item(v, it);
          v.cardinal.reset();
        }
      }
    };
    for (auto& f : frames_) purge(f.locals);
    for (auto& [_, s] : states_) purge(s);
  }

  Value invoke(const ConceptUnit& unit, const Operation& op, const std::vector<Value>& args) {
    if (frames_.size() > 256) throw ExecError(ExecErrorKind::StepLimitExceeded, "call depth exceeded");
    Frame frame{&unit, &op, {}};
    for (std::size_t i = 0; i < op.params.size(); ++i) {
      const Param& p = op.params[i];
      check_argument(p, args.at(i));
      frame.locals[p.name] = args[i];
    }
    state_of(unit);
    frames_.push_back(std::move(frame));
    check_setup(op);
    Flow flow = exec_block(op.body);
    frames_.pop_back();
    return flow.value;
  }

  void check_argument(const Param& p, const Value& v) {
    TypeInfo info = default_registry().lookup(p.type);
    auto mismatch = [&] {
      throw ExecError(ExecErrorKind::TypeMismatch, "parameter " + p.name + " of type " + p.type.name + " got " + v.describe());
    };
    if (info.category == TypeCategory::Int && v.kind != ValueKind::Int) mismatch();
    if (info.category == TypeCategory::Collection) {
      if (v.kind != ValueKind::List) mismatch();
      for (const auto& id : v.items) {
        auto e = world_.entities.find(id);
        if (e != world_.entities.end() && !default_registry().accepts(p.type, e->second.kind)) mismatch();
      }
    }
  }

  void check_setup(const Operation& op) {
    for (const auto& s : op.body) {
      if (s.kind != StmtKind::Setup) continue;
      std::vector<std::string> args;
      for (const auto& a : s.args) {
        Value v = eval(a);
        args.push_back(v.kind == ValueKind::Token ? v.text : v.describe());
      }
      if (!setup_holds(s.name, args, world_)) {
        std::string text = s.name + "(";
        for (std::size_t i = 0; i < args.size(); ++i) text += (i ? ", " : "") + args[i];
        throw ExecError(ExecErrorKind::SetupMismatch, text + ") does not hold in this world");
      }
    }
  }

  Flow exec_block(const std::vector<Statement>& body) {
    for (const auto& s : body) {
      Flow f = exec(s);
      if (f.returned) return f;
    }
    return {};
  }

  Flow exec(const Statement& s) {
    step();
    switch (s.kind) {
      case StmtKind::Setup:
        return {};
      case StmtKind::Action:
      case StmtKind::Call:
        eval(s.expr);
        return {};
      case StmtKind::Assign: {
        Value v = eval(s.expr);
        if (s.target.kind == ExprKind::Member) {
          assign_member(s.target, v);
        } else {
          Value* dst = lvalue(s.target);
          // Assigning a collection copies it but keeps the binding origin.
          *dst = std::move(v);
        }
        return {};
      }
      case StmtKind::Increment: {
        Value* dst = lvalue(s.target);
        if (!dst || dst->kind != ValueKind::Int) throw ExecError(ExecErrorKind::TypeMismatch, "increment of non-integer");
        ++dst->number;
        return {};
      }
      case StmtKind::While:
        while (eval(s.expr).truthy()) {
          Flow f = exec_block(s.body);
          if (f.returned) return f;
          step();
        }
        return {};
      case StmtKind::If:
        return exec_block(eval(s.expr).truthy() ? s.body : s.else_body);
      case StmtKind::Return:
        return {true, s.has_expr ? eval(s.expr) : Value::nothing()};
      case StmtKind::LocalDecl:
        frames_.back().locals[s.name] = default_value(s.type, false, s.name);
        return {};
      case StmtKind::Block:
        return exec_block(s.body);
    }
    return {};
  }

  const UnitSet& kb_;
  const ConceptUnit& target_;
  World world_;
  const ExecOptions& options_;
  Rng rng_;
  std::vector<Frame> frames_;
  std::map<std::string, Slots> states_;
  Trace trace_;
  int steps_ = 0;
};

}  // namespace

ExecResult execute(const UnitSet& kb, const ConceptUnit& target, std::string_view op, const std::vector<Value>& args,
                   const World& world, const ExecOptions& options) {
  if (options.step_limit <= 0) throw std::invalid_argument("step_limit must be positive");
  return Machine(kb, target, world, options).run(op, args);
}

}  // namespace rr
