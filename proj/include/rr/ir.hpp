#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rr {

enum class Level { I = 0, E1 = 1, E2 = 2, E3 = 3 };
enum class Visibility { Private = 0, Protected = 1, Public = 2 };
enum class UnitKind { Instance, Class };

std::string_view to_string(Level level);
std::string_view to_string(Visibility visibility);
std::string_view to_string(UnitKind kind);
std::optional<Level> parse_level(std::string_view text);
std::optional<Visibility> parse_visibility(std::string_view text);

inline constexpr Level kAllLevels[] = {Level::I, Level::E1, Level::E2, Level::E3};

// Source location, 1-based. Compares equal to any other position so that
// IR equality is structural and ignores where things were parsed from.
struct SourcePos {
  int line = 0;
  int column = 0;
  friend bool operator==(const SourcePos&, const SourcePos&) { return true; }
};

struct TypeRef {
  std::string name;
  friend bool operator==(const TypeRef&, const TypeRef&) = default;
};

enum class ExprKind {
  Name,     // identifier
  Int,      // integer literal
  String,   // "text"
  Bool,     // true / false
  Null,     // NULL
  Member,   // object.member         children[0] = object, text = member
  Call,     // [recv.]method(args)   children[0] = receiver (optional), text = method
  Unary,    // !x, -x                text = operator
  Binary,   // a op b                text = operator
};

struct Expr {
  ExprKind kind = ExprKind::Null;
  std::string text;
  std::int64_t number = 0;
  bool has_receiver = false;
  std::vector<Expr> children;  // receiver first when has_receiver, then args
  SourcePos pos;

  static Expr name(std::string id, SourcePos pos = {});
  static Expr integer(std::int64_t value);
  static Expr string(std::string value);
  static Expr boolean(bool value);
  static Expr null();
  static Expr member(Expr object, std::string member);
  static Expr call(std::optional<Expr> receiver, std::string method, std::vector<Expr> args);
  static Expr unary(std::string op, Expr operand);
  static Expr binary(std::string op, Expr lhs, Expr rhs);

  const Expr* receiver() const { return has_receiver ? &children.front() : nullptr; }
  std::vector<Expr> call_args() const;

  friend bool operator==(const Expr&, const Expr&) = default;
};

// Primitive verbs of the behaviour programs.
enum class Verb { Move, PointTo, Say, TakeAway, SelectOneRandom, Append, Delete, Empty, First, Next };

std::optional<Verb> parse_verb(std::string_view method);
std::string_view to_string(Verb verb);
bool is_agent_verb(Verb verb);  // Move/PointTo/Say/TakeAway
bool is_setup_predicate(std::string_view name);  // In/On/InLine

enum class StmtKind { Setup, Action, Call, Assign, Increment, While, If, Return, LocalDecl, Block };

struct Statement {
  StmtKind kind = StmtKind::Action;
  SourcePos pos;
  std::string name;        // Setup predicate, LocalDecl variable, Block label
  TypeRef type;            // LocalDecl
  Expr target;             // Assign / Increment lvalue
  Expr expr;               // Action/Call call, Assign value, While/If condition, Return value
  bool has_expr = false;   // Return with a value
  std::vector<Expr> args;  // Setup / Block arguments
  std::vector<Statement> body;
  std::vector<Statement> else_body;

  static Statement setup(std::string predicate, std::vector<Expr> args);
  static Statement action(Expr call);
  static Statement call(Expr call);
  static Statement assign(Expr target, Expr value);
  static Statement increment(Expr target);
  static Statement while_loop(Expr cond, std::vector<Statement> body);
  static Statement if_else(Expr cond, std::vector<Statement> then_body, std::vector<Statement> else_body = {});
  static Statement ret(std::optional<Expr> value);
  static Statement local(std::string name, TypeRef type);
  static Statement block(std::string label, std::vector<Expr> args, std::vector<Statement> body);

  friend bool operator==(const Statement&, const Statement&) = default;
};

// Wraps a call expression as Action (primitive verb) or Call (unit operation).
Statement expression_statement(Expr call);

enum class LiteralKind { Symbol, Int, String };

// A literal bound to a const attribute. Symbol literals bind a constant to
// its own name (`const Apple APPLE1;`) unless given explicitly.
struct Literal {
  LiteralKind kind = LiteralKind::Symbol;
  std::string text;
  std::int64_t number = 0;
  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Attribute {
  std::string name;
  TypeRef type;
  bool is_const = false;
  Literal literal;  // meaningful only when is_const
  Visibility visibility = Visibility::Private;
  SourcePos pos;
  friend bool operator==(const Attribute&, const Attribute&) = default;
};

struct Param {
  std::string name;
  TypeRef type;
  friend bool operator==(const Param&, const Param&) = default;
};

struct Operation {
  std::string name;
  std::vector<Param> params;
  std::optional<TypeRef> returns;
  Visibility visibility = Visibility::Private;
  std::vector<Statement> body;
  // Loose statements of an instance section form its single implicit entrance.
  bool implicit = false;
  SourcePos pos;
  friend bool operator==(const Operation&, const Operation&) = default;
};

struct FriendDecl {
  std::string name;
  Visibility section = Visibility::Protected;
  friend bool operator==(const FriendDecl&, const FriendDecl&) = default;
};

inline constexpr std::string_view kGlobalsUnit = "Globals";
inline constexpr std::string_view kEntranceOp = "Replay";

struct ConceptUnit {
  std::string name;
  UnitKind kind = UnitKind::Class;
  Level level = Level::I;
  std::string domain;
  std::vector<Attribute> attributes;
  std::vector<Operation> operations;
  std::vector<FriendDecl> friends;
  SourcePos pos;

  bool is_globals() const { return name == kGlobalsUnit; }
  const Attribute* find_attribute(std::string_view attr) const;
  const Operation* find_operation(std::string_view op) const;
  const Operation* find_operation(std::string_view op, std::size_t arity) const;
  const Operation* entrance() const;
  bool has_friend(std::string_view name) const;

  friend bool operator==(const ConceptUnit&, const ConceptUnit&) = default;
};

using UnitSet = std::vector<ConceptUnit>;

const ConceptUnit* find_unit(const UnitSet& units, std::string_view name);

// ---------------------------------------------------------------------------
// Nominal type registry.

enum class TypeCategory { Int, Bool, Token, Entity, Collection, Agent, Unknown };

struct TypeInfo {
  TypeCategory category = TypeCategory::Unknown;
  std::string element_kind;  // for collections; empty accepts any entity kind
  bool ordered = false;      // list (cursor) rather than set
};

class TypeRegistry {
 public:
  TypeRegistry();

  TypeInfo lookup(const TypeRef& type) const;
  bool is_collection(const TypeRef& type) const { return lookup(type).category == TypeCategory::Collection; }
  // True iff an entity of `kind` may be stored in a collection of `type`.
  bool accepts(const TypeRef& type, std::string_view kind) const;
  // Abstract counterpart of a domain-specific type (APP_Set -> objectSet).
  TypeRef widen(const TypeRef& type) const;
  // Collection type names for an element kind (Apple -> APP_Set / APP_List).
  static TypeRef set_type_for(std::string_view kind);
  static TypeRef list_type_for(std::string_view kind);

  void add(std::string name, TypeInfo info);

 private:
  std::map<std::string, TypeInfo, std::less<>> types_;
};

const TypeRegistry& default_registry();

// ---------------------------------------------------------------------------
// Validation.

struct Diagnostic {
  std::string rule;
  std::string unit;
  std::string location;
  std::string message;
  SourcePos pos;
};

std::vector<Diagnostic> validate(const ConceptUnit& unit);
// Per-unit validation plus cross-unit rules: unique names, friend targets,
// E3 cooperation. `external` names units that live outside the set.
std::vector<Diagnostic> validate_set(const UnitSet& units, const std::set<std::string>& external = {});

std::string format(const Diagnostic& diagnostic);

// ---------------------------------------------------------------------------
// Metrics.

struct LevelMetrics {
  int unit_count = 0;
  int operation_count = 0;
  int param_count = 0;
  int const_count = 0;
  std::map<Visibility, int> visibility_histogram;
  int loop_count = 0;

  int member_count() const;
  // 0 when every member is Private, 1 when every member is Public.
  double publicness() const;
  friend bool operator==(const LevelMetrics&, const LevelMetrics&) = default;
};

LevelMetrics level_metrics(const UnitSet& units);
int count_loops(const std::vector<Statement>& body);

// ---------------------------------------------------------------------------
// Access control.

class UnknownMemberError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AccessDecision {
  bool allowed = false;
  std::string reason;  // empty when allowed
};

Visibility member_visibility(const ConceptUnit& target, std::string_view member);
AccessDecision check_access(std::string_view caller_domain, std::string_view caller_unit, const ConceptUnit& target,
                            std::string_view member);

// ---------------------------------------------------------------------------
// Structure comparison: names, member counts, visibilities and call graph.

std::vector<std::string> structural_signature(const UnitSet& units);
std::vector<std::string> structural_diff(const UnitSet& expected, const UnitSet& actual);
// Units called from the bodies of `unit`, as "Unit.op" strings (own ops as "op").
std::set<std::string> call_targets(const ConceptUnit& unit);

}  // namespace rr
