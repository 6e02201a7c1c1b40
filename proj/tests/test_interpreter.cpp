#include <gtest/gtest.h>

#include <algorithm>

#include "rr/interpreter.hpp"
#include "rr/tasks.hpp"
#include "support.hpp"

using namespace rr;
using rr::test::parse_fixture;
using rr::test::unit_from;

namespace {

ExecOptions as_caller(std::string domain, std::string unit = {}) {
  ExecOptions o;
  o.caller_domain = std::move(domain);
  o.caller_unit = std::move(unit);
  return o;
}

std::vector<std::string> args_of(const Trace& t, EventKind kind) {
  std::vector<std::string> out;
  for (const auto& e : t) {
    if (e.kind == kind) out.push_back(e.arg);
  }
  return out;
}

UnitSet e3_kb() {
  UnitSet units = parse_fixture("globals.rr");
  for (auto& u : parse_fixture("e3_counting.rr")) units.push_back(u);
  return units;
}

World two_heaps(int a, int b) {
  World w = make_counting_world({"Apple", a, Arrangement::Line, "left", 0});
  for (int i = 1; i <= b; ++i) {
    std::string id = "PENCIL" + std::to_string(i);
    w.entities[id] = {"Pencil", "TABLE1"};
    w.containers["right"].push_back(id);
  }
  return w;
}

}  // namespace

TEST(Replay, InstanceReplaysItsEpisode) {
  auto unit = unit_from("i_counting_apples.rr");
  World w = make_counting_world({"Apple", 3, Arrangement::Line, "apples", 0});
  auto r = execute({unit}, unit, kEntranceOp, {}, w, as_caller("apples", unit.name));
  EXPECT_EQ(args_of(r.trace, EventKind::PointedTo), (std::vector<std::string>{"APPLE1", "APPLE2", "APPLE3"}));
  EXPECT_EQ(args_of(r.trace, EventKind::Said), (std::vector<std::string>{"ONE", "TWO", "THREE", "THREE"}));
  for (std::size_t i = 0; i < r.trace.size(); ++i) EXPECT_EQ(r.trace[i].seq, static_cast<int>(i));
}

TEST(Replay, EntranceIsPrivate) {
  auto unit = unit_from("i_counting_apples.rr");
  World w = make_counting_world({"Apple", 3, Arrangement::Line, "apples", 0});
  EXPECT_THROW(execute({unit}, unit, kEntranceOp, {}, w, as_caller("apples")), ExecError);
}

TEST(Replay, SetupMismatchOnOtherWorld) {
  auto unit = unit_from("i_counting_apples.rr");
  World w = make_counting_world({"Apple", 2, Arrangement::Line, "apples", 0});
  try {
    execute({unit}, unit, kEntranceOp, {}, w, as_caller("apples", unit.name));
    FAIL() << "expected SetupMismatch";
  } catch (const ExecError& e) {
    EXPECT_EQ(e.kind(), ExecErrorKind::SetupMismatch);
  }
}

TEST(Execute, E1CountsAnySize) {
  auto unit = unit_from("e1_counting_apples.rr");
  for (int n : {0, 1, 4, 13}) {
    World w = make_counting_world({"Apple", n, Arrangement::Scattered, "apples", 7});
    auto r = execute({unit}, unit, "Counting", {}, w, as_caller("apples"));
    EXPECT_EQ(r.value.kind, ValueKind::Int);
    EXPECT_EQ(r.value.number, n);
    EXPECT_EQ(args_of(r.trace, EventKind::PointedTo).size(), static_cast<std::size_t>(n));
  }
}

TEST(Execute, InputWorldUntouched) {
  auto unit = unit_from("e1_counting_apples.rr");
  World w = make_counting_world({"Apple", 4, Arrangement::Line, "apples", 0});
  World copy = w;
  execute({unit}, unit, "Counting", {}, w, as_caller("apples"));
  EXPECT_EQ(w.containers, copy.containers);
  EXPECT_EQ(w.entities, copy.entities);
}

TEST(Execute, DeterministicForSeed) {
  auto unit = unit_from("e1_counting_apples.rr");
  World w = make_counting_world({"Apple", 9, Arrangement::Scattered, "apples", 42});
  auto a = execute({unit}, unit, "Counting", {}, w, as_caller("apples"));
  auto b = execute({unit}, unit, "Counting", {}, w, as_caller("apples"));
  EXPECT_EQ(a.trace, b.trace);
  w.rng_seed = 43;
  auto c = execute({unit}, unit, "Counting", {}, w, as_caller("apples"));
  EXPECT_EQ(a.value, c.value);
}

TEST(Execute, ProtectedRejectsOtherDomain) {
  auto unit = unit_from("e1_counting_apples.rr");
  World w = make_counting_world({"Pencil", 3, Arrangement::Line, "pencils", 0});
  try {
    execute({unit}, unit, "Counting", {}, w, as_caller("pencils"));
    FAIL() << "expected AccessViolation";
  } catch (const ExecError& e) {
    EXPECT_EQ(e.kind(), ExecErrorKind::AccessViolation);
  }
}

TEST(Execute, StepLimit) {
  auto unit = unit_from("e1_counting_apples.rr");
  World w = make_counting_world({"Apple", 10, Arrangement::Line, "apples", 0});
  ExecOptions o = as_caller("apples");
  o.step_limit = 20;
  try {
    execute({unit}, unit, "Counting", {}, w, o);
    FAIL() << "expected StepLimitExceeded";
  } catch (const ExecError& e) {
    EXPECT_EQ(e.kind(), ExecErrorKind::StepLimitExceeded);
  }
}

TEST(Execute, MissingOperation) {
  auto unit = unit_from("e1_counting_apples.rr");
  World w = make_counting_world({"Apple", 1, Arrangement::Line, "apples", 0});
  try {
    execute({unit}, unit, "Fly", {}, w, as_caller("apples"));
    FAIL();
  } catch (const ExecError& e) {
    EXPECT_EQ(e.kind(), ExecErrorKind::MissingOperation);
  }
}

TEST(E3, CanMatchDiscretely) {
  auto kb = e3_kb();
  const ConceptUnit& counting = *find_unit(kb, "Counting");
  struct Case {
    int a, b;
    bool match;
    std::int64_t sign;
  };
  for (Case c : {Case{3, 5, false, -1}, Case{5, 3, false, 1}, Case{4, 4, true, 0}, Case{0, 0, true, 0}}) {
    World w = two_heaps(c.a, c.b);
    std::vector<Value> args{container_value(w, "left"), container_value(w, "right")};
    auto m = execute(kb, counting, "Can_Match_Discretely", args, w, as_caller("x"));
    EXPECT_EQ(m.value.truthy(), c.match) << c.a << " vs " << c.b;
    auto s = execute(kb, counting, "OneToOneMap", args, w, as_caller("x"));
    EXPECT_EQ(s.value.number, c.sign) << c.a << " vs " << c.b;
  }
}

TEST(E3, CountingIsPublicAcrossDomains) {
  auto kb = e3_kb();
  World w = make_counting_world({"Pencil", 6, Arrangement::Circle, "pencils", 3});
  auto r = execute(kb, *find_unit(kb, "Counting"), "Counting", {}, w, as_caller("pencils"));
  EXPECT_EQ(r.value.number, 6);
}

TEST(Primitives, CollectionVerbs) {
  World w = make_counting_world({"Apple", 3, Arrangement::Line, "apples", 0});
  Rng rng(0);
  Value list = container_value(w, "apples");
  EXPECT_FALSE(eval_primitive(Verb::Empty, list, std::nullopt, w, rng).value.truthy());
  EXPECT_EQ(eval_primitive(Verb::First, list, std::nullopt, w, rng).value.text, "APPLE1");
  EXPECT_EQ(eval_primitive(Verb::Next, list, std::nullopt, w, rng).value.text, "APPLE2");
  Value picked = eval_primitive(Verb::SelectOneRandom, list, std::nullopt, w, rng).value;
  EXPECT_TRUE(std::count(list.items.begin(), list.items.end(), picked.text));
  eval_primitive(Verb::Delete, list, picked, w, rng);
  EXPECT_EQ(list.items.size(), 2u);
  eval_primitive(Verb::Append, list, picked, w, rng);
  EXPECT_EQ(list.items.back(), picked.text);

  Value empty = Value::list({});
  EXPECT_TRUE(eval_primitive(Verb::Empty, empty, std::nullopt, w, rng).value.truthy());
  EXPECT_EQ(eval_primitive(Verb::First, empty, std::nullopt, w, rng).value.kind, ValueKind::Nothing);
}

TEST(Primitives, AgentVerbsEmitEvents) {
  World w = make_counting_world({"Apple", 2, Arrangement::Line, "apples", 0});
  w.cardinal_sums["apples"] = 2;
  Rng rng(0);
  Value me = Value::token("ME");
  auto p = eval_primitive(Verb::PointTo, me, Value::token("APPLE1"), w, rng);
  ASSERT_TRUE(p.event);
  EXPECT_EQ(p.event->kind, EventKind::PointedTo);
  auto t = eval_primitive(Verb::TakeAway, me, Value::token("APPLE2"), w, rng);
  ASSERT_TRUE(t.event);
  EXPECT_EQ(t.event->kind, EventKind::TookAway);
  EXPECT_EQ(w.containers["apples"], (std::vector<std::string>{"APPLE1"}));
  EXPECT_FALSE(w.cardinal_sums.count("apples"));
}

TEST(Setup, Predicates) {
  World w = make_counting_world({"Apple", 3, Arrangement::Line, "apples", 0});
  EXPECT_TRUE(setup_holds("In", {"ME", "ROOM1"}, w));
  EXPECT_TRUE(setup_holds("On", {"APPLE2", "TABLE1"}, w));
  EXPECT_FALSE(setup_holds("On", {"APPLE4", "TABLE1"}, w));
  EXPECT_TRUE(setup_holds("InLine", {"APPLE1", "APPLE2", "APPLE3"}, w));
  w.arrangements["TABLE1"] = Arrangement::Scattered;
  EXPECT_FALSE(setup_holds("InLine", {"APPLE1", "APPLE2", "APPLE3"}, w));
}

TEST(World, CheckFindsBrokenReferences) {
  World w = make_counting_world({"Apple", 2, Arrangement::Line, "apples", 0});
  EXPECT_TRUE(w.check().empty());
  w.containers["apples"].push_back("GHOST");
  EXPECT_FALSE(w.check().empty());
}

TEST(Trace, DumpIsTabSeparated) {
  Trace t{{EventKind::PointedTo, "APPLE1", 1}, {EventKind::Said, "ONE", 2}};
  EXPECT_EQ(dump_trace(t), "1\tPointedTo\tAPPLE1\n2\tSaid\tONE\n");
}
