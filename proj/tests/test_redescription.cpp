#include <gtest/gtest.h>

#include <random>
#include <set>

#include "rr/dsl.hpp"
#include "rr/interpreter.hpp"
#include "rr/redescription.hpp"
#include "rr/tasks.hpp"
#include "support.hpp"

using namespace rr;
using rr::test::parse_fixture;
using rr::test::parse_text;
using rr::test::read_fixture;
using rr::test::unit_from;

namespace {

// --- brute-force oracle for roll regions -------------------------------------

struct Shape {
  std::string verb, receiver;
  std::vector<std::string> args;
};

std::optional<Shape> oracle_shape(const Statement& s) {
  if (s.kind != StmtKind::Action || !s.expr.has_receiver) return std::nullopt;
  const std::string& v = s.expr.text;
  if (v != "Move" && v != "PointTo" && v != "Say" && v != "TakeAway") return std::nullopt;
  Shape out{v, dsl::print_expr(s.expr.children[0]), {}};
  for (std::size_t i = 1; i < s.expr.children.size(); ++i) out.args.push_back(dsl::print_expr(s.expr.children[i]));
  return out;
}

bool oracle_rollable(const std::vector<Statement>& body, std::size_t start, std::size_t period, std::size_t count) {
  if (start + period * count > body.size()) return false;
  std::vector<Shape> shapes;
  for (std::size_t i = start; i < start + period * count; ++i) {
    auto s = oracle_shape(body[i]);
    if (!s) return false;
    shapes.push_back(*s);
  }
  bool varies = false;
  for (std::size_t j = 0; j < period; ++j) {
    for (std::size_t it = 1; it < count; ++it) {
      const Shape& a = shapes[j];
      const Shape& b = shapes[it * period + j];
      if (a.verb != b.verb || a.receiver != b.receiver || a.args.size() != b.args.size()) return false;
    }
    for (std::size_t slot = 0; slot < shapes[j].args.size(); ++slot) {
      std::multiset<std::string> seen;
      for (std::size_t it = 0; it < count; ++it) seen.insert(shapes[it * period + j].args[slot]);
      std::set<std::string> distinct(seen.begin(), seen.end());
      if (distinct.size() == count) {
        varies = true;
      } else if (distinct.size() != 1) {
        return false;
      }
    }
  }
  return varies;
}

std::optional<RollRegion> oracle_region(const std::vector<Statement>& body) {
  std::optional<RollRegion> best;
  for (std::size_t start = 0; start < body.size(); ++start) {
    for (std::size_t period = 1; period <= kMaxRollPeriod; ++period) {
      for (std::size_t count = 2; start + period * count <= body.size(); ++count) {
        if (!oracle_rollable(body, start, period, count)) continue;
        RollRegion r{start, period, count};
        bool take = !best || r.length() > best->length() ||
                    (r.length() == best->length() &&
                     (r.period < best->period || (r.period == best->period && r.start < best->start)));
        if (take) best = r;
      }
    }
  }
  return best;
}

// --- random straight-line bodies ---------------------------------------------

const std::vector<std::string> kApples{"APPLE1", "APPLE2", "APPLE3", "APPLE4", "APPLE5", "APPLE6"};
const std::vector<std::string> kSounds{"ONE", "TWO", "THREE", "FOUR", "FIVE", "SIX"};

Statement act(const std::string& verb, const std::string& arg) {
  return Statement::action(Expr::call(Expr::name("ME"), verb, {Expr::name(arg)}));
}

std::vector<Statement> random_body(std::mt19937& rng, bool with_take_away) {
  std::vector<Statement> body;
  int segments = 1 + static_cast<int>(rng() % 3);
  for (int s = 0; s < segments; ++s) {
    if (rng() % 3 == 0) {
      int noise = 1 + static_cast<int>(rng() % 3);
      for (int i = 0; i < noise; ++i) {
        body.push_back(rng() % 2 ? act("Say", kSounds[rng() % 6]) : act("PointTo", kApples[rng() % 6]));
      }
      continue;
    }
    int n = 1 + static_cast<int>(rng() % 6);
    int offset = static_cast<int>(rng() % 2);
    bool move = rng() % 2;
    bool take = with_take_away && rng() % 4 == 0;
    for (int i = 0; i < n && i + offset < 6; ++i) {
      if (move) body.push_back(act("Move", "HAND"));
      body.push_back(act(take ? "TakeAway" : "PointTo", kApples[static_cast<std::size_t>(i + offset)]));
      body.push_back(act("Say", kSounds[static_cast<std::size_t>(i)]));
    }
  }
  return body;
}

std::string type_of(const std::string& name) {
  if (name.rfind("APPLE", 0) == 0) return "Apple";
  if (name == "HAND") return "Hand";
  if (name == "ME") return "Person";
  return "Sound";
}

ConceptUnit harness_unit() {
  std::string text = "@level(E1)\n@domain(apples)\nclass Harness {\nprivate:\n    const Person ME;\n    const Hand HAND;\n";
  for (const auto& a : kApples) text += "    const Apple " + a + ";\n";
  for (const auto& s : kSounds) text += "    const Sound " + s + ";\n";
  text += "protected:\n    void Go() {\n    }\n}\n";
  return parse_text(text).front();
}

Trace run_body(const std::vector<Statement>& body) {
  ConceptUnit unit = harness_unit();
  unit.operations.front().body = body;
  World w = make_counting_world({"Apple", 6, Arrangement::Line, "apples", 0});
  ExecOptions o;
  o.caller_domain = "apples";
  return execute({unit}, unit, "Go", {}, w, o).trace;
}

ConceptUnit instance_with(int n, const std::string& kind = "Apple", const std::string& domain = "apples") {
  World w = make_counting_world({kind, n, Arrangement::Line, domain, 0});
  return synthesize_instance(demonstrate_counting(w), w, domain, "Counting_" + domain + "_" + std::to_string(n));
}

}  // namespace

TEST(LoopRoll, RegionMatchesBruteForce) {
  std::mt19937 rng(7);
  int with_region = 0;
  for (int round = 0; round < 400; ++round) {
    auto body = random_body(rng, false);
    auto got = find_roll_region(body);
    auto want = oracle_region(body);
    ASSERT_EQ(got.has_value(), want.has_value()) << dsl::print_statements(body, 0);
    if (got) {
      ++with_region;
      EXPECT_EQ(*got, *want) << dsl::print_statements(body, 0);
    }
  }
  EXPECT_GT(with_region, 100);
}

TEST(LoopRoll, PreservesBehaviour) {
  std::mt19937 rng(11);
  for (int round = 0; round < 300; ++round) {
    auto body = random_body(rng, true);
    auto rolled = loop_roll(body, type_of);
    EXPECT_EQ(dump_trace(run_body(rolled)), dump_trace(run_body(body))) << dsl::print_statements(body, 0) << "---\n"
                                                << dsl::print_statements(rolled, 0);
  }
}

TEST(LoopRoll, ShrinksOrKeeps) {
  std::mt19937 rng(5);
  for (int round = 0; round < 200; ++round) {
    auto body = random_body(rng, false);
    auto rolled = loop_roll(body, type_of);
    if (!find_roll_region(body)) {
      EXPECT_EQ(rolled, body);
    } else {
      EXPECT_EQ(count_loops(rolled), 1);
    }
  }
}

TEST(LoopRoll, ReachesFixpoint) {
  std::mt19937 rng(3);
  for (int round = 0; round < 200; ++round) {
    auto body = random_body(rng, true);
    auto current = body;
    int rolls = 0;
    while (find_roll_region(current) && rolls < 10) {
      current = loop_roll(current, type_of);
      ++rolls;
    }
    EXPECT_FALSE(find_roll_region(current)) << dsl::print_statements(body, 0);
    EXPECT_EQ(dsl::print_statements(loop_roll(current, type_of), 0), dsl::print_statements(current, 0));
    EXPECT_EQ(dump_trace(run_body(current)), dump_trace(run_body(body))) << dsl::print_statements(current, 0);
  }
}

TEST(LoopRoll, CountingEpisode) {
  auto inst = unit_from("i_counting_apples.rr");
  auto region = find_roll_region(inst.entrance()->body);
  ASSERT_TRUE(region);
  EXPECT_EQ(region->period, 3u);
  EXPECT_EQ(region->count, 3u);
}

TEST(LoopRoll, NoRegionWithoutVariation) {
  std::vector<Statement> body{act("Say", "ONE"), act("Say", "ONE"), act("Say", "ONE")};
  EXPECT_FALSE(find_roll_region(body));
  std::vector<Statement> repeated{act("PointTo", "APPLE1"), act("PointTo", "APPLE2"), act("PointTo", "APPLE1")};
  auto r = find_roll_region(repeated);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->count, 2u);
}

TEST(Antiunify, FixtureWithGeneratedInstance) {
  auto result = antiunify_instances({unit_from("i_counting_apples.rr"), instance_with(4)});
  EXPECT_TRUE(validate(result.unit).empty());
  EXPECT_EQ(result.unit.level, Level::E1);
  EXPECT_EQ(result.unit.name, "CountingApples");
  EXPECT_EQ(dsl::print_canonical({result.unit}).text, read_fixture("e1_counting_apples.rr"));
  EXPECT_EQ(result.report.phase, Phase::P1);
  EXPECT_EQ(result.report.outputs, std::vector<std::string>{"CountingApples"});
}

TEST(Antiunify, OrderOfInstancesIrrelevant) {
  auto a = antiunify_instances({instance_with(5), instance_with(2), instance_with(3)});
  auto b = antiunify_instances({instance_with(3), instance_with(5), instance_with(2)});
  EXPECT_EQ(a.unit.operations, b.unit.operations);
}

TEST(Antiunify, DomainMismatch) {
  try {
    antiunify_instances({instance_with(3), instance_with(4, "Pencil", "pencils")});
    FAIL();
  } catch (const PassError& e) {
    EXPECT_EQ(e.kind(), PassErrorKind::DomainMismatch);
  }
}

TEST(Antiunify, NeedsTwoInstances) {
  try {
    antiunify_instances({instance_with(3)});
    FAIL();
  } catch (const PassError& e) {
    EXPECT_EQ(e.kind(), PassErrorKind::InvalidInput);
  }
}

TEST(Antiunify, NoCommonSkeleton) {
  auto odd = instance_with(4);
  auto& body = odd.operations.front().body;
  body.pop_back();  // drop the cardinal repetition
  try {
    antiunify_instances({instance_with(3), odd});
    FAIL();
  } catch (const PassError& e) {
    EXPECT_EQ(e.kind(), PassErrorKind::NoCommonSkeleton);
  }
}

TEST(Generalize, MatchesFixture) {
  auto r = generalize_to_e2(unit_from("e1_counting_apples.rr"));
  EXPECT_EQ(dsl::print_canonical(r.units).text, read_fixture("e2_counting.rr"));
  EXPECT_TRUE(validate_set(r.units).empty());
  EXPECT_EQ(r.report.phase, Phase::P2);
}

TEST(Generalize, RejectsNonE1) {
  try {
    generalize_to_e2(unit_from("i_counting_apples.rr"));
    FAIL();
  } catch (const PassError& e) {
    EXPECT_EQ(e.kind(), PassErrorKind::NotE1);
  }
}

TEST(Decompose, MatchesFixture) {
  auto r = decompose_to_e3(parse_fixture("e2_counting.rr"));
  UnitSet expected = parse_fixture("e3_counting.rr");
  EXPECT_TRUE(structural_diff(expected, r.units).empty());
  EXPECT_EQ(dsl::print_canonical(r.units).text, read_fixture("e3_counting.rr"));
  UnitSet with_globals = parse_fixture("globals.rr");
  for (auto& u : r.units) with_globals.push_back(u);
  EXPECT_TRUE(validate_set(with_globals).empty());
}

TEST(Decompose, RejectsNonE2) {
  try {
    decompose_to_e3({unit_from("e1_counting_apples.rr")});
    FAIL();
  } catch (const PassError& e) {
    EXPECT_EQ(e.kind(), PassErrorKind::NotE2);
  }
}

TEST(Report, Serialized) {
  auto r = generalize_to_e2(unit_from("e1_counting_apples.rr"));
  std::string text = serialize(r.report);
  EXPECT_EQ(text.rfind("phase\tP2\n", 0), 0u);
  EXPECT_NE(text.find("inputs\tCountingApples\n"), std::string::npos);
  EXPECT_EQ(serialize(r.report), serialize(generalize_to_e2(unit_from("e1_counting_apples.rr")).report));
}

TEST(Mastery, TicksIncrease) {
  MasteryLog log;
  log.append({"A", Level::I, "w1", true, 5});
  EXPECT_THROW(log.append({"A", Level::I, "w2", true, 5}), std::invalid_argument);
  log.record("A", Level::I, "w2", true);
  EXPECT_EQ(log.last_tick(), 6);
}

TEST(Mastery, CountsDistinctSuccessfulWorlds) {
  ConceptUnit u;
  u.name = "A";
  u.level = Level::E1;
  MasteryLog log;
  log.record("A", Level::E1, "w1", true);
  log.record("A", Level::E1, "w1", true);
  log.record("A", Level::E1, "w2", false);
  log.record("A", Level::I, "w3", true);
  log.record("A", Level::E1, "w4", true);
  auto s = mastery_check(log, u, 3);
  EXPECT_EQ(s.count, 2);
  EXPECT_FALSE(s.ready);
  log.record("A", Level::E1, "w2", true);
  EXPECT_TRUE(mastery_check(log, u, 3).ready);
}

TEST(Names, StripDomainSuffix) {
  EXPECT_EQ(strip_domain_suffix("CountingApples", "apples"), "Counting");
  EXPECT_EQ(strip_domain_suffix("Counting", "apples"), "Counting");
}
