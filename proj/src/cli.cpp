#include "rr/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "rr/capability.hpp"
#include "rr/dsl.hpp"
#include "rr/kb.hpp"
#include "rr/redescription.hpp"
#include "rr/tasks.hpp"

#ifndef RR_FIXTURE_DIR
#define RR_FIXTURE_DIR "fixtures"
#endif

namespace rr::cli {

namespace {

struct Config {
  std::string kb_path;
  int step_limit = kDefaultStepLimit;
  int threshold = kDefaultThreshold;
  std::string format = "text";
};

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoProblem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Level level_arg(const std::string& text) {
  auto level = parse_level(text);
  if (!level) throw Usage("unknown level '" + text + "'");
  return *level;
}

TaskId task_arg(const std::string& text) {
  try {
    return parse_task_id(text);
  } catch (const UnknownTaskId& e) {
    throw Usage(e.what());
  }
}

RunOptions run_options(const Config& config) {
  RunOptions o;
  o.step_limit = config.step_limit;
  return o;
}

// The world sizes a demonstration teaches: 4, 5, ... apples in a row.
void record_demos(KnowledgeBase& kb, int count) {
  for (int i = 0; i < count; ++i) {
    World w = make_counting_world({"Apple", 4 + i, Arrangement::Line, "apples", 0});
    record_instance(kb, demonstrate_counting(w), w, "apples");
  }
}

int cmd_parse(const std::string& file, std::ostream& out, std::ostream& err) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoProblem("cannot read " + file);
  std::ostringstream text;
  text << in.rdbuf();
  auto parsed = dsl::parse({text.str(), file});
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors) err << dsl::format(e) << "\n";
    return kDiagnostics;
  }
  std::set<std::string> external;
  auto diagnostics = validate_set(parsed.units, external);
  for (const auto& d : diagnostics) err << format(d) << "\n";
  out << dsl::print_canonical(parsed.units).text;
  return diagnostics.empty() ? kOk : kDiagnostics;
}

struct RedescribeArgs {
  int phase = 0;
  bool automatic = false;
  bool report = false;
  int demos = 0;
  std::string out_dir;
};

int cmd_redescribe(const Config& config, const RedescribeArgs& args, std::ostream& out, std::ostream& err) {
  if ((args.phase == 0) == !args.automatic) throw Usage("give exactly one of --phase or --auto");
  KnowledgeBase kb = load(config.kb_path);
  record_demos(kb, args.demos);
  std::vector<PhaseReport> reports;
  UnitSet produced;
  try {
    if (args.automatic) {
      for (int round = 0; round < 8; ++round) {
        practice(kb, kDefaultSeeds);
        auto fired = advance(kb, config.threshold);
        if (fired.empty()) break;
        reports.insert(reports.end(), fired.begin(), fired.end());
      }
    } else if (args.phase == 1) {
      std::vector<ConceptUnit> instances;
      for (const auto& u : kb.units()) {
        if (u.level == Level::I && u.kind == UnitKind::Instance) instances.push_back(u);
      }
      E1Result r = antiunify_instances(instances);
      produced.push_back(r.unit);
      reports.push_back(r.report);
    } else if (args.phase == 2) {
      auto it = std::find_if(kb.units().begin(), kb.units().end(), [](const ConceptUnit& u) { return u.level == Level::E1; });
      if (it == kb.units().end()) throw PassError(PassErrorKind::NotE1, "no E1 class in the knowledge base");
      PassResult r = generalize_to_e2(*it);
      produced = r.units;
      reports.push_back(r.report);
    } else if (args.phase == 3) {
      UnitSet inputs;
      for (const auto& u : kb.units()) {
        if (u.is_globals() || (u.level == Level::E2 && u.find_operation("Index", 1))) inputs.push_back(u);
      }
      PassResult r = decompose_to_e3(inputs);
      produced = r.units;
      reports.push_back(r.report);
    } else {
      throw Usage("--phase must be 1, 2 or 3");
    }
  } catch (const PassError& e) {
    err << e.what() << "\n";
    return kDiagnostics;
  }
  for (const auto& u : produced) {
    if (!kb.contains(u.name, u.level)) kb.add(u);
  }
  if (!produced.empty()) out << dsl::print_canonical(produced).text;
  if (args.report || args.automatic) {
    for (const auto& r : reports) out << serialize(r);
  }
  if (!args.out_dir.empty()) save(kb, args.out_dir);
  return kOk;
}

struct RunArgs {
  std::string task;
  std::string level;
  unsigned seed = 0;
  std::optional<int> size;
  std::string trace_dir = "rr_traces";
};

TaskResult execute_task(const Config& config, const RunArgs& args, const KnowledgeBase& kb) {
  TaskOptions options;
  options.size = args.size;
  Task task = build_task(task_arg(args.task), args.seed, options);
  return run_task_detailed(task, kb.units(), level_arg(args.level), run_options(config));
}

int cmd_run(const Config& config, const RunArgs& args, std::ostream& out) {
  KnowledgeBase kb = load(config.kb_path);
  TaskResult r = execute_task(config, args, kb);
  const std::string name = args.task + "_" + args.level + "_" + std::to_string(args.seed) + ".tsv";
  std::error_code ec;
  std::filesystem::create_directories(args.trace_dir, ec);
  const std::string path = (std::filesystem::path(args.trace_dir) / name).string();
  std::ofstream trace(path, std::ios::binary | std::ios::trunc);
  if (ec || !trace || !(trace << dump_trace(r.run.trace))) throw IoProblem("cannot write " + path);
  const std::string outcome(to_string(r.outcome.kind));
  if (config.format == "tsv") {
    out << args.task << "\t" << args.level << "\t" << args.seed << "\t" << outcome << "\t" << r.outcome.reason << "\t"
        << path << "\n";
  } else {
    out << args.task << " at " << args.level << " (seed " << args.seed << "): " << outcome;
    if (!r.outcome.reason.empty()) out << ": " << r.outcome.reason;
    out << "\ntrace: " << path << "\n";
  }
  return kOk;
}

int cmd_trace(const Config& config, const RunArgs& args, std::ostream& out) {
  KnowledgeBase kb = load(config.kb_path);
  out << dump_trace(execute_task(config, args, kb).run.trace);
  return kOk;
}

int cmd_matrix(const Config& config, bool diff, const std::vector<unsigned>& seeds, std::ostream& out, std::ostream& err) {
  KnowledgeBase kb = load(config.kb_path);
  std::map<Level, UnitSet> per_level;
  for (Level l : kAllLevels) per_level[l] = kb.units();
  CapabilityMatrix m;
  try {
    m = build_matrix(per_level, seeds, run_options(config));
  } catch (const MissingLevel& e) {
    err << e.what() << "\n";
    return kDiagnostics;
  }
  out << (config.format == "tsv" ? render_tsv(m) : render_table(m));
  if (!diff) return kOk;
  auto diffs = compare_expected(m);
  for (const auto& d : diffs) err << d << "\n";
  return diffs.empty() ? kOk : kDiagnostics;
}

int cmd_verbalize(const Config& config, const std::string& name, std::ostream& out, std::ostream& err) {
  KnowledgeBase kb = load(config.kb_path);
  const ConceptUnit* best = nullptr;
  for (const auto& u : kb.units()) {
    if (u.name == name && (!best || u.level > best->level)) best = &u;
  }
  if (!best) {
    err << "no unit named " << name << "\n";
    return kDiagnostics;
  }
  try {
    out << verbalize(*best);
  } catch (const NotE3& e) {
    err << "NotE3: " << e.what() << "\n";
    return kDiagnostics;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Concept units across representation levels: parse, redescribe, run tasks."};
  app.name("rr");
  app.require_subcommand(1);
  app.fallthrough();

  Config config;
  const char* env_kb = std::getenv("RR_KB");
  config.kb_path = env_kb && *env_kb ? env_kb : RR_FIXTURE_DIR;
  app.add_option("--kb", config.kb_path, "Knowledge base directory (env RR_KB)");
  app.add_option("--step-limit", config.step_limit, "Interpreter step budget")->check(CLI::PositiveNumber);
  app.add_option("--threshold", config.threshold, "Distinct successful worlds before a phase fires")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", config.format, "Output format")->check(CLI::IsMember({"text", "tsv"}));

  std::string parse_file;
  auto* parse_cmd = app.add_subcommand("parse", "Validate a DSL file and print it canonically");
  parse_cmd->add_option("FILE", parse_file)->required();

  RedescribeArgs redescribe;
  auto* redescribe_cmd = app.add_subcommand("redescribe", "Run redescription passes");
  redescribe_cmd->add_option("--phase", redescribe.phase, "Single phase: 1, 2 or 3")->check(CLI::Range(1, 3));
  redescribe_cmd->add_flag("--auto", redescribe.automatic, "Practice and advance until nothing fires");
  redescribe_cmd->add_flag("--report", redescribe.report, "Print phase reports");
  redescribe_cmd->add_option("--demo", redescribe.demos, "Record N demonstrated counting episodes first")
      ->check(CLI::NonNegativeNumber);
  redescribe_cmd->add_option("--out", redescribe.out_dir, "Save the resulting knowledge base here");

  RunArgs run_args;
  auto add_task_options = [&](CLI::App* cmd) {
    cmd->add_option("--task", run_args.task, "T1..T9")->required();
    cmd->add_option("--level", run_args.level, "I, E1, E2 or E3")->required();
    cmd->add_option("--seed", run_args.seed, "World seed");
    cmd->add_option("--size", run_args.size, "Override the world's cardinality")->check(CLI::NonNegativeNumber);
  };
  auto* run_cmd = app.add_subcommand("run", "Run one task at one level");
  add_task_options(run_cmd);
  run_cmd->add_option("--trace-dir", run_args.trace_dir, "Where the trace file is written");
  auto* trace_cmd = app.add_subcommand("trace", "Print the trace of one task run");
  add_task_options(trace_cmd);

  bool diff = false;
  std::vector<unsigned> seeds = kDefaultSeeds;
  auto* matrix_cmd = app.add_subcommand("matrix", "Capability matrix over all levels and tasks");
  matrix_cmd->add_flag("--diff", diff, "Compare against the expected matrix");
  matrix_cmd->add_option("--seeds", seeds, "Seeds per cell")->delimiter(',');

  std::string unit_name;
  auto* verbalize_cmd = app.add_subcommand("verbalize", "Describe an E3 unit in words");
  verbalize_cmd->add_option("UNIT", unit_name)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  }

  try {
    if (parse_cmd->parsed()) return cmd_parse(parse_file, out, err);
    if (redescribe_cmd->parsed()) return cmd_redescribe(config, redescribe, out, err);
    if (run_cmd->parsed()) return cmd_run(config, run_args, out);
    if (trace_cmd->parsed()) return cmd_trace(config, run_args, out);
    if (matrix_cmd->parsed()) return cmd_matrix(config, diff, seeds, out, err);
    if (verbalize_cmd->parsed()) return cmd_verbalize(config, unit_name, out, err);
  } catch (const Usage& e) {
    err << e.what() << "\n";
    return kUsage;
  } catch (const IoProblem& e) {
    err << e.what() << "\n";
    return kIo;
  } catch (const KbError& e) {
    err << e.what() << "\n";
    return e.kind() == KbErrorKind::IoFailure ? kIo : kDiagnostics;
  }
  return kUsage;
}

}  // namespace rr::cli
