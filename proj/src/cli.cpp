#include "sdebug/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "sdebug/annotator.hpp"
#include "sdebug/checker.hpp"
#include "sdebug/dsl.hpp"
#include "sdebug/report.hpp"
#include "sdebug/synthesizer.hpp"

namespace sdebug {

namespace {

namespace fs = std::filesystem;

struct CliConfig {
  std::string theory;
  std::vector<std::string> sds;
  std::vector<std::string> charts;
  bool json = false;
  std::string dot_dir;
  std::string out_dir;
  int max_edits = 4;
  std::vector<std::string> no_loops;
  bool strict_guards = false;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text;
}

NoLoop parse_no_loop(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    const int first = std::stoi(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument(text);
    const std::string rest = text.substr(colon + 1);
    const int last = std::stoi(rest, &used);
    if (used != rest.size() || first < 1 || last < first) throw std::invalid_argument(text);
    return {first, last};
  } catch (const std::exception&) {
    throw UsageError("--no-loop expects i:j with 1 <= i <= j, got '" + text + "'");
  }
}

struct Inputs {
  DomainTheory dt;
  std::vector<SequenceDiagram> sds;
};

// Loads the theory and diagrams; flag spans join each diagram they fit.
Inputs load(const CliConfig& cfg) {
  Inputs in;
  in.dt = parse_domain_theory(read_file(cfg.theory), cfg.theory);
  for (const auto& path : cfg.sds) in.sds.push_back(parse_sd(read_file(path), path));
  for (const auto& text : cfg.no_loops) {
    const NoLoop nl = parse_no_loop(text);
    bool used = false;
    for (auto& sd : in.sds) {
      if (static_cast<std::size_t>(nl.last) > sd.messages.size()) continue;
      if (std::find(sd.no_loops.begin(), sd.no_loops.end(), nl) == sd.no_loops.end()) sd.no_loops.push_back(nl);
      used = true;
    }
    if (!used) throw UsageError("--no-loop " + text + " lies outside every sequence diagram");
  }
  return in;
}

ReportBundle annotate_all(const Inputs& in) {
  ReportBundle b;
  b.theory = &in.dt;
  for (const auto& sd : in.sds) {
    auto r = annotate(sd, in.dt);
    b.conflicts.insert(b.conflicts.end(), r.conflicts.begin(), r.conflicts.end());
    b.annotations.push_back(std::move(r.annotated));
    auto w = unspecified_message_warnings(sd, in.dt);
    b.warnings.insert(b.warnings.end(), w.begin(), w.end());
  }
  return b;
}

void emit(const CliConfig& cfg, const ReportBundle& b, std::ostream& out) {
  out << (cfg.json ? render_json(b) : render_text(b));
}

int cmd_annotate(const CliConfig& cfg, std::ostream& out) {
  const Inputs in = load(cfg);
  const ReportBundle b = annotate_all(in);
  emit(cfg, b, out);
  return b.conflicts.empty() ? kExitClean : kExitFindings;
}

int cmd_synth(const CliConfig& cfg, std::ostream& out) {
  const Inputs in = load(cfg);
  ReportBundle b = annotate_all(in);
  if (!b.conflicts.empty()) {
    emit(cfg, b, out);
    return kExitFindings;
  }
  const SynthesisResult r = synthesize(in.dt, in.sds);
  b.warnings.insert(b.warnings.end(), r.warnings.begin(), r.warnings.end());

  std::ostringstream charts;
  for (const auto& [object, chart] : r.charts) {
    const std::string sc = print_sc(chart);
    if (!cfg.out_dir.empty()) {
      fs::create_directories(cfg.out_dir);
      const fs::path path = fs::path(cfg.out_dir) / (object + ".sc");
      write_file(path, sc);
      charts << "wrote " << path.generic_string() << "\n";
    } else if (!cfg.json) {
      charts << "\n" << sc;
    }
    if (!cfg.dot_dir.empty()) {
      fs::create_directories(cfg.dot_dir);
      const fs::path path = fs::path(cfg.dot_dir) / (object + ".dot");
      write_file(path, export_dot(chart));
      charts << "wrote " << path.generic_string() << "\n";
    }
  }
  emit(cfg, b, out);
  if (!cfg.json) out << charts.str();
  return kExitClean;
}

int cmd_check(const CliConfig& cfg, std::ostream& out) {
  const Inputs in = load(cfg);
  std::map<std::string, Statechart> charts;
  for (const auto& path : cfg.charts) {
    Statechart sc = parse_sc(read_file(path), path);
    if (sc.object.empty()) throw UsageError(path + ": chart needs a 'statechart <Object>' header");
    if (!charts.emplace(sc.object, std::move(sc)).second) throw UsageError("two charts for one object in " + path);
  }
  RepairOptions opts;
  opts.max_edits = cfg.max_edits;
  opts.replay.strict_guards = cfg.strict_guards;

  ReportBundle b;
  b.theory = &in.dt;
  b.checked = in.sds;
  b.max_edits = cfg.max_edits;
  b.checks = check_all(in.dt, charts, in.sds, opts);
  for (const auto& e : b.checks) {
    if (!e.repair) continue;
    for (const auto& o : e.repair->affected_objects) {
      b.warnings.push_back(e.sd_name + ": repair for " + e.object + " also changes the lifeline of " + o);
    }
  }
  emit(cfg, b, out);
  const bool all_accepted =
      std::all_of(b.checks.begin(), b.checks.end(), [](const CheckEntry& e) { return e.trace.accepted; });
  return all_accepted ? kExitClean : kExitFindings;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Debug scenario requirements: annotate sequence diagrams, synthesize and check statecharts", "sdebug"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--theory", cfg.theory, "domain theory (.dt)")->required();
    sub->add_option("sds", cfg.sds, "sequence diagrams (.sd)")->required();
    sub->add_flag("--json", cfg.json, "machine-readable report");
    sub->add_option("--no-loop", cfg.no_loops, "forbid identifying states inside messages i..j (i:j)")
        ->allow_extra_args(false);
  };
  CLI::App* annotate_cmd = app.add_subcommand("annotate", "annotate diagrams and report conflicts");
  common(annotate_cmd);
  CLI::App* synth_cmd = app.add_subcommand("synth", "synthesize one statechart per object");
  common(synth_cmd);
  synth_cmd->add_option("-o", cfg.out_dir, "directory for .sc files");
  synth_cmd->add_option("--dot", cfg.dot_dir, "directory for .dot files");
  CLI::App* check_cmd = app.add_subcommand("check", "replay diagrams against charts and search for repairs");
  common(check_cmd);
  check_cmd->add_option("--chart", cfg.charts, "statechart (.sc) with a 'statechart <Object>' header")
      ->required()
      ->allow_extra_args(false);
  check_cmd->add_option("--max-edits", cfg.max_edits, "largest repair to search for")->check(CLI::NonNegativeNumber);
  check_cmd->add_flag("--strict-guards", cfg.strict_guards, "unknown values fail guards");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitClean;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitClean;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (annotate_cmd->parsed()) return cmd_annotate(cfg, out);
    if (synth_cmd->parsed()) return cmd_synth(cfg, out);
    return cmd_check(cfg, out);
  } catch (const ParseError& e) {
    err << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace sdebug
