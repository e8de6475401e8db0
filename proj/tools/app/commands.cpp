// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "app.hpp"
#include "grtc/error.hpp"
#include "grtc/record_validator.hpp"

namespace grtc::app {
namespace {

struct SourcedTrace {
  Trace trace;
  std::optional<double> duration;
  // Generated traces name their initial workers w1..wn; file traces use real names.
  bool generated = false;
};

std::vector<WorkerId> explicit_roster(const InitialSpec& init) {
  std::vector<WorkerId> out;
  for (const auto& [_, names] : init.groups)
    for (const auto& n : names) out.push_back({n, out.size()});
  return out;
}

// Re-keys a trace onto an explicitly given roster: initial workers take the
// roster's names and seqs, later arrivals are numbered after the roster.
std::vector<WorkerEvent> align_events(const SourcedTrace& src, const std::vector<WorkerId>& roster) {
  std::map<std::string, WorkerId> rename;
  if (src.generated) {
    for (std::size_t i = 0; i < src.trace.initial.size(); ++i) rename[src.trace.initial[i].id] = roster[i];
  } else {
    std::set<std::string> header, names;
    for (const auto& w : src.trace.initial) header.insert(w.id);
    for (const auto& w : roster) names.insert(w.id);
    if (!header.empty() && header != names)
      throw Error(ErrorCode::InvalidConfig, "trace initial roster does not match the configured groups");
    for (const auto& w : roster) rename[w.id] = w;
  }
  std::set<std::string> roster_names;
  for (const auto& w : roster) roster_names.insert(w.id);
  std::set<std::string> initial_ids;
  for (const auto& w : src.trace.initial) initial_ids.insert(w.id);

  std::vector<WorkerEvent> out;
  for (auto e : src.trace.events) {
    if (auto it = rename.find(e.worker.id); it != rename.end() && initial_ids.contains(e.worker.id)) {
      e.worker = it->second;
    } else if (src.generated && roster_names.contains(e.worker.id)) {
      throw Error(ErrorCode::InvalidConfig, "generated worker " + e.worker.id + " collides with a configured worker");
    } else if (!src.generated && roster_names.contains(e.worker.id)) {
      e.worker = rename.at(e.worker.id);
    } else {
      e.worker.seq += roster.size();
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json run_report_document(const SweepRow& row) {
  Json j;
  j["run_id"] = row.run.run_id;
  j["status"] = row.status;
  j["config"] = row.run.config.to_json();
  if (row.report) j["report"] = report_to_json(*row.report);
  return j;
}

std::string summary_line(const RunOutput& out) {
  std::ostringstream s;
  s << "states=" << out.record.states.size() << " mean_m=" << format_number(out.report.mean_m)
    << " burden=" << format_number(out.report.burden) << " stress=" << format_number(out.report.stress_score)
    << " stalls=" << out.record.stalls.size();
  return s.str();
}

int cmd_run(const std::string& config_path, const std::string& trace_path, const std::string& out_dir,
            std::ostream& out, std::ostream& err) {
  try {
    RunConfig config = load_run_config(config_path);
    apply_seed_override(config);
    std::optional<std::filesystem::path> trace_file;
    if (!trace_path.empty()) trace_file = trace_path;
    const RunInputs inputs = prepare_run(config, trace_file);
    const RunOutput result = execute(config, inputs);

    SweepRow row{{0, config}, result.report, "ok"};
    const std::string record_text = to_text(record_to_json(result.record));
    const std::string report_text = to_text(report_to_json(result.report));
    const std::string csv_text = csv_header() + csv_row(row);

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    write_text_file(dir / "record.json", record_text);
    write_text_file(dir / "report.json", report_text);
    write_text_file(dir / "report.csv", csv_text);
    out << "run: " << summary_line(result) << " -> " << dir.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "grtc run: " << e.what() << "\n";
    return 1;
  }
}

int cmd_sweep(const std::string& spec_path, std::string out_dir, unsigned jobs, std::ostream& out,
              std::ostream& err) {
  try {
    const SweepSpec spec = load_sweep_spec(spec_path);
    if (out_dir.empty()) out_dir = spec.output.value_or("");
    if (out_dir.empty()) throw Error(ErrorCode::InvalidConfig, "no output directory (use --out or \"output\")");
    const auto rows = run_sweep(spec, jobs);

    std::string csv = csv_header();
    for (const auto& row : rows) csv += csv_row(row);
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir / "runs");
    write_text_file(dir / "sweep.csv", csv);
    std::size_t failed = 0;
    for (const auto& row : rows) {
      write_text_file(dir / "runs" / ("run-" + std::to_string(row.run.run_id) + ".json"),
                      to_text(run_report_document(row)));
      if (!row.report) {
        ++failed;
        err << "grtc sweep: run " << row.run.run_id << ": " << row.status << "\n";
      }
    }
    out << "sweep: " << rows.size() << " runs, " << failed << " failed -> " << (dir / "sweep.csv").string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "grtc sweep: " << e.what() << "\n";
    return 1;
  }
}

int cmd_validate(const std::string& path, bool quiet, std::ostream& out, std::ostream& err) {
  Json doc;
  try {
    const std::string text = read_text_file(path);
    doc = Json::parse(text);
  } catch (const std::exception& e) {
    err << "grtc validate: " << path << ": " << e.what() << "\n";
    return 1;
  }
  const ValidationReport report = validate_record(doc);
  auto print = [&](const char* kind, const Violation& v) {
    out << kind << " step " << v.step << ": " << to_string(v.code) << ": " << v.detail << "\n";
  };
  for (const auto& v : report.violations) print("violation", v);
  if (!quiet)
    for (const auto& v : report.notices) print("notice", v);
  const std::size_t states = doc.contains("states") && doc["states"].is_array() ? doc["states"].size() : 0;
  if (report.ok()) {
    out << "OK: " << states << " states, " << report.notices.size() << " notices\n";
    return 0;
  }
  out << "FAIL: " << report.violations.size() << " violations in " << states << " states\n";
  return 1;
}

struct GenTraceArgs {
  std::string config;
  std::string out;
  TraceConfig trace;
};

int cmd_gen_trace(const GenTraceArgs& args, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  try {
    TraceConfig tc;
    if (!args.config.empty()) tc = load_trace_config(args.config);
    if (sub.count("--seed")) tc.seed = args.trace.seed;
    if (sub.count("--duration")) tc.duration = args.trace.duration;
    if (sub.count("--arrival-rate")) tc.arrival_rate = args.trace.arrival_rate;
    if (sub.count("--departure-rate")) tc.departure_rate = args.trace.departure_rate;
    if (sub.count("--initial-workers")) tc.initial_workers = args.trace.initial_workers;
    if (const char* env = std::getenv("GRTC_SEED"); env && *env && !sub.count("--seed")) {
      RunConfig probe;
      probe.seed = tc.seed;
      apply_seed_override(probe);
      tc.seed = probe.seed;
    }
    const Trace trace = generate_trace(tc);
    if (args.out.empty()) {
      write_trace(out, trace);
    } else {
      write_trace_file(args.out, trace);
      out << "gen-trace: " << trace.initial.size() << " initial workers, " << trace.events.size() << " events -> "
          << args.out << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    err << "grtc gen-trace: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

RunInputs prepare_run(const RunConfig& config, const std::optional<std::filesystem::path>& trace_file) {
  config.policy.validate();
  std::optional<SourcedTrace> src;
  if (trace_file) {
    src = SourcedTrace{read_trace_file(*trace_file), std::nullopt, false};
    if (!src->trace.events.empty()) src->duration = src->trace.events.back().t;
  } else if (config.trace) {
    TraceConfig tc = *config.trace;
    tc.initial_workers =
        config.initial.workers ? *config.initial.workers : explicit_roster(config.initial).size();
    src = SourcedTrace{generate_trace(tc), tc.duration, true};
  }

  std::optional<RotationState> initial;
  std::vector<WorkerEvent> events;
  if (config.initial.workers) {
    const std::size_t n0 = *config.initial.workers;
    std::vector<WorkerId> roster;
    if (src) {
      roster = src->trace.initial;
      if (roster.size() != n0)
        throw Error(ErrorCode::InvalidConfig, "trace starts with " + std::to_string(roster.size()) +
                                                  " workers but the config asks for " + std::to_string(n0));
      events = src->trace.events;
    } else {
      for (std::size_t i = 0; i < n0; ++i) roster.push_back({"w" + std::to_string(i + 1), i});
    }
    initial = build_initial_state(roster, config.policy);
  } else {
    const std::vector<WorkerId> roster = explicit_roster(config.initial);
    std::vector<Group> groups;
    std::size_t k = 0;
    for (const auto& [id, names] : config.initial.groups) {
      Group g{id, {}};
      for (std::size_t j = 0; j < names.size(); ++j) g.members.push_back(roster[k++]);
      groups.push_back(std::move(g));
    }
    auto built = build_state(std::move(groups), config.initial.current);
    if (auto* report = std::get_if<ValidationReport>(&built))
      throw Error(ErrorCode::InvalidState, "initial groups: " + describe(*report));
    initial = std::get<RotationState>(std::move(built));
    if (src) events = align_events(*src, roster);
  }
  return {std::move(*initial), std::move(events),
          config.schedule.resolve(src ? src->duration : std::nullopt)};
}

RunOutput execute(const RunConfig& config, const RunInputs& inputs) {
  config.weights.validate();
  RunRecord record = run_rotation(inputs.initial, config.policy, config.strategies, inputs.schedule, inputs.events,
                                  config.seed);
  record.config = config.to_json();
  RunReport report = summarize_run(record, config.weights);
  return {std::move(record), std::move(report)};
}

std::vector<SweepRun> expand_sweep(const SweepSpec& spec) {
  std::vector<SweepRun> runs;
  for (auto choose : spec.choose)
    for (auto order : spec.find_orders)
      for (auto horizon : spec.horizons)
        for (auto d : spec.d)
          for (auto mm : spec.max_multipliers)
            for (const auto& trace : spec.traces)
              for (const auto& weights : spec.weights)
                for (auto seed : spec.seeds) {
                  RunConfig c;
                  c.policy = {d, mm, horizon};
                  c.strategies = {choose, order};
                  c.weights = weights;
                  c.seed = seed;
                  c.schedule = spec.schedule;
                  c.initial.workers = trace.initial_workers;
                  c.trace = trace;
                  c.trace->seed = seed;
                  runs.push_back({runs.size(), std::move(c)});
                }
  return runs;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned jobs) {
  const std::vector<SweepRun> runs = expand_sweep(spec);
  std::vector<SweepRow> rows(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      SweepRow row{runs[i], std::nullopt, "ok"};
      try {
        row.report = execute(row.run.config, prepare_run(row.run.config, std::nullopt)).report;
      } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
      }
      rows[i] = std::move(row);
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, runs.size()))));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

std::string csv_header() {
  return "run_id,choose,find_order,horizon,d,max_multiplier,seed,mean_m,burden,total_drop,total_rise,total_moves,"
         "stress_score,splits,joins,donations,stall_time,status\n";
}

std::string csv_row(const SweepRow& row) {
  const RunConfig& c = row.run.config;
  std::ostringstream s;
  s << row.run.run_id << ',' << to_string(c.strategies.choose) << ',' << to_string(c.strategies.find_order) << ','
    << horizon_to_string(c.policy.find_horizon) << ',' << c.policy.d << ',' << c.policy.max_multiplier << ','
    << c.seed << ',';
  if (row.report) {
    const RunReport& r = *row.report;
    s << format_number(r.mean_m) << ',' << format_number(r.burden) << ',' << r.total_drop << ',' << r.total_rise
      << ',' << r.total_moves << ',' << format_number(r.stress_score) << ',' << r.splits << ',' << r.joins << ','
      << r.donations << ',' << format_number(r.stall_time) << ',';
  } else {
    s << ",,,,,,,,,,";
  }
  s << quote_csv(row.status) << '\n';
  return s.str();
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"grtc: group rotation simulator and strategy sweeps", "grtc"};
  app.require_subcommand(1);

  std::string run_config, run_trace, run_out;
  auto* run = app.add_subcommand("run", "Simulate one configuration and write record.json, report.json, report.csv");
  run->add_option("config", run_config, "Run config (JSON)")->required();
  run->add_option("--trace", run_trace, "Trace file (JSONL); overrides the config's trace generator");
  run->add_option("-o,--out", run_out, "Output directory")->required();

  std::string sweep_spec, sweep_out;
  unsigned sweep_jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Run the cartesian product of a sweep spec and write sweep.csv");
  sweep->add_option("spec", sweep_spec, "Sweep spec (JSON)")->required();
  sweep->add_option("-o,--out", sweep_out, "Output directory (overrides the spec's \"output\")");
  sweep->add_option("-j,--jobs", sweep_jobs, "Parallel runs")->check(CLI::Range(1u, 1024u));

  std::string validate_path;
  bool validate_quiet = false;
  auto* validate = app.add_subcommand("validate", "Check a run record; exit 0 iff it has no violations");
  validate->add_option("record", validate_path, "record.json")->required();
  validate->add_flag("-q,--quiet", validate_quiet, "Hide notices");

  GenTraceArgs gen;
  auto* gen_trace = app.add_subcommand("gen-trace", "Generate a synthetic arrival/departure trace (JSONL)");
  gen_trace->add_option("--config", gen.config, "Trace config (JSON)");
  gen_trace->add_option("-o,--out", gen.out, "Output file (default: stdout)");
  gen_trace->add_option("--seed", gen.trace.seed, "RNG seed (beats GRTC_SEED)");
  gen_trace->add_option("--duration", gen.trace.duration, "Trace length in time units");
  gen_trace->add_option("--arrival-rate", gen.trace.arrival_rate, "Poisson arrivals per time unit");
  gen_trace->add_option("--departure-rate", gen.trace.departure_rate, "Per-worker departure rate (1 / mean sojourn)");
  gen_trace->add_option("--initial-workers", gen.trace.initial_workers, "Workers present at t = 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  if (*run) return cmd_run(run_config, run_trace, run_out, out, err);
  if (*sweep) return cmd_sweep(sweep_spec, sweep_out, sweep_jobs, out, err);
  if (*validate) return cmd_validate(validate_path, validate_quiet, out, err);
  return cmd_gen_trace(gen, *gen_trace, out, err);
}

}  // namespace grtc::app
