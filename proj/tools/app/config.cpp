// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <set>

#include "app.hpp"
#include "grtc/error.hpp"

namespace grtc::app {
namespace {

std::size_t line_at(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

// Line of the first occurrence of "key" in the raw text, or 1.
std::size_t line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find('"' + key + '"');
  return pos == std::string::npos ? 1 : line_at(text, pos);
}

class Reader {
 public:
  Reader(const std::string& source, const std::string& text) : source_(source), text_(text) {}

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw FileError(ErrorCode::InvalidConfig, source_, line_of_key(text_, key), key + ": " + what);
  }

  void only_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) const {
    if (!obj.is_object()) fail(where, "expected an object");
    for (const auto& [key, _] : obj.items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
        fail(key, "unknown key");
    }
  }

  std::size_t natural(const Json& v, const std::string& key, std::size_t min) const {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      fail(key, "expected a non-negative integer");
    const auto n = v.get<std::size_t>();
    if (n < min) fail(key, "must be >= " + std::to_string(min));
    return n;
  }

  double real(const Json& v, const std::string& key) const {
    if (!v.is_number()) fail(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(key, "must be finite");
    return x;
  }

  std::string text(const Json& v, const std::string& key) const {
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  template <class F>
  auto list(const Json& v, const std::string& key, F&& item) const {
    if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array");
    std::vector<decltype(item(v.front()))> out;
    for (const auto& x : v) out.push_back(item(x));
    return out;
  }

  ChooseKind choose(const Json& v, const std::string& key) const {
    auto k = parse_choose(text(v, key));
    if (!k) fail(key, "unknown strategy " + v.dump());
    return *k;
  }

  FindOrder order(const Json& v, const std::string& key) const {
    auto o = parse_find_order(text(v, key));
    if (!o) fail(key, "unknown find order " + v.dump());
    return *o;
  }

  std::size_t horizon(const Json& v, const std::string& key) const {
    if (v.is_string()) {
      auto h = parse_horizon(v.get<std::string>());
      if (!h) fail(key, "expected \"unlimited\" or a positive integer");
      return *h;
    }
    return natural(v, key, 1);
  }

  StressWeights weights(const Json& v) const {
    only_keys(v, {"alpha", "beta", "gamma"}, "weights");
    StressWeights w;
    if (v.contains("alpha")) w.alpha = real(v["alpha"], "alpha");
    if (v.contains("beta")) w.beta = real(v["beta"], "beta");
    if (v.contains("gamma")) w.gamma = real(v["gamma"], "gamma");
    guard("weights", [&] { w.validate(); });
    return w;
  }

  ScheduleSpec schedule(const Json& v) const {
    only_keys(v, {"interval", "count", "start", "times"}, "schedule");
    ScheduleSpec s;
    if (v.contains("times")) {
      if (v.contains("interval") || v.contains("count") || v.contains("start"))
        fail("times", "use either times or interval/count/start");
      s.times = list(v["times"], "times", [&](const Json& x) { return real(x, "times"); });
      guard("times", [&] { TaskSchedule::explicit_times(*s.times); });
      return s;
    }
    if (v.contains("interval")) {
      s.interval = real(v["interval"], "interval");
      if (!(s.interval > 0.0)) fail("interval", "must be > 0");
    }
    if (v.contains("count")) s.count = natural(v["count"], "count", 1);
    if (v.contains("start")) s.start = real(v["start"], "start");
    return s;
  }

  enum class TraceKeys { Run, Sweep, Standalone };

  // Run configs take the roster size from "initial" and may pin a seed;
  // sweep traces carry their roster size and always follow the run seed.
  TraceConfig trace(const Json& v, TraceKeys keys) const {
    switch (keys) {
      case TraceKeys::Run:
        only_keys(v, {"seed", "duration", "arrival_rate", "departure_rate"}, "trace");
        break;
      case TraceKeys::Sweep:
        only_keys(v, {"duration", "arrival_rate", "departure_rate", "initial_workers"}, "traces");
        break;
      case TraceKeys::Standalone:
        only_keys(v, {"seed", "duration", "arrival_rate", "departure_rate", "initial_workers"}, "trace");
        break;
    }
    TraceConfig c;
    if (v.contains("seed")) c.seed = natural(v["seed"], "seed", 0);
    if (v.contains("duration")) c.duration = real(v["duration"], "duration");
    if (v.contains("arrival_rate")) c.arrival_rate = real(v["arrival_rate"], "arrival_rate");
    if (v.contains("departure_rate")) c.departure_rate = real(v["departure_rate"], "departure_rate");
    if (v.contains("initial_workers")) c.initial_workers = natural(v["initial_workers"], "initial_workers", 2);
    guard("trace", [&] { c.validate(); });
    return c;
  }

  template <class F>
  void guard(const std::string& key, F&& f) const {
    try {
      f();
    } catch (const Error& e) {
      fail(key, e.what());
    }
  }

 private:
  const std::string& source_;
  const std::string& text_;
};

Json parse_document(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FileError(ErrorCode::ParseError, source, line_at(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
}

Json trace_to_json(const TraceConfig& c, bool with_initial) {
  Json j;
  j["seed"] = c.seed;
  j["duration"] = c.duration;
  j["arrival_rate"] = c.arrival_rate;
  j["departure_rate"] = c.departure_rate;
  if (with_initial) j["initial_workers"] = c.initial_workers;
  return j;
}

}  // namespace

TaskSchedule ScheduleSpec::resolve(std::optional<double> duration) const {
  if (times) return TaskSchedule::explicit_times(*times);
  std::size_t n = 0;
  if (count) {
    n = *count;
  } else if (duration) {
    n = static_cast<std::size_t>(std::floor(*duration / interval));
  } else {
    throw Error(ErrorCode::InvalidConfig, "schedule needs a count when no trace duration is known");
  }
  return TaskSchedule::periodic(start.value_or(interval), interval, n);
}

Json ScheduleSpec::to_json() const {
  Json j;
  if (times) {
    j["times"] = *times;
    return j;
  }
  j["interval"] = interval;
  if (count) j["count"] = *count;
  if (start) j["start"] = *start;
  return j;
}

Json InitialSpec::to_json() const {
  Json j;
  if (workers) {
    j["workers"] = *workers;
    return j;
  }
  j["groups"] = Json::array();
  for (const auto& [id, ws] : groups) j["groups"].push_back({{"id", id}, {"workers", ws}});
  j["current"] = current;
  return j;
}

Json RunConfig::to_json() const {
  Json j;
  j["d"] = policy.d;
  j["max_multiplier"] = policy.max_multiplier;
  j["choose"] = std::string(to_string(strategies.choose));
  Json find;
  find["order"] = std::string(to_string(strategies.find_order));
  if (policy.find_horizon == OperatorPolicy::kUnlimited)
    find["horizon"] = "unlimited";
  else
    find["horizon"] = policy.find_horizon;
  j["find"] = std::move(find);
  j["weights"] = {{"alpha", weights.alpha}, {"beta", weights.beta}, {"gamma", weights.gamma}};
  j["seed"] = seed;
  j["schedule"] = schedule.to_json();
  j["initial"] = initial.to_json();
  if (trace) j["trace"] = trace_to_json(*trace, false);
  return j;
}

RunConfig parse_run_config(const Json& doc, const std::string& source, const std::string& text) {
  Reader r(source, text);
  r.only_keys(doc, {"d", "max_multiplier", "choose", "find", "weights", "seed", "schedule", "initial", "trace"},
              "config");
  RunConfig c;
  if (doc.contains("d")) c.policy.d = r.natural(doc["d"], "d", 1);
  if (doc.contains("max_multiplier")) c.policy.max_multiplier = r.natural(doc["max_multiplier"], "max_multiplier", 2);
  if (doc.contains("choose")) c.strategies.choose = r.choose(doc["choose"], "choose");
  if (doc.contains("find")) {
    const auto& f = doc["find"];
    r.only_keys(f, {"order", "horizon"}, "find");
    if (f.contains("order")) c.strategies.find_order = r.order(f["order"], "order");
    if (f.contains("horizon")) c.policy.find_horizon = r.horizon(f["horizon"], "horizon");
  }
  if (doc.contains("weights")) c.weights = r.weights(doc["weights"]);
  if (doc.contains("seed")) c.seed = r.natural(doc["seed"], "seed", 0);
  if (!doc.contains("schedule")) r.fail("schedule", "missing");
  c.schedule = r.schedule(doc["schedule"]);

  if (!doc.contains("initial")) r.fail("initial", "missing");
  const auto& init = doc["initial"];
  r.only_keys(init, {"workers", "groups", "current"}, "initial");
  if (init.contains("workers") == init.contains("groups"))
    r.fail("initial", "give exactly one of workers or groups");
  if (init.contains("workers")) {
    c.initial.workers = r.natural(init["workers"], "workers", 2);
  } else {
    if (!init["groups"].is_array() || init["groups"].empty()) r.fail("groups", "expected a non-empty array");
    for (const auto& g : init["groups"]) {
      r.only_keys(g, {"id", "workers"}, "groups");
      if (!g.contains("id") || !g.contains("workers")) r.fail("groups", "each group needs id and workers");
      if (!g["workers"].is_array()) r.fail("workers", "expected an array");
      std::vector<std::string> names;
      for (const auto& w : g["workers"]) names.push_back(r.text(w, "workers"));
      c.initial.groups.emplace_back(r.text(g["id"], "id"), std::move(names));
    }
    c.initial.current = init.contains("current") ? r.text(init["current"], "current") : c.initial.groups.front().first;
  }

  if (doc.contains("trace")) {
    c.trace = r.trace(doc["trace"], Reader::TraceKeys::Run);
    if (!doc["trace"].contains("seed")) c.trace->seed = c.seed;
  }
  r.guard("config", [&] { c.policy.validate(); });
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  return parse_run_config(parse_document(text, path.string()), path.string(), text);
}

void apply_seed_override(RunConfig& config) {
  const char* env = std::getenv("GRTC_SEED");
  if (!env || !*env) return;
  const std::string_view s(env);
  std::uint64_t seed = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw Error(ErrorCode::InvalidConfig, "GRTC_SEED must be a non-negative integer, got \"" + std::string(s) + "\"");
  // A trace seed that followed the run seed keeps following it.
  if (config.trace && config.trace->seed == config.seed) config.trace->seed = seed;
  config.seed = seed;
  config.seed_from_env = true;
}

std::size_t SweepSpec::run_count() const {
  return choose.size() * find_orders.size() * horizons.size() * d.size() * max_multipliers.size() * traces.size() *
         weights.size() * seeds.size();
}

SweepSpec parse_sweep_spec(const Json& doc, const std::string& source, const std::string& text) {
  Reader r(source, text);
  r.only_keys(doc,
              {"choose", "find_orders", "horizons", "d", "max_multipliers", "seeds", "traces", "weights", "schedule",
               "output"},
              "sweep");
  auto required = [&](const char* key) -> const Json& {
    if (!doc.contains(key)) r.fail(key, "missing");
    return doc[key];
  };
  SweepSpec s;
  s.choose = r.list(required("choose"), "choose", [&](const Json& v) { return r.choose(v, "choose"); });
  s.find_orders =
      r.list(required("find_orders"), "find_orders", [&](const Json& v) { return r.order(v, "find_orders"); });
  s.horizons = r.list(required("horizons"), "horizons", [&](const Json& v) { return r.horizon(v, "horizons"); });
  s.d = r.list(required("d"), "d", [&](const Json& v) { return r.natural(v, "d", 1); });
  s.max_multipliers = r.list(required("max_multipliers"), "max_multipliers",
                             [&](const Json& v) { return r.natural(v, "max_multipliers", 2); });
  s.seeds = r.list(required("seeds"), "seeds", [&](const Json& v) -> std::uint64_t { return r.natural(v, "seeds", 0); });
  s.traces = r.list(required("traces"), "traces", [&](const Json& v) { return r.trace(v, Reader::TraceKeys::Sweep); });
  if (doc.contains("weights"))
    s.weights = r.list(doc["weights"], "weights", [&](const Json& v) { return r.weights(v); });
  else
    s.weights = {StressWeights{}};
  s.schedule = doc.contains("schedule") ? r.schedule(doc["schedule"]) : ScheduleSpec{};
  if (doc.contains("output")) s.output = r.text(doc["output"], "output");
  return s;
}

TraceConfig parse_trace_config(const Json& doc, const std::string& source, const std::string& text) {
  return Reader(source, text).trace(doc, Reader::TraceKeys::Standalone);
}

TraceConfig load_trace_config(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  return parse_trace_config(parse_document(text, path.string()), path.string(), text);
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  return parse_sweep_spec(parse_document(text, path.string()), path.string(), text);
}

}  // namespace grtc::app
