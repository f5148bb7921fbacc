#include "vsearch/batch.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json_reader.hpp"
#include "vsearch/errors.hpp"
#include "vsearch/metrics.hpp"
#include "vsearch/mission.hpp"
#include "vsearch/scenario_io.hpp"

namespace vsearch {

using nlohmann::json;
using nlohmann::ordered_json;

Preset parse_preset(std::string_view name) {
  if (name == "full") return Preset::Full;
  if (name == "nearest_point") return Preset::NearestPoint;
  if (name == "no_cooccurrence") return Preset::NoCooccurrence;
  if (name == "no_uncertainty") return Preset::NoUncertainty;
  if (name == "web_table") return Preset::WebTable;
  throw ValidationError("unknown preset '" + std::string(name) + "'");
}

const char* preset_name(Preset p) {
  switch (p) {
    case Preset::Full:
      return "full";
    case Preset::NearestPoint:
      return "nearest_point";
    case Preset::NoCooccurrence:
      return "no_cooccurrence";
    case Preset::NoUncertainty:
      return "no_uncertainty";
    case Preset::WebTable:
      return "web_table";
  }
  return "?";
}

void apply_preset(HyperParams& hp, Preset p) {
  switch (p) {
    case Preset::Full:
    case Preset::WebTable:
      break;
    case Preset::NearestPoint:
      hp.lambda1 = 0.0;
      hp.lambda2 = 0.0;
      hp.skip_low_cooccurrence = false;
      hp.skip_high_uncertainty = false;
      break;
    case Preset::NoCooccurrence:
      hp.lambda1 = 0.0;
      hp.skip_low_cooccurrence = false;
      break;
    case Preset::NoUncertainty:
      hp.lambda2 = 0.0;
      hp.skip_high_uncertainty = false;
      break;
  }
}

const GenerationTable& preset_table(const Assets& assets, Preset p) {
  return p == Preset::WebTable ? assets.web_generations : assets.generations;
}

namespace {

std::uint64_t read_u64(const json& v, const std::string& name) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw ParseError(name + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string slurp(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(std::string("cannot open ") + what + " " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw AssetError("cannot write " + path.string());
  out << text;
  if (!out) throw AssetError("failed writing " + path.string());
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::vector<RunConfig> parse_batch_config(std::string_view source, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("batch config is not valid JSON: ") + e.what());
  }
  detail::ObjectReader r(doc, "");
  RunConfig base;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };

  const json* scen = r.optional("scenarios");
  const json* suite = r.optional("suite");
  if (!scen == !suite) throw ParseError("exactly one of scenarios or suite required");
  if (scen) {
    if (!scen->is_array() || scen->empty()) throw ParseError("scenarios must be a non-empty array of paths");
    for (const auto& s : *scen) base.scenarios.push_back(resolve(detail::ObjectReader::as_string(s, "scenarios[]")));
  } else if (suite->is_string()) {
    base.suite = load_suite_params(resolve(suite->get<std::string>()));
  } else {
    base.suite = parse_suite_params(suite->dump());
  }
  if (const json* v = r.optional("suite_seed")) base.suite_seed = read_u64(*v, "suite_seed");

  std::vector<Preset> presets;
  const json* one = r.optional("preset");
  const json* many = r.optional("presets");
  if (one && many) throw ParseError("give preset or presets, not both");
  if (one) presets.push_back(parse_preset(detail::ObjectReader::as_string(*one, "preset")));
  if (many) {
    if (!many->is_array() || many->empty()) throw ParseError("presets must be a non-empty array");
    for (const auto& p : *many) presets.push_back(parse_preset(detail::ObjectReader::as_string(p, "presets[]")));
  }
  if (presets.empty()) presets.push_back(Preset::Full);

  if (const json* v = r.optional("episodes")) {
    base.episodes = read_u64(*v, "episodes");
  } else if (!base.scenarios.empty()) {
    base.episodes = base.scenarios.size();
  } else {
    base.episodes = base.suite->count;
  }
  if (base.episodes < 1) throw ValidationError("episodes must be at least 1");
  if (const json* v = r.optional("seed_base")) base.seed_base = read_u64(*v, "seed_base");
  r.int_opt("parallelism", base.parallelism);
  if (base.parallelism < 1) throw ValidationError("parallelism must be at least 1");
  if (const json* v = r.optional("output")) base.output = resolve(detail::ObjectReader::as_string(*v, "output"));
  r.finish();

  std::vector<RunConfig> out;
  for (Preset p : presets) {
    RunConfig c = base;
    c.preset = p;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<RunConfig> load_batch_config(const std::filesystem::path& path) {
  return parse_batch_config(slurp(path, "batch config"), path.parent_path());
}

ordered_json EpisodeRecord::to_json() const {
  ordered_json j;
  j["episode"] = episode;
  j["scenario"] = scenario;
  j["preset"] = preset;
  j["seed"] = seed;
  j["success"] = success;
  j["reason"] = reason;
  j["traveled"] = traveled;
  j["shortest"] = shortest ? ordered_json(*shortest) : ordered_json(nullptr);
  j["waypoints"] = waypoints;
  j["visit_order"] = visit_order;
  return j;
}

EpisodeRecord EpisodeRecord::from_json(const json& j) {
  try {
    EpisodeRecord r;
    r.episode = j.at("episode").get<std::size_t>();
    r.scenario = j.at("scenario").get<std::string>();
    r.preset = j.at("preset").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.success = j.at("success").get<bool>();
    r.reason = j.at("reason").get<std::string>();
    r.traveled = j.at("traveled").get<double>();
    if (!j.at("shortest").is_null()) r.shortest = j.at("shortest").get<double>();
    r.waypoints = j.at("waypoints").get<std::size_t>();
    r.visit_order = j.at("visit_order").get<std::vector<std::size_t>>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed episode record: ") + e.what());
  }
}

std::vector<ScenarioSpec> materialize_scenarios(const RunConfig& config, const Assets& assets,
                                                std::vector<std::string>* labels) {
  std::vector<ScenarioSpec> out;
  if (!config.scenarios.empty()) {
    for (const auto& p : config.scenarios) {
      out.push_back(load_scenario_file(p));
      if (labels) labels->push_back(p.filename().string());
    }
  } else if (config.suite) {
    out = generate_suite(*config.suite, config.suite_seed, assets);
    for (std::size_t i = 0; labels && i < out.size(); ++i) labels->push_back("suite[" + std::to_string(i) + "]");
  } else {
    throw ValidationError("run config names no scenarios");
  }
  return out;
}

AggregateReport aggregate(std::string preset, std::vector<EpisodeRecord> records) {
  AggregateReport rep;
  rep.preset = std::move(preset);
  rep.episodes = records.size();
  std::vector<EpisodeMetrics> m;
  for (const auto& r : records) m.push_back({r.success, r.traveled, r.shortest.value_or(0.0), r.waypoints});
  if (!m.empty()) {
    rep.sr = success_rate(m);
    rep.spl = spl(m);
    rep.mean_waypoints = mean_waypoints(m);
  }
  rep.records = std::move(records);
  return rep;
}

AggregateReport run_batch(const RunConfig& config, const Assets& assets) {
  if (config.episodes < 1) throw ValidationError("episodes must be at least 1");
  if (config.parallelism < 1) throw ValidationError("parallelism must be at least 1");
  std::vector<std::string> labels;
  const std::vector<ScenarioSpec> scenarios = materialize_scenarios(config, assets, &labels);
  const MissionAssets shared{&assets.words, &preset_table(assets, config.preset)};

  std::vector<EpisodeRecord> records(config.episodes);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= config.episodes) return;
      try {
        ScenarioSpec s = scenarios[i % scenarios.size()];
        s.seed = config.seed_base + i;
        apply_preset(s.hyperparams, config.preset);
        const EpisodeResult res = run_episode(s, shared);
        EpisodeRecord& r = records[i];
        r.episode = i;
        r.scenario = labels[i % labels.size()];
        r.preset = preset_name(config.preset);
        r.seed = s.seed;
        r.success = res.success;
        r.reason = res.reason;
        r.traveled = res.traveled;
        r.shortest = res.shortest;
        r.waypoints = res.waypoints_visited;
        r.visit_order = res.visit_order;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(config.episodes);
        return;
      }
    }
  };

  const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(config.parallelism), config.episodes);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return aggregate(preset_name(config.preset), std::move(records));
}

std::vector<AggregateReport> score_records(const std::vector<EpisodeRecord>& records) {
  std::vector<std::string> order;
  std::vector<std::vector<EpisodeRecord>> groups;
  for (const auto& r : records) {
    auto it = std::find(order.begin(), order.end(), r.preset);
    if (it == order.end()) {
      order.push_back(r.preset);
      groups.emplace_back();
      it = order.end() - 1;
    }
    groups[static_cast<std::size_t>(it - order.begin())].push_back(r);
  }
  std::vector<AggregateReport> out;
  for (std::size_t i = 0; i < order.size(); ++i) out.push_back(aggregate(order[i], std::move(groups[i])));
  return out;
}

std::string records_jsonl(const std::vector<EpisodeRecord>& records) {
  std::string out;
  for (const auto& r : records) out += r.to_json().dump() + "\n";
  return out;
}

std::vector<EpisodeRecord> parse_records_jsonl(std::string_view text) {
  std::vector<EpisodeRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError("records line " + std::to_string(n) + " is not valid JSON");
    }
    out.push_back(EpisodeRecord::from_json(j));
  }
  if (out.empty()) throw ParseError("records file holds no episodes");
  return out;
}

ordered_json report_json(const std::vector<AggregateReport>& reports) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json j;
    j["preset"] = r.preset;
    j["episodes"] = r.episodes;
    j["SR"] = r.sr;
    j["SPL"] = r.spl;
    j["mean_waypoints"] = r.mean_waypoints;
    rows.push_back(j);
  }
  ordered_json doc;
  doc["reports"] = rows;
  return doc;
}

std::string report_table(const std::vector<AggregateReport>& reports) {
  auto pad = [](std::string s, std::size_t w, bool left) {
    if (s.size() >= w) return s;
    return left ? s + std::string(w - s.size(), ' ') : std::string(w - s.size(), ' ') + s;
  };
  std::string out = pad("Method", 18, true) + pad("SR (%)", 9, false) + pad("SPL", 9, false) +
                    pad("#", 8, false) + pad("N", 6, false) + "\n";
  out += std::string(50, '-') + "\n";
  for (const auto& r : reports)
    out += pad(r.preset, 18, true) + pad(fixed(r.sr, 2), 9, false) + pad(fixed(r.spl, 4), 9, false) +
           pad(fixed(r.mean_waypoints, 2), 8, false) + pad(std::to_string(r.episodes), 6, false) + "\n";
  return out;
}

void write_batch_outputs(const std::filesystem::path& dir, const std::vector<AggregateReport>& reports) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw AssetError("cannot create output directory " + dir.string());
  std::vector<EpisodeRecord> all;
  for (const auto& r : reports) all.insert(all.end(), r.records.begin(), r.records.end());
  write_file(dir / "records.jsonl", records_jsonl(all));
  write_file(dir / "report.json", report_json(reports).dump(2) + "\n");
  write_file(dir / "report.txt", report_table(reports));
}

}  // namespace vsearch
