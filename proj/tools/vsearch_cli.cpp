// Command-line front end: run, batch, gen-suite, score.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "vsearch/assets.hpp"
#include "vsearch/batch.hpp"
#include "vsearch/errors.hpp"
#include "vsearch/mission.hpp"
#include "vsearch/scenario_io.hpp"
#include "vsearch/suite.hpp"

namespace fs = std::filesystem;
using namespace vsearch;

namespace {

constexpr int kExitConfig = 2;

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ParseError("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw AssetError("cannot write " + p.string());
  out << text;
}

bool ask_operator(const CandidatePatch& c) {
  std::cout << "candidate score " << c.score << " at (" << c.position.x << ", " << c.position.y << ") bbox ["
            << c.detection.bbox.x_min << ", " << c.detection.bbox.y_min << ", " << c.detection.bbox.x_max << ", "
            << c.detection.bbox.y_max << "]: is this the target? [y/N] " << std::flush;
  std::string line;
  if (!std::getline(std::cin, line)) return false;
  return !line.empty() && (line[0] == 'y' || line[0] == 'Y');
}

struct RunArgs {
  std::string scenario;
  std::string preset = "full";
  std::optional<std::uint64_t> seed;
  bool interactive = false;
  std::string trace;
};

int cmd_run(const RunArgs& a, const fs::path& root) {
  const Assets assets = load_assets(root);
  ScenarioSpec s = load_scenario_file(a.scenario);
  const Preset preset = parse_preset(a.preset);
  apply_preset(s.hyperparams, preset);
  if (a.seed) s.seed = *a.seed;
  ConfirmFn confirm;
  if (a.interactive) confirm = ask_operator;
  const EpisodeResult res = run_episode(s, {&assets.words, &preset_table(assets, preset)}, confirm);
  if (!a.trace.empty()) write_text(a.trace, res.trace.to_jsonl());

  EpisodeRecord r;
  r.scenario = fs::path(a.scenario).filename().string();
  r.preset = preset_name(preset);
  r.seed = s.seed;
  r.success = res.success;
  r.reason = res.reason;
  r.traveled = res.traveled;
  r.shortest = res.shortest;
  r.waypoints = res.waypoints_visited;
  r.visit_order = res.visit_order;
  std::cout << r.to_json().dump() << "\n";
  return 0;
}

int cmd_batch(const std::string& config, const fs::path& root) {
  const std::vector<RunConfig> runs = load_batch_config(config);
  const Assets assets = load_assets(root);
  std::vector<AggregateReport> reports;
  for (const auto& c : runs) reports.push_back(run_batch(c, assets));
  if (!runs.front().output.empty()) write_batch_outputs(runs.front().output, reports);
  std::cout << report_table(reports);
  return 0;
}

int cmd_gen_suite(const std::string& params_path, const std::string& out_dir, std::uint64_t seed,
                  const fs::path& root) {
  const SuiteParams params = load_suite_params(params_path);
  const Assets assets = load_assets(root);
  const std::vector<ScenarioSpec> suite = generate_suite(params, seed, assets);
  fs::create_directories(out_dir);
  nlohmann::ordered_json manifest;
  manifest["scenarios"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < suite.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "scenario_%03zu.json", i);
    write_text(fs::path(out_dir) / name, serialize_scenario(suite[i]));
    manifest["scenarios"].push_back(name);
  }
  write_text(fs::path(out_dir) / "suite.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << suite.size() << " scenarios to " << out_dir << "\n";
  return 0;
}

int cmd_score(const std::string& records_path, const std::string& report_path) {
  const std::vector<AggregateReport> reports = score_records(parse_records_jsonl(read_text(records_path)));
  const std::string table = report_table(reports);
  if (!report_path.empty()) {
    write_text(report_path, report_json(reports).dump(2) + "\n");
    write_text(fs::path(report_path).replace_extension(".txt"), table);
  }
  std::cout << table;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Landmark-guided active visual search simulator"};
  app.require_subcommand(1);
  std::string assets_dir;
  app.add_option("--assets", assets_dir, std::string("Asset directory (overrides $") + kAssetRootEnv + ")");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run one episode");
  run_cmd->add_option("scenario", run.scenario, "Scenario file")->required();
  run_cmd->add_option("--preset", run.preset, "full, nearest_point, no_cooccurrence, no_uncertainty, web_table");
  run_cmd->add_option("--seed", run.seed, "Override the scenario seed");
  run_cmd->add_flag("--interactive", run.interactive, "Ask on stdin before accepting each candidate");
  run_cmd->add_option("--trace", run.trace, "Write the episode trace (JSON lines)");

  std::string batch_config;
  auto* batch_cmd = app.add_subcommand("batch", "Run a batch of episodes");
  batch_cmd->add_option("config", batch_config, "Batch config file")->required();

  std::string params_path, out_dir;
  std::uint64_t suite_seed = 0;
  auto* gen_cmd = app.add_subcommand("gen-suite", "Generate a scenario suite");
  gen_cmd->add_option("params", params_path, "Suite parameter file")->required();
  gen_cmd->add_option("--out", out_dir, "Output directory")->required();
  gen_cmd->add_option("--seed", suite_seed, "Suite seed");

  std::string records_path, report_path;
  auto* score_cmd = app.add_subcommand("score", "Aggregate episode records");
  score_cmd->add_option("records", records_path, "Records file (JSON lines)")->required();
  score_cmd->add_option("--report", report_path, "Write the JSON report here, with a .txt table beside it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const fs::path root = assets_dir.empty() ? asset_root() : fs::path(assets_dir);
  try {
    if (*run_cmd) return cmd_run(run, root);
    if (*batch_cmd) return cmd_batch(batch_config, root);
    if (*gen_cmd) return cmd_gen_suite(params_path, out_dir, suite_seed, root);
    if (*score_cmd) return cmd_score(records_path, report_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
