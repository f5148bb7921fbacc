// Acceptance run: prints one PASS/FAIL line per criterion and exits non-zero
// when any criterion fails.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "vsearch/batch.hpp"
#include "vsearch/errors.hpp"
#include "vsearch/knowledge.hpp"
#include "vsearch/metrics.hpp"
#include "vsearch/mission.hpp"
#include "vsearch/mln.hpp"
#include "vsearch/planning.hpp"
#include "vsearch/semantic.hpp"
#include "vsearch/suite.hpp"

namespace fs = std::filesystem;
using namespace vsearch;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failure messages of a criterion.
class Checker {
 public:
  void require(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  void close(double a, double b, double tol, const std::string& what) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: %.15g vs %.15g", what.c_str(), a, b);
    require(std::abs(a - b) <= tol, buf);
  }
  bool ok() const { return failures_ == 0; }
  std::string notes() const {
    return failures_ == 0 ? "" : std::to_string(failures_) + " failure(s): " + notes_;
  }

 private:
  int failures_ = 0;
  std::string notes_;
};

std::vector<double> random_dist(std::mt19937_64& gen, std::size_t n, bool allow_zero) {
  std::exponential_distribution<double> e(1.0);
  std::bernoulli_distribution zero(0.15);
  std::vector<double> p(n);
  for (double& v : p) v = allow_zero && zero(gen) ? 0.0 : e(gen);
  if (std::accumulate(p.begin(), p.end(), 0.0) == 0.0) p[0] = 1.0;
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= s;
  return p;
}

std::vector<double> random_vec(std::mt19937_64& gen, std::size_t dim) {
  std::normal_distribution<double> n;
  std::vector<double> v(dim);
  for (double& x : v) x = n(gen);
  return v;
}

Outcome formula_oracles() {
  const auto t0 = Clock::now();
  Checker chk;
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  constexpr int kTrials = 1000;

  for (int k = 0; k < kTrials; ++k) {
    const std::size_t J = 1 + gen() % 6, C = 2 + gen() % 8;
    std::vector<std::vector<double>> mu;
    for (std::size_t j = 0; j < J; ++j) mu.push_back(random_dist(gen, C, true));
    const auto pi = random_dist(gen, J, true);
    const MixtureOutput m(pi, mu);
    chk.close(epistemic(m), oracle::epistemic(pi, mu), 1e-9, "epistemic");
    chk.close(aleatoric(m), oracle::aleatoric(pi, mu), 1e-9, "aleatoric");
    // Loss needs positive mass on the true class in every mixture.
    std::vector<std::vector<double>> pos;
    for (std::size_t j = 0; j < J; ++j) pos.push_back(random_dist(gen, C, false));
    const auto pi2 = random_dist(gen, J, false);
    const std::size_t c = gen() % C;
    chk.close(mln_loss(MixtureOutput(pi2, pos), c), oracle::mln_loss(pi2, pos, c), 1e-9, "mln_loss");
  }

  for (int k = 0; k < kTrials; ++k) {
    const std::size_t L = 1 + gen() % 9, D = 3 + gen() % 10;
    TextEmbeddingStore store;
    std::vector<std::string> names;
    std::vector<std::vector<double>> raw;
    for (std::size_t i = 0; i < L; ++i) {
      names.push_back("name" + std::to_string(i));
      raw.push_back(random_vec(gen, D));
      store.insert(names.back(), raw.back());
    }
    const auto patch = random_vec(gen, D);
    const double t = 0.05 + 50.0 * u(gen);
    const auto p = landmark_probability(EmbeddingVector::normalized(patch), names, store, t);
    const auto expect = oracle::landmark_probability(patch, raw, t);
    for (std::size_t i = 0; i < L; ++i) chk.close(p[i], expect[i], 1e-9, "landmark_probability");
  }

  for (int k = 0; k < kTrials; ++k) {
    const auto p = random_dist(gen, 1 + gen() % 12, true);
    chk.close(semantic_uncertainty(p), oracle::entropy(p), 1e-9, "semantic_uncertainty");
  }

  for (int k = 0; k < kTrials; ++k) {
    const std::size_t D = 2 + gen() % 12, V = 4 + gen() % 20;
    WordVectorStore store;
    std::map<std::string, std::vector<double>> words;
    std::vector<std::string> vocab;
    for (std::size_t i = 0; i < V; ++i) {
      vocab.push_back("w" + std::to_string(i));
      words[vocab.back()] = random_vec(gen, D);
      store.insert(vocab.back(), words[vocab.back()]);
    }
    auto phrase = [&](bool allow_unknown) {
      std::string s;
      const std::size_t n = 1 + gen() % 3;
      for (std::size_t i = 0; i < n; ++i) {
        if (!s.empty()) s += gen() % 2 ? " " : "_";
        s += allow_unknown && gen() % 4 == 0 ? "zz" + std::to_string(i) : vocab[gen() % V];
      }
      return s;
    };
    std::vector<std::string> gens;
    const std::size_t G = 1 + gen() % 20;
    for (std::size_t i = 0; i < G; ++i) gens.push_back(phrase(true));
    GenerationTable table;
    table.insert("target", gens);
    const std::string landmark = phrase(false);
    const double fallback = u(gen);
    chk.close(cooccurrence("target", landmark, table, store, fallback).score,
              oracle::cooccurrence(landmark, gens, words, fallback), 1e-9, "cooccurrence");
  }

  for (int k = 0; k < kTrials; ++k) {
    HyperParams hp;
    hp.lambda1 = 5.0 * u(gen);
    hp.lambda2 = 5.0 * u(gen);
    Viewpoint v;
    v.pose = Pose(20 * u(gen) - 10, 20 * u(gen) - 10, 0.0);
    v.cooccur = 2 * u(gen) - 1;
    v.sem_uncert = 3 * u(gen);
    const Pose at(20 * u(gen) - 10, 20 * u(gen) - 10, 0.0);
    chk.close(viewpoint_cost(at, v, hp),
              oracle::viewpoint_cost(at.x, at.y, v.pose.x, v.pose.y, v.cooccur, v.sem_uncert, hp.lambda1, hp.lambda2),
              1e-9, "viewpoint_cost");
  }

  for (int k = 0; k < kTrials; ++k) {
    std::vector<EpisodeMetrics> eps;
    std::vector<oracle::Episode> ref;
    const std::size_t n = 1 + gen() % 30;
    for (std::size_t i = 0; i < n; ++i) {
      const bool success = u(gen) < 0.6;
      const double l = gen() % 10 == 0 ? 0.0 : 30 * u(gen);
      const double p = gen() % 10 == 0 ? l : l + 30 * u(gen);
      eps.push_back({success, p, l, 0});
      ref.push_back({success, l, p});
    }
    chk.close(spl(eps), oracle::spl(ref), 1e-9, "spl");
  }

  const double secs = seconds_since(t0);
  chk.require(secs < 10.0, "runtime over 10 s");
  char buf[96];
  std::snprintf(buf, sizeof buf, "8 formulas x %d random inputs in %.2f s", kTrials, secs);
  return {chk.ok(), buf + std::string(chk.ok() ? "" : "; " + chk.notes())};
}

Outcome closed_forms() {
  Checker chk;
  chk.close(epistemic(MixtureOutput({0.5, 0.5}, {{1.0, 0.0}, {0.0, 1.0}})), 0.5, 1e-12, "epistemic");
  for (std::size_t c = 2; c <= 10; ++c)
    chk.close(aleatoric(MixtureOutput({1.0}, {std::vector<double>(c, 1.0 / c)})), std::log(double(c)), 1e-12,
              "aleatoric ln C");
  chk.close(semantic_uncertainty(std::vector<double>(6, 1.0 / 6.0)), std::log(6.0), 1e-12, "entropy ln 6");

  const PromptSet prompts = PromptSet::standard();
  TextEmbeddingStore store;
  for (std::size_t i = 0; i < prompts.prompts.size(); ++i) {
    std::vector<double> v(prompts.prompts.size() + 1, 0.0);
    v[0] = 1.0;
    v[i + 1] = 1.0;
    store.insert(prompts.prompts[i], v);
  }
  std::vector<double> e0(prompts.prompts.size() + 1, 0.0);
  e0[0] = 1.0;
  chk.close(clip_objectness(EmbeddingVector::normalized(e0), prompts, store), 11.0 / 14.0, 1e-12, "objectness");
  chk.close(iou_ioa(BBox{0, 0, 2, 2}, BBox{1, 1, 3, 3}).iou, 1.0 / 7.0, 1e-12, "iou");
  return {chk.ok(), chk.ok() ? "epistemic 0.5, aleatoric ln C, entropy ln 6, objectness 11/14, iou 1/7" : chk.notes()};
}

Outcome threshold_semantics(const Assets& assets) {
  Checker chk;
  std::size_t waypoints = 0, candidates = 0, episodes = 0;
  SuiteParams sp;
  sp.count = 30;
  std::vector<ScenarioSpec> scenarios = generate_suite(sp, 77, assets);
  scenarios.push_back(fixtures::golden());
  for (ScenarioSpec& s : scenarios) {
    s.hyperparams.t_c = 0.2;
    s.hyperparams.t_u = 2.5;
    s.hyperparams.m_t = 29.0;
    const EpisodeResult r = run_episode(s, {&assets.words, &assets.generations});
    ++episodes;
    for (const auto& e : r.trace.events()) {
      if (e.type != "plan") continue;
      for (const auto& v : e.payload["order"]) {
        ++waypoints;
        chk.require(v["cooccur"].get<double>() >= 0.2, "waypoint with cooccur < 0.2");
        chk.require(v["sem_uncert"].get<double>() <= 2.5, "waypoint with sem_uncert > 2.5");
      }
    }
    for (const auto& c : r.candidates) {
      ++candidates;
      chk.require(c.score > 29.0, "candidate with score <= 29");
    }
  }
  // Random candidate sets straight through the planner.
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  HyperParams hp;
  for (int k = 0; k < 2000; ++k) {
    std::vector<Viewpoint> c(1 + gen() % 8);
    for (std::size_t i = 0; i < c.size(); ++i) {
      c[i].landmark_id = i;
      c[i].pose = Pose(10 * u(gen), 10 * u(gen), 0);
      c[i].cooccur = u(gen);
      c[i].sem_uncert = 3.5 * u(gen);
    }
    for (const auto& v : plan_waypoints(Pose(5, 5, 0), c, hp).order) {
      chk.require(v.cooccur >= 0.2 && v.sem_uncert <= 2.5, "planner emitted a thresholded viewpoint");
      ++waypoints;
    }
  }
  const std::size_t m = 300;
  chk.require(pseudo_annotation_count(0, m) == 1, "k(0) != 1");
  chk.require(pseudo_annotation_count(m / 3, m) == 2, "k(max/3) != 2");
  chk.require(pseudo_annotation_count(m, m) == 4, "k(max) != 4");
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu episodes, %zu waypoints, %zu candidates; k = 1, 2, 4", episodes, waypoints,
                candidates);
  return {chk.ok(), buf + std::string(chk.ok() ? "" : "; " + chk.notes())};
}

const RunConfig& find_preset(const std::vector<RunConfig>& runs, Preset p) {
  for (const auto& r : runs)
    if (r.preset == p) return r;
  throw ValidationError(std::string("reference config lacks preset ") + preset_name(p));
}

Outcome ablation_trend(const Assets& assets) {
  const auto t0 = Clock::now();
  const auto runs = load_batch_config(fs::path(VSEARCH_CONFIG_DIR) / "reference_batch.json");
  const int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto run = [&](Preset p) {
    RunConfig c = find_preset(runs, p);
    c.parallelism = workers;
    return run_batch(c, assets);
  };
  const AggregateReport full = run(Preset::Full);
  const AggregateReport nearest = run(Preset::NearestPoint);
  const AggregateReport no_unc = run(Preset::NoUncertainty);
  const double secs = seconds_since(t0);

  Checker chk;
  chk.require(full.episodes == 100, "reference suite is not 100 episodes");
  chk.require(full.spl >= nearest.spl, "SPL(full) < SPL(nearest_point)");
  chk.require(full.spl >= no_unc.spl, "SPL(full) < SPL(no_uncertainty)");
  chk.require(full.mean_waypoints <= nearest.mean_waypoints, "#(full) > #(nearest_point)");
  chk.require(secs < 300.0, "runtime over 5 min");
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "suite_seed %llu: SPL full %.4f, nearest_point %.4f, no_uncertainty %.4f; # full %.2f, "
                "nearest_point %.2f; %.1f s",
                static_cast<unsigned long long>(runs.front().suite_seed), full.spl, nearest.spl, no_unc.spl,
                full.mean_waypoints, nearest.mean_waypoints, secs);
  return {chk.ok(), buf + std::string(chk.ok() ? "" : "; " + chk.notes())};
}

Outcome failure_budget(const Assets& assets) {
  Checker chk;
  const SuiteParams p = load_suite_params(fs::path(VSEARCH_CONFIG_DIR) / "enclosed_suite.json");
  const auto suite = generate_suite(p, 5, assets);
  double worst = -1e9;
  for (const auto& s : suite) {
    const EpisodeResult r = run_episode(s, {&assets.words, &assets.generations});
    chk.require(!r.success, "an enclosed target was reported found");
    double last_leg = 0.0;
    for (const auto& e : r.trace.events())
      if (e.type == "navigate") last_leg = e.payload["length"].get<double>();
    const double over = r.traveled - last_leg - s.hyperparams.fail_distance;
    worst = std::max(worst, over);
    chk.require(over <= 0.0, "traveled exceeds fail_distance plus the last leg");
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu enclosed targets, all failed; max (traveled - last leg - 50 m) = %.2f m",
                suite.size(), worst);
  return {chk.ok(), buf + std::string(chk.ok() ? "" : "; " + chk.notes())};
}

Outcome batch_determinism(const Assets& assets) {
  const fs::path root = fs::temp_directory_path() / ("vsearch_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  RunConfig c;
  SuiteParams sp;
  sp.count = 16;
  c.suite = sp;
  c.suite_seed = 404;
  c.episodes = 16;
  c.seed_base = 9;
  std::vector<std::string> files;
  int run = 0;
  for (int par : {1, 1, 8, 8}) {
    c.parallelism = par;
    const fs::path dir = root / ("run" + std::to_string(run++));
    write_batch_outputs(dir, {run_batch(c, assets)});
    files.push_back(fixtures::read_file(dir / "records.jsonl"));
  }
  fs::remove_all(root);
  bool same = !files[0].empty();
  for (const auto& f : files) same = same && f == files[0];
  return {same, same ? "16 episodes, records.jsonl identical across 2 runs each at parallelism 1 and 8"
                     : "records.jsonl differs between runs"};
}

Outcome golden_trace(const Assets& assets) {
  const ScenarioSpec s = fixtures::golden();
  const std::string expect = fixtures::read_file(fixtures::data_dir() / "golden_trace.jsonl");
  const std::string got = run_episode(s, {&assets.words, &assets.generations}).trace.to_jsonl();
  if (got == expect) {
    std::size_t lines = std::count(got.begin(), got.end(), '\n');
    return {true, "byte-identical (" + std::to_string(lines) + " events)"};
  }
  std::size_t i = 0;
  while (i < got.size() && i < expect.size() && got[i] == expect[i]) ++i;
  return {false, "first difference at byte " + std::to_string(i)};
}

Outcome planner_oracle() {
  Checker chk;
  std::mt19937_64 gen(88);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int reachable = 0;
  for (int k = 0; k < 200; ++k) {
    const int w = 2 + static_cast<int>(gen() % 19), h = 2 + static_cast<int>(gen() % 19);
    const double wall = 0.1 + 0.25 * u(gen);
    std::vector<std::string> rows(static_cast<std::size_t>(h), std::string(static_cast<std::size_t>(w), '.'));
    for (auto& r : rows)
      for (char& ch : r) {
        const double x = u(gen);
        ch = x < wall ? '#' : x < wall + 0.05 ? '?' : '.';
      }
    const double radius = 0.1 * static_cast<double>(gen() % 3);
    const BeliefMap b = fixtures::belief_from_rows(rows);
    const NavGrid nav(b, radius);
    const Cell s{static_cast<int>(gen() % w), static_cast<int>(gen() % h)};
    const Cell g{static_cast<int>(gen() % w), static_cast<int>(gen() % h)};
    const auto expect = oracle::shortest_steps(rows, s.x, s.y, g.x, g.y, radius / 0.1);
    std::optional<Path> got;
    try {
      got = plan_path(nav, s, g);
    } catch (const NoPathError&) {
    }
    chk.require(got.has_value() == expect.has_value(), "reachability differs on grid " + std::to_string(k));
    if (!got || !expect) continue;
    ++reachable;
    chk.require(got->steps.straight == expect->straight && got->steps.diagonal == expect->diagonal,
                "step counts differ on grid " + std::to_string(k));
    chk.require(std::abs(got->length - expect->cells() * 0.1) <= 1e-12, "length differs on grid " + std::to_string(k));
  }
  return {chk.ok(), "200 grids up to 20x20, " + std::to_string(reachable) + " reachable pairs, exact match" +
                        (chk.ok() ? "" : "; " + chk.notes())};
}

}  // namespace

int main() {
  const Assets assets = load_assets(VSEARCH_DEFAULT_ASSET_ROOT);
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"formula oracles", formula_oracles},
      {"closed-form values", closed_forms},
      {"threshold semantics", [&] { return threshold_semantics(assets); }},
      {"ablation trend", [&] { return ablation_trend(assets); }},
      {"failure budget", [&] { return failure_budget(assets); }},
      {"batch determinism", [&] { return batch_determinism(assets); }},
      {"golden trace", [&] { return golden_trace(assets); }},
      {"planner oracle", planner_oracle},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
