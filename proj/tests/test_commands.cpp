#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include "doctest.h"
#include "json.hpp"

#include "instructkit/commands.hpp"
#include "instructkit/errors.hpp"
#include "instructkit/scenario_io.hpp"
#include "instructkit/synth.hpp"
#include "support.hpp"

using namespace instructkit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const Config kConfig{};

std::vector<json> lines_of(const std::string& jsonl) {
  std::vector<json> out;
  for (const auto& [n, line] : jsonl_lines(jsonl)) out.push_back(json::parse(line));
  return out;
}

struct SynthScenario {
  Scenario scenario;
  synth::SynthTrajectory traj;
};

SynthScenario make(std::string id, synth::SynthKind kind, double v, synth::TurnSide side = synth::TurnSide::kLeft) {
  synth::SynthSpec spec;
  spec.kind = kind;
  spec.side = side;
  spec.v0 = spec.v_mid = spec.v1 = v;
  const HorizonConfig h;
  auto traj = synth::gen_trajectory(spec, h);
  auto scen = synth::gen_scenario(std::move(id), traj, synth::LaneTopology::kTJunction, h);
  return {scen, traj};
}

std::string prediction_line(const SynthScenario& s, int matches) {
  const HorizonConfig h;
  auto p = synth::gen_prediction_set(s.traj.track, s.traj.expected.fine, h, matches, 6);
  PredictionRecord r;
  r.set = p.set;
  r.set.scenario_id = s.scenario.scenario_id;
  r.direction = s.traj.expected.direction;
  r.decision = Decision::kAccept;
  r.ground_truth = synth::future_xy(s.traj.track, h);
  return prediction_to_json(r).dump();
}

// Dataset + predictions for scenarios paired with their match counts.
json evaluate(const std::vector<std::pair<SynthScenario, int>>& items) {
  std::string corpus, preds;
  for (const auto& [s, m] : items) {
    corpus += serialize_scenario(s.scenario) + "\n";
    preds += prediction_line(s, m) + "\n";
  }
  const auto dataset = cmd_gen(corpus, kConfig, {});
  return json::parse(cmd_evaluate({dataset, preds, std::nullopt}, kConfig));
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("instructkit-test-" + std::to_string(std::rand()) + "-" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    const auto p = (path / name).string();
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }
};

int run_cli(const std::string& args, const TempDir& dir, std::string* err = nullptr) {
  const auto err_path = (dir.path / "stderr.txt").string();
  const std::string cmd = std::string("\"") + INSTRUCTKIT_CLI_PATH + "\" " + args + " > \"" +
                          (dir.path / "stdout.txt").string() + "\" 2> \"" + err_path + "\"";
  const int status = std::system(cmd.c_str());
  if (err) *err = test::read_file(err_path);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("extract") {
  TEST_CASE("empty input gives empty output") {
    CHECK(cmd_extract("", kConfig).empty());
    CHECK(cmd_extract("\n\n", kConfig).empty());
    CHECK(cmd_feasibility("", kConfig).empty());
  }

  TEST_CASE("malformed line reports its number") {
    const auto s = make("a", synth::SynthKind::kStraight, 10.0);
    const std::string corpus = serialize_scenario(s.scenario) + "\n{oops\n";
    try {
      (void)cmd_extract(corpus, kConfig);
      FAIL("expected InputError");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    const std::string schema = serialize_scenario(s.scenario) + "\n{\"scenario_id\": 3}\n";
    CHECK_THROWS_AS((void)cmd_extract(schema, kConfig), InputError);
  }

  TEST_CASE("synthetic corpus matches its sidecar") {
    const auto out = cmd_synth("default", 200, 5, kConfig);
    const auto extracted = lines_of(cmd_extract(out.corpus, kConfig));
    const auto expected = lines_of(out.expected);
    REQUIRE(extracted.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      const auto& a = extracted[i];
      const auto& e = expected[i];
      CHECK(a["scenario_id"] == e["scenario_id"]);
      for (const char* key : {"fine_direction", "direction", "speed", "accel", "behavior", "two_step"}) {
        CHECK(a[key] == e[key]);
      }
    }
  }

  TEST_CASE("per-scenario errors become error rows") {
    auto s = make("ped", synth::SynthKind::kStraight, 10.0);
    for (int i = 10; i < s.scenario.horizon.total_steps(); ++i) s.scenario.agents[0].points[i].valid = false;
    const auto rows = lines_of(cmd_extract(serialize_scenario(s.scenario) + "\n", kConfig));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0]["error"] == "InsufficientPoints");
  }
}

TEST_SUITE("feasibility") {
  TEST_CASE("lane topologies") {
    const auto out = cmd_synth("direction", 300, 8, kConfig);
    const auto rows = lines_of(cmd_feasibility(out.corpus, kConfig));
    const auto expected = lines_of(out.expected);
    REQUIRE(rows.size() == expected.size());
    std::set<std::string> topologies;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& e = expected[i];
      if (!e.contains("expected_lane_directions")) continue;
      topologies.insert(e["topology"].get<std::string>());
      std::set<std::string> reachable{rows[i]["gt_direction"].get<std::string>()};
      for (const auto& d : rows[i]["feasible"]) reachable.insert(d.get<std::string>());
      for (const auto& d : e["expected_lane_directions"]) CHECK(reachable.contains(d.get<std::string>()));
      CHECK(rows[i]["gt_direction"] == e["direction"]);
    }
    CHECK(topologies.size() == 4);
  }
}

TEST_SUITE("gen-instructions") {
  TEST_CASE("seeded sampling") {
    const auto out = cmd_synth("direction", 300, 12, kConfig);
    GenOptions opt;
    opt.sample = true;
    opt.count = 10000;
    const auto a = cmd_gen(out.corpus, kConfig, opt);
    CHECK(a == cmd_gen(out.corpus, kConfig, opt));
    const auto rows = lines_of(a);
    REQUIRE(rows.size() == 10000);
    std::map<std::string, int> per_class;
    int gt = 0;
    for (const auto& r : rows) {
      if (r["feas_tag"] == "GT") {
        ++gt;
        per_class[r["direction"].get<std::string>()] += 1;
      }
    }
    CHECK(std::abs(gt / 10000.0 - 0.7) < 0.01);
    CHECK(per_class.size() == kDirectionCount);
    for (const auto& [k, n] : per_class) CHECK(std::abs(n / double(gt) - 0.2) < 0.02);

    Config other = kConfig;
    other.sampler.seed = 1;
    CHECK(cmd_gen(out.corpus, other, opt) != a);
  }

  TEST_CASE("behavior mode") {
    const auto book = load_guidelines(test::read_file(test::data_path("guidelines.json")));
    const auto out = cmd_synth("default", 16, 3, kConfig);
    GenOptions opt;
    opt.mode = GenMode::kBehavior;
    CHECK_THROWS_AS(cmd_gen(out.corpus, kConfig, opt), ConfigError);
    opt.guidelines = book;
    const auto rows = lines_of(cmd_gen(out.corpus, kConfig, opt));
    CHECK(rows.size() == 16 * kBehaviorCount);
    for (const auto& r : rows) {
      CHECK(r.contains("safety_tag"));
      CHECK((r["decision"] == "Accept") == (r["safety_tag"] == "safe"));
    }
  }
}

TEST_SUITE("evaluate") {
  TEST_CASE("worked IFR examples") {
    const auto r = evaluate({{make("a", synth::SynthKind::kArc, 8.0), 6},
                             {make("b", synth::SynthKind::kStraight, 10.0), 2},
                             {make("c", synth::SynthKind::kArc, 8.0, synth::TurnSide::kRight), 1}});
    const auto& rows = r["per_row"];
    REQUIRE(rows.size() == 3);
    CHECK(rows[0]["ifr"].get<double>() == 1.0);
    CHECK(std::abs(rows[1]["ifr"].get<double>() * 100 - 33.33) < 0.01);
    CHECK(std::abs(rows[2]["ifr"].get<double>() * 100 - 16.67) < 0.01);
    CHECK(r["min_ade"].get<double>() == 0.0);
    CHECK(r["min_fde"].get<double>() == 0.0);
    CHECK(r["feas_accuracy"]["GT"].get<double>() == 1.0);
    CHECK(r["percent"]["ifr_micro"].get<double>() == doctest::Approx(100 * (1 + 1 / 3.0 + 1 / 6.0) / 3));
  }

  TEST_CASE("hand-computed macro over two classes") {
    std::vector<std::pair<SynthScenario, int>> items;
    for (int i = 0; i < 9; ++i) {
      items.push_back({make("s" + std::to_string(i), synth::SynthKind::kStraight, 8.0 + i), 6});
    }
    items.push_back({make("t", synth::SynthKind::kArc, 8.0), 0});
    const auto r = evaluate(items);
    CHECK(r["ifr_macro"].get<double>() == 0.5);
    CHECK(r["ifr_micro"].get<double>() == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(r["per_class_ifr"]["straight"].get<double>() == 1.0);
    CHECK(r["per_class_ifr"]["left"].get<double>() == 0.0);
  }

  TEST_CASE("rates lie in [0, 1] and the report is order independent") {
    const auto out = cmd_synth("direction", 120, 4, kConfig);
    const auto dataset = cmd_gen(out.corpus, kConfig, {});
    const auto report = cmd_evaluate({dataset, out.predictions, std::nullopt}, kConfig);
    // Reverse the prediction lines: the report must not change.
    std::vector<std::string> lines;
    for (const auto& [n, l] : jsonl_lines(out.predictions)) lines.emplace_back(l);
    std::string reversed;
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) reversed += *it + "\n";
    const auto again = cmd_evaluate({dataset, reversed, std::nullopt}, kConfig);
    const auto a = json::parse(report), b = json::parse(again);
    CHECK(a["ifr_micro"] == b["ifr_micro"]);
    CHECK(a["per_row"] == b["per_row"]);
    for (const char* k : {"ifr_micro", "ifr_macro"}) {
      CHECK(a[k].get<double>() >= 0.0);
      CHECK(a[k].get<double>() <= 1.0);
    }
    CHECK(a["min_fde"].get<double>() >= 0.0);
  }

  TEST_CASE("bad inputs") {
    const auto s = make("a", synth::SynthKind::kStraight, 10.0);
    const auto dataset = cmd_gen(serialize_scenario(s.scenario) + "\n", kConfig, {});
    auto other = s;
    other.scenario.scenario_id = "zzz";
    CHECK_THROWS_AS(cmd_evaluate({dataset, prediction_line(other, 3) + "\n", std::nullopt}, kConfig),
                    InputError);
    const auto line = prediction_line(s, 3);
    CHECK_THROWS_AS(cmd_evaluate({dataset, line + "\n" + line + "\n", std::nullopt}, kConfig),
                    InputError);
    CHECK_THROWS_AS(cmd_evaluate({dataset, "[1,2]\n", std::nullopt}, kConfig), InputError);
  }
}

TEST_SUITE("stats") {
  TEST_CASE("empty dataset is all zero") {
    const auto r = json::parse(cmd_stats("", kConfig));
    CHECK(r["rows"] == 0);
    for (const auto& [k, v] : r["instructed_direction"].items()) CHECK(v == 0);
    for (const auto& [k, v] : r["gt_direction"].items()) CHECK(v == 0);
  }

  TEST_CASE("counts match the synthetic histogram") {
    const auto out = cmd_synth("direction", 200, 6, kConfig);
    const auto r = json::parse(cmd_stats(cmd_gen(out.corpus, kConfig, {}), kConfig));
    CHECK(r["rows"] == 200 * kDirectionCount);
    int sum = 0;
    for (const auto& [k, v] : r["instructed_direction"].items()) {
      CHECK(v == 200);
      sum += v.get<int>();
    }
    CHECK(sum == r["rows"].get<int>());
    std::map<std::string, int> hist;
    for (const auto& e : lines_of(out.expected)) hist[e["direction"].get<std::string>()] += 1;
    for (const auto& [k, v] : r["gt_direction"].items()) CHECK(v.get<int>() == hist[k]);
    CHECK(r["feas_tag"]["GT"] == 200);
  }
}

TEST_SUITE("determinism") {
  TEST_CASE("outputs do not depend on the number of jobs") {
    const auto out = cmd_synth("default", 150, 21, kConfig);
    Config many = kConfig;
    many.jobs = 8;
    CHECK(cmd_extract(out.corpus, kConfig) == cmd_extract(out.corpus, many));
    CHECK(cmd_feasibility(out.corpus, kConfig) == cmd_feasibility(out.corpus, many));
    const auto dataset = cmd_gen(out.corpus, kConfig, {});
    CHECK(dataset == cmd_gen(out.corpus, many, {}));
    CHECK(cmd_evaluate({dataset, out.predictions, std::nullopt}, kConfig) ==
          cmd_evaluate({dataset, out.predictions, std::nullopt}, many));
    CHECK(cmd_synth("default", 150, 21, many).corpus == out.corpus);
  }
}

TEST_SUITE("command line") {
  TEST_CASE("exit codes") {
    TempDir dir;
    const auto out = cmd_synth("default", 5, 1, kConfig);
    const auto corpus = dir.file("corpus.jsonl", out.corpus);
    const auto empty = dir.file("empty.jsonl", "");
    const auto broken = dir.file("broken.jsonl", out.corpus + "not json\n");
    const auto bad_config = dir.file("bad.json", R"({"direction": {"theta_s": -5}})");
    const auto good_config = dir.file("good.json", R"({"direction": {"theta_s": 35}})");

    CHECK(run_cli("extract " + corpus, dir) == kExitOk);
    CHECK(run_cli("extract " + empty, dir) == kExitOk);
    CHECK(test::read_file((dir.path / "stdout.txt").string()).empty());
    CHECK(run_cli("extract --config " + good_config + " " + corpus, dir) == kExitOk);

    std::string err;
    CHECK(run_cli("extract " + broken, dir, &err) == kExitInput);
    CHECK(err.find("line 6") != std::string::npos);
    CHECK(run_cli("extract " + (dir.path / "missing.jsonl").string(), dir) == kExitInput);
    CHECK(run_cli("extract --config " + bad_config + " " + corpus, dir) == kExitConfig);
    CHECK(run_cli("extract --config " + (dir.path / "nope.json").string() + " " + corpus, dir) ==
          kExitConfig);
    CHECK(run_cli("extract --frobnicate " + corpus, dir) == kExitConfig);
    CHECK(run_cli("gen-instructions --mode behavior " + corpus, dir) == kExitConfig);
    CHECK(run_cli("gen-instructions --mix 0.7:0.3 --seed 3 --count 50 " + corpus, dir) == kExitOk);
    CHECK(run_cli("synth --suite nonsense --count 3", dir) == kExitConfig);
    CHECK(run_cli("stats " + empty, dir) == kExitOk);
    CHECK(run_cli("--help", dir) == kExitOk);
  }

  TEST_CASE("file output equals the in-memory command") {
    TempDir dir;
    const auto out = cmd_synth("default", 20, 2, kConfig);
    const auto corpus = dir.file("corpus.jsonl", out.corpus);
    const auto target = (dir.path / "attrs.jsonl").string();
    REQUIRE(run_cli("extract --jobs 3 --out " + target + " " + corpus, dir) == kExitOk);
    CHECK(test::read_file(target) == cmd_extract(out.corpus, kConfig));
  }
}
