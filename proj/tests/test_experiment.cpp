#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "repwalk/acceptance.hpp"
#include "repwalk/errors.hpp"
#include "repwalk/experiment.hpp"

using namespace repwalk;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("repwalk_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) out.push_back(line);
  return out;
}

std::string without_timestamp(const std::string& text) {
  std::string out;
  for (const auto& l : lines_of(text))
    if (l.find("timestamp") == std::string::npos) out += l + '\n';
  return out;
}

ExperimentConfig recursion_config(const fs::path& out) {
  ExperimentConfig cfg;
  cfg.kind = "recursion";
  cfg.params = Json{{"alpha", 2.0}, {"c", 0.5}, {"n_max", 10}};
  cfg.out = out;
  return cfg;
}

}  // namespace

TEST_CASE("yaml scalars") {
  const auto j = yaml_to_json("a: 1\nb: 2.5\nc: true\nd: hello\ne: '7'\nf: [1, 2]\ng:\n  h: 1e-3\n");
  CHECK(j.at("a").is_number_integer());
  CHECK(j.at("b").get<double>() == 2.5);
  CHECK(j.at("c").get<bool>());
  CHECK(j.at("d") == "hello");
  CHECK(j.at("e") == "7");
  CHECK(j.at("f").size() == 2);
  CHECK(j.at("g").at("h").get<double>() == 1e-3);
  CHECK_THROWS_AS(yaml_to_json("a: [1, 2"), ValidationError);
}

TEST_CASE("recursion run writes a CSV with metadata and 17-digit cells") {
  const auto dir = scratch("recursion");
  std::ostringstream log;
  const auto r = run(recursion_config(dir), log);
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.files.size() == 1);
  const auto lines = lines_of(slurp(r.files[0]));
  CHECK(lines[0].rfind("# artifact_version:", 0) == 0);
  CHECK(lines[2].rfind("# config_hash:", 0) == 0);
  CHECK(lines[4] == "# rng: none");
  CHECK(lines[5].rfind("# timestamp:", 0) == 0);
  CHECK(lines[6] == "n,V_n,y_n,log_V_n,log_y_n");
  const auto row2 = lines[8];
  CHECK(row2.rfind("2,", 0) == 0);
  const double v2 = std::stod(row2.substr(2, row2.find(',', 2) - 2));
  CHECK(v2 == doctest::Approx(1.888385561585661).epsilon(1e-14));
  for (std::size_t i = 7; i < lines.size(); ++i) {
    std::stringstream ss(lines[i]);
    for (std::string cell; std::getline(ss, cell, ',');) CHECK(format_double(std::stod(cell)) == cell);
  }
  fs::remove_all(dir);
}

TEST_CASE("identical config and seed give identical files apart from the timestamp") {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  std::ostringstream log;
  for (const auto& kind : {"mcmc", "gks"}) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    cfg.seed = 77;
    if (std::string(kind) == "mcmc")
      cfg.params = Json{{"sampler", {{"sweeps", 2000}, {"burnin", 100}}}};
    else
      cfg.params = Json{{"pair_instances", 20}, {"omission_instances", 10}};
    cfg.out = a;
    const auto ra = run(cfg, log);
    cfg.out = b;
    cfg.workers = 1;
    const auto rb = run(cfg, log);
    REQUIRE(ra.exit_code == 0);
    REQUIRE(rb.exit_code == 0);
    for (std::size_t i = 0; i < ra.files.size(); ++i)
      CHECK(without_timestamp(slurp(ra.files[i])) == without_timestamp(slurp(rb.files[i])));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("validation failures exit 2 and write nothing") {
  const auto dir = scratch("invalid");
  std::ostringstream log;
  ExperimentConfig cfg;
  cfg.kind = "exact";
  cfg.params = Json{{"spec", {{"T", -3}, {"alpha", 0.5}}}};
  cfg.out = dir;
  CHECK(run(cfg, log).exit_code == 2);
  CHECK_FALSE(fs::exists(dir));
  cfg.params = Json{{"spec", {{"T", 4}, {"alpha", 0.5}}}, {"bogus", 1}};
  CHECK(run(cfg, log).exit_code == 2);
  cfg.kind = "no-such-kind";
  CHECK(run(cfg, log).exit_code == 2);
  auto rec = recursion_config(dir);
  rec.params["n_max"] = 0;
  CHECK(run(rec, log).exit_code == 2);
  CHECK_FALSE(fs::exists(dir));
  CHECK(log.str().find("n_max") != std::string::npos);
}

TEST_CASE("other kinds run") {
  const auto dir = scratch("kinds");
  std::ostringstream log;
  const std::pair<const char*, Json> cases[] = {
      {"exact", Json{{"spec", {{"T", 4}, {"alpha", 0.25}}},
                     {"observables", Json::array({Json{{"kind", "endpoint_square"}}, Json{{"kind", "pair_equal"}, {"i", 1}, {"j", 2}}})}}},
      {"transfer", Json{{"alphas", {0.25, 0.5}}, {"horizons", {4, 100}}}},
      {"tilt", Json{{"V", {1.0}}, {"beta", {0.5, 1.0}}}},
      {"phase-diagram", Json{{"alpha_count", 4}, {"c_count", 3}}},
      {"scaling-sweep", Json{{"alpha", 0.0}, {"horizons", {8, 16}}, {"sampler", {{"sweeps", 1000}, {"burnin", 100}}}}},
  };
  for (const auto& [kind, params] : cases) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    cfg.params = params;
    cfg.out = dir;
    CHECK_MESSAGE(run(cfg, log).exit_code == 0, kind);
  }
  const auto exact = lines_of(slurp(dir / "exact.csv"));
  CHECK(exact.back().find("0.88079707797788") == std::string::npos);  // T=4, alpha=0.25 differs from T=2
  CHECK(exact.size() == 9);
  CHECK(fs::exists(dir / "scaling_fit.jsonl"));
  const auto fit = lines_of(slurp(dir / "scaling_fit.jsonl"));
  CHECK(Json::parse(fit[0]).contains("metadata"));
  CHECK(Json::parse(fit[1]).contains("timestamp"));
  CHECK(Json::parse(fit[2]).at("label") == "DIAGNOSTIC");
  fs::remove_all(dir);
}

TEST_CASE("config files") {
  const auto dir = scratch("configs");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "a.yaml") << "kind: recursion\nseed: 5\nparams:\n  alpha: 2\n  c: 0.5\n  n_max: 4\n";
    std::ofstream(dir / "b.json") << R"({"kind": "recursion", "seed": 5, "params": {"alpha": 2, "c": 0.5, "n_max": 4}})";
    std::ofstream(dir / "c.yaml") << "kind: recursion\nunknown: 1\n";
  }
  const auto a = load_config(dir / "a.yaml");
  const auto b = load_config(dir / "b.json");
  CHECK(a.kind == "recursion");
  CHECK(a.seed == 5);
  CHECK(config_hash(a) == config_hash(b));
  CHECK_THROWS_AS(load_config(dir / "c.yaml"), ValidationError);
  CHECK_THROWS_AS(load_config(dir / "missing.yaml"), ValidationError);
  fs::remove_all(dir);
}

TEST_CASE("acceptance selectors") {
  CHECK(select_criteria("short-range") == std::vector<int>{1, 2, 3});
  CHECK(select_criteria("all").size() == 11);
  CHECK(select_criteria("9,1") == std::vector<int>{1, 9});
  CHECK_THROWS_AS(select_criteria("bogus"), ValidationError);
  CHECK_THROWS_AS(select_criteria("12"), ValidationError);
  std::ostringstream out;
  CHECK(run_acceptance("bogus", out) == 2);
  CHECK(run_acceptance("1,5", out) == 0);
  CHECK(out.str().find("PASS  [ 1]") != std::string::npos);
}
