#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "masslab/groundstate.hpp"
#include "masslab/io.hpp"

namespace fs = std::filesystem;
using masslab::read_text_file;

namespace {

const fs::path& workdir() {
  static const fs::path d = [] {
    auto p = fs::temp_directory_path() / "masslab_cli_tests";
    fs::remove_all(p);
    fs::create_directories(p / "cache");
    return p;
  }();
  return d;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

// Runs the CLI with stdout captured to `out` and returns its exit status.
int run(const std::string& args, const std::string& out = "stdout.txt") {
  const std::string cmd = "MASSLAB_CACHE=" + path("cache") + " " + MASSLAB_CLI_PATH + " " + args + " > " + path(out) +
                          " 2> " + path("stderr.txt");
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("usage errors exit with status 2") {
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("scan --model banana --c-grid 0.5") == 2);
  CHECK(run("scan --model sp --c-grid 0.5,x") == 2);
  CHECK(run("scan --model sp") == 2);
  CHECK(run("scan --model sp --c-grid 0.9,0.5") == 2);
  CHECK(run("mu1 --potential cubic:1") == 2);
  CHECK(run("ground-state --dim 5") == 2);
  CHECK(run("--help") == 0);
}

TEST_CASE("ground-state persists a loadable profile") {
  REQUIRE(run("ground-state --dim 1 --points 1024 --rmax 20 --out " + path("q1.txt"), "gs.json") == 0);
  const auto j = nlohmann::json::parse(read_text_file(path("gs.json")));
  CHECK(j["schema"] == "masslab.ground_state");
  CHECK(j["cstar"].get<double>() == doctest::Approx(2.7206990463513265).epsilon(1e-6));
  CHECK(j["identity_residuals"].size() == 3);
  const auto gs = masslab::load_ground_state(path("q1.txt"));
  CHECK(gs.cstar == j["cstar"].get<double>());
  CHECK(gs.profile.size() == 1024);
  CHECK(read_text_file(path("q1.txt")).find("config_hash " + j["config_hash"].get<std::string>()) != std::string::npos);
}

TEST_CASE("scan classifies the SP threshold and is reproducible") {
  const std::string args = "scan --model sp --c-grid 0.5,0.9,1.0,1.1,1.5 --units cstar --seed 3 ";
  REQUIRE(run(args + "--json " + path("a.json") + " --csv " + path("a.csv"), "a.txt") == 0);
  REQUIRE(run(args + "--json " + path("b.json") + " --csv " + path("b.csv") + " --threads 1", "b.txt") == 0);
  CHECK(read_text_file(path("a.json")) == read_text_file(path("b.json")));
  CHECK(read_text_file(path("a.csv")) == read_text_file(path("b.csv")));
  const auto j = nlohmann::json::parse(read_text_file(path("a.json")));
  const char* expected[] = {"ZERO_NOT_ATTAINED", "ZERO_NOT_ATTAINED", "ZERO_NOT_ATTAINED", "MINUS_INFINITY",
                            "MINUS_INFINITY"};
  for (int i = 0; i < 5; ++i) CHECK(j["entries"][i]["classification"] == expected[i]);
  const std::string csv = read_text_file(path("a.csv"));
  CHECK(csv.find("config_hash=" + j["config_hash"].get<std::string>()) != std::string::npos);
}

TEST_CASE("raw units and a different seed change the config hash only where they should") {
  REQUIRE(run("scan --model sp --c-grid 30 --units raw --json " + path("raw.json")) == 0);
  REQUIRE(run("scan --model sp --c-grid 30 --units raw --seed 2 --json " + path("raw2.json")) == 0);
  const auto a = nlohmann::json::parse(read_text_file(path("raw.json")));
  const auto b = nlohmann::json::parse(read_text_file(path("raw2.json")));
  CHECK(a["entries"][0]["c"] == 30.0);
  CHECK(a["config_hash"] != b["config_hash"]);
}

TEST_CASE("mu1 writes the eigenfunction") {
  REQUIRE(run("mu1 --potential gaussian:1.0 --radius 4 --out " + path("phi.txt"), "mu1.json") == 0);
  const auto j = nlohmann::json::parse(read_text_file(path("mu1.json")));
  CHECK(j["mu1"].get<double>() == doctest::Approx(3.68842825653).epsilon(1e-9));
  const std::string phi = read_text_file(path("phi.txt"));
  CHECK(phi.find("columns r phi") != std::string::npos);
  CHECK(phi.find("config_hash " + j["config_hash"].get<std::string>()) != std::string::npos);
}

TEST_CASE("energy and minimize subcommands") {
  REQUIRE(run("energy --model nls --dim 2 --c 1.0 --t 3", "e.json") == 0);
  const auto e = nlohmann::json::parse(read_text_file(path("e.json")));
  CHECK(std::abs(e["energy"]["total"].get<double>()) < 1e-6 * e["energy"]["A"].get<double>());
  // With p = 4, A is linear and C quadratic in the mass ratio s, so E / A = 1 - s.
  REQUIRE(run("energy --model nls --dim 2 --c 1.5 --t 2", "e15.json") == 0);
  const auto e15 = nlohmann::json::parse(read_text_file(path("e15.json")));
  CHECK(e15["energy"]["total"].get<double>() / e15["energy"]["A"].get<double>() == doctest::Approx(-0.5).epsilon(1e-6));
  REQUIRE(run("minimize --model sp-confined --potential harmonic:1 --c 0.5 --csv " + path("u.csv"), "m.json") == 0);
  const auto m = nlohmann::json::parse(read_text_file(path("m.json")));
  CHECK(m["status"] == "CONVERGED");
  CHECK(m["energy"].get<double>() > 0.0);
  CHECK(fs::exists(path("u.csv")));
}

TEST_CASE("numerical failure exits with status 1 and a diagnostic") {
  CHECK(run("minimize --model nls --dim 3 --c 1.5 --max-iter 2000", "div.json") == 1);
  const auto j = nlohmann::json::parse(read_text_file(path("div.json")));
  CHECK(j["status"] != "CONVERGED");
  CHECK(j["energy"].get<double>() < -1e3);
  CHECK(run("minimize --model sp-confined --c 0.5 --max-iter 3", "short.json") == 1);
}

TEST_CASE("configuration files are accepted") {
  const auto cfg = path("scan.toml");
  masslab::write_text_file(cfg, "[scan]\nmodel = \"sp-confined\"\nc-grid = [0.3, 0.6]\nunits = \"cstar\"\n");
  REQUIRE(run("--config " + cfg + " scan --json " + path("cfg.json")) == 0);
  const auto j = nlohmann::json::parse(read_text_file(path("cfg.json")));
  CHECK(j["model"]["kind"] == "sp-confined");
  CHECK(j["entries"].size() == 2);
}

TEST_CASE("the ground-state cache is populated") {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(workdir() / "cache")) n += e.path().extension() == ".txt";
  CHECK(n >= 2);
}
