#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rpp/cli.hpp"

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name, const std::string& content) {
    path = std::filesystem::temp_directory_path() / name;
    std::ofstream f(path);
    f << content;
  }
  ~TempFile() { std::filesystem::remove(path); }
};

struct CliRun {
  int code;
  nlohmann::json out;
  std::string raw_out, raw_err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = rpp::run_cli(args, out, err);
  CliRun r{code, nlohmann::json(), out.str(), err.str()};
  if (!r.raw_out.empty() && (r.raw_out[0] == '{' || r.raw_out[0] == '['))
    r.out = nlohmann::json::parse(r.raw_out);
  return r;
}

}  // namespace

TEST_CASE("cli: solve the n=4 diagonal instance") {
  TempFile inst("rpp_test_instance.json", R"({
    "group": {"abelian": [2]},
    "n": 4,
    "generators": [[1,1,1,1]],
    "r": 1,
    "mode": "auto"
  })");
  const auto r = run({"rpp", "solve", "--instance", inst.path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.at("x") == nlohmann::json({0, 1, 0, 1}));
  CHECK(r.out.at("verify").at("ok") == true);
  CHECK(r.out.at("verified_distance") == 2);
}

TEST_CASE("cli: usage errors exit 2") {
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"rpp", "solve", "--no-such-flag"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("cli: runtime errors exit 1 with machine-readable payload") {
  const auto r = run({"group", "check", "--group", R"({"abelian": [3, 5]})"});
  CHECK(r.code == 1);
  const auto err = nlohmann::json::parse(r.raw_err);
  CHECK(err.contains("error"));
  CHECK(err.contains("detail"));
}

TEST_CASE("cli: group arithmetic inline") {
  const auto r = run({"group", "mul", "--group", R"({"abelian":[6]})", "--a", "[4]",
                      "--b", "[5]"});
  REQUIRE(r.code == 0);
  CHECK(r.out.at("result") == nlohmann::json({3}));

  const auto w = run({"group", "weight", "--group", R"({"abelian":[3]})", "--x",
                      "[1,0,2,0]"});
  CHECK(w.out.at("weight") == 2);

  const auto f = run({"group", "feasibility", "--group", R"({"abelian":[2]})", "--n",
                      "100", "--k", "50", "--r", "1", "--eps", "1/20"});
  CHECK(f.out.at("feasible") == true);
}

TEST_CASE("cli: perm subcommands") {
  TempFile sub("rpp_test_sub.json", R"({"n":3,"generators":[[1,1,0],[0,1,1]]})");
  const std::string g = R"({"abelian":[2]})";
  const auto o = run({"perm", "order", "--group", g, "--subgroup", sub.path.string()});
  CHECK(o.out.at("order") == 4);

  const auto m = run({"perm", "member", "--group", g, "--subgroup", sub.path.string(),
                      "--x", "[1,0,1]"});
  CHECK(m.out.at("member") == true);

  const auto c = run({"perm", "cosetcount", "--group", g, "--subgroup",
                      sub.path.string(), "--prefix", "[1]"});
  CHECK(c.out.at("count") == 2);
  CHECK(c.out.at("projection_member") == true);

  const auto s = run({"perm", "stab", "--group", g, "--subgroup", sub.path.string(),
                      "--prefix-len", "1"});
  CHECK(s.out.at("order") == 2);
}

TEST_CASE("cli: smallbias gen then verify round trip") {
  const auto gen = run({"smallbias", "gen", "--group", R"({"abelian":[3]})", "--n",
                        "2", "--eps", "1/4"});
  REQUIRE(gen.code == 0);
  CHECK(gen.out.at("measured_bias").get<double>() <= 0.25 + 1e-9);

  TempFile space("rpp_test_space.json", gen.raw_out);
  const auto ver = run({"smallbias", "verify", "--space", space.path.string()});
  CHECK(ver.code == 0);
  CHECK(ver.out.at("ok") == true);
  CHECK(ver.out.at("measured_bias").get<double>() ==
        doctest::Approx(gen.out.at("measured_bias").get<double>()).epsilon(1e-12));
}

TEST_CASE("cli: cayley lambda and walk") {
  const auto gen = run({"smallbias", "gen", "--group", R"({"abelian":[2]})", "--n",
                        "3", "--eps", "1/2"});
  TempFile space("rpp_test_space2.json", gen.raw_out);

  const auto lam = run({"cayley", "lambda", "--space", space.path.string(),
                        "--method", "both"});
  REQUIRE(lam.code == 0);
  const double ch = lam.out.at("character").at("lambda").get<double>();
  const double nu = lam.out.at("numeric").at("lambda").get<double>();
  CHECK(std::abs(ch - nu) <= 1e-6);

  const auto w1 = run({"cayley", "walk", "--space", space.path.string(), "--t", "10",
                       "--seed", "5"});
  const auto w2 = run({"cayley", "walk", "--space", space.path.string(), "--t", "10",
                       "--seed", "5"});
  CHECK(w1.raw_out == w2.raw_out);

  TempFile sub("rpp_test_sub2.json", R"({"n":3,"generators":[[1,1,1]]})");
  const auto conf = run({"cayley", "confine", "--space", space.path.string(),
                         "--subgroup", sub.path.string(), "--t", "4", "--trials",
                         "2000", "--seed", "3"});
  REQUIRE(conf.code == 0);
  REQUIRE(conf.out.contains("exact"));
  CHECK(conf.out.at("exact").get<double>() <= conf.out.at("bound").get<double>() + 1e-9);
}

TEST_CASE("cli: rpp verify catches tampering, exit 1") {
  TempFile inst("rpp_test_instance2.json", R"({
    "group": {"abelian": [2]},
    "n": 6,
    "generators": [[1,1,1,0,0,0],[0,0,0,1,1,1]],
    "r": 1,
    "mode": "auto"
  })");
  const auto solved = run({"rpp", "solve", "--instance", inst.path.string()});
  REQUIRE(solved.code == 0);

  auto tampered = solved.out;
  tampered["x"] = {1, 1, 1, 0, 0, 0};
  tampered.erase("verify");
  TempFile sol("rpp_test_sol.json", tampered.dump());
  const auto ver = run({"rpp", "verify", "--instance", inst.path.string(),
                        "--solution", sol.path.string()});
  CHECK(ver.code == 1);
  CHECK(ver.out.at("ok") == false);
}

TEST_CASE("cli: manifest reproducibility") {
  const auto mpath = std::filesystem::temp_directory_path() / "rpp_manifest.json";
  const std::vector<std::string> args = {"--manifest", mpath.string(), "group", "mul",
                                         "--group", R"({"abelian":[4]})", "--a",
                                         "[1,2]", "--b", "[3,3]"};
  const auto r1 = run(args);
  std::ifstream f1(mpath);
  const auto m1 = nlohmann::json::parse(f1);
  const auto r2 = run(args);
  std::ifstream f2(mpath);
  const auto m2 = nlohmann::json::parse(f2);
  CHECK(r1.raw_out == r2.raw_out);
  CHECK(m1.at("output_digest") == m2.at("output_digest"));
  CHECK(m1.at("version") == m2.at("version"));
  std::filesystem::remove(mpath);
}
