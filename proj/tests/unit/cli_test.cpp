#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "smalldoubling/json_io.hpp"

using namespace smalldoubling;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "sdtool");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = sdtool::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(std::filesystem::temp_directory_path() / "smalldoubling_cli_test") {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(file(name)) << text;
    return file(name);
  }

 private:
  std::filesystem::path path_;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  return json::parse(in);
}

}  // namespace

TEST_CASE("cli: gen then analyze round trip") {
  TempDir dir;
  const auto gen = run({"gen", "--n", "4", "--l", "4", "--group", "2", "--k-index", "1", "--output", dir.file("c.json")});
  REQUIRE(gen.code == 0);
  const json g = read_json(dir.file("c.json"));
  CHECK(g.at("metadata").at("predicted_size") == 8);
  CHECK(g.at("metadata").at("predicted_doubling") == 16);
  CHECK(g.at("metadata").at("tool") == "sdtool");

  const auto an = run({"analyze", "--input", dir.file("c.json")});
  REQUIRE(an.code == 0);
  const json a = json::parse(an.out);
  CHECK(a.at("tool") == "sdtool");
  CHECK(a.at("version") == sdtool::kToolVersion);
  CHECK(a.at("config").at("command") == "analyze");
  CHECK(a.at("structure").at("cost") == 8);
  CHECK(a.at("structure").at("bound_ok") == true);
  CHECK(a.at("structure").at("size") == g.at("metadata").at("predicted_size"));
  CHECK(a.at("structure").at("doubling_size") == g.at("metadata").at("predicted_doubling"));
  CHECK(a.at("normalized").at("sigma") == 4);
  CHECK(a.at("deficiency").at("total") == 0);
  CHECK(a.at("checks").at("small").at("outcome") == "pass");
}

TEST_CASE("cli: gen examples") {
  const auto small = run({"gen", "--n", "3", "--l", "4"});
  REQUIRE(small.code == 0);
  CHECK(gset_from_json(json::parse(small.out)) == GSet::of_integers({0, 1, 4}));
  const auto big = run({"gen", "--n", "4", "--l", "6", "--group", "2", "--k-index", "1"});
  REQUIRE(big.code == 0);
  CHECK(gset_from_json(json::parse(big.out)).size() == 8);
  CHECK(run({"gen", "--n", "2", "--l", "4"}).code == 2);
  CHECK(run({"gen", "--n", "4", "--l", "4", "--group", "2", "--k-index", "5"}).code == 2);
}

TEST_CASE("cli: analyze and cover on an interval") {
  TempDir dir;
  const auto path = dir.write("i.json", R"({"group":{"torsion":[]},"elements":[[0,[]],[1,[]],[2,[]]]})");
  const auto an = run({"analyze", "--input", path});
  REQUIRE(an.code == 0);
  CHECK(json::parse(an.out).at("structure").at("cost") == 2);
  const auto cv = run({"cover", "--input", path, "--output", dir.file("out.json")});
  REQUIRE(cv.code == 0);
  CHECK(cv.out.empty());
  CHECK(read_json(dir.file("out.json")).at("cost") == 2);
  CHECK(read_json(dir.file("out.json")).at("cover_number") == 3);
}

TEST_CASE("cli: parse errors exit 2 and name the field") {
  TempDir dir;
  const auto bad = dir.write("bad.json", R"({"group":{"torsion":[1]},"elements":[[0,[0]]]})");
  const auto r = run({"analyze", "--input", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("group.torsion[0]") != std::string::npos);
  const auto missing = run({"analyze", "--input", dir.file("nope.json")});
  CHECK(missing.code == 2);
  const auto garbage = dir.write("g.json", "{ not json");
  CHECK(run({"analyze", "--input", garbage}).code == 2);
  CHECK(run({"analyze"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"verify", "--group", "2,x"}).code == 2);
  CHECK(run({"verify", "--group", "2", "--mode", "weird"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli: group override") {
  TempDir dir;
  const auto path = dir.write("z.json", R"({"group":{"torsion":[]},"elements":[[0,[1]],[1,[0]]]})");
  CHECK(run({"cover", "--input", path}).code == 2);
  const auto r = run({"cover", "--input", path, "--group", "2"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out).at("config").at("group") == "2");
}

TEST_CASE("cli: verify exit codes") {
  const auto ok = run({"verify", "--group", "2", "--zmax", "4", "--jobs", "2"});
  REQUIRE(ok.code == 0);
  const json report = json::parse(ok.out);
  CHECK(report.at("run").at("checked") == 512);
  CHECK(report.at("run").at("violations").empty());
  CHECK(report.at("config").at("zmax") == 4);
  CHECK_FALSE(report.at("run").contains("elapsed_ms"));

  TempDir dir;
  const auto bad = run({"verify", "--group", "2", "--zmax", "3", "--mutate", "--report", dir.file("v")});
  CHECK(bad.code == 1);
  const json br = json::parse(bad.out);
  CHECK_FALSE(br.at("run").at("violations").empty());
  CHECK(br.at("violation_files").size() == br.at("run").at("violations").size());
  CHECK(std::filesystem::exists(br.at("violation_files")[0].get<std::string>()));

  CHECK(run({"verify", "--group", "4", "--zmax", "9"}).code == 3);
  CHECK(run({"verify", "--group", "4096,2"}).code == 3);
}

TEST_CASE("cli: seeded verify is byte-identical") {
  const std::vector<std::string> args{"verify", "--group", "4", "--mode", "sampled", "--zmax", "6",
                                      "--samples", "200", "--seed", "42"};
  auto a = args;
  a.insert(a.end(), {"--jobs", "1"});
  auto b = args;
  b.insert(b.end(), {"--jobs", "3"});
  const auto r1 = run(a);
  const auto r2 = run(b);
  REQUIRE(r1.code == 0);
  REQUIRE(r2.code == 0);
  CHECK(json::parse(r1.out).at("run") == json::parse(r2.out).at("run"));
  CHECK(run(a).out == r1.out);
}

TEST_CASE("cli: lemmas") {
  TempDir dir;
  const auto b = dir.write("b.json", R"({"group":{"torsion":[8]},"elements":[[0,[0]],[0,[1]],[0,[5]]]})");
  const auto one = run({"lemmas", "--input", b});
  REQUIRE(one.code == 0);
  const json j = json::parse(one.out);
  CHECK(j.at("pairs").at("case") == "iii");
  CHECK(j.at("pairs_valid") == true);
  CHECK(j.at("checks").contains("lemma15"));
  const auto c = dir.write("c.json", R"({"group":{"torsion":[8]},"elements":[[0,[0]],[0,[4]]]})");
  const auto two = run({"lemmas", "--input", b, "--input", c});
  REQUIRE(two.code == 0);
  CHECK(json::parse(two.out).at("checks").contains("two_cosets"));
  CHECK(json::parse(two.out).at("checks").at("kneser").at("outcome") == "pass");
}
