#include "storygame/cli.hpp"
#include "storygame/efg_io.hpp"
#include "storygame/fixtures.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace storygame;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = fs::path(STORYGAME_SOURCE_DIR) / "fixtures";

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const char* name) { return (kFixtures / name).string(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const char* name) {
  const auto dir = fs::temp_directory_path() / "storygame_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("solve json on Game I") {
    const auto r = run({"solve", fixture("game1.efg"), "--out", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["final_profile"][0]["probs"]["fake-death"] == 1.0);
    CHECK(doc["final_profile"][1]["probs"]["live"] == 1.0);
    CHECK(doc["verification"]["is_epsilon_nash"] == true);
    CHECK_FALSE(doc.contains("wall_time_seconds"));
    CHECK(run({"solve", fixture("game1.efg"), "--out", "json"}).out == r.out);
  }

  TEST_CASE("solve text and csv") {
    const auto text = run({"solve", fixture("game2.json")});
    CHECK(text.code == 0);
    CHECK(text.out.find("verified") != std::string::npos);
    const auto csv = run({"solve", fixture("game2.efg"), "--out", "csv", "--lambda-steps", "10"});
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("lambda,residual", 0) == 0);
  }

  TEST_CASE("rationalize") {
    const auto r = run({"rationalize", fixture("game2.efg"), "--story", fixture("actual_path.json")});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("rationalized: true, path probability 0.0525", 0) == 0);
    const auto g1 = run({"rationalize", fixture("game1.efg"), "--story", fixture("game1_path.json")});
    CHECK(g1.out.rfind("rationalized: true", 0) == 0);
  }

  TEST_CASE("shape and analyze") {
    const auto csv = run({"shape", fixture("game1.json"), "--story", fixture("game1_path.json")});
    CHECK(csv.code == 0);
    CHECK(csv.out.find("90") != std::string::npos);
    const auto svg = run({"shape", fixture("game2.efg"), "--story", fixture("actual_path.json"), "--out", "svg"});
    CHECK(svg.out.rfind("<svg", 0) == 0);
    const auto a = run({"analyze", fixture("game2.efg"), "--monte-carlo", "2000", "--seed", "3"});
    CHECK(a.code == 0);
    CHECK(a.out.find("beliefs") != std::string::npos);
    CHECK(a.out == run({"analyze", fixture("game2.efg"), "--monte-carlo", "2000", "--seed", "3"}).out);
  }

  TEST_CASE("convert round trip") {
    const auto dir = scratch("convert");
    const auto efg = (dir / "g.efg").string();
    REQUIRE(run({"convert", fixture("game2.json"), "--to", "efg", "-o", efg}).code == 0);
    const auto back = run({"convert", efg, "--to", "json"});
    REQUIRE(back.code == 0);
    CHECK(structural_difference(parse_json(back.out), fixtures::romeo_juliet_game2()) == std::nullopt);
    CHECK(run({"convert", fixture("game2.efg"), "--to", "efg"}).out == slurp(kFixtures / "game2.efg"));
  }

  TEST_CASE("fixtures are byte-stable") {
    const auto a = scratch("a"), b = scratch("b");
    REQUIRE(run({"fixtures", a.string()}).code == 0);
    REQUIRE(run({"fixtures", b.string()}).code == 0);
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
      if (!e.is_regular_file()) continue;
      ++files;
      CHECK(slurp(e.path()) == slurp(b / fs::relative(e.path(), a)));
    }
    CHECK(files > 10);
    CHECK(structural_difference(parse_efg(slurp(a / "game2.efg")), fixtures::romeo_juliet_game2()) == std::nullopt);
  }

  TEST_CASE("extract offline") {
    const auto r = run({"extract", "--story-file", fixture("story.txt"), "--protocol", fixture("protocol.json"),
                        "--hints", fixture("hints.json"), "--client", "fixture", "--fixtures-dir",
                        fixture("transcripts")});
    REQUIRE(r.code == 0);
    CHECK(structural_difference(parse_efg(r.out), fixtures::romeo_juliet_game2()) == std::nullopt);
    CHECK(r.err.empty());
  }

  TEST_CASE("exit codes") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"solve"}).code == 2);
    CHECK(run({"convert", fixture("game1.efg"), "--to", "xml"}).code == 2);
    const auto missing = run({"solve", "/nonexistent/game.efg"});
    CHECK(missing.code == 1);
    CHECK_FALSE(missing.err.empty());
    const auto dir = scratch("bad");
    std::ofstream(dir / "bad.efg") << "EFG 2 R \"x\" { \"A\" }\nt \"\" 1 \"\" { 1 \n";
    CHECK(run({"solve", (dir / "bad.efg").string()}).code == 1);
    std::ofstream(dir / "story.json") << R"({"actions":["no-grief","elope"]})";
    const auto elope = run({"rationalize", fixture("game2.efg"), "--story", (dir / "story.json").string()});
    CHECK(elope.code == 1);
    CHECK(elope.err.find("NoSuchBranch") != std::string::npos);
    CHECK(run({"--help"}).code == 0);
  }

  TEST_CASE("extract help names the credential variable") {
    const auto r = run({"extract", "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("STORYGAME_API_KEY") != std::string::npos);
  }
}
