// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rrcheck/cli.hpp"
#include "rrcheck/dsl/model_text.hpp"
#include "support/infra_gen.hpp"

namespace fs = std::filesystem;
using namespace rrc;
using rrc::cli::kAttack;
using rrc::cli::kSecure;
using rrc::cli::kUsage;
using rrc::cli::kWithheld;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run rrcheck(std::vector<std::string> args) {
  args.insert(args.begin(), "rrcheck");
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fx(const std::string& name) { return std::string(RRCHECK_FIXTURE_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Scratch directory removed on scope exit.
class TempDir {
public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("rrcheck-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name, const std::string& text = {}) const {
    fs::path p = path_ / name;
    if (!text.empty())
      std::ofstream(p) << text;
    return p.string();
  }

private:
  fs::path path_;
};

const char* kBreach = "EF actor-at(charlie, server-room)";

} // namespace

TEST_CASE("check") {
  auto tipped = rrcheck({"check", fx("office.infra"), kBreach});
  CHECK(tipped.code == kAttack);
  CHECK(tipped.out.find("move(charlie, office, server-room)") != std::string::npos);
  CHECK(rrcheck({"check", fx("office-untipped.infra"), kBreach}).code == kSecure);

  auto two = rrcheck({"check", "--bound", "1", fx("chain3-cut.infra"), "EF b"});
  CHECK(two.code == kWithheld);
  CHECK(two.out.find("withheld") != std::string::npos);

  CHECK(rrcheck({"check", fx("chain3.infra"), fx("chain3-liveness.q")}).code == kSecure);
  auto violated = rrcheck({"check", "--format", "json", fx("chain3.infra"), "AG not c"});
  CHECK(violated.code == kAttack);
  auto j = nlohmann::json::parse(violated.out);
  CHECK(j["holds"] == false);
  REQUIRE(j["witnesses"].size() == 1);
  CHECK(j["witnesses"][0]["path"].back() == "c");
}

TEST_CASE("check errors") {
  CHECK(rrcheck({"check", fx("office.infra"), "EF ("}).code == kUsage);
  CHECK(rrcheck({"check", fx("office.infra"), "EF nowhere"}).code == kUsage);
  CHECK(rrcheck({"check", fx("missing.infra"), "EF true"}).code == kUsage);
  auto bad = rrcheck({"check", fx("two-step.atk"), "EF true"});
  CHECK(bad.code == kUsage);
  CHECK(bad.err.find("two-step.atk:1:1:") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(rrcheck({}).code == kUsage);
  CHECK(rrcheck({"frobnicate"}).code == kUsage);
  CHECK(rrcheck({"check", fx("chain3.infra")}).code == kUsage);
  CHECK(rrcheck({"check", "--format", "xml", fx("chain3.infra"), "EF c"}).code == kUsage);
  CHECK(rrcheck({"check", "--bound", "0", fx("chain3.infra"), "EF c"}).code == kUsage);
  CHECK(rrcheck({"quantify", fx("chain3.infra"), fx("two-step.atk")}).code == kUsage);
  CHECK(rrcheck({"--help"}).code == kSecure);
}

TEST_CASE("attack writes a tree that validates") {
  TempDir tmp;
  std::string tree = tmp.file("attack.atk");
  auto r = rrcheck({"attack", "--out", tree, fx("chain3.infra"), "c"});
  CHECK(r.code == kSecure);
  CHECK(slurp(tree) == "[[N({a},{b}), N({b},{c})] AND ({a},{c})] OR ({a},{c})\n");
  CHECK(rrcheck({"validate", fx("chain3.infra"), tree}).code == kSecure);

  std::string none = tmp.file("none.atk");
  auto no = rrcheck({"attack", "--out", none, fx("chain3-cut.infra"), "c"});
  CHECK(no.code == kAttack);
  CHECK_FALSE(fs::exists(none));

  auto js = rrcheck({"attack", "--format", "json", fx("office.infra"), "breach"});
  CHECK(js.code == kSecure);
  auto j = nlohmann::json::parse(js.out);
  CHECK(j["holds"] == true);
  CHECK(j["attack_paths"].size() == 1);
  CHECK(j.contains("tree"));
}

TEST_CASE("validate") {
  CHECK(rrcheck({"validate", fx("chain3.infra"), fx("two-step.atk")}).code == kSecure);
  CHECK(rrcheck({"validate", fx("chain3-cut.infra"), fx("two-step.atk")}).code == kAttack);
  TempDir tmp;
  CHECK(rrcheck({"validate", fx("chain3.infra"), tmp.file("bad.atk", "[N({a},{b}) AND\n")}).code ==
        kUsage);
  auto stranger = rrcheck({"validate", fx("chain3.infra"), tmp.file("x.atk", "N({a},{zz})\n")});
  CHECK(stranger.code == kUsage);
  CHECK(stranger.err.find("unknown state zz") != std::string::npos);
}

TEST_CASE("quantify") {
  auto sum = rrcheck({"quantify", fx("chain3.infra"), fx("two-step.atk"), "--attr",
                      fx("two-step.attr")});
  CHECK(sum.code == kSecure);
  CHECK(sum.out.find("cost: 5\n") != std::string::npos);
  CHECK(sum.out.find("prob: 0.25\n") != std::string::npos);

  auto min = rrcheck({"quantify", "--format", "json", fx("chain3.infra"), fx("either-step.atk"),
                      "--attr", fx("either-step.attr")});
  auto j = nlohmann::json::parse(min.out);
  CHECK(j["cost"] == "4");
  CHECK(j["cheapest"]["total"] == "4");
  CHECK(j["cheapest"]["path"] == "N({b},{c})");

  TempDir tmp;
  auto partial = tmp.file("partial.attr", "cost N({a},{b}) = 2\ndefault prob = 1\n");
  auto missing = rrcheck({"quantify", fx("chain3.infra"), fx("two-step.atk"), "--attr", partial});
  CHECK(missing.code == kUsage);
  CHECK(missing.err.find("missing cost for leaf N({b},{c})") != std::string::npos);
}

TEST_CASE("rr") {
  auto loop = rrcheck({"rr", fx("cwa.infra"), fx("cwa.q"), "--patches", fx("cwa-refresh.patch")});
  CHECK(loop.code == kSecure);
  CHECK(loop.out == slurp(std::string(RRCHECK_GOLDEN_DIR) + "/cwa_rr.txt"));

  auto secure = rrcheck({"rr", "--format", "json", fx("office-untipped.infra"), kBreach});
  CHECK(secure.code == kSecure);
  auto j = nlohmann::json::parse(secure.out);
  CHECK(j["iterations"].size() == 1);
  CHECK(j["iterations"][0]["status"] == "secure");

  auto remains = rrcheck({"rr", "--format", "json", fx("cwa.infra"), fx("cwa.q")});
  CHECK(remains.code == kAttack);
  CHECK(nlohmann::json::parse(remains.out)["result"] == "attack remains");

  TempDir tmp;
  auto noop = tmp.file("noop.patch", "observe shop eph\n");
  auto capped = rrcheck({"rr", "--format", "json", "--max-iter", "2", fx("cwa.infra"), fx("cwa.q"),
                         "--patches", noop + "," + noop + "," + noop});
  CHECK(capped.code == kAttack);
  auto cj = nlohmann::json::parse(capped.out);
  CHECK(cj["iterations"].size() == 2);
  CHECK(cj["result"] == "max iterations");

  auto broken = tmp.file("broken.patch", "remove hook alice eph\n");
  auto err = rrcheck({"rr", fx("cwa.infra"), fx("cwa.q"), "--patches", broken});
  CHECK(err.code == kUsage);
  CHECK(err.err.find("broken.patch:1:") != std::string::npos);

  auto cut = rrcheck({"rr", "--bound", "2", fx("cwa.infra"), fx("cwa.q")});
  CHECK(cut.code == kWithheld);
  CHECK(cut.out.find("bound exceeded") != std::string::npos);
}

TEST_CASE("rr without patches agrees with check") {
  for (const char* query : {kBreach, "AG not actor-at(charlie, server-room)"})
    for (const char* model : {"office.infra", "office-untipped.infra"}) {
      auto c = rrcheck({"check", fx(model), query});
      auto r = rrcheck({"rr", "--format", "json", fx(model), query});
      CHECK(c.code == r.code);
      auto j = nlohmann::json::parse(r.out);
      CHECK(j["iterations"].size() == 1);
      if (c.code == kAttack)
        CHECK(j["iterations"][0].contains("tree"));
    }
}

TEST_CASE("exit codes do not depend on the output format") {
  TempDir tmp;
  const std::vector<std::vector<std::string>> runs{
      {"check", fx("office.infra"), kBreach},
      {"check", fx("office-untipped.infra"), kBreach},
      {"check", "--bound", "3", fx("office.infra"), kBreach},
      {"attack", fx("chain3.infra"), "c"},
      {"attack", fx("chain3-cut.infra"), "c"},
      {"validate", fx("chain3-cut.infra"), fx("two-step.atk")},
      {"quantify", fx("chain3.infra"), fx("two-step.atk"), "--attr", fx("two-step.attr")},
      {"rr", fx("cwa.infra"), fx("cwa.q"), "--patches", fx("cwa-refresh.patch")},
      {"rr", fx("cwa.infra"), fx("cwa.q")},
  };
  for (const auto& args : runs) {
    auto text = rrcheck(args);
    for (const char* format : {"json", "dot"}) {
      auto with = args;
      with.insert(with.begin() + 1, {"--format", format});
      CHECK(rrcheck(with).code == text.code);
    }
  }
}

TEST_CASE("every emitted tree validates") {
  TempDir tmp;
  auto check_pipeline = [&](const std::string& model, const std::string& target) {
    std::string tree = tmp.file("t.atk");
    fs::remove(tree);
    auto a = rrcheck({"attack", "--out", tree, model, target});
    if (a.code == kSecure)
      CHECK(rrcheck({"validate", model, tree}).code == kSecure);
    else
      CHECK_MESSAGE(a.code == kAttack, a.err);
  };
  for (const char* name : {"chain3.infra", "chain3-cut.infra", "office.infra",
                           "office-untipped.infra", "cwa.infra"}) {
    auto m = dsl::parse_model(slurp(fx(name)));
    for (const auto& actor : m.actors)
      for (const auto& loc : m.locations)
        check_pipeline(fx(name), "actor-at(" + actor.id + ", " + loc.id + ")");
  }
  testing::Rng rng(71);
  for (int i = 0; i < 40; ++i) {
    auto m = testing::random_model(rng);
    std::string path = tmp.file("random.infra", dsl::emit_model(m));
    check_pipeline(path, "actor-at(y, l" + std::to_string(testing::uniform(rng, 0, 2)) + ")");
    if (std::any_of(m.locations.begin(), m.locations.end(),
                    [](const auto& l) { return l.data.contains("d"); }))
      check_pipeline(path, "actor-has(x, d)");
  }
}
