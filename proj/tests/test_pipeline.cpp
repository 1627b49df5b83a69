#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "geofind/cli.hpp"
#include "geofind/pipeline.hpp"
#include "json.hpp"

using namespace geofind;
namespace fs = std::filesystem;

namespace {

const std::string kSource = GEOFIND_SOURCE_DIR;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "geofind");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// A scratch file that lives for the duration of one test.
struct TempFile {
  fs::path path;
  TempFile(const std::string& name, const std::string& text)
      : path(fs::temp_directory_path() / ("geofind_test_" + name)) {
    std::ofstream(path, std::ios::binary) << text;
  }
  ~TempFile() { fs::remove(path); }
  std::string str() const { return path.string(); }
};

std::string example(const char* name) { return kSource + "/constructions/" + name; }

Report run(const char* file, PipelineConfig cfg = {}, const std::string& rules = std::string(default_rules_text())) {
  return run_pipeline(parse_construction(slurp(example(file))), parse_rules(rules), cfg);
}

}  // namespace

TEST_CASE("midline report") {
  Report r = run("midline.gc");
  REQUIRE(r.facts.size() == 1);
  CHECK(r.facts[0].fact == parse_fact("para(M,N,B,C)"));
  CHECK(r.facts[0].interesting);
  CHECK(r.facts[0].verdict == Verdict::holds());
  CHECK(r.discarded.empirically_false == 0);
  CHECK(r.stop_reason == StopReason::Fixpoint);
  REQUIRE(r.ranking.size() == 1);
  CHECK(derivation_line(r.facts[0].fact, r.facts[0].derivation) ==
        "para(B,C,M,N) ⇐ midline[midp(M,A,B), midp(N,A,C)]");
}

TEST_CASE("empty rule set") {
  Report r = run("midline.gc", {}, "");
  CHECK(r.facts.empty());
  CHECK(r.rounds == 1);
  CHECK(r.stop_reason == StopReason::Fixpoint);
  auto doc = nlohmann::json::parse(emit_report(r, Format::Json));
  CHECK(doc["facts"].is_array());
  CHECK(doc["facts"].empty());
}

TEST_CASE("Pappus report holds everywhere") {
  Report r = run("pappus.gc");
  for (const auto& rec : r.facts) CHECK(rec.verdict == Verdict::holds());
  CHECK(r.discarded.empirically_false == 0);
}

TEST_CASE("JSON report is stable and self-describing") {
  PipelineConfig cfg;
  cfg.master_seed = 17;
  const std::string a = emit_report(run("inscribed.gc", cfg), Format::Json);
  const std::string b = emit_report(run("inscribed.gc", cfg), Format::Json);
  CHECK(a == b);
  auto doc = nlohmann::json::parse(a);
  CHECK(doc["settings"]["master_seed"] == "17");
  CHECK(doc["construction"]["digest"].get<std::string>().size() == 16);
  CHECK(doc["rules"]["names"].size() == 12);
  CHECK(doc["stop_reason"] == "fixpoint");
  for (const auto& f : doc["facts"]) CHECK_FALSE(is_tautology(parse_fact(f["fact"].get<std::string>())));
}

TEST_CASE("filtered mode keeps a subset of fixpoint mode") {
  for (const char* file : {"midline.gc", "inscribed.gc", "pappus.gc", "perpendiculars.gc"}) {
    PipelineConfig filtered;
    filtered.mode = Mode::Filtered;
    Report f = run(file, filtered), full = run(file);
    std::set<Fact> all;
    for (const auto& rec : full.facts) all.insert(rec.fact);
    for (const auto& rec : f.facts) CHECK(all.count(rec.fact) == 1);
  }
}

TEST_CASE("digest is 64-bit FNV-1a") {
  CHECK(digest("") == "cbf29ce484222325");
  CHECK(digest("a") == "af63dc4c8601ec8c");
}

TEST_CASE("cli: run, saturate, rank, check") {
  auto r = cli({"run", example("midline.gc")});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("para(B,C,M,N) ⇐ midline[midp(M,A,B), midp(N,A,C)]") != std::string::npos);
  CHECK(r.out == slurp(kSource + "/tests/golden/midline.txt"));

  r = cli({"saturate", example("inscribed.gc"), "--format", "json"});
  CHECK(r.code == kExitOk);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["stop_reason"] == "fixpoint");

  r = cli({"rank", example("midline.gc"), "--top", "1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("para(B,C,M,N)") != std::string::npos);

  r = cli({"check", example("pappus.gc"), "coll(G,H,I)", "coll(A,B,D)", "--seeds", "100"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("coll(G,H,I): holds") != std::string::npos);
  CHECK(r.out.find("coll(A,B,D): fails(seed=") != std::string::npos);
}

TEST_CASE("cli: rules --validate") {
  auto r = cli({"rules", "--validate", kSource + "/rules/gddm-default.gr"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("12 rules OK") != std::string::npos);
  TempFile bad("bad.gr", "rule bad: midp(M,A,B) => para(M,N,A,B)\n");
  r = cli({"rules", "--validate", bad.str()});
  CHECK(r.code == kExitParse);
  CHECK(r.err.find("N unbound") != std::string::npos);
}

TEST_CASE("cli: exit codes") {
  CHECK(cli({"run", "missing.gc"}).code == kExitParse);
  auto r = cli({"run", example("midline.gc"), "--frobnicate"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({"run", example("midline.gc"), "--mode", "sideways"}).code == kExitUsage);

  TempFile syntax("syntax.gc", "point A B\nmidpoint M A Z\n");
  r = cli({"run", syntax.str()});
  CHECK(r.code == kExitParse);
  CHECK(r.err.find("line 2, column 14: Z undefined") != std::string::npos);

  TempFile parallel("parallel.gc", "point A B C\nmidpoint M A B\nmidpoint N A C\nintersect P M N B C\n");
  CHECK(cli({"run", parallel.str()}).code == kExitDegenerate);
  CHECK(cli({"check", parallel.str(), "coll(A,B,M)"}).code == kExitDegenerate);

  TempFile unsound("unsound.gr", "rule bogus: midp(M,A,B), midp(N,A,C) => perp(A,B,A,C)\n");
  r = cli({"run", example("midline.gc"), "--rules", unsound.str()});
  CHECK(r.code == kExitSoundness);
  CHECK(r.err.find("model seed") != std::string::npos);

  CHECK(cli({"check", example("midline.gc"), "coll(A,B"}).code == kExitParse);
  TempFile weights("w.json", R"({"weights": {"beauty": 1}})");
  CHECK(cli({"run", example("midline.gc"), "--weights", weights.str()}).code == kExitParse);
}
