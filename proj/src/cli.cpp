#include "geofind/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "geofind/pipeline.hpp"
#include "json.hpp"

namespace geofind {

namespace {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Options {
  std::string input;
  std::vector<std::string> facts;
  std::string rules_file;
  std::string mode = "fixpoint";
  int max_rounds = Budget{}.max_rounds;
  std::size_t max_facts = Budget{}.max_facts;
  int seeds = kDefaultModels;
  double tol = kDefaultTolerance;
  std::uint64_t master_seed = kDefaultMasterSeed;
  std::optional<double> threshold;
  std::optional<std::size_t> top_k;
  std::string weights_file;
  std::string format = "text";
  bool strict_sides = false;
  bool validate = false;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--rules", o.rules_file, "Rule file (default: bundled gddm-default.gr)");
  sub->add_option("--mode", o.mode, "fixpoint | filtered")
      ->check(CLI::IsMember({"fixpoint", "filtered"}));
  sub->add_option("--max-rounds", o.max_rounds, "Round budget")->check(CLI::PositiveNumber);
  sub->add_option("--max-facts", o.max_facts, "Fact budget")->check(CLI::PositiveNumber);
  sub->add_option("--seeds", o.seeds, "Coordinate models per verdict")->check(CLI::PositiveNumber);
  sub->add_option("--tol", o.tol, "Relative numeric tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--master-seed", o.master_seed, "Seed for model sampling");
  sub->add_option("--threshold", o.threshold, "Interestingness threshold");
  sub->add_option("--top", o.top_k, "Keep only the K best theorems")->check(CLI::PositiveNumber);
  sub->add_option("--weights", o.weights_file, "Metric config file (JSON)");
  sub->add_option("--format", o.format, "text | json")->check(CLI::IsMember({"text", "json"}));
  sub->add_flag("--strict-sides", o.strict_sides, "Do not use conditional facts as premises");
}

template <typename Parse>
auto parse_input(const std::string& path, Parse parse) {
  std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::vector<Rule> load_rules(const Options& o) {
  if (o.rules_file.empty()) return parse_rules(default_rules_text());
  return parse_input(o.rules_file, [](const std::string& t) { return parse_rules(t); });
}

Construction load_construction(const std::string& path) {
  return parse_input(path, [](const std::string& t) { return parse_construction(t); });
}

PipelineConfig make_config(const Options& o) {
  PipelineConfig cfg;
  cfg.mode = o.mode == "filtered" ? Mode::Filtered : Mode::Fixpoint;
  cfg.budget = Budget{o.max_rounds, o.max_facts};
  cfg.seeds = o.seeds;
  cfg.tol = o.tol;
  cfg.master_seed = o.master_seed;
  cfg.strict_sides = o.strict_sides;
  if (!o.weights_file.empty()) {
    try {
      cfg.metrics = MetricConfig::from_json(read_file(o.weights_file));
    } catch (const std::invalid_argument& e) {
      throw InputError(o.weights_file + ": " + e.what());
    }
  }
  if (o.threshold) cfg.metrics.threshold = *o.threshold;
  if (o.top_k) cfg.metrics.top_k = o.top_k;
  return cfg;
}

Format format_of(const Options& o) { return o.format == "json" ? Format::Json : Format::Text; }

std::string ranking_output(const Report& report, Format format) {
  if (format == Format::Json) {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t i = 0; i < report.ranking.size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.9g", report.ranking[i].score.aggregate);
      out.push_back({{"rank", i + 1},
                     {"fact", to_string(report.ranking[i].fact)},
                     {"aggregate", std::strtod(buf, nullptr)}});
    }
    return out.dump(2) + "\n";
  }
  std::ostringstream s;
  for (std::size_t i = 0; i < report.ranking.size(); ++i) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%4zu  %.9f  ", i + 1, report.ranking[i].score.aggregate);
    s << buf << to_string(report.ranking[i].fact) << "\n";
  }
  return s.str();
}

int run_check(const Options& o, std::ostream& out) {
  Construction c = load_construction(o.input);
  std::vector<std::pair<Fact, Verdict>> verdicts;
  for (const auto& text : o.facts) {
    Fact f = parse_fact(text);
    for (const auto& p : f.args()) {
      auto pts = c.points();
      if (std::find(pts.begin(), pts.end(), p) == pts.end())
        throw InputError("point " + p.name() + " is not defined by " + o.input);
    }
    verdicts.emplace_back(f, verify(f, c, o.seeds, o.master_seed, o.tol));
  }
  bool degenerate = false;
  if (format_of(o) == Format::Json) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& [f, v] : verdicts) {
      doc.push_back({{"fact", to_string(f)},
                     {"verdict", v.kind == Verdict::Kind::Holds  ? "holds"
                                 : v.kind == Verdict::Kind::Fails ? "fails"
                                                                  : "degenerate"},
                     {"seed", v.seed ? nlohmann::json(std::to_string(*v.seed)) : nlohmann::json(nullptr)}});
    }
    out << doc.dump(2) << "\n";
  } else {
    for (const auto& [f, v] : verdicts) out << to_string(f) << ": " << to_string(v) << "\n";
  }
  for (const auto& [f, v] : verdicts) degenerate = degenerate || v.kind == Verdict::Kind::Degenerate;
  return degenerate ? kExitDegenerate : kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Saturate a geometric construction under a rule set and rank the theorems found."};
  app.name("geofind");
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "Saturate, filter and rank; print the full report");
  run->add_option("construction", o.input, "Construction file (.gc)")->required();
  add_common(run, o);

  auto* saturate_cmd = app.add_subcommand("saturate", "Saturate only; print facts with derivations");
  saturate_cmd->add_option("construction", o.input, "Construction file (.gc)")->required();
  add_common(saturate_cmd, o);

  auto* rank = app.add_subcommand("rank", "Print only the ranked interesting theorems");
  rank->add_option("construction", o.input, "Construction file (.gc)")->required();
  add_common(rank, o);

  auto* check = app.add_subcommand("check", "Verify facts numerically on sampled models");
  check->add_option("construction", o.input, "Construction file (.gc)")->required();
  check->add_option("facts", o.facts, "Facts such as coll(G,H,I)")->required();
  add_common(check, o);

  auto* rules = app.add_subcommand("rules", "Rule file utilities");
  rules->add_flag("--validate", o.validate, "Parse and check a rule file");
  rules->add_option("file", o.input, "Rule file (.gr)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "geofind: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (rules->parsed()) {
      if (!o.validate) {
        err << "geofind: rules requires --validate\n\n" << rules->help();
        return kExitUsage;
      }
      auto parsed = parse_input(o.input, [](const std::string& t) { return parse_rules(t); });
      out << o.input << ": " << parsed.size() << " rules OK\n";
      for (const auto& r : parsed) out << "  " << to_string(r) << "\n";
      return kExitOk;
    }
    if (check->parsed()) return run_check(o, out);

    Construction c = load_construction(o.input);
    auto rule_set = load_rules(o);
    PipelineConfig cfg = make_config(o);
    if (saturate_cmd->parsed()) {
      auto d0 = initial_facts(c);
      auto result = saturate(d0, rule_set, cfg.budget, EngineOptions{true, cfg.strict_sides});
      out << emit_saturation(result, d0, format_of(o));
      return kExitOk;
    }
    Report report = run_pipeline(c, rule_set, cfg);
    out << (rank->parsed() ? ranking_output(report, format_of(o)) : emit_report(report, format_of(o)));
    return kExitOk;
  } catch (const InputError& e) {
    err << "geofind: " << e.what() << "\n";
    return kExitParse;
  } catch (const ParseError& e) {
    err << "geofind: " << e.what() << "\n";
    return kExitParse;
  } catch (const MalformedFact& e) {
    err << "geofind: " << e.what() << "\n";
    return kExitParse;
  } catch (const DegenerateConstruction& e) {
    err << "geofind: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const SoundnessViolation& e) {
    err << "geofind: " << e.what() << "\n";
    return kExitSoundness;
  }
}

}  // namespace geofind
