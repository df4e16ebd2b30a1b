// shellgamma: run convergence studies for the von Karman shell limit.
//
//   shellgamma run --config <path> [--out <path>] [--h-list a,b,c] [--quad-order N]
//   shellgamma run --scenario <name> [...]
//   shellgamma list-scenarios
//   shellgamma dump-scenario <name>
//
// Exit codes: 0 pass, 1 fail, 2 error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shellgamma/scenarios.hpp"
#include "shellgamma/study.hpp"

namespace sg = shellgamma;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw sg::IoError("cannot read '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

int run(const std::string& config_path, const std::string& scenario, const std::string& out,
        const std::vector<double>& h_list, int quad_order) {
  sg::Json doc;
  if (!scenario.empty()) {
    const sg::BuiltinScenario* s = sg::find_scenario(scenario);
    if (!s) throw sg::ConfigError("scenario", "unknown builtin scenario '" + scenario + "'");
    doc = s->document;
  } else {
    try {
      doc = sg::Json::parse(read_file(config_path));
    } catch (const sg::Json::parse_error& e) {
      throw sg::ParseError("<document>", std::string("malformed JSON: ") + e.what());
    }
  }
  // Overrides go through the same parser so they are validated like the file.
  if (!h_list.empty()) doc["h_schedule"] = h_list;
  if (quad_order > 0) doc["quadrature"]["surface_order"] = quad_order;
  if (!out.empty()) doc["output"] = out;
  const sg::StudyConfig cfg = sg::parse_config_json(doc);

  const sg::StudyReport report = sg::run_study(cfg);
  sg::write_report(report, cfg.output);
  std::printf("%s [%s]: %s\n", cfg.name.c_str(), sg::to_string(cfg.study).c_str(),
              sg::to_string(report.status).c_str());
  std::printf("report: %s\nsummary: %s\n", cfg.output.c_str(),
              sg::summary_path(cfg.output).string().c_str());
  if (report.summary.contains("error")) {
    std::fprintf(stderr, "error: %s\n",
                 report.summary["error"]["message"].get<std::string>().c_str());
  }
  switch (report.status) {
    case sg::StudyStatus::pass: return kExitPass;
    case sg::StudyStatus::fail: return kExitFail;
    case sg::StudyStatus::error: return kExitError;
  }
  return kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shellgamma: von Karman shell limit studies"};
  app.require_subcommand(1);

  std::string config_path, scenario, out, h_text;
  int quad_order = 0;
  auto* run_cmd = app.add_subcommand("run", "run a study and write the CSV report");
  auto* cfg_opt = run_cmd->add_option("--config", config_path, "JSON study configuration");
  auto* scn_opt = run_cmd->add_option("--scenario", scenario, "builtin scenario name");
  cfg_opt->excludes(scn_opt);
  run_cmd->add_option("--out", out, "CSV report path (summary goes next to it)");
  run_cmd->add_option("--h-list", h_text, "comma-separated h values, strictly decreasing");
  run_cmd->add_option("--quad-order", quad_order, "surface quadrature order")
      ->check(CLI::Range(1, 64));

  auto* list_cmd = app.add_subcommand("list-scenarios", "list builtin scenarios");
  std::string dump_name;
  auto* dump_cmd = app.add_subcommand("dump-scenario", "print a builtin scenario as JSON");
  dump_cmd->add_option("name", dump_name, "scenario name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitError;
  }

  try {
    if (*list_cmd) {
      for (const auto& s : sg::builtin_scenarios()) {
        std::printf("%-38s %s\n", s.name.c_str(), s.description.c_str());
      }
      return kExitPass;
    }
    if (*dump_cmd) {
      const sg::BuiltinScenario* s = sg::find_scenario(dump_name);
      if (!s) throw sg::ConfigError("scenario", "unknown builtin scenario '" + dump_name + "'");
      std::printf("%s\n", s->document.dump(2).c_str());
      return kExitPass;
    }
    if (config_path.empty() && scenario.empty()) {
      std::fprintf(stderr, "error: run needs --config or --scenario\n");
      return kExitError;
    }
    std::vector<double> h_list;
    if (!h_text.empty()) {
      std::stringstream ss(h_text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
          v = std::stod(item, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != item.size()) {
          throw sg::ParseError("--h-list", "bad number '" + item + "'");
        }
        h_list.push_back(v);
      }
    }
    return run(config_path, scenario, out, h_list, quad_order);
  } catch (const sg::ConfigError& e) {
    std::fprintf(stderr, "config error at %s\n", e.what());
    return kExitError;
  } catch (const sg::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
}
