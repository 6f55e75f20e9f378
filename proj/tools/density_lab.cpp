#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "denslab/experiment.hpp"

using denslab::Json;

namespace {

int run_report(const Json& cfg, const std::string& out_dir) {
  auto report = denslab::run_experiment(cfg);
  denslab::write_report(report, out_dir);
  std::cout << report.report.at("name").get<std::string>() << ": "
            << (report.pass ? "PASS" : "FAIL") << "\n";
  for (const auto& c : report.report.at("criteria"))
    std::cout << "  " << c.at("name").get<std::string>() << ": "
              << (c.at("pass").get<bool>() ? "pass" : "fail") << "\n";
  std::cout << "report written to " << out_dir << "\n";
  return report.pass ? 0 : 1;
}

std::map<std::string, double> parse_params(const std::vector<std::string>& kvs) {
  std::map<std::string, double> out;
  for (const auto& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw denslab::ConfigError("--param expects key=value, got '" + kv + "'");
    try {
      out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw denslab::ConfigError("--param value in '" + kv + "' is not a number");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"density-lab: numerical density experiments in weighted function spaces"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", preset_name;
  std::vector<std::string> params;

  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", config_path, "path to config.json")->required();
  run->add_option("--out", out_dir, "output directory (default: out)");

  auto* pre = app.add_subcommand("preset", "run a named preset experiment");
  pre->add_option("name", preset_name, "preset name (see list-presets)")->required();
  pre->add_option("--param", params, "numeric preset parameter, key=value");
  pre->add_option("--out", out_dir, "output directory (default: out)");

  auto* list = app.add_subcommand("list-presets", "list available preset experiments");

  auto* chk = app.add_subcommand("check", "validate a config without running it");
  chk->add_option("config", config_path, "path to config.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      for (const auto& n : denslab::preset_names()) std::cout << n << "\n";
      return 0;
    }
    if (chk->parsed()) {
      denslab::load_config(config_path);
      std::cout << "ok\n";
      return 0;
    }
    if (run->parsed()) return run_report(denslab::load_config(config_path), out_dir);
    return run_report(denslab::preset_config(preset_name, parse_params(params)), out_dir);
  } catch (const denslab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const denslab::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
