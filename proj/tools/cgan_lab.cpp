#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cgan/config.hpp"
#include "cgan/errors.hpp"
#include "cgan/scenarios.hpp"

namespace {

enum Exit { Ok = 0, BadConfig = 1, BadData = 2, Numeric = 3, UnknownScenario = 4 };

int guarded(const std::function<void()>& body) {
  try {
    body();
    return Ok;
  } catch (const cgan::scenarios::UnknownScenario& e) {
    std::cerr << "error: " << e.what() << '\n';
    return UnknownScenario;
  } catch (const cgan::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return BadConfig;
  } catch (const cgan::ShapeError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return BadConfig;
  } catch (const cgan::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return BadConfig;
  } catch (const cgan::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return BadData;
  } catch (const cgan::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return Numeric;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional GAN experiments: synthetic studies, VaR/ES backtests and macro forecasts"};
  app.require_subcommand(1);

  std::string scenario;
  std::string config_path;
  std::string out_dir = "out";
  std::string preset = "desk";
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Run a scenario and write its outputs");
  run->add_option("scenario", scenario, "Scenario name (see 'list')")->required();
  run->add_option("--config", config_path, "Config file (key = value with [sections], or a manifest.json)");
  run->add_option("--seed", seed, "Seed; overrides the config");
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--preset", preset, "desk (quick) or paper (full size)")->capture_default_str();

  auto* list = app.add_subcommand("list", "List scenarios");

  std::string defaults_scenario;
  std::string defaults_preset = "desk";
  auto* defaults = app.add_subcommand("defaults", "Print a scenario's default config");
  defaults->add_option("scenario", defaults_scenario, "Scenario name")->required();
  defaults->add_option("--preset", defaults_preset, "desk or paper")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Ok : BadConfig;
  }

  if (*list) {
    for (const auto& info : cgan::scenarios::list_scenarios()) {
      std::cout << info.name << "  " << info.summary << '\n';
    }
    return Ok;
  }
  if (*defaults) {
    return guarded([&] {
      cgan::scenarios::default_config(defaults_scenario, cgan::scenarios::parse_preset(defaults_preset))
          .write(std::cout);
    });
  }
  return guarded([&] {
    cgan::scenarios::RunRequest req;
    req.scenario = scenario;
    req.preset = cgan::scenarios::parse_preset(preset);
    req.seed = seed;
    req.out_dir = out_dir;
    if (!config_path.empty()) req.overrides = cgan::load_config_file(config_path);
    const auto outcome = cgan::scenarios::run(req, std::cerr);
    std::cout << "wrote " << outcome.files.size() << " files to " << out_dir << '\n';
  });
}
