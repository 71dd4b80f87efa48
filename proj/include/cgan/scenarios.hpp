#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cgan/config.hpp"

// Named, reproducible experiment runs. Each scenario owns two default
// configurations ("desk": minutes-scale, "paper": full-size) that a config
// file may override key by key.
namespace cgan::scenarios {

enum class Preset { Desk, Paper };

Preset parse_preset(const std::string& s);
std::string to_string(Preset p);

class UnknownScenario : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ScenarioInfo {
  std::string name;
  std::string summary;
};

std::vector<ScenarioInfo> list_scenarios();

/// Preset defaults for a scenario (includes the top-level "seed").
Config default_config(const std::string& scenario, Preset preset);

struct RunRequest {
  std::string scenario;
  Preset preset = Preset::Desk;
  std::optional<std::uint64_t> seed;  // wins over the config's seed
  Config overrides;                   // keys must exist in the preset defaults
  std::string out_dir = "out";
};

struct RunOutcome {
  Config effective;
  std::uint64_t seed = 0;
  std::vector<std::string> files;  // relative to out_dir, manifest last
  std::vector<std::pair<std::string, double>> summary;
};

/// Runs a scenario end to end, writing CSVs, summary.csv and manifest.json
/// into out_dir. Progress lines go to `log`.
RunOutcome run(const RunRequest& request, std::ostream& log);

}  // namespace cgan::scenarios
