#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

// Flat key/value run configuration.
//
//   # comment
//   seed = 7
//   [train]
//   iterations = 2000      -> key "train.iterations"
//
// Keys before the first section header are top-level. Values are raw strings
// converted on access; conversion failures raise ConfigError.
namespace cgan {

class Config {
 public:
  Config() = default;

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  void erase(const std::string& key) { values_.erase(key); }
  const std::map<std::string, std::string>& entries() const { return values_; }

  const std::string& get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::size_t get_size(const std::string& key) const;  // non-negative integer
  std::uint64_t get_u64(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  /// Comma-separated values; empty string gives an empty list.
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::size_t> get_sizes(const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& key) const;

  /// Copies `overrides` over this config; throws ConfigError naming the first
  /// key that this config does not already define.
  void merge_known(const Config& overrides);

  /// Writes the flat "key = value" form, grouped by section.
  void write(std::ostream& out) const;

 private:
  std::map<std::string, std::string> values_;
};

Config parse_config(std::istream& in);
/// Reads a config file. A ".json" path is read as a run manifest: its
/// "config" object supplies the keys and "seed" the top-level seed.
Config load_config_file(const std::string& path);

}  // namespace cgan
