#include "cgan/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cgan/csv.hpp"
#include "cgan/errors.hpp"
#include "json.hpp"

namespace cgan {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-';
  });
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

template <typename T>
T parse_integer(const std::string& key, const std::string& text) {
  T v{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + text + "'");
  }
  return v;
}

double parse_real(const std::string& key, const std::string& text) {
  try {
    return parse_double(text);
  } catch (const DataError&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + text + "'");
  }
}

}  // namespace

const std::string& Config::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

double Config::get_double(const std::string& key) const { return parse_real(key, get_string(key)); }

std::int64_t Config::get_int(const std::string& key) const {
  return parse_integer<std::int64_t>(key, get_string(key));
}

std::size_t Config::get_size(const std::string& key) const {
  return parse_integer<std::size_t>(key, get_string(key));
}

std::uint64_t Config::get_u64(const std::string& key) const {
  return parse_integer<std::uint64_t>(key, get_string(key));
}

bool Config::get_bool(const std::string& key) const {
  const auto& v = get_string(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got '" + v + "'");
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_commas(get_string(key))) out.push_back(parse_real(key, item));
  return out;
}

std::vector<std::size_t> Config::get_sizes(const std::string& key) const {
  std::vector<std::size_t> out;
  for (const auto& item : split_commas(get_string(key))) {
    out.push_back(parse_integer<std::size_t>(key, item));
  }
  return out;
}

std::vector<std::string> Config::get_strings(const std::string& key) const {
  return split_commas(get_string(key));
}

void Config::merge_known(const Config& overrides) {
  for (const auto& [k, v] : overrides.values_) {
    if (!has(k)) throw ConfigError("unknown config key '" + k + "'");
  }
  for (const auto& [k, v] : overrides.values_) values_[k] = v;
}

void Config::write(std::ostream& out) const {
  std::string section;
  for (const auto& [k, v] : values_) {
    if (k.find('.') == std::string::npos) out << k << " = " << v << '\n';
  }
  for (const auto& [k, v] : values_) {
    const auto dot = k.find('.');
    if (dot == std::string::npos) continue;
    const std::string s = k.substr(0, dot);
    if (s != section) {
      out << '[' << s << "]\n";
      section = s;
    }
    out << k.substr(dot + 1) << " = " << v << '\n';
  }
}

Config parse_config(std::istream& in) {
  Config cfg;
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "config line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_name(section)) throw ConfigError(where + "invalid section name '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (!valid_name(key)) throw ConfigError(where + "invalid key '" + key + "'");
    const std::string full = section.empty() ? key : section + "." + key;
    if (cfg.has(full)) throw ConfigError(where + "duplicate key '" + full + "'");
    cfg.set(full, trim(line.substr(eq + 1)));
  }
  return cfg;
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  if (!json) return parse_config(in);

  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed manifest '" + path + "': " + e.what());
  }
  if (!doc.is_object() || !doc.contains("config") || !doc["config"].is_object()) {
    throw ConfigError("manifest '" + path + "' has no \"config\" object");
  }
  Config cfg;
  for (const auto& [k, v] : doc["config"].items()) {
    if (!v.is_string()) throw ConfigError("manifest config value for '" + k + "' is not a string");
    cfg.set(k, v.get<std::string>());
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ConfigError("manifest seed must be a non-negative integer");
    cfg.set("seed", std::to_string(doc["seed"].get<std::uint64_t>()));
  }
  if (doc.contains("scenario") && doc["scenario"].is_string()) {
    cfg.set("scenario", doc["scenario"].get<std::string>());
  }
  return cfg;
}

}  // namespace cgan
