#include "torustwist/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace torustwist::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

// Position of a '#' outside quotes, or npos.
std::size_t comment_start(const std::string& line) {
  bool quoted = false;
  for (std::size_t j = 0; j < line.size(); ++j) {
    if (line[j] == '\\' && quoted) {
      ++j;
    } else if (line[j] == '"') {
      quoted = !quoted;
    } else if (line[j] == '#' && !quoted) {
      return j;
    }
  }
  return std::string::npos;
}

std::vector<std::string> split_list(const std::string& body, const std::string& where) {
  std::vector<std::string> items;
  std::string current;
  bool quoted = false;
  for (std::size_t j = 0; j < body.size(); ++j) {
    const char c = body[j];
    if (c == '\\' && quoted && j + 1 < body.size()) {
      current += c;
      current += body[++j];
      continue;
    }
    if (c == '"') quoted = !quoted;
    if (c == '[' && !quoted) throw ConfigError(where + ": nested lists are not supported");
    if (c == ',' && !quoted) {
      items.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (quoted) throw ConfigError(where + ": unterminated string");
  const std::string last = trim(current);
  if (!last.empty()) items.push_back(last);
  else if (!items.empty()) throw ConfigError(where + ": empty list element");
  for (const auto& it : items)
    if (it.empty()) throw ConfigError(where + ": empty list element");
  return items;
}

const std::map<std::string, std::vector<std::string>>& family_table() {
  static const std::map<std::string, std::vector<std::string>> table{
      {"standard", {"k"}},
      {"standard_shifted", {"k", "shift"}},
      {"saddle_center", {"alpha", "gamma"}},
      {"circle_diffeo", {"omega", "eps"}},
  };
  return table;
}

const std::set<std::string>& all_family_params() {
  static const std::set<std::string> keys{"k", "shift", "alpha", "gamma", "omega", "eps"};
  return keys;
}

}  // namespace

nlohmann::json parse_value(const std::string& literal, const std::string& where) {
  const std::string v = trim(literal);
  if (v.empty()) throw ConfigError(where + ": missing value");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') throw ConfigError(where + ": unterminated string");
    std::string out;
    for (std::size_t j = 1; j + 1 < v.size(); ++j) {
      if (v[j] == '\\') {
        if (j + 2 >= v.size()) throw ConfigError(where + ": dangling escape");
        const char e = v[++j];
        if (e == 'n') out += '\n';
        else if (e == 't') out += '\t';
        else if (e == '"' || e == '\\') out += e;
        else throw ConfigError(where + ": unknown escape \\" + std::string(1, e));
      } else if (v[j] == '"') {
        throw ConfigError(where + ": stray quote in string");
      } else {
        out += v[j];
      }
    }
    return out;
  }
  if (v == "true") return true;
  if (v == "false") return false;
  if (v.front() == '[') {
    if (v.back() != ']') throw ConfigError(where + ": unterminated list");
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& item : split_list(v.substr(1, v.size() - 2), where)) arr.push_back(parse_value(item, where));
    return arr;
  }
  const char* first = v.data();
  const char* last = v.data() + v.size();
  const char* digits = first + (*first == '+' || *first == '-');
  if (digits == last || !(std::isdigit(static_cast<unsigned char>(*digits)) || *digits == '.'))
    throw ConfigError(where + ": cannot parse '" + v + "' as a value");
  if (v.find_first_of(".eE") == std::string::npos) {
    long long i = 0;
    auto [ptr, ec] = std::from_chars(*first == '+' ? first + 1 : first, last, i);
    if (ec == std::errc() && ptr == last) return static_cast<std::int64_t>(i);
  }
  double d = 0.0;
  auto [ptr, ec] = std::from_chars(*first == '+' ? first + 1 : first, last, d);
  if (ec != std::errc() || ptr != last || !std::isfinite(d))
    throw ConfigError(where + ": cannot parse '" + v + "' as a number");
  return d;
}

void RunConfig::load(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::set<std::string> seen;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const std::string where = source + ":" + std::to_string(lineno);
    const std::size_t hash = comment_start(line);
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    if (!valid_key(key)) throw ConfigError(where + ": invalid key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + ": duplicate key '" + key + "'");
    entries_[key] = {parse_value(body.substr(eq + 1), where + " key '" + key + "'"), where};
  }
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  load(ss.str(), path.string());
}

void RunConfig::set_override(const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("--set " + assignment + ": expected key=value");
  const std::string key = trim(assignment.substr(0, eq));
  if (!valid_key(key)) throw ConfigError("--set: invalid key '" + key + "'");
  entries_[key] = {parse_value(assignment.substr(eq + 1), "--set key '" + key + "'"), "--set"};
}

const ConfigEntry& RunConfig::entry(const std::string& key) const { return entries_.at(key); }

void RunConfig::type_error(const std::string& key, const char* expected) const {
  const ConfigEntry& e = entry(key);
  throw ConfigError(e.origin + ": key '" + key + "' expects " + expected + ", got " + e.value.dump());
}

double RunConfig::get_double(const std::string& key, std::optional<double> fallback) const {
  if (!has(key)) {
    if (fallback) return *fallback;
    throw ConfigError("missing required key '" + key + "'");
  }
  const auto& v = entry(key).value;
  if (!v.is_number()) type_error(key, "a number");
  return v.get<double>();
}

long RunConfig::get_int(const std::string& key, std::optional<long> fallback) const {
  if (!has(key)) {
    if (fallback) return *fallback;
    throw ConfigError("missing required key '" + key + "'");
  }
  const auto& v = entry(key).value;
  if (v.is_number_integer()) return v.get<long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == std::floor(d) && std::abs(d) < 9e15) return static_cast<long>(d);
  }
  type_error(key, "an integer");
}

bool RunConfig::get_bool(const std::string& key, std::optional<bool> fallback) const {
  if (!has(key)) {
    if (fallback) return *fallback;
    throw ConfigError("missing required key '" + key + "'");
  }
  const auto& v = entry(key).value;
  if (!v.is_boolean()) type_error(key, "a boolean");
  return v.get<bool>();
}

std::string RunConfig::get_string(const std::string& key, std::optional<std::string> fallback) const {
  if (!has(key)) {
    if (fallback) return *fallback;
    throw ConfigError("missing required key '" + key + "'");
  }
  const auto& v = entry(key).value;
  if (!v.is_string()) type_error(key, "a quoted string");
  return v.get<std::string>();
}

std::vector<double> RunConfig::get_doubles(const std::string& key, std::vector<double> fallback) const {
  if (!has(key)) return fallback;
  const auto& v = entry(key).value;
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) type_error(key, "a list of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) type_error(key, "a list of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<std::string> RunConfig::get_strings(const std::string& key, std::vector<std::string> fallback) const {
  if (!has(key)) return fallback;
  const auto& v = entry(key).value;
  if (v.is_string()) return {v.get<std::string>()};
  if (!v.is_array()) type_error(key, "a list of strings");
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) type_error(key, "a list of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

double RunConfig::get_positive(const std::string& key, double fallback) const {
  const double v = get_double(key, fallback);
  if (!(v > 0.0)) throw ConfigError((has(key) ? entry(key).origin + ": " : std::string()) + "key '" + key +
                                    "' must be positive");
  return v;
}

const std::set<std::string>& common_keys() {
  static const std::set<std::string> keys{"family", "k", "shift", "alpha", "gamma", "omega", "eps", "rng_seed"};
  return keys;
}

std::vector<std::string> family_keys(const std::string& family) {
  const auto& table = family_table();
  const auto it = table.find(family);
  if (it == table.end()) throw ConfigError("unknown family '" + family + "'");
  return it->second;
}

void RunConfig::validate_keys(const std::set<std::string>& allowed) const {
  const std::vector<std::string> own = family_keys(family_name());
  for (const auto& [key, e] : entries_) {
    if (all_family_params().count(key)) {
      if (std::find(own.begin(), own.end(), key) == own.end())
        throw ConfigError(e.origin + ": key '" + key + "' is not a parameter of family '" + family_name() + "'");
      continue;
    }
    if (!common_keys().count(key) && !allowed.count(key))
      throw ConfigError(e.origin + ": unknown key '" + key + "' for command '" + command + "'");
  }
}

TwistFamily RunConfig::family() const {
  const std::string name = family_name();
  try {
    if (name == "standard") return builtin_standard(get_double("k", 1.0));
    if (name == "standard_shifted") return builtin_standard_shifted(get_double("k", 1.0), get_double("shift", 0.25));
    if (name == "saddle_center") return builtin_saddle_center(get_double("alpha", 1.0), get_double("gamma", 1.0));
    if (name == "circle_diffeo") return builtin_circle_diffeo(get_double("omega", 0.2), get_double("eps", 0.5));
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("family '") + name + "': " + e.what());
  }
  throw ConfigError("unknown family '" + name + "'");
}

TwistFamily RunConfig::family_at(double lambda) const {
  const std::string name = family_name();
  if (name == "standard") return builtin_standard(lambda);
  if (name == "standard_shifted") return builtin_standard_shifted(lambda, get_double("shift", 0.25));
  if (name == "saddle_center") return builtin_saddle_center(lambda, get_double("gamma", 1.0));
  if (name == "circle_diffeo") return builtin_circle_diffeo(get_double("omega", 0.2), lambda);
  throw ConfigError("unknown family '" + name + "'");
}

nlohmann::json RunConfig::echo() const {
  nlohmann::json keys = nlohmann::json::object();
  for (const auto& [key, e] : entries_) keys[key] = e.value;
  return {{"command", command},
          {"subcommand", subcommand},
          {"out", out_dir.string()},
          {"workers", workers},
          {"rng_seed", rng_seed},
          {"keys", keys}};
}

}  // namespace torustwist::cli
