#ifndef NCL_KVCONFIG_HPP
#define NCL_KVCONFIG_HPP

// Minimal "key = value" config text: one pair per line, '#' comments,
// insertion order preserved. Doubles are written with 17 significant
// digits so a round trip is bit-exact.

#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncl::kv {

struct Block {
  std::vector<std::pair<std::string, std::string>> pairs;

  bool has(const std::string& key) const {
    for (const auto& [k, v] : pairs)
      if (k == key) return true;
    return false;
  }

  const std::string& get(const std::string& key) const {
    for (const auto& [k, v] : pairs)
      if (k == key) return v;
    throw std::runtime_error("config key missing: " + key);
  }

  std::string get_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? get(key) : fallback;
  }

  double get_double(const std::string& key) const { return std::stod(get(key)); }
  double get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
  }
  long get_int(const std::string& key) const { return std::stol(get(key)); }
  long get_int_or(const std::string& key, long fallback) const {
    return has(key) ? get_int(key) : fallback;
  }

  void set(const std::string& key, const std::string& value) {
    pairs.emplace_back(key, value);
  }
  void set_double(const std::string& key, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    set(key, buf);
  }
  void set_int(const std::string& key, long value) { set(key, std::to_string(value)); }
};

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline Block parse(const std::string& text) {
  Block block;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("malformed config line: " + line);
    block.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return block;
}

inline std::string format(const Block& block) {
  std::string out;
  for (const auto& [k, v] : block.pairs) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

}  // namespace ncl::kv

#endif
