#include "fractalq/kv.hpp"

#include "fractalq/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace fractalq {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* type) {
  throw UsageError("config key '" + std::string(key) + "': '" + std::string(value) + "' is not " + type);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text, const char* type) {
  T v{};
  const char* first = text.data() + (!text.empty() && text.front() == '+' ? 1 : 0);
  const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) bad_value(key, text, type);
  return v;
}

} // namespace

KeyValues parse_kv(std::istream& in) {
  KeyValues kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view s = trim(line);
    if (s.empty() || s.front() == '#' || s.front() == ';') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key(trim(s.substr(0, eq)));
    std::string_view value = trim(s.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) throw UsageError("config line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, std::string(value)).second) {
      throw UsageError("config key '" + key + "' given twice");
    }
  }
  return kv;
}

KeyValues parse_kv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  return parse_kv(in);
}

std::string format_kv(const KeyValues& kv) {
  std::ostringstream out;
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
  return out.str();
}

std::string kv_string(const KeyValues& kv, std::string_view key, std::string fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

double kv_double(const KeyValues& kv, std::string_view key, double fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : parse_number<double>(key, it->second, "a number");
}

std::int64_t kv_int(const KeyValues& kv, std::string_view key, std::int64_t fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : parse_number<std::int64_t>(key, it->second, "an integer");
}

std::uint64_t kv_uint(const KeyValues& kv, std::string_view key, std::uint64_t fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback
                        : parse_number<std::uint64_t>(key, it->second, "a non-negative integer");
}

bool kv_bool(const KeyValues& kv, std::string_view key, bool fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v, "a boolean");
}

void kv_require_known(const KeyValues& kv, std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, v] : kv) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw UsageError("unknown config key '" + k + "'");
    }
  }
}

} // namespace fractalq
