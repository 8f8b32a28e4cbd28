#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

namespace fractalq {

/// Human-editable "key = value" configuration. Lines starting with '#' or
/// ';' are comments; blank lines are ignored; keys are unique. Ordered so
/// formatting is deterministic.
using KeyValues = std::map<std::string, std::string, std::less<>>;

KeyValues parse_kv(std::istream& in);
KeyValues parse_kv_file(const std::filesystem::path& path);
std::string format_kv(const KeyValues& kv);

// Typed lookups; a present but malformed value throws UsageError naming the key.
std::string kv_string(const KeyValues& kv, std::string_view key, std::string fallback);
double kv_double(const KeyValues& kv, std::string_view key, double fallback);
std::int64_t kv_int(const KeyValues& kv, std::string_view key, std::int64_t fallback);
std::uint64_t kv_uint(const KeyValues& kv, std::string_view key, std::uint64_t fallback);
bool kv_bool(const KeyValues& kv, std::string_view key, bool fallback);

/// Throws UsageError for any key not in `allowed`.
void kv_require_known(const KeyValues& kv, std::initializer_list<std::string_view> allowed);

} // namespace fractalq
