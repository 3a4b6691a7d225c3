#pragma once
// Plain-text configuration files: one `key = value` per line, `#` comments.

#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace rgs {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses the file into a key/value map. Throws ConfigError naming the path
/// when the file is missing and naming the line when an entry is malformed.
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// Throws ConfigError naming the first key not in `allowed`.
void reject_unknown_keys(const std::map<std::string, std::string>& kv,
                         const std::set<std::string>& allowed,
                         const std::string& path);

double config_double(const std::map<std::string, std::string>& kv,
                     const std::string& key, double fallback);
int config_int(const std::map<std::string, std::string>& kv,
               const std::string& key, int fallback);
std::string config_string(const std::map<std::string, std::string>& kv,
                          const std::string& key, const std::string& fallback);

} // namespace rgs
