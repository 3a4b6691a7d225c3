#include "rgslab/config.hpp"

#include <cstdlib>
#include <fstream>

namespace rgs {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not found: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": empty key or value");
        kv[key] = value;
    }
    return kv;
}

void reject_unknown_keys(const std::map<std::string, std::string>& kv,
                         const std::set<std::string>& allowed,
                         const std::string& path) {
    for (const auto& [key, _] : kv)
        if (!allowed.count(key))
            throw ConfigError(path + ": unknown key '" + key + "'");
}

double config_double(const std::map<std::string, std::string>& kv,
                     const std::string& key, double fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    char* end = nullptr;
    const double v = std::strtod(it->second.c_str(), &end);
    if (end == it->second.c_str() || *end != '\0')
        throw ConfigError("malformed value for '" + key + "': " + it->second);
    return v;
}

int config_int(const std::map<std::string, std::string>& kv,
               const std::string& key, int fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    char* end = nullptr;
    const long v = std::strtol(it->second.c_str(), &end, 10);
    if (end == it->second.c_str() || *end != '\0')
        throw ConfigError("malformed value for '" + key + "': " + it->second);
    return static_cast<int>(v);
}

std::string config_string(const std::map<std::string, std::string>& kv,
                          const std::string& key, const std::string& fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

} // namespace rgs
