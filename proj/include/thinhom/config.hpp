#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "thinhom/thin_spec.hpp"

namespace thinhom {

// Minimal TOML reader covering what the tool's configs use: [section]
// headers (dotted names allowed), key = value with numbers, booleans,
// quoted strings, and flat arrays; '#' comments. Keys are stored flattened
// as "section.key".
class ConfigFile {
public:
    static ConfigFile parse_string(const std::string& text);
    static ConfigFile parse_file(const std::string& path);

    bool has(const std::string& key) const;

    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    std::string str(const std::string& key) const;
    std::string str_or(const std::string& key, std::string fallback) const;
    bool bool_or(const std::string& key, bool fallback) const;
    std::vector<double> numbers(const std::string& key) const;

    // sorted key=value dump; the CSV header hash is FNV-1a over this
    std::string canonical() const;
    std::uint64_t hash() const;

private:
    std::map<std::string, std::string> raw_;  // value text, strings unquoted
    std::map<std::string, std::vector<std::string>> arrays_;
    const std::string& raw(const std::string& key) const;
};

PeriodicProfile profile_from_config(const ConfigFile& cfg, const std::string& section);
ForcingSpec forcing_from_config(const ConfigFile& cfg);

// [domain] + [profiles.g] + [profiles.h] + [forcing]; epsilon defaults to
// 0 and is set per study row.
ThinDomainSpec spec_from_config(const ConfigFile& cfg);

} // namespace thinhom
