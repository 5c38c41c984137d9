#include "thinhom/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace thinhom {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// strips a trailing comment that is not inside a quoted string
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

std::string unquote(const std::string& v) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
        return v.substr(1, v.size() - 2);
    return v;
}

std::vector<std::string> split_array(const std::string& body) {
    std::vector<std::string> parts;
    std::string cur;
    bool quoted = false;
    for (char c : body) {
        if (c == '"') quoted = !quoted;
        if (c == ',' && !quoted) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    const std::string last = trim(cur);
    if (!last.empty()) parts.push_back(last);
    return parts;
}

} // namespace

ConfigFile ConfigFile::parse_string(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config: bad section at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: expected key = value at line " +
                                     std::to_string(lineno));
        const std::string key =
            (section.empty() ? "" : section + ".") + trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.empty())
            throw std::runtime_error("config: empty value at line " + std::to_string(lineno));
        if (value.front() == '[') {
            if (value.back() != ']')
                throw std::runtime_error("config: unterminated array at line " +
                                         std::to_string(lineno));
            auto parts = split_array(value.substr(1, value.size() - 2));
            for (auto& pt : parts) pt = unquote(pt);
            cfg.arrays_[key] = std::move(parts);
        } else {
            cfg.raw_[key] = unquote(value);
        }
    }
    return cfg;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

bool ConfigFile::has(const std::string& key) const {
    return raw_.count(key) > 0 || arrays_.count(key) > 0;
}

const std::string& ConfigFile::raw(const std::string& key) const {
    const auto it = raw_.find(key);
    if (it == raw_.end()) throw std::runtime_error("config: missing key '" + key + "'");
    return it->second;
}

double ConfigFile::number(const std::string& key) const {
    const std::string& v = raw(key);
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size())
        throw std::runtime_error("config: '" + key + "' is not a number: " + v);
    return x;
}

double ConfigFile::number_or(const std::string& key, double fallback) const {
    return raw_.count(key) ? number(key) : fallback;
}

std::string ConfigFile::str(const std::string& key) const { return raw(key); }

std::string ConfigFile::str_or(const std::string& key, std::string fallback) const {
    return raw_.count(key) ? raw(key) : std::move(fallback);
}

bool ConfigFile::bool_or(const std::string& key, bool fallback) const {
    if (!raw_.count(key)) return fallback;
    const std::string& v = raw(key);
    if (v == "true") return true;
    if (v == "false") return false;
    throw std::runtime_error("config: '" + key + "' is not a boolean: " + v);
}

std::vector<double> ConfigFile::numbers(const std::string& key) const {
    const auto it = arrays_.find(key);
    if (it == arrays_.end()) throw std::runtime_error("config: missing array '" + key + "'");
    std::vector<double> out;
    out.reserve(it->second.size());
    for (const auto& s : it->second) out.push_back(std::stod(s));
    return out;
}

std::string ConfigFile::canonical() const {
    std::ostringstream os;
    for (const auto& [k, v] : raw_) os << k << "=" << v << "\n";
    for (const auto& [k, vs] : arrays_) {
        os << k << "=[";
        for (std::size_t i = 0; i < vs.size(); ++i) os << (i ? "," : "") << vs[i];
        os << "]\n";
    }
    return os.str();
}

std::uint64_t ConfigFile::hash() const {
    // FNV-1a 64
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : canonical()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

PeriodicProfile profile_from_config(const ConfigFile& cfg, const std::string& section) {
    const std::string family = cfg.str(section + ".family");
    const double period = cfg.number_or(section + ".period", 1.0);
    if (family == "constant")
        return PeriodicProfile::constant(cfg.number(section + ".value"), period);
    if (family == "cosine")
        return PeriodicProfile::cosine(cfg.number(section + ".mean"),
                                       cfg.number(section + ".amplitude"), period,
                                       static_cast<int>(cfg.number_or(section + ".harmonics", 1)));
    if (family == "piecewise_linear")
        return PeriodicProfile::piecewise_linear(cfg.numbers(section + ".breakpoints"),
                                                 cfg.numbers(section + ".values"));
    throw std::runtime_error("config: unknown profile family '" + family + "'");
}

ForcingSpec forcing_from_config(const ConfigFile& cfg) {
    const std::string kind = cfg.str_or("forcing.kind", "none");
    if (kind == "none") return ForcingSpec::none();
    if (kind == "affine")
        return ForcingSpec::affine(cfg.number_or("forcing.c0", 0.0),
                                   cfg.number_or("forcing.c1", 0.0));
    if (kind == "reaction")
        return ForcingSpec::reaction(cfg.str("forcing.family"),
                                     cfg.number_or("forcing.scale", 1.0));
    throw std::runtime_error("config: unknown forcing kind '" + kind + "'");
}

ThinDomainSpec spec_from_config(const ConfigFile& cfg) {
    ThinDomainSpec spec;
    spec.alpha = cfg.number_or("domain.alpha", 1.0);
    spec.beta = cfg.number_or("domain.beta", 0.5);
    spec.gamma = cfg.number_or("domain.gamma", 1.0);
    spec.p_exponent = cfg.number_or("domain.p", 2.0);
    spec.epsilon = cfg.number_or("domain.epsilon", 0.0);
    spec.g = profile_from_config(cfg, "profiles.g");
    spec.h = profile_from_config(cfg, "profiles.h");
    spec.forcing = forcing_from_config(cfg);
    return spec;
}

} // namespace thinhom
