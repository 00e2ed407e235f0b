#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace cli {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string where(const std::string& section, const std::string& key) {
    return "[" + section + "] " + key;
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    std::string current;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        const std::string at = "line " + std::to_string(lineno) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(at + "unterminated section header");
            current = trim(std::string_view(line).substr(1, line.size() - 2));
            if (current.empty()) throw ConfigError(at + "empty section name");
            if (!cfg.sections_.emplace(current, Section{}).second) {
                throw ConfigError(at + "section [" + current + "] appears twice");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(at + "expected 'key = value'");
        if (current.empty()) throw ConfigError(at + "key outside of any [section]");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) throw ConfigError(at + "empty key");
        if (!cfg.sections_[current].emplace(key, value).second) {
            throw ConfigError(at + "key " + where(current, key) + " appears twice");
        }
    }
    return cfg;
}

std::string RunConfig::echo() const {
    std::string out;
    for (const auto& [name, keys] : sections_) {
        if (!out.empty()) out += '\n';
        out += "[" + name + "]\n";
        for (const auto& [k, v] : keys) out += k + " = " + v + "\n";
    }
    return out;
}

void RunConfig::restrict_to(const std::map<std::string, std::set<std::string>>& allowed) const {
    for (const auto& [name, keys] : sections_) {
        const auto it = allowed.find(name);
        if (it == allowed.end()) throw ConfigError("unknown section [" + name + "]");
        for (const auto& [k, v] : keys) {
            if (!it->second.count(k)) throw ConfigError("unknown key " + where(name, k));
        }
    }
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
    const auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key);
}

std::string RunConfig::str(const std::string& section, const std::string& key) const {
    if (!has(section, key)) throw ConfigError("missing required key " + where(section, key));
    const std::string& v = sections_.at(section).at(key);
    if (v.empty()) throw ConfigError("empty value for " + where(section, key));
    return v;
}

std::string RunConfig::str_or(const std::string& section, const std::string& key,
                              std::string fallback) const {
    return has(section, key) ? str(section, key) : fallback;
}

std::uint64_t RunConfig::u64(const std::string& section, const std::string& key) const {
    const std::string v = str(section, key);
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
        throw ConfigError(where(section, key) + ": expected a non-negative integer, got '" + v + "'");
    }
    return out;
}

std::uint64_t RunConfig::u64_or(const std::string& section, const std::string& key,
                                std::uint64_t fallback) const {
    return has(section, key) ? u64(section, key) : fallback;
}

double RunConfig::real(const std::string& section, const std::string& key) const {
    const std::string v = str(section, key);
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw ConfigError(where(section, key) + ": expected a finite number, got '" + v + "'");
    }
    return out;
}

double RunConfig::real_or(const std::string& section, const std::string& key, double fallback) const {
    return has(section, key) ? real(section, key) : fallback;
}

bool RunConfig::flag_or(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) return fallback;
    std::string v = str(section, key);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(where(section, key) + ": expected true or false, got '" + v + "'");
}

std::vector<std::uint64_t> RunConfig::u64_list(const std::string& section, const std::string& key) const {
    const std::string v = str(section, key);
    std::vector<std::uint64_t> out;
    std::size_t start = 0;
    while (start <= v.size()) {
        const auto comma = v.find(',', start);
        const std::string item = trim(std::string_view(v).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        std::uint64_t x = 0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), x);
        if (item.empty() || res.ec != std::errc{} || res.ptr != item.data() + item.size()) {
            throw ConfigError(where(section, key) + ": bad list item '" + item + "'");
        }
        out.push_back(x);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace cli
