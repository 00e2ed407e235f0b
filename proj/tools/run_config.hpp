#pragma once

// `key = value` configuration with [section] headers, as read by the cvlab command line.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

/// Any problem with the configuration text or its values. Maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RunConfig {
public:
    using Section = std::map<std::string, std::string>;

    /// Blank lines and lines starting with '#' or ';' are ignored. Every key must sit inside a
    /// section; a repeated section or key is an error.
    static RunConfig parse(const std::string& text);

    /// Canonical text: sections and keys in sorted order. parse(echo()) == *this.
    std::string echo() const;

    /// Rejects any section or key not listed in `allowed`.
    void restrict_to(const std::map<std::string, std::set<std::string>>& allowed) const;

    bool has(const std::string& section, const std::string& key) const;
    std::string str(const std::string& section, const std::string& key) const;
    std::string str_or(const std::string& section, const std::string& key, std::string fallback) const;
    std::uint64_t u64(const std::string& section, const std::string& key) const;
    std::uint64_t u64_or(const std::string& section, const std::string& key, std::uint64_t fallback) const;
    double real(const std::string& section, const std::string& key) const;
    double real_or(const std::string& section, const std::string& key, double fallback) const;
    bool flag_or(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<std::uint64_t> u64_list(const std::string& section, const std::string& key) const;

    const std::map<std::string, Section>& sections() const noexcept { return sections_; }
    friend bool operator==(const RunConfig&, const RunConfig&) = default;

private:
    std::map<std::string, Section> sections_;
};

}  // namespace cli
