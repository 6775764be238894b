#pragma once

#include <map>
#include <set>
#include <string>

namespace acfront {

/// Flat `key = value` configuration. Blank lines and text after `#` are
/// ignored; keys are case-sensitive; repeated keys are an error.
class Config {
public:
    static Config parse(const std::string& text, const std::string& origin = "<config>");
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    const std::map<std::string, std::string>& values() const { return values_; }

    /// Throws UsageError naming the first key not in `known`.
    void require_known(const std::set<std::string>& known) const;

    /// Canonical sorted `key = value` text.
    std::string canonical() const;

private:
    std::map<std::string, std::string> values_;
    std::string origin_;
};

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace acfront
