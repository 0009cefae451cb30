#pragma once

#include <map>
#include <string>
#include <vector>

namespace vegnav::util {

// Sectioned key = value text files:
//
//   # comment
//   [section]
//   key = v1 v2 v3     # values are whitespace-separated tokens
//   key = ...          # repeated keys accumulate in order
//
// Section and key names are case-sensitive. Unknown sections/keys are the
// caller's business; this class only tokenizes.
class ConfigFile {
public:
    struct Entry {
        std::string key;
        std::vector<std::string> values;
        int line = 0;
    };

    static ConfigFile load(const std::string& path);
    static ConfigFile parse(const std::string& text, const std::string& origin = "<string>");

    bool has_section(const std::string& section) const;
    const std::vector<Entry>& section(const std::string& section) const;

    // All occurrences of key within section, in file order.
    std::vector<const Entry*> entries(const std::string& section, const std::string& key) const;

    // Single-occurrence accessors; throw ConfigError when missing (no
    // fallback given) or duplicated.
    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long get_long(const std::string& section, const std::string& key) const;
    long get_long(const std::string& section, const std::string& key, long fallback) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                    const std::vector<double>& fallback) const;

    const std::string& origin() const { return origin_; }

private:
    const Entry* find_unique(const std::string& section, const std::string& key) const;
    static double to_double(const std::string& token, const std::string& context);
    static long to_long(const std::string& token, const std::string& context);

    std::string origin_;
    std::map<std::string, std::vector<Entry>> sections_;
};

}  // namespace vegnav::util
