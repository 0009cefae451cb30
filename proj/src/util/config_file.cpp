#include "vegnav/util/config_file.hpp"

#include <fstream>
#include <sstream>

#include "vegnav/errors.hpp"

namespace vegnav::util {

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

ConfigFile ConfigFile::parse(const std::string& text, const std::string& origin) {
    ConfigFile cf;
    cf.origin_ = origin;
    std::istringstream in(text);
    std::string raw;
    std::string current;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r\n");
        line = line.substr(first, last - first + 1);

        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section");
            current = line.substr(1, line.size() - 2);
            cf.sections_[current];  // section may legitimately stay empty
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        if (current.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": entry outside a section");

        Entry e;
        e.line = lineno;
        {
            std::string k = line.substr(0, eq);
            const auto kl = k.find_last_not_of(" \t");
            if (kl == std::string::npos)
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
            e.key = k.substr(0, kl + 1);
        }
        std::istringstream vs(line.substr(eq + 1));
        std::string tok;
        while (vs >> tok) e.values.push_back(tok);
        cf.sections_[current].push_back(std::move(e));
    }
    return cf;
}

bool ConfigFile::has_section(const std::string& section) const {
    return sections_.count(section) != 0;
}

const std::vector<ConfigFile::Entry>& ConfigFile::section(const std::string& section) const {
    const auto it = sections_.find(section);
    if (it == sections_.end()) throw ConfigError(origin_ + ": missing section [" + section + "]");
    return it->second;
}

std::vector<const ConfigFile::Entry*> ConfigFile::entries(const std::string& section,
                                                          const std::string& key) const {
    std::vector<const Entry*> out;
    const auto it = sections_.find(section);
    if (it == sections_.end()) return out;
    for (const auto& e : it->second)
        if (e.key == key) out.push_back(&e);
    return out;
}

const ConfigFile::Entry* ConfigFile::find_unique(const std::string& section,
                                                 const std::string& key) const {
    const auto es = entries(section, key);
    if (es.empty()) return nullptr;
    if (es.size() > 1)
        throw ConfigError(origin_ + ": duplicate key '" + key + "' in [" + section + "]");
    return es.front();
}

double ConfigFile::to_double(const std::string& token, const std::string& context) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw ConfigError(context + ": not a number: '" + token + "'");
    }
    if (pos != token.size()) throw ConfigError(context + ": not a number: '" + token + "'");
    return v;
}

long ConfigFile::to_long(const std::string& token, const std::string& context) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(token, &pos);
    } catch (const std::exception&) {
        throw ConfigError(context + ": not an integer: '" + token + "'");
    }
    if (pos != token.size()) throw ConfigError(context + ": not an integer: '" + token + "'");
    return v;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key) const {
    const Entry* e = find_unique(section, key);
    if (!e) throw ConfigError(origin_ + ": missing key '" + key + "' in [" + section + "]");
    if (e->values.size() != 1)
        throw ConfigError(origin_ + ": key '" + key + "' expects a single value");
    return e->values.front();
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
    const Entry* e = find_unique(section, key);
    if (!e) return fallback;
    if (e->values.size() != 1)
        throw ConfigError(origin_ + ": key '" + key + "' expects a single value");
    return e->values.front();
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
    return to_double(get_string(section, key), origin_ + ": [" + section + "] " + key);
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
    const Entry* e = find_unique(section, key);
    if (!e) return fallback;
    if (e->values.size() != 1)
        throw ConfigError(origin_ + ": key '" + key + "' expects a single value");
    return to_double(e->values.front(), origin_ + ": [" + section + "] " + key);
}

long ConfigFile::get_long(const std::string& section, const std::string& key) const {
    return to_long(get_string(section, key), origin_ + ": [" + section + "] " + key);
}

long ConfigFile::get_long(const std::string& section, const std::string& key,
                          long fallback) const {
    const Entry* e = find_unique(section, key);
    if (!e) return fallback;
    if (e->values.size() != 1)
        throw ConfigError(origin_ + ": key '" + key + "' expects a single value");
    return to_long(e->values.front(), origin_ + ": [" + section + "] " + key);
}

std::vector<double> ConfigFile::get_doubles(const std::string& section,
                                            const std::string& key) const {
    const Entry* e = find_unique(section, key);
    if (!e) throw ConfigError(origin_ + ": missing key '" + key + "' in [" + section + "]");
    std::vector<double> out;
    out.reserve(e->values.size());
    for (const auto& t : e->values)
        out.push_back(to_double(t, origin_ + ": [" + section + "] " + key));
    return out;
}

std::vector<double> ConfigFile::get_doubles(const std::string& section, const std::string& key,
                                            const std::vector<double>& fallback) const {
    const Entry* e = find_unique(section, key);
    if (!e) return fallback;
    std::vector<double> out;
    out.reserve(e->values.size());
    for (const auto& t : e->values)
        out.push_back(to_double(t, origin_ + ": [" + section + "] " + key));
    return out;
}

}  // namespace vegnav::util
