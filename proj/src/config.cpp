#include "oswitch/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "oswitch/csvio.hpp"

namespace oswitch {

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_text(buffer.str(), path);
}

ConfigFile ConfigFile::parse_text(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    cfg.origin_ = origin;

    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;

        if (t.front() == '[') {
            if (t.back() != ']')
                throw std::runtime_error("config: unterminated section header at " + origin + ":" +
                                         std::to_string(lineno));
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw std::runtime_error("config: empty section name at " + origin + ":" +
                                         std::to_string(lineno));
            if (cfg.values_.count(section) == 0) {
                cfg.order_.push_back(section);
                cfg.values_[section] = {};
            }
            continue;
        }

        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: expected key = value at " + origin + ":" +
                                     std::to_string(lineno));
        if (section.empty())
            throw std::runtime_error("config: key outside any section at " + origin + ":" +
                                     std::to_string(lineno));
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config: empty key at " + origin + ":" + std::to_string(lineno));
        cfg.values_[section][key] = value;
    }
    return cfg;
}

bool ConfigFile::has_section(const std::string& section) const {
    return values_.count(section) != 0;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    auto it = values_.find(section);
    return it != values_.end() && it->second.count(key) != 0;
}

std::string ConfigFile::get(const std::string& section, const std::string& key) const {
    auto it = values_.find(section);
    if (it == values_.end())
        throw std::runtime_error("config: missing section [" + section + "] in " + origin_);
    auto kt = it->second.find(key);
    if (kt == it->second.end())
        throw std::runtime_error("config: missing key '" + key + "' in [" + section + "] of " + origin_);
    return kt->second;
}

std::string ConfigFile::get_or(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
    return parse_double(get(section, key), "[" + section + "]." + key);
}

double ConfigFile::get_double_or(const std::string& section, const std::string& key, double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

long ConfigFile::get_long(const std::string& section, const std::string& key) const {
    return parse_long(get(section, key), "[" + section + "]." + key);
}

long ConfigFile::get_long_or(const std::string& section, const std::string& key, long fallback) const {
    return has(section, key) ? get_long(section, key) : fallback;
}

} // namespace oswitch
