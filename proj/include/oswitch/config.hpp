#pragma once

#include <map>
#include <string>
#include <vector>

namespace oswitch {

/// Minimal section/key=value reader for scenario and trace-spec files.
/// Lines starting with '#' or ';' are comments; section headers look like
/// `[name]` and may contain spaces (e.g. `[outlet 3]`).
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_text(const std::string& text, const std::string& origin = "<string>");

    bool has_section(const std::string& section) const;
    bool has(const std::string& section, const std::string& key) const;

    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key, const std::string& fallback) const;

    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key, double fallback) const;
    long get_long(const std::string& section, const std::string& key) const;
    long get_long_or(const std::string& section, const std::string& key, long fallback) const;

    /// Section names in file order (duplicates merged into the first).
    const std::vector<std::string>& sections() const { return order_; }

    const std::string& origin() const { return origin_; }

private:
    std::string origin_;
    std::vector<std::string> order_;
    std::map<std::string, std::map<std::string, std::string>> values_;
};

} // namespace oswitch
