#include "oswitch/csvio.hpp"

#include <cstdlib>
#include <stdexcept>

namespace oswitch {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    for (;;) {
        auto comma = line.find(',', pos);
        if (comma == std::string::npos) {
            out.push_back(trim(line.substr(pos)));
            break;
        }
        out.push_back(trim(line.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

double parse_double(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    if (t.empty()) throw std::runtime_error("csv: empty value for " + what);
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
        throw std::runtime_error("csv: malformed number for " + what + ": '" + t + "'");
    return v;
}

long parse_long(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    if (t.empty()) throw std::runtime_error("csv: empty value for " + what);
    char* end = nullptr;
    long v = std::strtol(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size())
        throw std::runtime_error("csv: malformed integer for " + what + ": '" + t + "'");
    return v;
}

std::string trim(const std::string& s) {
    const char* ws = " \t\r\n";
    auto begin = s.find_first_not_of(ws);
    if (begin == std::string::npos) return {};
    auto end = s.find_last_not_of(ws);
    return s.substr(begin, end - begin + 1);
}

} // namespace oswitch
