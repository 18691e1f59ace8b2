#ifndef HIDDENEP_IO_CONFIG_HPP
#define HIDDENEP_IO_CONFIG_HPP

// Flat key = value configuration files. '#' starts a comment; keys are the
// long flag names without dashes.

#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hiddenep/errors.hpp"
#include "hiddenep/io/csv.hpp"

namespace hiddenep::io {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::pair<std::string, std::string>> parse_config(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw error("config_error", "line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.rfind("--", 0) == 0)
            key = key.substr(2);
        if (key.empty())
            throw error("config_error", "line " + std::to_string(lineno) + ": empty key");
        out.emplace_back(key, value);
    }
    return out;
}

inline std::vector<std::pair<std::string, std::string>> load_config(const std::filesystem::path& path) {
    return parse_config(read_file(path));
}

} // namespace hiddenep::io

#endif
