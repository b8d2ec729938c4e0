#include "mm/config.hpp"

#include "mm/errors.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mm {

Config Config::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    Config cfg;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string trimmed;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
        if (trimmed.empty()) continue;
        auto eq = trimmed.find('=');
        if (eq == std::string::npos) throw parse_error("config: expected key=value", line_no);
        std::string key = trimmed.substr(0, eq), val = trimmed.substr(eq + 1);
        try {
            if (key == "mollifier_a") cfg.mollifier_A = std::stoi(val);
            else if (key == "contour_sigma") cfg.contour_sigma = std::stod(val);
            else if (key == "contour_height") cfg.contour_height = std::stod(val);
            else if (key == "tolerance") cfg.tolerance = std::stod(val);
            else if (key == "cache_dir") cfg.cache_dir = val;
            else if (key == "offline") cfg.offline = (val == "1" || val == "true");
            else throw parse_error("config: unknown key '" + key + "'", line_no);
        } catch (const std::invalid_argument&) {
            throw parse_error("config: bad value for '" + key + "'", line_no);
        }
    }
    return cfg;
}

Config Config::from_environment() {
    const char* path = std::getenv("MM_CONFIG");
    if (path && *path) return load_file(path);
    return Config{};
}

} // namespace mm
