#ifndef MM_CONFIG_HPP
#define MM_CONFIG_HPP

#include <string>

namespace mm {

// Flat key=value configuration ('#' comments).  Flags override file values;
// the MM_CONFIG environment variable names the default file.
struct Config {
    int mollifier_A = 16;       // key: mollifier_a
    double contour_sigma = 0.7; // key: contour_sigma
    double contour_height = 12; // key: contour_height
    double tolerance = 1e-9;    // key: tolerance
    std::string cache_dir = ".mm_cache";
    bool offline = false;

    static Config load_file(const std::string& path);
    static Config from_environment(); // MM_CONFIG if set, else defaults
};

} // namespace mm

#endif
