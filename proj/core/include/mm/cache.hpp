#ifndef MM_CACHE_HPP
#define MM_CACHE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace mm::cache {

std::uint64_t fnv1a(std::string_view s);

// On-disk cache of JSON payloads keyed by canonical operation strings.
// Writes go through a temp file + rename, so concurrent command invocations
// can share a directory; values are deterministic, last writer wins.
class DiskCache {
  public:
    explicit DiskCache(std::string dir);

    struct Entry {
        std::string key;
        std::string value; // JSON text
        long long created = 0;
        int version = 1;
    };

    std::optional<std::string> get(const std::string& key) const;
    std::optional<Entry> get_entry(const std::string& key) const;
    void put(const std::string& key, const std::string& json_value, int version = 1);
    std::vector<Entry> entries() const;
    const std::string& dir() const { return dir_; }

  private:
    std::string path_for(const std::string& key) const;
    std::string dir_;
};

// In-process memo map (string -> double); benign last-writer-wins races.
class MemoCache {
  public:
    std::optional<double> get(const std::string& key) const;
    void put(const std::string& key, double value);

  private:
    mutable std::shared_mutex mtx_;
    std::map<std::string, double> map_;
};

} // namespace mm::cache

#endif
