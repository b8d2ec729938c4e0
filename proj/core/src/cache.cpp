#include "mm/cache.hpp"

#include "json.hpp"

#include <chrono>
#include <mutex>
#include <filesystem>
#include <fstream>

namespace mm::cache {

namespace fs = std::filesystem;

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

DiskCache::DiskCache(std::string dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
}

std::string DiskCache::path_for(const std::string& key) const {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(key)));
    return dir_ + "/" + buf + ".json";
}

std::optional<DiskCache::Entry> DiskCache::get_entry(const std::string& key) const {
    std::ifstream in(path_for(key));
    if (!in) return std::nullopt;
    nlohmann::json j;
    try {
        in >> j;
        Entry e;
        e.key = j.at("key").get<std::string>();
        if (e.key != key) return std::nullopt; // hash collision, treat as miss
        e.value = j.at("value").dump();
        e.created = j.at("created").get<long long>();
        e.version = j.at("version").get<int>();
        return e;
    } catch (...) {
        return std::nullopt;
    }
}

std::optional<std::string> DiskCache::get(const std::string& key) const {
    auto e = get_entry(key);
    if (!e) return std::nullopt;
    return e->value;
}

void DiskCache::put(const std::string& key, const std::string& json_value, int version) {
    nlohmann::json j;
    j["key"] = key;
    j["value"] = nlohmann::json::parse(json_value);
    j["created"] = std::chrono::duration_cast<std::chrono::seconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
    j["version"] = version;
    std::string final_path = path_for(key);
    std::string tmp = final_path + ".tmp";
    {
        std::ofstream out(tmp);
        out << j.dump(1) << "\n";
    }
    fs::rename(tmp, final_path);
}

std::vector<DiskCache::Entry> DiskCache::entries() const {
    std::vector<Entry> out;
    for (const auto& p : fs::directory_iterator(dir_)) {
        if (p.path().extension() != ".json") continue;
        std::ifstream in(p.path());
        nlohmann::json j;
        try {
            in >> j;
            Entry e;
            e.key = j.at("key").get<std::string>();
            e.value = j.at("value").dump();
            e.created = j.at("created").get<long long>();
            e.version = j.at("version").get<int>();
            out.push_back(std::move(e));
        } catch (...) {
            continue;
        }
    }
    return out;
}

std::optional<double> MemoCache::get(const std::string& key) const {
    std::shared_lock lock(mtx_);
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

void MemoCache::put(const std::string& key, double value) {
    std::unique_lock lock(mtx_);
    map_[key] = value;
}

} // namespace mm::cache
