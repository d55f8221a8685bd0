#include "mmtool/cache.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace mmtool {

std::string cache_dir() {
    const char* env = std::getenv("MMTOOL_CACHE_DIR");
    return env && *env ? std::string(env) : std::string("./.mmtool-cache");
}

static std::string entry_path(const std::string& fingerprint, int g, int n) {
    return cache_dir() + "/" + fingerprint + "/W_" + std::to_string(g) + "_" + std::to_string(n) + ".json";
}

std::optional<nlohmann::json> cache_get(const std::string& fingerprint, int g, int n) {
    std::error_code ec;
    fs::path p = entry_path(fingerprint, g, n);
    if (!fs::exists(p, ec)) return std::nullopt;
    try {
        std::ifstream in(p);
        nlohmann::json j = nlohmann::json::parse(in);
        if (j.value("version", std::string()) != kToolkitVersion) return std::nullopt;
        return j;
    } catch (const std::exception&) {
        return std::nullopt;  // corrupted entries are skipped, never fatal
    }
}

void cache_put(const std::string& fingerprint, int g, int n, const nlohmann::json& payload) {
    try {
        fs::path dir = fs::path(cache_dir()) / fingerprint;
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw std::runtime_error(ec.message());
        nlohmann::json j = payload;
        j["version"] = kToolkitVersion;
        fs::path final = entry_path(fingerprint, g, n);
        fs::path tmp = final;
        tmp += ".tmp." + std::to_string(static_cast<unsigned>(::getpid()));
        {
            std::ofstream out(tmp);
            out << j.dump();
            if (!out) throw std::runtime_error("write failed");
        }
        fs::rename(tmp, final, ec);
        if (ec) {
            fs::remove(tmp);
            throw std::runtime_error(ec.message());
        }
    } catch (const std::exception& e) {
        std::cerr << "mmtool: cache write skipped (" << e.what() << ")\n";
    }
}

}  // namespace mmtool
