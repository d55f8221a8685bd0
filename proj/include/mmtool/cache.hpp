#pragma once

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace mmtool {

inline constexpr const char* kToolkitVersion = "1.0.0";

// Content-addressed result cache under MMTOOL_CACHE_DIR (default
// ./.mmtool-cache): {dir}/{fingerprint}/W_{g}_{n}.json. Writes are atomic
// (temp file + rename); corrupted or stale entries read as missing; I/O
// problems degrade to warnings on stderr.
std::string cache_dir();
std::optional<nlohmann::json> cache_get(const std::string& fingerprint, int g, int n);
void cache_put(const std::string& fingerprint, int g, int n, const nlohmann::json& payload);

}  // namespace mmtool
