#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nsshell {

inline constexpr const char* kToolVersion = "0.1.0";

std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

/// Every CLI invocation writes one of these next to its outputs; reruns with
/// an equal digest and seed reproduce the referenced CSV/JSON files
/// byte-identically in deterministic mode.
struct RunManifest {
    std::string command;
    std::string config_digest;   // fnv1a64 of the resolved config JSON
    std::string tool_version = kToolVersion;
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;
    double wall_ms = 0.0;
};

std::string render_manifest_json(const RunManifest& m);
void write_manifest(const RunManifest& m, const std::string& path);

}  // namespace nsshell
