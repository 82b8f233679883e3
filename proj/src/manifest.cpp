#include "nsshell/manifest.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace nsshell {

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view data) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a64(data);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

std::string render_manifest_json(const RunManifest& m) {
    nlohmann::json j;
    j["command"] = m.command;
    j["config_digest"] = m.config_digest;
    j["tool_version"] = m.tool_version;
    j["seed"] = m.seed;
    j["outputs"] = m.outputs;
    j["wall_ms"] = m.wall_ms;
    return j.dump(2) + "\n";
}

void write_manifest(const RunManifest& m, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_manifest: cannot open " + path);
    os << render_manifest_json(m);
}

}  // namespace nsshell
