#include "manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iterator>

#include "clbp/error.hpp"

namespace clbp::cli {

using nlohmann::json;

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot read '" + path + "' for digest");
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::istreambuf_iterator<char> it(in), end; it != end; ++it) {
        h ^= static_cast<unsigned char>(*it);
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json to_json(const RunManifest& m) {
    return {
        {"command", m.command},
        {"config", m.config},
        {"base_seed", m.base_seed ? json(*m.base_seed) : json(nullptr)},
        {"tool_version", m.tool_version},
        {"input_digests", m.input_digests},
        {"timestamp", m.timestamp},
        {"out", m.out},
    };
}

bool is_manifest(const json& j) { return j.is_object() && j.contains("command") && j.contains("config"); }

RunManifest manifest_from_json(const json& j) {
    try {
        RunManifest m;
        m.command = j.at("command").get<std::string>();
        m.config = j.at("config");
        if (j.contains("base_seed") && !j.at("base_seed").is_null()) m.base_seed = j.at("base_seed").get<std::uint64_t>();
        m.tool_version = j.value("tool_version", "");
        if (j.contains("input_digests")) m.input_digests = j.at("input_digests").get<std::map<std::string, std::string>>();
        m.timestamp = j.value("timestamp", "");
        m.out = j.value("out", "");
        return m;
    } catch (const json::exception& e) {
        throw Error(Errc::Parse, std::string("manifest: ") + e.what());
    }
}

void write_manifest(const std::string& path, const RunManifest& m) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::Io, "cannot write '" + path + "'");
    out << to_json(m).dump(2) << '\n';
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(Errc::Parse, path + ": " + e.what());
    }
}

}  // namespace clbp::cli
