#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

namespace clbp::cli {

// Written next to every output artifact as <artifact>.manifest.json.
struct RunManifest {
    std::string command;
    nlohmann::json config;
    std::optional<std::uint64_t> base_seed;
    std::string tool_version;
    std::map<std::string, std::string> input_digests;  // path -> "fnv1a64:<hex>"
    std::string timestamp;                              // UTC, ISO 8601
    std::string out;
};

// 64-bit FNV-1a over the file bytes. Throws Io if the file can't be read.
std::string file_digest(const std::string& path);
std::string utc_timestamp();

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);
bool is_manifest(const nlohmann::json& j);

void write_manifest(const std::string& path, const RunManifest& m);
nlohmann::json read_json_file(const std::string& path);

}  // namespace clbp::cli
