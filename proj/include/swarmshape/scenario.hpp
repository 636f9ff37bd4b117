#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace swarmshape {

/// Flat `key = value` configuration; `#` starts a comment. Throws
/// ConfigError on a line without `=`, an empty key or a repeated key.
std::map<std::string, std::string> parse_config(std::string_view text);

inline constexpr std::string_view kScenarioKinds[] = {"square-sweep", "circle-sweep",      "two-robot",
                                                      "n-robot",      "open-loop-friction", "closed-loop-cov"};

struct Scenario {
    std::string kind;
    std::map<std::string, std::string> params;
    std::uint64_t seed = 0;
};

struct OutputFile {
    std::string name;
    std::string content;
};

struct ScenarioOutput {
    std::vector<OutputFile> files;
    std::string summary;                             // human-readable table
    std::map<std::string, std::string> resolved;     // every parameter, defaults included
};

/// Validates every parameter (ValidationError on unknown kind or key, bad or
/// out-of-range value) before computing, then runs the scenario. Outputs are
/// returned in memory; nothing touches the filesystem.
ScenarioOutput run_scenario(const Scenario& sc);

/// Writes the files plus manifest.json (kind, seed, parameters, FNV-1a
/// checksums of every file) into `dir`.
void write_outputs(const std::filesystem::path& dir, const Scenario& sc, const ScenarioOutput& out);

/// 64-bit FNV-1a, hex encoded.
std::string checksum(std::string_view data);

}  // namespace swarmshape
