#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "anderson/config.hpp"

namespace anderson {

inline constexpr const char* kVersion = "0.1.0";

/// Command-line overrides; unset fields fall back to the config.
struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::optional<std::filesystem::path> out;
    bool plot = false;
};

struct RunManifest {
    TaskKind task = TaskKind::Msa;
    std::string config_echo;  ///< canonical config after overrides
    std::string version = kVersion;
    std::string timestamp;    ///< UTC, ISO 8601
    std::size_t workers = 1;  ///< resolved worker count
    std::vector<std::string> outputs;  ///< file names relative to the output directory
    double wall_seconds = 0.0;

    std::string to_json() const;
};

/// Worker count: the explicit override, else ANDERSON_WORKERS, else
/// run.workers. 0 at any level means one per hardware thread.
std::size_t resolve_worker_count(const ExperimentConfig& config, const RunOptions& options);

/// Runs `task` and writes <out>/<task>.csv, optional plot files and
/// <out>/manifest.json. The CSV depends only on the config and seed.
RunManifest run(ExperimentConfig config, TaskKind task, const RunOptions& options = {});

/// Two-column plot file: "x y" per line, blank lines between blocks.
struct PlotFile {
    std::string name;
    std::string contents;
};

struct TaskOutput {
    std::string csv_name;
    std::string csv;
    std::vector<PlotFile> plots;
};

/// The computation behind run(), without touching the filesystem. Expects
/// a config that passed validate_config for `task`.
TaskOutput run_task(const ExperimentConfig& config, TaskKind task, std::size_t workers);

}  // namespace anderson
