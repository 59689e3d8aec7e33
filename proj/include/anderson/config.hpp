#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "anderson/disorder.hpp"
#include "anderson/hamiltonian.hpp"
#include "anderson/msa.hpp"
#include "anderson/spectral.hpp"

namespace anderson {

enum class TaskKind { Msa, Decay, Moment, Spectrum };

const char* to_string(TaskKind kind);
std::optional<TaskKind> parse_task_kind(std::string_view text);

struct ModelBlock {
    int N = 1;
    int n = 1;
    int d = 1;
    double h = 0.0;
    std::size_t dense_limit = kDefaultDenseLimit;
    friend bool operator==(const ModelBlock&, const ModelBlock&) = default;
};

/// Task inputs. msa reads the interval, grid and scale keys; decay,
/// moment and spectrum work on the cube of radius L around the origin.
struct TaskBlock {
    std::optional<TaskKind> kind;
    double m = 0.5;
    double p = 7.0;
    double E_lo = 0.0;
    double E_hi = 1.0;
    double grid_step = 1e-3;
    std::vector<int> L_values;
    int L0 = 0;           ///< with scale_count: L_values from scale_sequence
    int scale_count = 0;
    double alpha = 1.5;
    MsaMode mode = MsaMode::MonteCarlo;
    int L = 8;
    double s = 1.0;
    int K_radius = 0;     ///< K = cube of this radius around the origin
    std::size_t vertex_limit = 20;
    friend bool operator==(const TaskBlock&, const TaskBlock&) = default;
};

struct RunBlock {
    std::uint64_t master_seed = 0;
    std::size_t realizations = 1;
    std::size_t workers = 1;
    std::string output = "out";
    friend bool operator==(const RunBlock&, const RunBlock&) = default;
};

struct ExperimentConfig {
    ModelBlock model;
    DisorderSpec disorder = DisorderSpec::bernoulli(0.0, 1.0, 0.5);
    InteractionSpec interaction;
    TaskBlock task;
    RunBlock run;

    /// Scales for the msa task: L_values, else scale_sequence(L0, count, alpha).
    std::vector<int> msa_scales() const;
    MsaParams msa_params() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct ConfigDiagnostic {
    int line = 0;  ///< 1-based; 0 when not tied to a line
    std::string key;
    std::string message;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<ConfigDiagnostic> diagnostics);
    const std::vector<ConfigDiagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<ConfigDiagnostic> diagnostics_;
};

/// Parses the flat `section.key = value` format ('#' starts a comment).
/// Collects every problem before throwing ConfigError.
ExperimentConfig parse_config(std::string_view text);

/// Canonical text form; parse_config(print_config(c)) == c.
std::string print_config(const ExperimentConfig& config);

/// Checks the preconditions of the modules `task` will call. Throws
/// ConfigError naming the offending keys.
void validate_config(const ExperimentConfig& config, TaskKind task);

}  // namespace anderson
