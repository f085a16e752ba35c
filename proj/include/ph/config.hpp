#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "ph/limits.hpp"
#include "ph/samplers.hpp"

namespace ph {

inline constexpr const char* kCodeVersion = "0.1.0";
inline constexpr const char* kSummarySchema = "ph.summary/1";

enum class ExperimentMode {
    estimate,        // estimate_limit over the n_grid
    compare_iid,     // process vs kappa-matched binomial at the largest n
    slln,            // single-path trajectory
    vague,           // rectangle-wise Cauchy check
    geometric_lemma, // randomized Lemma assertion
    concentration,   // empirical tails vs exponential bound
};

const char* experiment_mode_name(ExperimentMode mode);

struct ExperimentConfig {
    ProcessSpec process;
    ComplexSpec complex;
    RectangleGrid queries;
    std::vector<size_t> n_grid;
    size_t replications = 10;
    uint64_t master_seed = 1;
    size_t workers = 1;
    size_t max_simplices = 5'000'000;
    ExperimentMode mode = ExperimentMode::estimate;
    bool flags_are_fatal = true;
    // Sub/supercritical regimes are exploratory; limit comparisons assume
    // the critical default.
    std::optional<ScalingRegime> regime;

    // sample command
    size_t n = 0;

    // geometric_lemma mode
    size_t trials = 500;
    size_t n_max = 12;

    // concentration mode
    ConcentrationParams concentration;
    Rectangle concentration_query;
    size_t concentration_n = 500;
};

// Parses and eagerly validates; throws config_error with a dotted field path.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path, uint64_t* config_hash = nullptr);

ProcessSpec parse_process(const nlohmann::json& j, const std::string& field);
BlockedDensity parse_blocked_density(const nlohmann::json& j, const std::string& field);

// FNV-1a over the raw config bytes; recorded in output manifests.
uint64_t fnv1a64(std::string_view bytes);

} // namespace ph
