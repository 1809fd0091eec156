#pragma once

// Experiment configuration: a versioned JSON schema, built-in presets and
// exhaustive validation.

#include "geomorph/assimilation.hpp"
#include "geomorph/morph.hpp"
#include "geomorph/tsw.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace geomorph {

inline constexpr int kConfigSchemaVersion = 1;

enum class Pipeline { PlainEnKF, MorphedEnKF, NaiveMorphedEnKF, MorphOnly, NudgingRun };

std::string_view to_string(Pipeline p);

/// Where morph-only takes its targets from: coarse observations of the truth,
/// or each member's own diagnostics (a fixed-point check).
enum class MorphTargets { Truth, Self };

/// Every problem found in a config, collected before any computation.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

struct ExperimentConfig {
    std::string name = "custom";
    Pipeline pipeline = Pipeline::MorphedEnKF;

    GridSpec fine{64, 64, 5000.0, 5000.0};
    GridSpec coarse{16, 16, 5000.0, 5000.0};
    ModelParams model;
    VortexIC truth_vortex;
    OffsetDistribution perturbation;

    /// Model steps; "time" in the JSON is converted with model.dt.
    long truth_steps = 2750;
    long spinup_steps = 2000;

    std::size_t ensemble_size = 8;
    std::uint64_t ensemble_seed = 42;
    std::uint64_t obs_noise_seed = 7;
    double r_scale = 1.0;

    MorphParams morph;
    MorphTargets morph_targets = MorphTargets::Truth;

    long nudging_steps = 100;
    /// Multiplies the unit-norm displacement field in the nudged tendency.
    double nudging_strength = 3000.0;

    /// 0 means one per hardware thread (still capped by GEOMORPH_MAX_THREADS).
    int workers = 0;
    std::string output_dir = "out";
    bool dump_members = true;

    /// Throws ConfigError listing every violated invariant.
    void validate() const;
};

/// Parses a JSON document. An optional "preset" key selects the base values;
/// every other key overrides them. Unknown keys, wrong types and invariant
/// violations are all reported together in one ConfigError.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::string& path);

/// Canonical JSON form (sorted keys, steps rather than times). Leaving out
/// the output directory makes the text depend only on the experiment itself.
std::string config_to_json(const ExperimentConfig& config, bool with_output_dir = true);

struct PresetInfo {
    std::string name;
    std::string description;
};

std::vector<PresetInfo> preset_list();
/// Throws ConfigError for an unknown name.
ExperimentConfig preset(const std::string& name);

/// Applies a command-line seed: ensemble_seed = seed, obs_noise_seed = seed + 1.
void apply_seed(ExperimentConfig& config, std::uint64_t seed);

} // namespace geomorph
