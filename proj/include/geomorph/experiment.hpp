#pragma once

// End-to-end twin experiment: truth run, observation, ensemble spin-up, the
// selected pipeline, and the report that emit_outputs turns into files.

#include "geomorph/assimilation.hpp"
#include "geomorph/config.hpp"
#include "geomorph/output.hpp"

#include <string_view>

namespace geomorph {

/// Everything the pipelines share: the truth at analysis time, its coarse
/// observations and the prior ensemble projected onto the coarse-resolved modes.
struct TwinSetup {
    TSWState truth;
    ObsSet obs;
    Ensemble prior;
};

/// Runs the truth and the ensemble spin-up. Instabilities are rethrown with
/// the stage (and member) prepended.
TwinSetup prepare_twin(const ExperimentConfig& config);

/// Runs config.pipeline on a prepared twin and collects the report.
ExperimentReport run_pipeline(const ExperimentConfig& config, const TwinSetup& twin);

/// Validates the config, then prepare_twin followed by run_pipeline.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// "h", "theta", "omega", "v1" or "v2" of a state.
ScalarField state_variable(const TSWState& state, std::string_view variable);

/// Mean of the members' MSEs against `truth`, and the MSE of the ensemble mean.
MetricRow ensemble_mse(const Ensemble& ensemble, const TSWState& truth, std::string_view variable, std::string stage);

} // namespace geomorph
