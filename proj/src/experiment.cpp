#include "geomorph/experiment.hpp"

#include "geomorph/errors.hpp"
#include "geomorph/parallel.hpp"

#include <array>

namespace geomorph {

namespace {

constexpr std::array<std::string_view, 5> kVariables{"h", "theta", "omega", "v1", "v2"};

template <class F>
auto in_stage(const std::string& stage, F&& fn) {
    try {
        return fn();
    } catch (const NumericalInstability& e) {
        throw e.in_context("stage '" + stage + "': ");
    }
}

void dump_state(ExperimentReport& report, const TSWState& state, const std::string& stage, int member,
                const std::string& suffix = "") {
    for (auto v : kVariables) report.fields.push_back({std::string(v) + suffix, stage, member, state_variable(state, v)});
}

TSWState ensemble_mean(const Ensemble& ens) {
    TSWState mean = ens.members.front();
    for (std::size_t i = 1; i < ens.size(); ++i) mean.axpy(1.0, ens.members[i]);
    const double w = 1.0 / static_cast<double>(ens.size());
    return map_fields(mean, [&](const ScalarField& f) { return f * w; });
}

void add_stage(ExperimentReport& report, const ExperimentConfig& config, const std::string& stage, const Ensemble& ens,
               const TSWState& truth) {
    for (auto v : kVariables) report.metrics.push_back(ensemble_mse(ens, truth, v, stage));
    for (std::size_t i = 0; i < ens.size(); ++i) {
        report.totals.push_back({stage, static_cast<int>(i), conserved_totals(ens.members[i])});
    }
    dump_state(report, ensemble_mean(ens), stage, -1, "_mean");
    if (config.dump_members) {
        for (std::size_t i = 0; i < ens.size(); ++i) dump_state(report, ens.members[i], stage, static_cast<int>(i));
    }
}

void add_traces(ExperimentReport& report, const std::vector<MorphTrace>& traces) {
    for (std::size_t i = 0; i < traces.size(); ++i) report.traces.push_back({"morph", static_cast<int>(i), traces[i]});
}

std::vector<ObservablePair> own_diagnostics(const TSWState& state) {
    return {{"h", DiffForm::density(state.h)}, {"omega", DiffForm::density(vorticity_of(state))}};
}

void morph_only(ExperimentReport& report, const ExperimentConfig& c, const TwinSetup& twin, int workers) {
    const auto truth_targets = observation_targets(twin.obs, c.fine);
    Ensemble morphed{std::vector<TSWState>(twin.prior.size()), twin.prior.rng_seed};
    std::vector<MorphTrace> traces(twin.prior.size());
    in_stage("morph", [&] {
        parallel_for(twin.prior.size(), workers, [&](std::size_t i) {
            const TSWState& m = twin.prior.members[i];
            const auto targets = c.morph_targets == MorphTargets::Self ? own_diagnostics(m) : truth_targets;
            try {
                auto r = run_morph(m, targets, c.morph, MorphMode::Tensor);
                morphed.members[i] = std::move(r.state);
                traces[i] = std::move(r.trace);
            } catch (const NumericalInstability& e) {
                throw e.in_context("member " + std::to_string(i) + ": ");
            }
        });
        return 0;
    });
    add_stage(report, c, "morphed", morphed, twin.truth);
    add_traces(report, traces);
}

// Both the truth and every member continue for nudging_steps model steps. The
// nudged members feel a Lie transport along the displacement toward the
// current truth's observations; the free members do not.
void nudging_run(ExperimentReport& report, const ExperimentConfig& c, const TwinSetup& twin, int workers) {
    const auto n = static_cast<std::size_t>(c.nudging_steps);
    std::vector<std::vector<ObservablePair>> targets(n);
    const TSWState truth_end = in_stage("nudging truth", [&] {
        TSWIntegrator integ(c.model);
        TSWState t = twin.truth;
        for (std::size_t k = 0; k < n; ++k) {
            targets[k] = observation_targets(observe(t, c.coarse), c.fine);
            t = integ.step(t);
        }
        return t;
    });

    const std::size_t ne = twin.prior.size();
    Ensemble free{std::vector<TSWState>(ne), twin.prior.rng_seed};
    Ensemble nudged = free;
    in_stage("nudging", [&] {
        parallel_for(ne, workers, [&](std::size_t i) {
            try {
                TSWIntegrator plain(c.model);
                free.members[i] = plain.run(twin.prior.members[i], c.nudging_steps);

                TSWIntegrator integ(c.model);
                std::size_t k = 0;
                integ.set_forcing([&](const TSWState& s) {
                    DisplacementField u = morph_velocity(s, targets[k], c.morph.solver);
                    u *= c.nudging_strength;
                    return nudged_tendency(s, c.model, u);
                });
                TSWState s = twin.prior.members[i];
                for (k = 0; k < n; ++k) s = integ.step(s);
                nudged.members[i] = std::move(s);
            } catch (const NumericalInstability& e) {
                throw e.in_context("member " + std::to_string(i) + ": ");
            }
        });
        return 0;
    });
    dump_state(report, truth_end, "truth-final", -1);
    add_stage(report, c, "free", free, truth_end);
    add_stage(report, c, "nudged", nudged, truth_end);
}

} // namespace

ScalarField state_variable(const TSWState& state, std::string_view variable) {
    if (variable == "h") return state.h;
    if (variable == "theta") return state.theta;
    if (variable == "omega") return vorticity_of(state);
    if (variable == "v1") return state.v1;
    if (variable == "v2") return state.v2;
    throw InvalidInput("state_variable: unknown variable '" + std::string(variable) + "'");
}

MetricRow ensemble_mse(const Ensemble& ensemble, const TSWState& truth, std::string_view variable, std::string stage) {
    ensemble.validate();
    const ScalarField target = state_variable(truth, variable);
    ScalarField mean(target.grid());
    double sum = 0.0;
    for (const auto& m : ensemble.members) {
        const ScalarField f = state_variable(m, variable);
        sum += field_mse(f, target);
        mean += f;
    }
    const double ne = static_cast<double>(ensemble.size());
    mean *= 1.0 / ne;
    return {std::move(stage), std::string(variable), sum / ne, field_mse(mean, target)};
}

TwinSetup prepare_twin(const ExperimentConfig& c) {
    c.validate();
    const int workers = resolve_workers(c.workers);
    TwinSetup twin;
    twin.truth = in_stage("truth", [&] {
        TSWIntegrator integ(c.model);
        return integ.run(double_vortex_ic(c.truth_vortex, c.fine, c.model), c.truth_steps);
    });
    twin.obs = observe(twin.truth, c.coarse);
    const Ensemble spun = in_stage("spin-up", [&] {
        return generate_ensemble(c.truth_vortex, c.fine, c.ensemble_size, c.ensemble_seed, c.spinup_steps, c.model,
                                 c.perturbation, workers);
    });
    twin.prior = project_ensemble(spun, c.coarse);
    return twin;
}

ExperimentReport run_pipeline(const ExperimentConfig& c, const TwinSetup& twin) {
    c.validate();
    const int workers = resolve_workers(c.workers);
    ExperimentReport report;
    report.name = c.name;
    report.pipeline = std::string(to_string(c.pipeline));
    report.config_json = config_to_json(c, false);

    dump_state(report, twin.truth, "truth", -1);
    report.fields.push_back({"h", "observation", -1, twin.obs.h_obs});
    report.fields.push_back({"omega", "observation", -1, twin.obs.omega_obs});
    add_stage(report, c, "prior", twin.prior, twin.truth);

    const EnKFOptions options{c.r_scale};
    switch (c.pipeline) {
    case Pipeline::PlainEnKF: {
        const auto post = in_stage("analysis", [&] { return enkf_analysis(twin.prior, twin.obs, c.obs_noise_seed, options); });
        add_stage(report, c, "posterior", post, twin.truth);
        break;
    }
    case Pipeline::MorphedEnKF:
    case Pipeline::NaiveMorphedEnKF: {
        const MorphMode mode = c.pipeline == Pipeline::MorphedEnKF ? MorphMode::Tensor : MorphMode::Naive;
        const auto r = in_stage("morph", [&] {
            return morphed_enkf(twin.prior, twin.obs, c.morph, mode, c.obs_noise_seed, options, workers);
        });
        add_stage(report, c, "morphed", r.morphed, twin.truth);
        add_stage(report, c, "posterior", r.analysis, twin.truth);
        add_traces(report, r.traces);
        break;
    }
    case Pipeline::MorphOnly: morph_only(report, c, twin, workers); break;
    case Pipeline::NudgingRun: nudging_run(report, c, twin, workers); break;
    }
    return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    return run_pipeline(config, prepare_twin(config));
}

} // namespace geomorph
