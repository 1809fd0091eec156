#include "geomorph/assimilation.hpp"

#include "geomorph/errors.hpp"
#include "geomorph/parallel.hpp"
#include "geomorph/spectral.hpp"

#include <cmath>
#include <random>

namespace geomorph {

namespace sp = spectral;
using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void ObsSet::validate() const {
    require_same_grid(omega_obs.grid(), grid, "ObsSet omega");
    require_same_grid(h_obs.grid(), grid, "ObsSet h");
    require_finite(omega_obs, "ObsSet omega");
    require_finite(h_obs, "ObsSet h");
    if (!(r_omega >= 0.0) || !(r_h >= 0.0)) throw InvalidInput("ObsSet: variances must be non-negative");
}

double observation_variance(const ScalarField& obs) {
    double sum = 0.0;
    for (double v : obs.values()) sum += v * v;
    return 0.01 * sum / static_cast<double>(obs.size());
}

ObsSet observe(const TSWState& truth, const GridSpec& coarse) {
    require_physical(truth, "observe");
    ObsSet obs;
    obs.grid = coarse;
    obs.h_obs = sp::coarsen(truth.h, coarse);
    obs.omega_obs = sp::coarsen(vorticity_of(truth), coarse);
    obs.r_omega = observation_variance(obs.omega_obs);
    obs.r_h = observation_variance(obs.h_obs);
    return obs;
}

void Ensemble::validate() const {
    if (members.size() < 2) throw InvalidInput("Ensemble: at least two members are required");
    for (const auto& m : members) {
        require_same_grid(m.grid(), grid(), "Ensemble member");
        if (!m.all_finite()) throw InvalidInput("Ensemble: non-finite member");
    }
}

std::vector<VortexOffset> draw_vortex_offsets(const OffsetDistribution& dist, std::size_t ne, std::uint64_t seed) {
    if (!(dist.ox_var >= 0.0) || !(dist.oy_var >= 0.0)) throw InvalidInput("OffsetDistribution: negative variance");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<VortexOffset> out(ne);
    for (auto& o : out) {
        o.ox = dist.ox_mean + std::sqrt(dist.ox_var) * normal(rng);
        o.oy = dist.oy_mean + std::sqrt(dist.oy_var) * normal(rng);
    }
    return out;
}

Ensemble generate_ensemble(const VortexIC& base_ic, const GridSpec& grid, std::size_t ne, std::uint64_t seed,
                           long spinup_steps, const ModelParams& params, const OffsetDistribution& dist, int workers) {
    if (ne < 2) throw InvalidInput("generate_ensemble: ne must be at least 2");
    if (spinup_steps < 0) throw InvalidInput("generate_ensemble: spin-up must be non-negative");
    const auto offsets = draw_vortex_offsets(dist, ne, seed);
    Ensemble ens;
    ens.rng_seed = seed;
    ens.members.resize(ne);
    parallel_for(ne, workers, [&](std::size_t i) {
        VortexIC ic = base_ic;
        ic.ox = offsets[i].ox;
        ic.oy = offsets[i].oy;
        try {
            TSWIntegrator integ(params);
            ens.members[i] = integ.run(double_vortex_ic(ic, grid, params), spinup_steps);
        } catch (const NumericalInstability& e) {
            throw e.in_context("ensemble member " + std::to_string(i) + ": ");
        } catch (const InvalidInput& e) {
            throw InvalidInput("ensemble member " + std::to_string(i) + ": " + e.what());
        }
    });
    return ens;
}

Ensemble project_ensemble(const Ensemble& ensemble, const GridSpec& coarse) {
    Ensemble out{{}, ensemble.rng_seed};
    out.members.reserve(ensemble.size());
    for (const auto& m : ensemble.members) {
        out.members.push_back(map_fields(m, [&](const ScalarField& f) { return sp::low_pass(f, coarse); }));
    }
    return out;
}

namespace {

void append(VectorXd& v, Index& pos, const ScalarField& f) {
    for (double x : f.values()) v(pos++) = x;
}

ScalarField block(const VectorXd& v, Index start, const GridSpec& grid) {
    ScalarField f(grid);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = v(start + static_cast<Index>(k));
    return f;
}

} // namespace

VectorXd coarse_state_vector(const TSWState& state, const GridSpec& coarse) {
    const auto n = static_cast<Index>(coarse.size());
    VectorXd v(5 * n);
    Index pos = 0;
    append(v, pos, sp::coarsen(state.h, coarse));
    append(v, pos, sp::coarsen(state.theta, coarse));
    append(v, pos, sp::coarsen(state.v1, coarse));
    append(v, pos, sp::coarsen(state.v2, coarse));
    append(v, pos, sp::coarsen(vorticity_of(state), coarse));
    return v;
}

VectorXd observation_vector(const ObsSet& obs) {
    VectorXd y(2 * static_cast<Index>(obs.grid.size()));
    Index pos = 0;
    append(y, pos, obs.omega_obs);
    append(y, pos, obs.h_obs);
    return y;
}

VectorXd observation_variances(const ObsSet& obs) {
    const auto n = static_cast<Index>(obs.grid.size());
    VectorXd r(2 * n);
    r.head(n).setConstant(obs.r_omega);
    r.tail(n).setConstant(obs.r_h);
    return r;
}

MatrixXd perturbed_obs_analysis(const MatrixXd& xf, const MatrixXd& hxf, const VectorXd& y, const VectorXd& r_diag,
                                const MatrixXd& perturbations) {
    const Index ne = xf.cols();
    const Index m = y.size();
    if (ne < 2) throw InvalidInput("perturbed_obs_analysis: at least two members are required");
    if (hxf.cols() != ne || hxf.rows() != m || r_diag.size() != m || perturbations.rows() != m ||
        perturbations.cols() != ne) {
        throw InvalidInput("perturbed_obs_analysis: inconsistent dimensions");
    }
    if (!(r_diag.minCoeff() > 0.0)) throw InvalidInput("perturbed_obs_analysis: R must be positive definite");

    const double norm = 1.0 / std::sqrt(static_cast<double>(ne - 1));
    const MatrixXd xa_anom = (xf.colwise() - xf.rowwise().mean()) * norm;
    const MatrixXd ya = (hxf.colwise() - hxf.rowwise().mean()) * norm;

    // Innovations against perturbed observations.
    const MatrixXd d = (perturbations.colwise() + y) - hxf;

    // (Y Y^T + R)^{-1} D = R^{-1} D - R^{-1} Y (I + Y^T R^{-1} Y)^{-1} Y^T R^{-1} D
    const VectorXd r_inv = r_diag.cwiseInverse();
    const MatrixXd rinv_d = r_inv.asDiagonal() * d;
    const MatrixXd rinv_y = r_inv.asDiagonal() * ya;
    const MatrixXd small = MatrixXd::Identity(ne, ne) + ya.transpose() * rinv_y;
    const MatrixXd sinv_d = rinv_d - rinv_y * small.ldlt().solve(ya.transpose() * rinv_d);

    return xf + xa_anom * (ya.transpose() * sinv_d);
}

Ensemble enkf_analysis(const Ensemble& ensemble, const ObsSet& obs, std::uint64_t obs_noise_seed,
                       const EnKFOptions& options) {
    ensemble.validate();
    obs.validate();
    if (!(obs.r_h > 0.0) || !(obs.r_omega > 0.0)) {
        throw InvalidInput("enkf_analysis: identically zero observations give a singular R");
    }
    if (!(options.r_scale > 0.0) || !std::isfinite(options.r_scale)) {
        throw InvalidInput("enkf_analysis: r_scale must be positive");
    }
    const GridSpec& coarse = obs.grid;
    const GridSpec& fine = ensemble.grid();
    const auto nc = static_cast<Index>(coarse.size());
    const auto ne = static_cast<Index>(ensemble.size());

    MatrixXd xf(5 * nc, ne);
    for (Index i = 0; i < ne; ++i) xf.col(i) = coarse_state_vector(ensemble.members[static_cast<std::size_t>(i)], coarse);
    // Observation operator: the omega block (last) then the h block (first).
    MatrixXd hxf(2 * nc, ne);
    hxf.topRows(nc) = xf.bottomRows(nc);
    hxf.bottomRows(nc) = xf.topRows(nc);

    const VectorXd r = observation_variances(obs);
    std::mt19937_64 rng(obs_noise_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    MatrixXd pert(2 * nc, ne);
    for (Index i = 0; i < ne; ++i) {
        for (Index k = 0; k < 2 * nc; ++k) pert(k, i) = std::sqrt(r(k)) * normal(rng);
    }

    const MatrixXd xa = perturbed_obs_analysis(xf, hxf, observation_vector(obs), r * options.r_scale, pert);

    Ensemble out{ensemble.members, ensemble.rng_seed};
    for (Index i = 0; i < ne; ++i) {
        const VectorXd inc = xa.col(i) - xf.col(i);
        TSWState& m = out.members[static_cast<std::size_t>(i)];
        m.h += sp::refine(block(inc, 0, coarse), fine);
        m.theta += sp::refine(block(inc, nc, coarse), fine);
        m.v1 += sp::refine(block(inc, 2 * nc, coarse), fine);
        m.v2 += sp::refine(block(inc, 3 * nc, coarse), fine);
    }
    return out;
}

std::vector<ObservablePair> observation_targets(const ObsSet& obs, const GridSpec& fine) {
    return {{"h", DiffForm::density(sp::refine(obs.h_obs, fine))},
            {"omega", DiffForm::density(sp::refine(obs.omega_obs, fine))}};
}

MorphedEnKFResult morphed_enkf(const Ensemble& ensemble, const ObsSet& obs, const MorphParams& params, MorphMode mode,
                               std::uint64_t obs_noise_seed, const EnKFOptions& options, int workers) {
    ensemble.validate();
    params.validate();
    const auto targets = observation_targets(obs, ensemble.grid());
    MorphedEnKFResult result;
    result.morphed = Ensemble{std::vector<TSWState>(ensemble.size()), ensemble.rng_seed};
    result.traces.resize(ensemble.size());
    parallel_for(ensemble.size(), workers, [&](std::size_t i) {
        try {
            auto r = run_morph(ensemble.members[i], targets, params, mode);
            result.morphed.members[i] = std::move(r.state);
            result.traces[i] = std::move(r.trace);
        } catch (const NumericalInstability& e) {
            throw e.in_context("morphing member " + std::to_string(i) + ": ");
        }
    });
    result.analysis = enkf_analysis(result.morphed, obs, obs_noise_seed, options);
    return result;
}

} // namespace geomorph
