#pragma once

// Twin-experiment data assimilation: observation extraction, ensemble
// generation, a stochastic perturbed-observation EnKF, and the morphed EnKF
// (align every member to the observations, then run the EnKF).

#include "geomorph/morph.hpp"
#include "geomorph/tsw.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace geomorph {

/// Perfect observations of vorticity and height on the coarse grid, plus the
/// diagonal observation-error variances the filter assumes for them.
struct ObsSet {
    GridSpec grid;
    ScalarField omega_obs;
    ScalarField h_obs;
    double r_omega = 0.0;
    double r_h = 0.0;

    void validate() const;
};

/// 0.01 times the mean square of the observed values.
double observation_variance(const ScalarField& obs);

/// Coarsens h and the vorticity of `truth` onto `coarse` and sets R from them.
ObsSet observe(const TSWState& truth, const GridSpec& coarse);

struct Ensemble {
    std::vector<TSWState> members;
    std::uint64_t rng_seed = 0;

    std::size_t size() const { return members.size(); }
    const GridSpec& grid() const { return members.front().grid(); }
    /// At least two members on one grid, all finite.
    void validate() const;
};

/// Normal distributions of the vortex-centre offsets. Variances, not
/// standard deviations.
struct OffsetDistribution {
    double ox_mean = 0.1;
    double oy_mean = 0.1;
    double ox_var = 0.01;
    double oy_var = 0.01;
};

struct VortexOffset {
    double ox = 0.0;
    double oy = 0.0;
};

/// ne draws of (ox, oy) from a 64-bit Mersenne Twister seeded with `seed`,
/// ox then oy for each member in turn.
std::vector<VortexOffset> draw_vortex_offsets(const OffsetDistribution& dist, std::size_t ne, std::uint64_t seed);

/// Builds ne perturbed double-vortex initial conditions and integrates each
/// for spinup_steps model steps. Member integrations run on up to `workers`
/// threads; an instability aborts with the member index in the message.
Ensemble generate_ensemble(const VortexIC& base_ic, const GridSpec& grid, std::size_t ne, std::uint64_t seed,
                           long spinup_steps, const ModelParams& params, const OffsetDistribution& dist = {},
                           int workers = 1);

/// Every prognostic field of every member projected onto the modes the
/// coarse grid resolves (coarsen, then refine back).
Ensemble project_ensemble(const Ensemble& ensemble, const GridSpec& coarse);

/// Coarse-grid augmented state (h, Theta, v1, v2, omega), each block in
/// grid order. The observation operator selects the (omega, h) blocks.
Eigen::VectorXd coarse_state_vector(const TSWState& state, const GridSpec& coarse);

/// (omega_obs, h_obs) in the observation-operator order.
Eigen::VectorXd observation_vector(const ObsSet& obs);

/// Diagonal of R in the same order: r_omega then r_h.
Eigen::VectorXd observation_variances(const ObsSet& obs);

/// Perturbed-observation EnKF update of column states xf (n x Ne) given
/// their predicted observations hxf (m x Ne), observations y, diagonal R and
/// one perturbation column per member. The gain is applied in ensemble
/// space through the Woodbury identity, so no n x n or m x m matrix is
/// formed. Returns the analysed states.
Eigen::MatrixXd perturbed_obs_analysis(const Eigen::MatrixXd& xf, const Eigen::MatrixXd& hxf, const Eigen::VectorXd& y,
                                       const Eigen::VectorXd& r_diag, const Eigen::MatrixXd& perturbations);

struct EnKFOptions {
    /// Multiplies the R used in the gain. The observation perturbations keep
    /// the nominal R, so very large values force the zero-gain limit.
    double r_scale = 1.0;
};

/// Stochastic EnKF on the observation grid. Perturbations are drawn from
/// N(0, R) with `obs_noise_seed`; increments of (h, Theta, v1, v2) are
/// refined spectrally to the member grid and added to each member.
Ensemble enkf_analysis(const Ensemble& ensemble, const ObsSet& obs, std::uint64_t obs_noise_seed,
                       const EnKFOptions& options = {});

/// Observations refined to `fine` as 2-form targets named "h" and "omega".
std::vector<ObservablePair> observation_targets(const ObsSet& obs, const GridSpec& fine);

struct MorphedEnKFResult {
    Ensemble morphed;
    Ensemble analysis;
    std::vector<MorphTrace> traces;
};

/// Morphs every member toward the observations (in parallel), then runs one
/// enkf_analysis on the morphed ensemble.
MorphedEnKFResult morphed_enkf(const Ensemble& ensemble, const ObsSet& obs, const MorphParams& params, MorphMode mode,
                               std::uint64_t obs_noise_seed, const EnKFOptions& options = {}, int workers = 1);

} // namespace geomorph
