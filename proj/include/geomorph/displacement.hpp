#pragma once

// Displacement vector fields between two same-type tensor fields on the
// boundary-free periodic domain.
//
// The closed-form solvers minimise
//   int 2 W <theta1 - theta2, L_u theta2> + a1(|du♭|^2 + |δu♭|^2) + a0 |u♭|^2
// whose Euler-Lagrange equation is (a0 - a1 Δ) u = -W-weighted adjoint of
// L_(.) theta2 applied to the residual. The global positive factor in front
// of the solution is `prefactor` (2 by default, the value used for the
// thermal shallow water observables); it is erased by H1 normalisation in
// combine_displacements.

#include "geomorph/forms.hpp"

#include <optional>
#include <span>
#include <vector>

namespace geomorph {

struct SolverParams {
    double a0 = 1.0;
    double a1 = 1.0;
    /// Localised-observation weight W in [0, 1]; absent means W == 1.
    std::optional<ScalarField> weight;
    double prefactor = 2.0;
    double cg_tol = 1e-10;
    int cg_max_iter = 2000;

    void validate(const GridSpec& grid) const;
};

/// u = -prefactor (a0 - a1 Δ)^{-1} [W (theta1 - theta2) grad theta2].
DisplacementField displacement_from_0forms(const DiffForm& theta1, const DiffForm& theta2, const SolverParams& params);

/// u = prefactor (a0 - a1 Δ)^{-1} [theta2 grad(W (theta1 - theta2))].
/// With W == 1 and the default weights this is 2 (I - Δ)^{-1}[theta2 grad(theta1 - theta2)].
DisplacementField displacement_from_2forms(const DiffForm& theta1, const DiffForm& theta2, const SolverParams& params);

/// Mean of H1-normalised inputs. Inputs with norm below tol_norm contribute
/// nothing and are not counted; all-degenerate input gives the zero field.
/// tol_norm defaults to 1e-14 times the domain area.
DisplacementField combine_displacements(std::span<const DisplacementField> fields,
                                        std::optional<double> tol_norm = std::nullopt);

/// Adjoint of u -> L_u theta under the domain inner product: returns the
/// vector field w with <L_u theta, phi> = <u, w> for every u.
DisplacementField lie_adjoint(const DiffForm& theta, const DiffForm& phi);

struct OpticalFlowResult {
    DisplacementField u;
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
    /// Objective value at the start and after every CG iteration.
    std::vector<double> objective;
};

/// Objective of the generalised optical flow,
///   |theta_t - L_u theta|^2 + a0 |u|^2 + a1 (|du♭|^2 + |δu♭|^2),
/// with the regulariser evaluated spectrally as <u, (a0 - a1 Δ) u>.
double optical_flow_objective(const DiffForm& theta, const DiffForm& theta_t, const DisplacementField& u,
                              const SolverParams& params);

/// Minimises optical_flow_objective by conjugate gradients on the normal
/// equations L*L u + (a0 - a1 Δ) u = L* theta_t. Non-convergence is reported
/// through the result, not thrown.
OpticalFlowResult generalized_optical_flow(const DiffForm& theta, const DiffForm& theta_t, const SolverParams& params);

} // namespace geomorph
