#pragma once

// Thermal shallow water model on the doubly-periodic grid:
//
//   dh/dt     + div(h v)       = 0
//   dTheta/dt + v . grad Theta = -kappa (h Theta - h0 Theta0)
//   dv/dt     + (v . grad) v + f z x v = -grad(h Theta) + h grad(Theta) / 2
//
// Units are km and 100 s. Spatial derivatives are pseudo-spectral; time
// stepping is AB3 (AB1/AB2 bootstrap) with a Hou-Li filter after each step.

#include "geomorph/adams_bashforth.hpp"
#include "geomorph/forms.hpp"
#include "geomorph/scalar_field.hpp"
#include "geomorph/vector_field.hpp"

#include <functional>
#include <span>

namespace geomorph {

/// Prognostic fields. Also used for tendencies and increments, where the
/// positivity invariant does not apply.
struct TSWState {
    ScalarField h;
    ScalarField theta;
    ScalarField v1;
    ScalarField v2;
    double time = 0.0;

    TSWState() = default;
    explicit TSWState(const GridSpec& grid) : h(grid), theta(grid), v1(grid), v2(grid) {}
    TSWState(ScalarField h_, ScalarField theta_, ScalarField v1_, ScalarField v2_, double time_ = 0.0);

    const GridSpec& grid() const { return h.grid(); }
    DisplacementField velocity() const { return {v1, v2}; }
    bool all_finite() const;

    /// Adds s * other to every field; time is left alone.
    TSWState& axpy(double s, const TSWState& other);

    friend bool operator==(const TSWState&, const TSWState&) = default;
};

/// Throws InvalidInput unless every field is finite and h, Theta > 0.
void require_physical(const TSWState& state, const char* context);

/// Applies fn to each of the four fields in the order h, theta, v1, v2.
TSWState map_fields(const TSWState& state, const std::function<ScalarField(const ScalarField&)>& fn);

struct ModelParams {
    double f = 6.147e-3;
    double kappa = 1e-5;
    double h0 = 0.75;
    double theta0 = 98.0616;
    double dt = 1.0;
    int filter_a = 12;
    bool filter = true;

    void validate() const;
};

/// (dh/dt, dTheta/dt, dv1/dt, dv2/dt); the returned time field is 0.
TSWState tendency(const TSWState& state, const ModelParams& params);

/// Transport of the state along u with the physical tensor assignment:
/// h dx^dy as a 2-form, Theta as a 0-form, v1 dx1 + v2 dx2 as a 1-form.
TSWState lie_transport(const TSWState& state, const DisplacementField& u);

/// Same fields all treated as 0-forms: u . grad of each.
TSWState naive_transport(const TSWState& state, const DisplacementField& u);

/// tendency(state) - lie_transport(state, u): the model plus a nudging term
/// that drags every field along u, in the direction of the morph update.
TSWState nudged_tendency(const TSWState& state, const ModelParams& params, const DisplacementField& u);

/// One Adams-Bashforth step of size params.dt using `history` (newest first,
/// 1 to 3 entries) followed by the Hou-Li filter when enabled.
TSWState ab3_step(const TSWState& state, std::span<const TSWState> history, const ModelParams& params);

struct StepReport {
    long step = 0;
    double time = 0.0;
    double min_h = 0.0;
    double min_theta = 0.0;
};

/// AB3 integrator that owns its tendency history.
class TSWIntegrator {
public:
    using Forcing = std::function<TSWState(const TSWState&)>;

    explicit TSWIntegrator(ModelParams params);

    /// Replaces the model tendency, e.g. with a nudged one.
    void set_forcing(Forcing forcing) { forcing_ = std::move(forcing); }

    /// Advances one step. Throws NumericalInstability (with the running step
    /// count) on non-finite or non-positive h, Theta.
    TSWState step(const TSWState& state);

    /// Runs `steps` steps, calling `observer` after each one if given.
    TSWState run(TSWState state, long steps, const std::function<void(const StepReport&)>& observer = {});

    long steps_taken() const { return steps_; }
    const ModelParams& params() const { return params_; }
    void reset();

private:
    ModelParams params_;
    Forcing forcing_;
    TendencyHistory<TSWState> history_;
    long steps_ = 0;
};

/// Domain diagnostics.
ScalarField vorticity_of(const TSWState& state);

/// Double-vortex stand-in initial condition. Two periodic sine-Gaussian
/// bumps B_k = exp(-(X_k^2 + Y_k^2)/2), X_k = lx/(pi r) sin(pi (x - xc_k)/lx),
/// centred at the domain centre -/+ ((ox + separation/2) lx, (oy + separation/2) ly):
///   h     = h0 + amplitude (B_1 + B_2)
///   Theta = Theta0 (1 + theta_amplitude (B_1 + B_2))
///   v     = (Theta0 / f) (-dh/dy, dh/dx)   (geostrophic balance)
struct VortexIC {
    double ox = 0.1;
    double oy = 0.1;
    double amplitude = -0.075;
    double radius = 375.0;
    double separation = 0.0;
    double theta_amplitude = 0.05;

    void validate() const;
};

TSWState double_vortex_ic(const VortexIC& ic, const GridSpec& grid, const ModelParams& params);

/// Closed-form integral of one periodic sine-Gaussian bump over the domain.
double vortex_bump_integral(const VortexIC& ic, const GridSpec& grid);

} // namespace geomorph
