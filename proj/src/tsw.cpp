#include "geomorph/tsw.hpp"

#include "geomorph/errors.hpp"
#include "geomorph/spectral.hpp"

#include <cmath>
#include <numbers>

namespace geomorph {

namespace sp = spectral;

TSWState::TSWState(ScalarField h_, ScalarField theta_, ScalarField v1_, ScalarField v2_, double time_)
    : h(std::move(h_)), theta(std::move(theta_)), v1(std::move(v1_)), v2(std::move(v2_)), time(time_) {
    require_same_grid(h.grid(), theta.grid(), "TSWState");
    require_same_grid(h.grid(), v1.grid(), "TSWState");
    require_same_grid(h.grid(), v2.grid(), "TSWState");
}

bool TSWState::all_finite() const {
    return h.all_finite() && theta.all_finite() && v1.all_finite() && v2.all_finite();
}

TSWState& TSWState::axpy(double s, const TSWState& other) {
    h.axpy(s, other.h);
    theta.axpy(s, other.theta);
    v1.axpy(s, other.v1);
    v2.axpy(s, other.v2);
    return *this;
}

void require_physical(const TSWState& state, const char* context) {
    if (!state.all_finite()) throw InvalidInput(std::string(context) + ": non-finite state");
    if (!(state.h.min() > 0.0)) throw InvalidInput(std::string(context) + ": h must be strictly positive");
    if (!(state.theta.min() > 0.0)) throw InvalidInput(std::string(context) + ": Theta must be strictly positive");
}

TSWState map_fields(const TSWState& state, const std::function<ScalarField(const ScalarField&)>& fn) {
    return {fn(state.h), fn(state.theta), fn(state.v1), fn(state.v2), state.time};
}

void ModelParams::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("ModelParams: dt must be positive");
    if (!(h0 > 0.0)) throw InvalidInput("ModelParams: h0 must be positive");
    if (!(theta0 > 0.0)) throw InvalidInput("ModelParams: theta0 must be positive");
    if (!std::isfinite(f) || !std::isfinite(kappa)) throw InvalidInput("ModelParams: f and kappa must be finite");
    if (!(kappa >= 0.0)) throw InvalidInput("ModelParams: kappa must be non-negative");
    if (filter && filter_a <= 0) throw InvalidInput("ModelParams: filter exponent must be positive");
}

TSWState tendency(const TSWState& state, const ModelParams& params) {
    require_physical(state, "tendency");
    const auto& [h, theta, v1, v2, time] = state;
    (void)time;

    const ScalarField dh = -sp::divergence({multiply(h, v1), multiply(h, v2)});

    const auto gtheta = sp::gradient(theta);
    ScalarField h_theta = multiply(h, theta);
    ScalarField dtheta = -(multiply(v1, gtheta.u1) + multiply(v2, gtheta.u2));
    ScalarField relax = h_theta;
    relax += -params.h0 * params.theta0;
    dtheta.axpy(-params.kappa, relax);

    const auto gv1 = sp::gradient(v1);
    const auto gv2 = sp::gradient(v2);
    const auto gp = sp::gradient(h_theta);
    ScalarField dv1 = -(multiply(v1, gv1.u1) + multiply(v2, gv1.u2)) - gp.u1 + 0.5 * multiply(h, gtheta.u1);
    ScalarField dv2 = -(multiply(v1, gv2.u1) + multiply(v2, gv2.u2)) - gp.u2 + 0.5 * multiply(h, gtheta.u2);
    dv1.axpy(params.f, v2);
    dv2.axpy(-params.f, v1);

    return {dh, std::move(dtheta), std::move(dv1), std::move(dv2), 0.0};
}

TSWState lie_transport(const TSWState& state, const DisplacementField& u) {
    require_same_grid(state.grid(), u.grid(), "lie_transport");
    const DiffForm lh = lie_derivative(DiffForm::density(state.h), u);
    const DiffForm lt = lie_derivative(DiffForm::function(state.theta), u);
    const DiffForm lv = lie_derivative(DiffForm::one_form(state.v1, state.v2), u);
    return {lh.scalar(), lt.scalar(), lv.component(0), lv.component(1), 0.0};
}

TSWState naive_transport(const TSWState& state, const DisplacementField& u) {
    require_same_grid(state.grid(), u.grid(), "naive_transport");
    return map_fields(state, [&](const ScalarField& f) {
        const auto g = sp::gradient(f);
        return multiply(u.u1, g.u1) + multiply(u.u2, g.u2);
    });
}

TSWState nudged_tendency(const TSWState& state, const ModelParams& params, const DisplacementField& u) {
    TSWState out = tendency(state, params);
    out.axpy(-1.0, lie_transport(state, u));
    return out;
}

TSWState ab3_step(const TSWState& state, std::span<const TSWState> history, const ModelParams& params) {
    if (history.empty() || history.size() > 3) throw InvalidInput("ab3_step: history must hold 1 to 3 tendencies");
    const auto weights = adams_bashforth_weights(static_cast<int>(history.size()));
    TSWState next = state;
    for (std::size_t k = 0; k < history.size(); ++k) next.axpy(params.dt * weights[k], history[k]);
    if (params.filter) {
        next = map_fields(next, [&](const ScalarField& f) { return sp::hou_li_filter(f, params.filter_a); });
    }
    next.time = state.time + params.dt;
    return next;
}

TSWIntegrator::TSWIntegrator(ModelParams params) : params_(params), history_(3) {
    params_.validate();
    forcing_ = [p = params_](const TSWState& s) { return tendency(s, p); };
}

void TSWIntegrator::reset() {
    history_.clear();
    steps_ = 0;
}

TSWState TSWIntegrator::step(const TSWState& state) {
    history_.push(forcing_(state));
    std::vector<TSWState> hist;
    hist.reserve(static_cast<std::size_t>(history_.order()));
    for (int k = 0; k < history_.order(); ++k) hist.push_back(history_[static_cast<std::size_t>(k)]);
    TSWState next = ab3_step(state, hist, params_);
    ++steps_;
    if (!next.all_finite()) throw NumericalInstability("TSW integration produced non-finite values", steps_);
    if (!(next.h.min() > 0.0)) throw NumericalInstability("TSW integration produced non-positive h", steps_);
    if (!(next.theta.min() > 0.0)) throw NumericalInstability("TSW integration produced non-positive Theta", steps_);
    return next;
}

TSWState TSWIntegrator::run(TSWState state, long steps, const std::function<void(const StepReport&)>& observer) {
    for (long n = 0; n < steps; ++n) {
        state = step(state);
        if (observer) observer({steps_, state.time, state.h.min(), state.theta.min()});
    }
    return state;
}

ScalarField vorticity_of(const TSWState& state) { return sp::curl_2d(state.velocity()); }

void VortexIC::validate() const {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("VortexIC: radius must be positive");
    for (double v : {ox, oy, amplitude, separation, theta_amplitude}) {
        if (!std::isfinite(v)) throw InvalidInput("VortexIC: parameters must be finite");
    }
}

namespace {

double bump_1d(double s, double length, double radius) {
    const double a = length / (std::numbers::pi * radius) * std::sin(std::numbers::pi * s / length);
    return a * a;
}

} // namespace

TSWState double_vortex_ic(const VortexIC& ic, const GridSpec& grid, const ModelParams& params) {
    ic.validate();
    params.validate();
    const double sx = (ic.ox + 0.5 * ic.separation) * grid.lx;
    const double sy = (ic.oy + 0.5 * ic.separation) * grid.ly;
    const double cx1 = 0.5 * grid.lx - sx, cy1 = 0.5 * grid.ly - sy;
    const double cx2 = 0.5 * grid.lx + sx, cy2 = 0.5 * grid.ly + sy;
    const ScalarField bumps = ScalarField::from_function(grid, [&](double x, double y) {
        const double b1 = std::exp(-0.5 * (bump_1d(x - cx1, grid.lx, ic.radius) + bump_1d(y - cy1, grid.ly, ic.radius)));
        const double b2 = std::exp(-0.5 * (bump_1d(x - cx2, grid.lx, ic.radius) + bump_1d(y - cy2, grid.ly, ic.radius)));
        return b1 + b2;
    });

    ScalarField h(grid, params.h0);
    h.axpy(ic.amplitude, bumps);
    ScalarField theta(grid, params.theta0);
    theta.axpy(params.theta0 * ic.theta_amplitude, bumps);

    const auto gh = sp::gradient(h);
    const double c = params.theta0 / params.f;
    TSWState state(std::move(h), std::move(theta), -c * gh.u2, c * gh.u1, 0.0);
    if (!(state.h.min() > 0.0) || !(state.theta.min() > 0.0)) {
        throw InvalidInput("double_vortex_ic: parameters give non-positive h or Theta");
    }
    return state;
}

double vortex_bump_integral(const VortexIC& ic, const GridSpec& grid) {
    // int_0^L exp(-A^2 sin^2(pi s / L) / 2) ds = L exp(-A^2/4) I0(A^2/4)
    const auto one_dim = [&](double length) {
        const double a = length / (std::numbers::pi * ic.radius);
        const double q = 0.25 * a * a;
        return length * std::exp(-q) * std::cyl_bessel_i(0.0, q);
    };
    return one_dim(grid.lx) * one_dim(grid.ly);
}

} // namespace geomorph
