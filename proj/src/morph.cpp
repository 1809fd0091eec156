#include "geomorph/morph.hpp"

#include "geomorph/errors.hpp"
#include "geomorph/spectral.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace geomorph {

namespace sp = spectral;

void MorphParams::validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidInput("MorphParams: epsilon must be positive");
    if (n_steps < 0) throw InvalidInput("MorphParams: n_steps must be non-negative");
    if (filter_a <= 0) throw InvalidInput("MorphParams: filter exponent must be positive");
    if (ab_order < 1 || ab_order > kMaxAdamsBashforthOrder) throw InvalidInput("MorphParams: ab_order must be 1..5");
    if (early_stop_patience && *early_stop_patience < 1) throw InvalidInput("MorphParams: patience must be at least 1");
}

DiffForm observable_of(const TSWState& state, const std::string& name, Degree degree) {
    ScalarField f;
    if (name == "h") {
        f = state.h;
    } else if (name == "omega") {
        f = vorticity_of(state);
    } else if (name == "theta") {
        f = state.theta;
    } else {
        throw InvalidInput("observable_of: unknown observable '" + name + "'");
    }
    switch (degree) {
    case Degree::Zero: return DiffForm::function(std::move(f));
    case Degree::Two: return DiffForm::density(std::move(f));
    case Degree::One: break;
    }
    throw InvalidInput("observable_of: scalar observables cannot be 1-forms");
}

DisplacementField morph_velocity(const TSWState& state, std::span<const ObservablePair> targets, const SolverParams& solver) {
    if (targets.empty()) throw InvalidInput("morph_velocity: no observables");
    std::vector<DisplacementField> fields;
    fields.reserve(targets.size());
    for (const auto& t : targets) {
        const DiffForm current = observable_of(state, t.name, t.target.degree());
        if (t.target.degree() == Degree::Two) {
            fields.push_back(displacement_from_2forms(t.target, current, solver));
        } else {
            fields.push_back(displacement_from_0forms(t.target, current, solver));
        }
    }
    return combine_displacements(fields);
}

TSWState morph_tendency(const TSWState& state, const DisplacementField& u, MorphMode mode) {
    TSWState t = mode == MorphMode::Tensor ? lie_transport(state, u) : naive_transport(state, u);
    t.h *= -1.0;
    t.theta *= -1.0;
    t.v1 *= -1.0;
    t.v2 *= -1.0;
    return t;
}

MorphStepper::MorphStepper(const MorphParams& params, MorphMode mode)
    : epsilon_(params.epsilon), filter_a_(params.filter_a), mode_(mode), history_(params.ab_order) {
    params.validate();
}

TSWState MorphStepper::step(const TSWState& state, const DisplacementField& u) {
    history_.push(morph_tendency(state, u, mode_));
    const auto weights = adams_bashforth_weights(history_.order());
    TSWState next = state;
    for (int k = 0; k < history_.order(); ++k) next.axpy(epsilon_ * weights[k], history_[static_cast<std::size_t>(k)]);
    next = map_fields(next, [&](const ScalarField& f) { return sp::hou_li_filter(f, filter_a_); });
    ++steps_;
    if (!next.all_finite()) throw NumericalInstability("morphing produced non-finite values", steps_);
    return next;
}

TSWState morph_step(const TSWState& state, const DisplacementField& u, const MorphParams& params) {
    return MorphStepper(params, MorphMode::Tensor).step(state, u);
}

TSWState naive_morph_step(const TSWState& state, const DisplacementField& u, const MorphParams& params) {
    return MorphStepper(params, MorphMode::Naive).step(state, u);
}

ConservedTotals conserved_totals(const TSWState& state) {
    return {state.h.integral(), vorticity_of(state).integral(), state.theta.integral()};
}

double field_mse(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid(), b.grid(), "field_mse");
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        sum += d * d;
    }
    return sum / static_cast<double>(a.size());
}

void MorphTrace::write_csv(std::ostream& out) const {
    out << "step,mse_h,mse_omega,mass,vorticity_total,buoyancy_integral\n";
    const auto prev = out.precision(17);
    for (const auto& r : rows) {
        out << r.step << ',' << r.mse_h << ',' << r.mse_omega << ',' << r.mass << ',' << r.vorticity_total << ','
            << r.buoyancy_integral << '\n';
    }
    out.precision(prev);
}

namespace {

MorphTraceRow diagnose(long step, const TSWState& state, std::span<const ObservablePair> targets) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    MorphTraceRow row{step, nan, nan, 0.0, 0.0, 0.0};
    const ScalarField omega = vorticity_of(state);
    for (const auto& t : targets) {
        if (t.target.degree() == Degree::One) continue;
        if (t.name == "h") row.mse_h = field_mse(state.h, t.target.scalar());
        if (t.name == "omega") row.mse_omega = field_mse(omega, t.target.scalar());
    }
    row.mass = state.h.integral();
    row.vorticity_total = omega.integral();
    row.buoyancy_integral = state.theta.integral();
    return row;
}

bool all_observed_increased(const MorphTraceRow& prev, const MorphTraceRow& cur) {
    bool any = false;
    for (auto [a, b] : {std::pair{prev.mse_h, cur.mse_h}, std::pair{prev.mse_omega, cur.mse_omega}}) {
        if (std::isnan(a)) continue;
        any = true;
        if (!(b > a)) return false;
    }
    return any;
}

} // namespace

MorphResult run_morph(const TSWState& state, std::span<const ObservablePair> targets, const MorphParams& params,
                      MorphMode mode) {
    params.validate();
    if (targets.empty()) throw InvalidInput("run_morph: no observables");
    for (const auto& t : targets) require_same_grid(t.target.grid(), state.grid(), "run_morph target");

    MorphResult result{state, {}};
    result.trace.rows.push_back(diagnose(0, state, targets));
    MorphStepper stepper(params, mode);
    int rising = 0;
    for (long n = 1; n <= params.n_steps; ++n) {
        const DisplacementField u = morph_velocity(result.state, targets, params.solver);
        if (n == 1 && u.max_abs() == 0.0) break;
        result.state = stepper.step(result.state, u);
        result.trace.rows.push_back(diagnose(n, result.state, targets));
        if (params.early_stop_patience) {
            const auto& rows = result.trace.rows;
            rising = all_observed_increased(rows[rows.size() - 2], rows.back()) ? rising + 1 : 0;
            if (rising >= *params.early_stop_patience) break;
        }
    }
    return result;
}

} // namespace geomorph
