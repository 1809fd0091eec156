#pragma once

// Iterative virtual-time morphing of a TSW state toward observed fields.
//
// Each iteration solves for a displacement field u from every observable,
// combines the H1-normalised fields, and advances dtheta/ds = -L_u theta by
// one epsilon-step with Adams-Bashforth (AB5 by default) and a Hou-Li filter.
// The tensor assignment is h dx^dy (2-form), Theta (0-form) and
// v1 dx1 + v2 dx2 (1-form); the naive mode treats every field as a 0-form.

#include "geomorph/displacement.hpp"
#include "geomorph/tsw.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace geomorph {

enum class MorphMode { Tensor, Naive };

struct MorphParams {
    double epsilon = 3.3e-5;
    int n_steps = 10000;
    int filter_a = 36;
    int ab_order = 5;
    /// Stop once every observed MSE has risen for this many consecutive steps.
    std::optional<int> early_stop_patience;
    SolverParams solver;

    void validate() const;
};

/// Observed field and its tensor type. Both experiment observables ("h" and
/// "omega") are 2-forms; the state-side field is looked up by name.
struct ObservablePair {
    std::string name;
    DiffForm target;
};

/// The named diagnostic ("h" or "omega") of a state as a form of the given degree.
DiffForm observable_of(const TSWState& state, const std::string& name, Degree degree);

/// Combined displacement for one iteration.
DisplacementField morph_velocity(const TSWState& state, std::span<const ObservablePair> targets, const SolverParams& solver);

/// -L_u of each prognostic tensor (tensor mode) or -u . grad of each field (naive mode).
TSWState morph_tendency(const TSWState& state, const DisplacementField& u, MorphMode mode);

/// Adams-Bashforth stepper in virtual time that owns its tendency history.
class MorphStepper {
public:
    MorphStepper(const MorphParams& params, MorphMode mode);

    TSWState step(const TSWState& state, const DisplacementField& u);
    long steps_taken() const { return steps_; }

private:
    double epsilon_;
    int filter_a_;
    MorphMode mode_;
    TendencyHistory<TSWState> history_;
    long steps_ = 0;
};

/// A single step from an empty history (first-order update then filter).
TSWState morph_step(const TSWState& state, const DisplacementField& u, const MorphParams& params);
TSWState naive_morph_step(const TSWState& state, const DisplacementField& u, const MorphParams& params);

struct ConservedTotals {
    double mass = 0.0;
    double vorticity = 0.0;
    double buoyancy_integral = 0.0;
};

ConservedTotals conserved_totals(const TSWState& state);

/// Mean of squared pointwise differences.
double field_mse(const ScalarField& a, const ScalarField& b);

struct MorphTraceRow {
    long step = 0;
    /// NaN when the observable is not among the targets.
    double mse_h = 0.0;
    double mse_omega = 0.0;
    double mass = 0.0;
    double vorticity_total = 0.0;
    double buoyancy_integral = 0.0;
};

struct MorphTrace {
    std::vector<MorphTraceRow> rows;

    long executed_steps() const { return rows.empty() ? 0 : static_cast<long>(rows.size()) - 1; }
    void write_csv(std::ostream& out) const;
};

struct MorphResult {
    TSWState state;
    MorphTrace trace;
};

/// Runs up to params.n_steps iterations. When the first combined u is
/// identically zero the state is already a fixed point and is returned as is.
MorphResult run_morph(const TSWState& state, std::span<const ObservablePair> targets, const MorphParams& params,
                      MorphMode mode = MorphMode::Tensor);

} // namespace geomorph
