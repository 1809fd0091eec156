#pragma once

#include "geomorph/scalar_field.hpp"

namespace geomorph {

/// A 2-component vector field u = (u1, u2) on one grid. Under the flat
/// metric the musical flat/sharp maps are the identity on components, so the
/// same type also stands in for the 1-form u♭ where the solvers need it.
struct DisplacementField {
    ScalarField u1;
    ScalarField u2;

    DisplacementField() = default;
    explicit DisplacementField(const GridSpec& grid) : u1(grid), u2(grid) {}
    DisplacementField(ScalarField a, ScalarField b);

    const GridSpec& grid() const { return u1.grid(); }
    bool all_finite() const { return u1.all_finite() && u2.all_finite(); }
    double max_abs() const;

    DisplacementField& operator+=(const DisplacementField& o);
    DisplacementField& operator-=(const DisplacementField& o);
    DisplacementField& operator*=(double s);
    DisplacementField& axpy(double s, const DisplacementField& o);

    friend DisplacementField operator+(DisplacementField a, const DisplacementField& b) { return a += b; }
    friend DisplacementField operator-(DisplacementField a, const DisplacementField& b) { return a -= b; }
    friend DisplacementField operator*(DisplacementField a, double s) { return a *= s; }
    friend DisplacementField operator*(double s, DisplacementField a) { return a *= s; }

    friend bool operator==(const DisplacementField&, const DisplacementField&) = default;
};

/// Domain inner product of two vector fields: integral of u . w.
double inner(const DisplacementField& u, const DisplacementField& w);

double max_abs_diff(const DisplacementField& a, const DisplacementField& b);

} // namespace geomorph
