#pragma once

#include "geomorph/scalar_field.hpp"

namespace geomorph {

/// Periodic bicubic Hermite interpolant of a grid field. Nodal slopes and the
/// cross derivative come from spectral differentiation, so the interpolant is
/// C1, exact at the nodes, and its error near a node is second order in the
/// distance to that node.
class PeriodicBicubic {
public:
    explicit PeriodicBicubic(const ScalarField& f);

    /// Value at an arbitrary point; coordinates are wrapped onto the torus.
    double operator()(double x, double y) const;

private:
    ScalarField f_;
    ScalarField fx_;
    ScalarField fy_;
    ScalarField fxy_;
};

} // namespace geomorph
