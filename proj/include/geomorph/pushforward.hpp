#pragma once

#include "geomorph/forms.hpp"

#include <array>
#include <functional>

namespace geomorph {

/// Closed-form orientation-preserving diffeomorphism T of the plane, used on
/// the torus either as a torus automorphism or on fields supported away from
/// the periodic seam.
struct AnalyticMap {
    using Point = std::array<double, 2>;
    /// Row-major 2x2 matrix J[i][j] = d(T^-1)_i / dx_j.
    using Jacobian = std::array<double, 4>;

    std::function<Point(double, double)> forward;
    std::function<Point(double, double)> inverse;
    std::function<Jacobian(double, double)> jacobian_of_inverse;

    static AnalyticMap identity();
    static AnalyticMap translation(double sx, double sy);
    /// Rotation by `angle` radians (counter-clockwise positive) about (cx, cy).
    static AnalyticMap rotation(double cx, double cy, double angle);
};

/// Throws InvalidInput unless forward(inverse(p)) == p (mod the periods) to
/// 1e-9 relative and det J_{T^-1} > 0 on a lattice of sample points.
void validate_map(const AnalyticMap& map, const GridSpec& grid);

/// T_* theta = (T^-1)^* theta, evaluated at grid points with periodic bicubic
/// interpolation of the source components:
///   degree 0: f(T^-1 x)
///   degree 1: b_j(x) = sum_i a_i(T^-1 x) d(T^-1)_i/dx_j
///   degree 2: f(T^-1 x) det J_{T^-1}(x)
DiffForm pushforward(const DiffForm& theta, const AnalyticMap& map);

/// Every component composed with T^-1, ignoring the tensor type. This is the
/// usual image-warping rule and the comparator for pushforward().
DiffForm compose_naive(const DiffForm& theta, const AnalyticMap& map);

} // namespace geomorph
