#pragma once

#include "geomorph/scalar_field.hpp"
#include "geomorph/vector_field.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace geomorph::testing {

inline constexpr double kPi = std::numbers::pi;

/// Random real trigonometric polynomial with |mode| <= max_mode in each
/// direction. Band-limited well below Nyquist, so spectral operators are exact.
inline ScalarField random_band_limited(const GridSpec& g, std::uint64_t seed, int max_mode = 3, double offset = 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    ScalarField f(g, offset);
    for (int p = -max_mode; p <= max_mode; ++p) {
        for (int q = 0; q <= max_mode; ++q) {
            const double a = coef(rng);
            const double b = coef(rng);
            for (int i = 0; i < g.nx; ++i) {
                for (int j = 0; j < g.ny; ++j) {
                    const double phase = 2.0 * kPi * (p * g.x(i) / g.lx + q * g.y(j) / g.ly);
                    f(i, j) += a * std::cos(phase) + b * std::sin(phase);
                }
            }
        }
    }
    return f;
}

inline DisplacementField random_vector_field(const GridSpec& g, std::uint64_t seed, int max_mode = 3) {
    return {random_band_limited(g, seed, max_mode), random_band_limited(g, seed + 7919, max_mode)};
}

/// Periodic Gaussian-like bump exp(-(s_x^2 + s_y^2)/2) with
/// s_x = lx/(pi r) sin(pi (x - cx)/lx); smooth on the torus, ~Gaussian of
/// radius r near its centre.
inline double periodic_bump(const GridSpec& g, double x, double y, double cx, double cy, double r) {
    const double sx = g.lx / (kPi * r) * std::sin(kPi * (x - cx) / g.lx);
    const double sy = g.ly / (kPi * r) * std::sin(kPi * (y - cy) / g.ly);
    return std::exp(-0.5 * (sx * sx + sy * sy));
}

inline ScalarField bump_field(const GridSpec& g, double cx, double cy, double r, double amp = 1.0, double base = 0.0) {
    return ScalarField::from_function(g, [&](double x, double y) { return base + amp * periodic_bump(g, x, y, cx, cy, r); });
}

inline double rel_l2_diff(const ScalarField& a, const ScalarField& b) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        num += (a[k] - b[k]) * (a[k] - b[k]);
        den += b[k] * b[k];
    }
    return std::sqrt(num / den);
}

inline double rel_l2_diff(const DisplacementField& a, const DisplacementField& b) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < a.u1.size(); ++k) {
        num += (a.u1[k] - b.u1[k]) * (a.u1[k] - b.u1[k]) + (a.u2[k] - b.u2[k]) * (a.u2[k] - b.u2[k]);
        den += b.u1[k] * b.u1[k] + b.u2[k] * b.u2[k];
    }
    return std::sqrt(num / den);
}

} // namespace geomorph::testing

#include "geomorph/pushforward.hpp"

namespace geomorph::testing {

/// Analytic periodic flow on a grid's domain used by the first-order
/// consistency checks: u = (0.5 sin(2 pi y/ly) + 0.3 cos(2 pi x/lx),
///                          0.4 sin(2 pi x/lx) + 0.2 cos(2 pi y/ly)) * scale.
struct AnalyticFlow {
    GridSpec grid;
    double scale = 1.0;

    std::array<double, 2> operator()(double x, double y) const {
        const double ax = 2.0 * kPi * x / grid.lx, ay = 2.0 * kPi * y / grid.ly;
        return {scale * (0.5 * std::sin(ay) + 0.3 * std::cos(ax)), scale * (0.4 * std::sin(ax) + 0.2 * std::cos(ay))};
    }
    /// Row-major du_i/dx_j.
    std::array<double, 4> jacobian(double x, double y) const {
        const double kx = 2.0 * kPi / grid.lx, ky = 2.0 * kPi / grid.ly;
        const double ax = kx * x, ay = ky * y;
        return {scale * (-0.3 * kx * std::sin(ax)), scale * (0.5 * ky * std::cos(ay)),
                scale * (0.4 * kx * std::cos(ax)), scale * (-0.2 * ky * std::sin(ay))};
    }
    DisplacementField sampled() const {
        DisplacementField u(grid);
        for (int i = 0; i < grid.nx; ++i) {
            for (int j = 0; j < grid.ny; ++j) {
                const auto v = (*this)(grid.x(i), grid.y(j));
                u.u1(i, j) = v[0];
                u.u2(i, j) = v[1];
            }
        }
        return u;
    }
};

/// The map x -> x + eps * u(x); inverse by fixed-point iteration.
inline AnalyticMap near_identity_map(const AnalyticFlow& flow, double eps) {
    AnalyticMap m;
    m.forward = [=](double x, double y) {
        const auto v = flow(x, y);
        return AnalyticMap::Point{x + eps * v[0], y + eps * v[1]};
    };
    const auto inv = [=](double x, double y) {
        double px = x, py = y;
        for (int it = 0; it < 200; ++it) {
            const auto v = flow(px, py);
            const double nx = x - eps * v[0], ny = y - eps * v[1];
            const bool done = std::abs(nx - px) + std::abs(ny - py) < 1e-17 * (1.0 + std::abs(x) + std::abs(y));
            px = nx;
            py = ny;
            if (done) break;
        }
        return AnalyticMap::Point{px, py};
    };
    m.inverse = inv;
    m.jacobian_of_inverse = [=](double x, double y) {
        const auto p = inv(x, y);
        const auto J = flow.jacobian(p[0], p[1]);
        // (I + eps * Du)^{-1} evaluated at the preimage.
        const double a = 1.0 + eps * J[0], b = eps * J[1], c = eps * J[2], d = 1.0 + eps * J[3];
        const double det = a * d - b * c;
        return AnalyticMap::Jacobian{d / det, -b / det, -c / det, a / det};
    };
    return m;
}

} // namespace geomorph::testing
