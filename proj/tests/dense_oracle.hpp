#pragma once

// Dense brute-force operators for small periodic grids. Built from the
// closed-form periodic spectral differentiation matrices (even N), not from
// the FFT path, so they are an independent check on the library operators.

#include "geomorph/forms.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace geomorph::oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// First-derivative matrix on N equispaced points of [0, L): entries
/// (pi/L)(-1)^m cot(m pi / N), m = i - j. Nyquist mode annihilated.
inline MatrixXd first_derivative_1d(int n, double length) {
    MatrixXd d = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int m = i - j;
            if (m == 0) continue;
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            d(i, j) = std::numbers::pi / length * sign / std::tan(m * std::numbers::pi / n);
        }
    }
    return d;
}

/// Second-derivative matrix: diagonal -(pi^2/(3h^2) + 1/6), off-diagonal
/// -(-1)^m / (2 sin^2(m h / 2)), on [0, 2 pi) rescaled to [0, L).
inline MatrixXd second_derivative_1d(int n, double length) {
    const double h = 2.0 * std::numbers::pi / n;
    const double s = 2.0 * std::numbers::pi / length;
    MatrixXd d = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int m = i - j;
            if (m == 0) {
                d(i, j) = -(std::numbers::pi * std::numbers::pi / (3.0 * h * h) + 1.0 / 6.0) * s * s;
            } else {
                const double sign = (m % 2 == 0) ? 1.0 : -1.0;
                const double sn = std::sin(m * h / 2.0);
                d(i, j) = -sign / (2.0 * sn * sn) * s * s;
            }
        }
    }
    return d;
}

inline MatrixXd kron(const MatrixXd& a, const MatrixXd& b) {
    MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
    return out;
}

/// 2D operators on a grid, index k = i * ny + j (the ScalarField layout).
struct Operators {
    MatrixXd dx, dy, lap;

    explicit Operators(const GridSpec& g) {
        const MatrixXd ix = MatrixXd::Identity(g.nx, g.nx);
        const MatrixXd iy = MatrixXd::Identity(g.ny, g.ny);
        dx = kron(first_derivative_1d(g.nx, g.lx), iy);
        dy = kron(ix, first_derivative_1d(g.ny, g.ly));
        lap = kron(second_derivative_1d(g.nx, g.lx), iy) + kron(ix, second_derivative_1d(g.ny, g.ly));
    }
};

inline VectorXd vec(const ScalarField& f) {
    VectorXd v(static_cast<Eigen::Index>(f.size()));
    for (std::size_t k = 0; k < f.size(); ++k) v(static_cast<Eigen::Index>(k)) = f[k];
    return v;
}

inline VectorXd vec(const DisplacementField& u) {
    VectorXd v(static_cast<Eigen::Index>(2 * u.u1.size()));
    v << vec(u.u1), vec(u.u2);
    return v;
}

inline VectorXd vec(const DiffForm& f) {
    if (f.degree() == Degree::One) return vec(DisplacementField{f.component(0), f.component(1)});
    return vec(f.scalar());
}

inline ScalarField field(const GridSpec& g, const VectorXd& v) {
    ScalarField f(g);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = v(static_cast<Eigen::Index>(k));
    return f;
}

inline DisplacementField vector_field(const GridSpec& g, const VectorXd& v) {
    const auto n = static_cast<Eigen::Index>(g.size());
    return {field(g, v.head(n)), field(g, v.tail(n))};
}

/// Dense matrix of u -> L_u theta (columns: u1 block then u2 block).
inline MatrixXd lie_matrix(const Operators& op, const DiffForm& theta) {
    const auto diag = [](const VectorXd& v) { return MatrixXd(v.asDiagonal()); };
    const Eigen::Index n = op.dx.rows();
    switch (theta.degree()) {
    case Degree::Zero: {
        const VectorXd f = vec(theta.scalar());
        MatrixXd l(n, 2 * n);
        l << diag(op.dx * f), diag(op.dy * f);
        return l;
    }
    case Degree::Two: {
        const VectorXd f = vec(theta.scalar());
        MatrixXd l(n, 2 * n);
        l << op.dx * diag(f), op.dy * diag(f);
        return l;
    }
    case Degree::One: {
        const VectorXd a1 = vec(theta.component(0));
        const VectorXd a2 = vec(theta.component(1));
        MatrixXd l(2 * n, 2 * n);
        l << diag(op.dx * a1) + diag(a1) * op.dx, diag(op.dy * a1) + diag(a2) * op.dx,
            diag(op.dx * a2) + diag(a1) * op.dy, diag(op.dy * a2) + diag(a2) * op.dy;
        return l;
    }
    }
    return {};
}

/// Block-diagonal (a0 I - a1 Laplacian) acting on (u1, u2).
inline MatrixXd regulariser_matrix(const Operators& op, double a0, double a1) {
    const Eigen::Index n = op.lap.rows();
    const MatrixXd block = a0 * MatrixXd::Identity(n, n) - a1 * op.lap;
    MatrixXd r = MatrixXd::Zero(2 * n, 2 * n);
    r.topLeftCorner(n, n) = block;
    r.bottomRightCorner(n, n) = block;
    return r;
}

/// Minimiser of 2 <W r, L_u theta2> + <u, (a0 - a1 Δ) u> by a dense solve of
/// the stationarity condition (a0 - a1 Δ) u = -L^T (W r).
inline DisplacementField brute_force_displacement(const DiffForm& theta1, const DiffForm& theta2, double a0, double a1,
                                                  const ScalarField* weight = nullptr) {
    const GridSpec& g = theta2.grid();
    const Operators op(g);
    const MatrixXd l = lie_matrix(op, theta2);
    VectorXd r = vec(theta1.scalar()) - vec(theta2.scalar());
    if (weight) r = r.cwiseProduct(vec(*weight));
    const MatrixXd a = regulariser_matrix(op, a0, a1);
    const VectorXd u = a.ldlt().solve(-l.transpose() * r);
    return vector_field(g, u);
}

/// Dense normal-equation solve of min |theta_t - L_u theta|^2 + <u, (a0 - a1 Δ) u>.
inline DisplacementField brute_force_optical_flow(const DiffForm& theta, const DiffForm& theta_t, double a0, double a1) {
    const GridSpec& g = theta.grid();
    const Operators op(g);
    const MatrixXd l = lie_matrix(op, theta);
    const MatrixXd m = l.transpose() * l + regulariser_matrix(op, a0, a1);
    const VectorXd u = m.ldlt().solve(l.transpose() * vec(theta_t));
    return vector_field(g, u);
}

} // namespace geomorph::oracle
