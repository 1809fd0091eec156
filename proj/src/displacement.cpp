#include "geomorph/displacement.hpp"

#include "geomorph/errors.hpp"
#include "geomorph/spectral.hpp"

#include <cmath>

namespace geomorph {

namespace sp = spectral;

void SolverParams::validate(const GridSpec& grid) const {
    if (!(a0 > 0.0)) throw InvalidInput("SolverParams: a0 must be positive on a boundary-free domain");
    if (!(a1 >= 0.0)) throw InvalidInput("SolverParams: a1 must be non-negative");
    if (!(prefactor > 0.0)) throw InvalidInput("SolverParams: prefactor must be positive");
    if (weight) {
        require_same_grid(weight->grid(), grid, "SolverParams weight");
        for (double w : weight->values()) {
            if (!(w >= 0.0 && w <= 1.0)) throw InvalidInput("SolverParams: weight must lie in [0, 1]");
        }
    }
}

namespace {

void check_pair(const DiffForm& theta1, const DiffForm& theta2, Degree expected, const char* context) {
    if (theta1.degree() != expected || theta2.degree() != expected) {
        throw InvalidInput(std::string(context) + ": expects two forms of degree " +
                           std::to_string(static_cast<int>(expected)));
    }
    require_same_grid(theta1.grid(), theta2.grid(), context);
    require_finite(theta1.scalar(), context);
    require_finite(theta2.scalar(), context);
}

ScalarField weighted(const ScalarField& r, const SolverParams& params) {
    return params.weight ? multiply(*params.weight, r) : r;
}

} // namespace

DisplacementField displacement_from_0forms(const DiffForm& theta1, const DiffForm& theta2, const SolverParams& params) {
    check_pair(theta1, theta2, Degree::Zero, "displacement_from_0forms");
    params.validate(theta2.grid());
    const ScalarField wr = weighted(theta1.scalar() - theta2.scalar(), params);
    const auto grad = sp::gradient(theta2.scalar());
    DisplacementField rhs{multiply(wr, grad.u1), multiply(wr, grad.u2)};
    rhs *= -params.prefactor;
    return sp::inverse_elliptic(rhs, params.a0, params.a1);
}

DisplacementField displacement_from_2forms(const DiffForm& theta1, const DiffForm& theta2, const SolverParams& params) {
    check_pair(theta1, theta2, Degree::Two, "displacement_from_2forms");
    params.validate(theta2.grid());
    const ScalarField wr = weighted(theta1.scalar() - theta2.scalar(), params);
    const auto grad = sp::gradient(wr);
    const ScalarField& rho = theta2.scalar();
    DisplacementField rhs{multiply(rho, grad.u1), multiply(rho, grad.u2)};
    rhs *= params.prefactor;
    return sp::inverse_elliptic(rhs, params.a0, params.a1);
}

DisplacementField combine_displacements(std::span<const DisplacementField> fields, std::optional<double> tol_norm) {
    if (fields.empty()) throw InvalidInput("combine_displacements: empty input");
    const GridSpec& grid = fields.front().grid();
    const double tol = tol_norm.value_or(1e-14 * grid.area());
    DisplacementField sum(grid);
    int counted = 0;
    for (const auto& u : fields) {
        require_same_grid(u.grid(), grid, "combine_displacements");
        const double n = h1_norm(u);
        if (!(n >= tol)) continue;
        sum.axpy(1.0 / n, u);
        ++counted;
    }
    if (counted > 1) sum *= 1.0 / counted;
    return sum;
}

DisplacementField lie_adjoint(const DiffForm& theta, const DiffForm& phi) {
    if (theta.degree() != phi.degree()) throw InvalidInput("lie_adjoint: degree mismatch");
    require_same_grid(theta.grid(), phi.grid(), "lie_adjoint");
    switch (theta.degree()) {
    case Degree::Zero: {
        // <u . grad f, phi> = <u, phi grad f>
        const auto grad = sp::gradient(theta.scalar());
        return {multiply(phi.scalar(), grad.u1), multiply(phi.scalar(), grad.u2)};
    }
    case Degree::Two: {
        // <div(f u), phi> = -<u, f grad phi>
        const auto grad = sp::gradient(phi.scalar());
        return {-multiply(theta.scalar(), grad.u1), -multiply(theta.scalar(), grad.u2)};
    }
    case Degree::One: {
        // (L_u a)_i = u . grad a_i + sum_j a_j d_i u_j, so
        // (L* phi)_j = sum_i phi_i d_j a_i - div(a_j phi).
        const ScalarField& a1 = theta.component(0);
        const ScalarField& a2 = theta.component(1);
        const ScalarField& p1 = phi.component(0);
        const ScalarField& p2 = phi.component(1);
        const auto ga1 = sp::gradient(a1);
        const auto ga2 = sp::gradient(a2);
        ScalarField w1 = multiply(p1, ga1.u1) + multiply(p2, ga2.u1) - sp::divergence({multiply(a1, p1), multiply(a1, p2)});
        ScalarField w2 = multiply(p1, ga1.u2) + multiply(p2, ga2.u2) - sp::divergence({multiply(a2, p1), multiply(a2, p2)});
        return {std::move(w1), std::move(w2)};
    }
    }
    throw InvalidInput("lie_adjoint: unknown degree");
}

namespace {

DisplacementField regulariser(const DisplacementField& u, const SolverParams& p) {
    DisplacementField out = u * p.a0;
    out.u1.axpy(-p.a1, sp::laplacian(u.u1));
    out.u2.axpy(-p.a1, sp::laplacian(u.u2));
    return out;
}

DisplacementField normal_operator(const DiffForm& theta, const DisplacementField& u, const SolverParams& p) {
    return lie_adjoint(theta, lie_derivative(theta, u)) + regulariser(u, p);
}

} // namespace

double optical_flow_objective(const DiffForm& theta, const DiffForm& theta_t, const DisplacementField& u,
                              const SolverParams& params) {
    const DiffForm misfit = theta_t - lie_derivative(theta, u);
    return inner(misfit, misfit) + inner(u, regulariser(u, params));
}

OpticalFlowResult generalized_optical_flow(const DiffForm& theta, const DiffForm& theta_t, const SolverParams& params) {
    if (theta.degree() != theta_t.degree()) throw InvalidInput("generalized_optical_flow: degree mismatch");
    require_same_grid(theta.grid(), theta_t.grid(), "generalized_optical_flow");
    if (!theta.all_finite() || !theta_t.all_finite()) throw InvalidInput("generalized_optical_flow: non-finite input");
    if (params.weight) throw InvalidInput("generalized_optical_flow: observation weights are not supported");
    params.validate(theta.grid());

    const GridSpec& grid = theta.grid();
    OpticalFlowResult result;
    result.u = DisplacementField(grid);

    const DisplacementField b = lie_adjoint(theta, theta_t);
    const double b_norm = std::sqrt(inner(b, b));
    result.objective.push_back(optical_flow_objective(theta, theta_t, result.u, params));
    if (b_norm == 0.0) {
        result.converged = true;
        return result;
    }

    DisplacementField r = b;
    DisplacementField p = r;
    double rr = inner(r, r);
    for (int it = 0; it < params.cg_max_iter; ++it) {
        const DisplacementField ap = normal_operator(theta, p, params);
        const double alpha = rr / inner(p, ap);
        result.u.axpy(alpha, p);
        r.axpy(-alpha, ap);
        const double rr_new = inner(r, r);
        result.iterations = it + 1;
        result.relative_residual = std::sqrt(rr_new) / b_norm;
        result.objective.push_back(optical_flow_objective(theta, theta_t, result.u, params));
        if (result.relative_residual <= params.cg_tol) {
            result.converged = true;
            break;
        }
        p = r + (rr_new / rr) * p;
        rr = rr_new;
    }
    return result;
}

} // namespace geomorph
