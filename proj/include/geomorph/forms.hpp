#pragma once

// Differential forms of degree 0, 1 and 2 on the flat doubly-periodic
// 2-torus, with the exterior-calculus operators the morphing machinery needs.
//
// Component conventions:
//   degree 0: f
//   degree 1: a1 dx1 + a2 dx2
//   degree 2: f dx1^dx2   (f is the density)

#include "geomorph/scalar_field.hpp"
#include "geomorph/vector_field.hpp"

#include <vector>

namespace geomorph {

enum class Degree { Zero = 0, One = 1, Two = 2 };

class DiffForm {
public:
    static DiffForm function(ScalarField f);
    static DiffForm one_form(ScalarField a1, ScalarField a2);
    static DiffForm density(ScalarField f);
    static DiffForm zero(Degree degree, const GridSpec& grid);

    Degree degree() const { return degree_; }
    int degree_int() const { return static_cast<int>(degree_); }
    const GridSpec& grid() const { return components_.front().grid(); }

    std::size_t component_count() const { return components_.size(); }
    const ScalarField& component(std::size_t k) const { return components_.at(k); }
    ScalarField& component(std::size_t k) { return components_.at(k); }

    /// Single component of a degree-0 or degree-2 form.
    const ScalarField& scalar() const;

    bool all_finite() const;

    DiffForm& operator+=(const DiffForm& other);
    DiffForm& operator-=(const DiffForm& other);
    DiffForm& operator*=(double s);
    DiffForm& axpy(double s, const DiffForm& other);

    friend DiffForm operator+(DiffForm a, const DiffForm& b) { return a += b; }
    friend DiffForm operator-(DiffForm a, const DiffForm& b) { return a -= b; }
    friend DiffForm operator*(DiffForm a, double s) { return a *= s; }
    friend DiffForm operator*(double s, DiffForm a) { return a *= s; }

    friend bool operator==(const DiffForm&, const DiffForm&) = default;

private:
    DiffForm(Degree degree, std::vector<ScalarField> components);

    Degree degree_ = Degree::Zero;
    std::vector<ScalarField> components_;
};

/// u -> u♭ and back. The flat metric makes both the identity on components.
DiffForm flat(const DisplacementField& u);
DisplacementField sharp(const DiffForm& one_form);

/// Pointwise metric inner product integrated over the domain.
double inner(const DiffForm& a, const DiffForm& b);
double max_abs_diff(const DiffForm& a, const DiffForm& b);

/// Lie derivative L_u theta:
///   degree 0: u . grad f
///   degree 1: (L_u a)_i = u . grad a_i + a_1 d_i u_1 + a_2 d_i u_2
///   degree 2: div(f u)
DiffForm lie_derivative(const DiffForm& theta, const DisplacementField& u);

/// d on 0-forms (gradient) and 1-forms (density d_x a2 - d_y a1).
/// Degree-2 input throws: the result is identically zero in 2D.
DiffForm exterior_derivative(const DiffForm& theta);

/// *1 = dx1^dx2, *dx1 = dx2, *dx2 = -dx1, *(dx1^dx2) = 1.
DiffForm hodge_star(const DiffForm& theta);

/// delta = -*d* on the 2-torus, the sign that makes delta the L2 adjoint of
/// d. On a 1-form this is -(d_x a1 + d_y a2); on a 2-form (d_y f, -d_x f);
/// on a 0-form it is the zero function.
DiffForm codifferential(const DiffForm& theta);

/// sqrt of the integral of |u|^2 + curl(u)^2 + div(u)^2.
double h1_norm(const DisplacementField& u);

} // namespace geomorph
