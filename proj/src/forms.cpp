#include "geomorph/forms.hpp"

#include "geomorph/errors.hpp"
#include "geomorph/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace geomorph {

namespace sp = spectral;

DiffForm::DiffForm(Degree degree, std::vector<ScalarField> components)
    : degree_(degree), components_(std::move(components)) {
    for (std::size_t k = 1; k < components_.size(); ++k) {
        require_same_grid(components_[0].grid(), components_[k].grid(), "DiffForm");
    }
}

DiffForm DiffForm::function(ScalarField f) { return DiffForm(Degree::Zero, {std::move(f)}); }

DiffForm DiffForm::one_form(ScalarField a1, ScalarField a2) {
    std::vector<ScalarField> c;
    c.push_back(std::move(a1));
    c.push_back(std::move(a2));
    return DiffForm(Degree::One, std::move(c));
}

DiffForm DiffForm::density(ScalarField f) { return DiffForm(Degree::Two, {std::move(f)}); }

DiffForm DiffForm::zero(Degree degree, const GridSpec& grid) {
    if (degree == Degree::One) return one_form(ScalarField(grid), ScalarField(grid));
    return DiffForm(degree, {ScalarField(grid)});
}

const ScalarField& DiffForm::scalar() const {
    if (degree_ == Degree::One) throw InvalidInput("DiffForm::scalar: a 1-form has two components");
    return components_.front();
}

bool DiffForm::all_finite() const {
    return std::all_of(components_.begin(), components_.end(), [](const ScalarField& f) { return f.all_finite(); });
}

namespace {
void require_same_degree(const DiffForm& a, const DiffForm& b, const char* context) {
    if (a.degree() != b.degree()) {
        throw InvalidInput(std::string(context) + ": degree mismatch (" + std::to_string(a.degree_int()) + " vs " +
                           std::to_string(b.degree_int()) + ")");
    }
}
} // namespace

DiffForm& DiffForm::operator+=(const DiffForm& other) {
    require_same_degree(*this, other, "DiffForm::operator+=");
    for (std::size_t k = 0; k < components_.size(); ++k) components_[k] += other.components_[k];
    return *this;
}

DiffForm& DiffForm::operator-=(const DiffForm& other) {
    require_same_degree(*this, other, "DiffForm::operator-=");
    for (std::size_t k = 0; k < components_.size(); ++k) components_[k] -= other.components_[k];
    return *this;
}

DiffForm& DiffForm::operator*=(double s) {
    for (auto& c : components_) c *= s;
    return *this;
}

DiffForm& DiffForm::axpy(double s, const DiffForm& other) {
    require_same_degree(*this, other, "DiffForm::axpy");
    for (std::size_t k = 0; k < components_.size(); ++k) components_[k].axpy(s, other.components_[k]);
    return *this;
}

DiffForm flat(const DisplacementField& u) { return DiffForm::one_form(u.u1, u.u2); }

DisplacementField sharp(const DiffForm& one_form) {
    if (one_form.degree() != Degree::One) throw InvalidInput("sharp: expects a 1-form");
    return {one_form.component(0), one_form.component(1)};
}

double inner(const DiffForm& a, const DiffForm& b) {
    require_same_degree(a, b, "inner");
    double s = 0.0;
    for (std::size_t k = 0; k < a.component_count(); ++k) s += inner(a.component(k), b.component(k));
    return s;
}

double max_abs_diff(const DiffForm& a, const DiffForm& b) {
    require_same_degree(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t k = 0; k < a.component_count(); ++k) m = std::max(m, max_abs_diff(a.component(k), b.component(k)));
    return m;
}

DiffForm lie_derivative(const DiffForm& theta, const DisplacementField& u) {
    require_same_grid(theta.grid(), u.grid(), "lie_derivative");
    switch (theta.degree()) {
    case Degree::Zero: {
        const auto grad = sp::gradient(theta.scalar());
        return DiffForm::function(multiply(u.u1, grad.u1) + multiply(u.u2, grad.u2));
    }
    case Degree::Two: {
        const ScalarField& f = theta.scalar();
        return DiffForm::density(sp::divergence({multiply(f, u.u1), multiply(f, u.u2)}));
    }
    case Degree::One: {
        const ScalarField& a1 = theta.component(0);
        const ScalarField& a2 = theta.component(1);
        const auto ga1 = sp::gradient(a1);
        const auto ga2 = sp::gradient(a2);
        const auto gu1 = sp::gradient(u.u1);
        const auto gu2 = sp::gradient(u.u2);
        ScalarField c1 = multiply(u.u1, ga1.u1) + multiply(u.u2, ga1.u2) + multiply(a1, gu1.u1) + multiply(a2, gu2.u1);
        ScalarField c2 = multiply(u.u1, ga2.u1) + multiply(u.u2, ga2.u2) + multiply(a1, gu1.u2) + multiply(a2, gu2.u2);
        return DiffForm::one_form(std::move(c1), std::move(c2));
    }
    }
    throw InvalidInput("lie_derivative: unknown degree");
}

DiffForm exterior_derivative(const DiffForm& theta) {
    switch (theta.degree()) {
    case Degree::Zero: {
        auto grad = sp::gradient(theta.scalar());
        return DiffForm::one_form(std::move(grad.u1), std::move(grad.u2));
    }
    case Degree::One:
        return DiffForm::density(sp::curl_2d({theta.component(0), theta.component(1)}));
    case Degree::Two:
        break;
    }
    throw InvalidInput("exterior_derivative: d of a 2-form vanishes identically in 2D; use DiffForm::zero");
}

DiffForm hodge_star(const DiffForm& theta) {
    switch (theta.degree()) {
    case Degree::Zero:
        return DiffForm::density(theta.scalar());
    case Degree::Two:
        return DiffForm::function(theta.scalar());
    case Degree::One:
        return DiffForm::one_form(-theta.component(1), theta.component(0));
    }
    throw InvalidInput("hodge_star: unknown degree");
}

DiffForm codifferential(const DiffForm& theta) {
    if (theta.degree() == Degree::Zero) return DiffForm::zero(Degree::Zero, theta.grid());
    return hodge_star(exterior_derivative(hodge_star(theta))) * -1.0;
}

double h1_norm(const DisplacementField& u) {
    const ScalarField curl = sp::curl_2d(u);
    const ScalarField div = sp::divergence(u);
    double s = 0.0;
    for (std::size_t k = 0; k < curl.size(); ++k) {
        s += u.u1[k] * u.u1[k] + u.u2[k] * u.u2[k] + curl[k] * curl[k] + div[k] * div[k];
    }
    return std::sqrt(s / static_cast<double>(curl.size()) * u.grid().area());
}

} // namespace geomorph
