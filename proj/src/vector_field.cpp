#include "geomorph/vector_field.hpp"

#include <algorithm>

namespace geomorph {

DisplacementField::DisplacementField(ScalarField a, ScalarField b) : u1(std::move(a)), u2(std::move(b)) {
    require_same_grid(u1.grid(), u2.grid(), "DisplacementField");
}

double DisplacementField::max_abs() const { return std::max(u1.max_abs(), u2.max_abs()); }

DisplacementField& DisplacementField::operator+=(const DisplacementField& o) {
    u1 += o.u1;
    u2 += o.u2;
    return *this;
}

DisplacementField& DisplacementField::operator-=(const DisplacementField& o) {
    u1 -= o.u1;
    u2 -= o.u2;
    return *this;
}

DisplacementField& DisplacementField::operator*=(double s) {
    u1 *= s;
    u2 *= s;
    return *this;
}

DisplacementField& DisplacementField::axpy(double s, const DisplacementField& o) {
    u1.axpy(s, o.u1);
    u2.axpy(s, o.u2);
    return *this;
}

double inner(const DisplacementField& u, const DisplacementField& w) { return inner(u.u1, w.u1) + inner(u.u2, w.u2); }

double max_abs_diff(const DisplacementField& a, const DisplacementField& b) {
    return std::max(max_abs_diff(a.u1, b.u1), max_abs_diff(a.u2, b.u2));
}

} // namespace geomorph
