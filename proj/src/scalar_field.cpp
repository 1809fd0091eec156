#include "geomorph/scalar_field.hpp"

#include "geomorph/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace geomorph {

ScalarField::ScalarField(const GridSpec& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

ScalarField::ScalarField(const GridSpec& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw InvalidInput("ScalarField: value count " + std::to_string(values_.size()) +
                           " does not match grid size " + std::to_string(grid_.size()));
    }
}

ScalarField ScalarField::from_function(const GridSpec& grid, const std::function<double(double, double)>& f) {
    ScalarField out(grid);
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.ny; ++j) {
            out(i, j) = f(grid.x(i), grid.y(j));
        }
    }
    return out;
}

bool ScalarField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double ScalarField::mean() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

double ScalarField::integral() const { return mean() * grid_.area(); }

ScalarField& ScalarField::operator+=(const ScalarField& other) {
    require_same_grid(grid_, other.grid_, "ScalarField::operator+=");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
    require_same_grid(grid_, other.grid_, "ScalarField::operator-=");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

ScalarField& ScalarField::operator+=(double c) {
    for (double& v : values_) v += c;
    return *this;
}

ScalarField& ScalarField::axpy(double s, const ScalarField& other) {
    require_same_grid(grid_, other.grid_, "ScalarField::axpy");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += s * other.values_[k];
    return *this;
}

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid(), b.grid(), "multiply");
    ScalarField out(a.grid());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
    return out;
}

void require_finite(const ScalarField& f, const char* what) {
    const auto vals = f.values();
    for (std::size_t k = 0; k < vals.size(); ++k) {
        if (!std::isfinite(vals[k])) {
            throw InvalidInput(std::string(what) + ": non-finite value at flat index " + std::to_string(k));
        }
    }
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid(), b.grid(), "max_abs_diff");
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

double inner(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid(), b.grid(), "inner");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s / static_cast<double>(a.size()) * a.grid().area();
}

} // namespace geomorph
