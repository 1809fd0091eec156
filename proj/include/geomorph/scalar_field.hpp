#pragma once

#include "geomorph/grid.hpp"

#include <functional>
#include <span>
#include <vector>

namespace geomorph {

/// Real samples on a GridSpec. Component storage for every form and state
/// variable in the library.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const GridSpec& grid, double fill = 0.0);
    ScalarField(const GridSpec& grid, std::vector<double> values);

    /// Samples f(x, y) at every grid point.
    static ScalarField from_function(const GridSpec& grid, const std::function<double(double, double)>& f);

    const GridSpec& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
    double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
    double& operator[](std::size_t k) { return values_[k]; }
    double operator[](std::size_t k) const { return values_[k]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    bool all_finite() const;
    double min() const;
    double max() const;
    double max_abs() const;
    double mean() const;
    /// Domain integral by mean-value quadrature: mean * lx * ly.
    double integral() const;

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double s);
    ScalarField& operator+=(double c);
    /// this += s * other
    ScalarField& axpy(double s, const ScalarField& other);

    friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
    friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
    friend ScalarField operator*(ScalarField a, double s) { return a *= s; }
    friend ScalarField operator*(double s, ScalarField a) { return a *= s; }
    friend ScalarField operator-(ScalarField a) { return a *= -1.0; }

    friend bool operator==(const ScalarField&, const ScalarField&) = default;

private:
    GridSpec grid_;
    std::vector<double> values_;
};

/// Pointwise product a * b.
ScalarField multiply(const ScalarField& a, const ScalarField& b);

/// Throws InvalidInput naming `what` if any value is NaN or infinite.
void require_finite(const ScalarField& f, const char* what);

/// Largest pointwise |a - b|.
double max_abs_diff(const ScalarField& a, const ScalarField& b);

/// Domain inner product: integral of a * b.
double inner(const ScalarField& a, const ScalarField& b);

} // namespace geomorph
