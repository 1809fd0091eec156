#pragma once

// Fourier calculus on the doubly-periodic grid.
//
// Every operator is defined through physical wavenumbers kx = 2*pi*m/lx, so
// results do not depend on the FFT layout. Odd-order derivatives zero the
// Nyquist mode along the differentiated direction; even-order operators
// (Laplacian, Helmholtz inverse, filters) keep it.

#include "geomorph/scalar_field.hpp"
#include "geomorph/vector_field.hpp"

#include <complex>
#include <vector>

namespace geomorph::spectral {

using Complex = std::complex<double>;

/// Half-complex spectrum of a real field: nx * (ny/2 + 1) coefficients,
/// unnormalised forward transform (coefficient = sum of samples * phase).
struct Spectrum {
    GridSpec grid;
    std::vector<Complex> coeffs;

    int nyc() const { return grid.ny / 2 + 1; }
    Complex& at(int i, int j) { return coeffs[static_cast<std::size_t>(i) * nyc() + j]; }
    const Complex& at(int i, int j) const { return coeffs[static_cast<std::size_t>(i) * nyc() + j]; }
};

Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s);

ScalarField ddx(const ScalarField& f);
ScalarField ddy(const ScalarField& f);

/// (df/dx, df/dy).
DisplacementField gradient(const ScalarField& f);
/// du1/dx + du2/dy.
ScalarField divergence(const DisplacementField& u);
/// du2/dx - du1/dy.
ScalarField curl_2d(const DisplacementField& u);
ScalarField laplacian(const ScalarField& f);

/// Solves (a0 - a1*Laplacian) g = f exactly in Fourier space. Requires a0 > 0, a1 >= 0.
ScalarField inverse_elliptic(const ScalarField& f, double a0, double a1);
DisplacementField inverse_elliptic(const DisplacementField& u, double a0, double a1);

/// (I - Laplacian)^{-1}: every mode divided by 1 + kx^2 + ky^2.
ScalarField inverse_helmholtz(const ScalarField& f);
DisplacementField inverse_helmholtz(const DisplacementField& u);

/// Hou-Li factor exp(-36[(|mx|/(nx/2))^a + (|my|/(ny/2))^a]) for FFT position (i, j).
double hou_li_multiplier(const GridSpec& grid, int i, int j, int a);
/// Multiplies every Fourier mode by the Hou-Li factor. a must be positive.
ScalarField hou_li_filter(const ScalarField& f, int a);

/// Spectral truncation onto a coarser grid covering the same domain.
ScalarField coarsen(const ScalarField& f, const GridSpec& coarse);
/// Spectral zero-padding onto a finer grid covering the same domain.
ScalarField refine(const ScalarField& f, const GridSpec& fine);
/// refine(coarsen(f, coarse), f.grid()): the projection onto modes the coarse grid resolves.
ScalarField low_pass(const ScalarField& f, const GridSpec& coarse);

} // namespace geomorph::spectral
