#include "geomorph/interpolation.hpp"

#include "geomorph/spectral.hpp"

#include <cmath>

namespace geomorph {

PeriodicBicubic::PeriodicBicubic(const ScalarField& f)
    : f_(f), fx_(spectral::ddx(f)), fy_(spectral::ddy(f)), fxy_(spectral::ddy(fx_)) {}

double PeriodicBicubic::operator()(double x, double y) const {
    const GridSpec& g = f_.grid();
    double gx = x / g.dx();
    double gy = y / g.dy();
    gx -= std::floor(gx / g.nx) * g.nx;
    gy -= std::floor(gy / g.ny) * g.ny;
    int i0 = static_cast<int>(std::floor(gx));
    int j0 = static_cast<int>(std::floor(gy));
    const double t = gx - i0;
    const double s = gy - j0;
    i0 %= g.nx;
    j0 %= g.ny;
    const int i1 = (i0 + 1) % g.nx;
    const int j1 = (j0 + 1) % g.ny;

    // Cubic Hermite basis: value weights h0*, slope weights h1*.
    const double t2 = t * t, t3 = t2 * t;
    const double s2 = s * s, s3 = s2 * s;
    const double hv_t[2] = {2 * t3 - 3 * t2 + 1, -2 * t3 + 3 * t2};
    const double hd_t[2] = {t3 - 2 * t2 + t, t3 - t2};
    const double hv_s[2] = {2 * s3 - 3 * s2 + 1, -2 * s3 + 3 * s2};
    const double hd_s[2] = {s3 - 2 * s2 + s, s3 - s2};

    const int is[2] = {i0, i1};
    const int js[2] = {j0, j1};
    const double dx = g.dx();
    const double dy = g.dy();
    double v = 0.0;
    for (int p = 0; p < 2; ++p) {
        for (int q = 0; q < 2; ++q) {
            const int i = is[p];
            const int j = js[q];
            v += f_(i, j) * hv_t[p] * hv_s[q] + fx_(i, j) * dx * hd_t[p] * hv_s[q] +
                 fy_(i, j) * dy * hv_t[p] * hd_s[q] + fxy_(i, j) * dx * dy * hd_t[p] * hd_s[q];
        }
    }
    return v;
}

} // namespace geomorph
