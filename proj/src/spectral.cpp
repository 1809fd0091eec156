#include "geomorph/spectral.hpp"

#include "geomorph/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

namespace geomorph::spectral {
namespace {

// FFTW planning is not thread-safe; execution through the new-array API is.
// Plans are created once per resolution under a lock and never modified.
class PlanPair {
public:
    PlanPair(int nx, int ny) {
        std::vector<double> real(static_cast<std::size_t>(nx) * ny);
        std::vector<Complex> cplx(static_cast<std::size_t>(nx) * (ny / 2 + 1));
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        r2c_ = fftw_plan_dft_r2c_2d(nx, ny, real.data(), reinterpret_cast<fftw_complex*>(cplx.data()), flags);
        c2r_ = fftw_plan_dft_c2r_2d(nx, ny, reinterpret_cast<fftw_complex*>(cplx.data()), real.data(), flags);
    }
    PlanPair(const PlanPair&) = delete;
    PlanPair& operator=(const PlanPair&) = delete;
    ~PlanPair() {
        fftw_destroy_plan(r2c_);
        fftw_destroy_plan(c2r_);
    }

    void r2c(const double* in, Complex* out) const {
        // r2c does not modify its input; FFTW's signature is simply not const.
        fftw_execute_dft_r2c(r2c_, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
    }
    void c2r(Complex* in, double* out) const {
        fftw_execute_dft_c2r(c2r_, reinterpret_cast<fftw_complex*>(in), out);
    }

private:
    fftw_plan r2c_ = nullptr;
    fftw_plan c2r_ = nullptr;
};

const PlanPair& plans_for(int nx, int ny) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<PlanPair>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{nx, ny}];
    if (!slot) slot = std::make_unique<PlanPair>(nx, ny);
    return *slot;
}

template <class Fn>
ScalarField apply_multiplier(const ScalarField& f, Fn&& multiplier) {
    Spectrum s = forward(f);
    const GridSpec& g = s.grid;
    for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < s.nyc(); ++j) {
            s.at(i, j) *= multiplier(i, j);
        }
    }
    return inverse(s);
}

// Full nx*ny complex spectrum reconstructed from the half spectrum by
// Hermitian symmetry; used only where modes move between grids.
std::vector<Complex> to_full(const Spectrum& s) {
    const GridSpec& g = s.grid;
    std::vector<Complex> full(g.size());
    for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.ny; ++j) {
            if (j <= g.ny / 2) {
                full[g.index(i, j)] = s.at(i, j);
            } else {
                full[g.index(i, j)] = std::conj(s.at((g.nx - i) % g.nx, g.ny - j));
            }
        }
    }
    return full;
}

Spectrum from_full(const GridSpec& g, const std::vector<Complex>& full) {
    Spectrum s{g, std::vector<Complex>(static_cast<std::size_t>(g.nx) * (g.ny / 2 + 1))};
    for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j <= g.ny / 2; ++j) s.at(i, j) = full[g.index(i, j)];
    }
    return s;
}

void require_nested(const GridSpec& coarse, const GridSpec& fine, const char* context) {
    const auto same_extent = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); };
    if (!same_extent(coarse.lx, fine.lx) || !same_extent(coarse.ly, fine.ly)) {
        throw InvalidInput(std::string(context) + ": grids cover different domains");
    }
    if (coarse.nx > fine.nx || coarse.ny > fine.ny || fine.nx % coarse.nx != 0 || fine.ny % coarse.ny != 0) {
        throw InvalidInput(std::string(context) + ": coarse resolution " + std::to_string(coarse.nx) + "x" +
                           std::to_string(coarse.ny) + " does not divide fine resolution " +
                           std::to_string(fine.nx) + "x" + std::to_string(fine.ny));
    }
}

int wrap(int m, int n) { return ((m % n) + n) % n; }

} // namespace

Spectrum forward(const ScalarField& f) {
    require_finite(f, "spectral transform");
    const GridSpec& g = f.grid();
    Spectrum s{g, std::vector<Complex>(static_cast<std::size_t>(g.nx) * (g.ny / 2 + 1))};
    plans_for(g.nx, g.ny).r2c(f.values().data(), s.coeffs.data());
    return s;
}

ScalarField inverse(const Spectrum& s) {
    std::vector<Complex> scratch = s.coeffs; // c2r overwrites its input
    ScalarField out(s.grid);
    plans_for(s.grid.nx, s.grid.ny).c2r(scratch.data(), out.values().data());
    out *= 1.0 / static_cast<double>(s.grid.size());
    return out;
}

ScalarField ddx(const ScalarField& f) {
    const GridSpec& g = f.grid();
    return apply_multiplier(f, [&](int i, int) {
        return i == g.nx / 2 ? Complex{} : Complex{0.0, g.kx(i)};
    });
}

ScalarField ddy(const ScalarField& f) {
    const GridSpec& g = f.grid();
    return apply_multiplier(f, [&](int, int j) {
        return j == g.ny / 2 ? Complex{} : Complex{0.0, g.ky(j)};
    });
}

DisplacementField gradient(const ScalarField& f) {
    const Spectrum s = forward(f);
    const GridSpec& g = s.grid;
    Spectrum sx = s;
    Spectrum sy = s;
    for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < s.nyc(); ++j) {
            sx.at(i, j) *= (i == g.nx / 2) ? Complex{} : Complex{0.0, g.kx(i)};
            sy.at(i, j) *= (j == g.ny / 2) ? Complex{} : Complex{0.0, g.ky(j)};
        }
    }
    return {inverse(sx), inverse(sy)};
}

ScalarField divergence(const DisplacementField& u) {
    require_same_grid(u.u1.grid(), u.u2.grid(), "divergence");
    Spectrum a = forward(u.u1);
    const Spectrum b = forward(u.u2);
    const GridSpec& g = a.grid;
    for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < a.nyc(); ++j) {
            const Complex mx = (i == g.nx / 2) ? Complex{} : Complex{0.0, g.kx(i)};
            const Complex my = (j == g.ny / 2) ? Complex{} : Complex{0.0, g.ky(j)};
            a.at(i, j) = mx * a.at(i, j) + my * b.at(i, j);
        }
    }
    return inverse(a);
}

ScalarField curl_2d(const DisplacementField& u) {
    require_same_grid(u.u1.grid(), u.u2.grid(), "curl_2d");
    const Spectrum a = forward(u.u1);
    Spectrum b = forward(u.u2);
    const GridSpec& g = b.grid;
    for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < b.nyc(); ++j) {
            const Complex mx = (i == g.nx / 2) ? Complex{} : Complex{0.0, g.kx(i)};
            const Complex my = (j == g.ny / 2) ? Complex{} : Complex{0.0, g.ky(j)};
            b.at(i, j) = mx * b.at(i, j) - my * a.at(i, j);
        }
    }
    return inverse(b);
}

ScalarField laplacian(const ScalarField& f) {
    const GridSpec& g = f.grid();
    return apply_multiplier(f, [&](int i, int j) {
        const double k2 = g.kx(i) * g.kx(i) + g.ky(j) * g.ky(j);
        return Complex{-k2, 0.0};
    });
}

ScalarField inverse_elliptic(const ScalarField& f, double a0, double a1) {
    if (!(a0 > 0.0) || !(a1 >= 0.0)) {
        throw InvalidInput("inverse_elliptic: requires a0 > 0 and a1 >= 0");
    }
    const GridSpec& g = f.grid();
    return apply_multiplier(f, [&](int i, int j) {
        const double k2 = g.kx(i) * g.kx(i) + g.ky(j) * g.ky(j);
        return Complex{1.0 / (a0 + a1 * k2), 0.0};
    });
}

DisplacementField inverse_elliptic(const DisplacementField& u, double a0, double a1) {
    return {inverse_elliptic(u.u1, a0, a1), inverse_elliptic(u.u2, a0, a1)};
}

ScalarField inverse_helmholtz(const ScalarField& f) { return inverse_elliptic(f, 1.0, 1.0); }

DisplacementField inverse_helmholtz(const DisplacementField& u) { return inverse_elliptic(u, 1.0, 1.0); }

double hou_li_multiplier(const GridSpec& grid, int i, int j, int a) {
    if (a <= 0) throw InvalidInput("hou_li_filter: exponent must be positive, got " + std::to_string(a));
    const double rx = std::abs(grid.mode_x(i)) / (0.5 * grid.nx);
    const double ry = std::abs(grid.mode_y(j)) / (0.5 * grid.ny);
    return std::exp(-36.0 * (std::pow(rx, a) + std::pow(ry, a)));
}

ScalarField hou_li_filter(const ScalarField& f, int a) {
    if (a <= 0) throw InvalidInput("hou_li_filter: exponent must be positive, got " + std::to_string(a));
    const GridSpec& g = f.grid();
    return apply_multiplier(f, [&](int i, int j) { return Complex{hou_li_multiplier(g, i, j, a), 0.0}; });
}

ScalarField coarsen(const ScalarField& f, const GridSpec& coarse) {
    const GridSpec& fine = f.grid();
    require_nested(coarse, fine, "coarsen");
    const std::vector<Complex> ff = to_full(forward(f));
    std::vector<Complex> cf(coarse.size());
    const double scale = static_cast<double>(coarse.size()) / static_cast<double>(fine.size());
    // Fine modes +-n/2 both land on the coarse Nyquist slot, undoing the
    // even split performed by refine().
    for (int i = 0; i < fine.nx; ++i) {
        const int mx = fine.mode_x(i);
        if (std::abs(mx) > coarse.nx / 2) continue;
        for (int j = 0; j < fine.ny; ++j) {
            const int my = fine.mode_y(j);
            if (std::abs(my) > coarse.ny / 2) continue;
            cf[coarse.index(wrap(mx, coarse.nx), wrap(my, coarse.ny))] += ff[fine.index(i, j)] * scale;
        }
    }
    return inverse(from_full(coarse, cf));
}

ScalarField refine(const ScalarField& f, const GridSpec& fine) {
    const GridSpec& coarse = f.grid();
    require_nested(coarse, fine, "refine");
    const std::vector<Complex> cf = to_full(forward(f));
    std::vector<Complex> ff(fine.size());
    const double scale = static_cast<double>(fine.size()) / static_cast<double>(coarse.size());
    for (int i = 0; i < coarse.nx; ++i) {
        const int mx = coarse.mode_x(i);
        const bool nyq_x = (mx == coarse.nx / 2);
        for (int j = 0; j < coarse.ny; ++j) {
            const int my = coarse.mode_y(j);
            const bool nyq_y = (my == coarse.ny / 2);
            const Complex c = cf[coarse.index(i, j)] * scale;
            const int xs[2] = {mx, -mx};
            const int ys[2] = {my, -my};
            const int nxs = nyq_x ? 2 : 1;
            const int nys = nyq_y ? 2 : 1;
            const double w = 1.0 / (nxs * nys);
            for (int a = 0; a < nxs; ++a) {
                for (int b = 0; b < nys; ++b) {
                    ff[fine.index(wrap(xs[a], fine.nx), wrap(ys[b], fine.ny))] += c * w;
                }
            }
        }
    }
    return inverse(from_full(fine, ff));
}

ScalarField low_pass(const ScalarField& f, const GridSpec& coarse) { return refine(coarsen(f, coarse), f.grid()); }

} // namespace geomorph::spectral
