#pragma once

#include <cstddef>
#include <numbers>

namespace geomorph {

/// Doubly-periodic rectangular grid. Values live at (i*dx, j*dy),
/// i in [0, nx), j in [0, ny). Storage is row-major with y contiguous.
struct GridSpec {
    int nx = 0;
    int ny = 0;
    double lx = 0.0;
    double ly = 0.0;

    GridSpec() = default;
    GridSpec(int nx_, int ny_, double lx_, double ly_);

    double dx() const { return lx / nx; }
    double dy() const { return ly / ny; }
    double area() const { return lx * ly; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }

    double x(int i) const { return i * dx(); }
    double y(int j) const { return j * dy(); }

    /// Signed mode index for FFT position i along x (or j along y).
    int mode_x(int i) const { return i <= nx / 2 ? i : i - nx; }
    int mode_y(int j) const { return j <= ny / 2 ? j : j - ny; }

    /// Physical wavenumbers in radians per length unit.
    double kx(int i) const { return 2.0 * std::numbers::pi * mode_x(i) / lx; }
    double ky(int j) const { return 2.0 * std::numbers::pi * mode_y(j) / ly; }

    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(j);
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Throws InvalidInput unless the two grids are identical.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* context);

} // namespace geomorph
