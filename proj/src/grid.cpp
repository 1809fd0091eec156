#include "geomorph/grid.hpp"

#include "geomorph/errors.hpp"

#include <cmath>
#include <string>

namespace geomorph {

GridSpec::GridSpec(int nx_, int ny_, double lx_, double ly_) : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
    if (nx < 4 || ny < 4 || nx % 2 != 0 || ny % 2 != 0) {
        throw InvalidInput("grid resolution must be even and >= 4, got " + std::to_string(nx) + "x" +
                           std::to_string(ny));
    }
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
        throw InvalidInput("grid extents must be positive and finite");
    }
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* context) {
    if (!(a == b)) {
        throw InvalidInput(std::string(context) + ": grid mismatch (" + std::to_string(a.nx) + "x" +
                           std::to_string(a.ny) + " vs " + std::to_string(b.nx) + "x" + std::to_string(b.ny) +
                           ")");
    }
}

} // namespace geomorph
