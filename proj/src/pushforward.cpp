#include "geomorph/pushforward.hpp"

#include "geomorph/errors.hpp"
#include "geomorph/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace geomorph {

AnalyticMap AnalyticMap::identity() { return translation(0.0, 0.0); }

AnalyticMap AnalyticMap::translation(double sx, double sy) {
    AnalyticMap m;
    m.forward = [=](double x, double y) { return Point{x + sx, y + sy}; };
    m.inverse = [=](double x, double y) { return Point{x - sx, y - sy}; };
    m.jacobian_of_inverse = [](double, double) { return Jacobian{1.0, 0.0, 0.0, 1.0}; };
    return m;
}

AnalyticMap AnalyticMap::rotation(double cx, double cy, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    AnalyticMap m;
    m.forward = [=](double x, double y) {
        const double dx = x - cx, dy = y - cy;
        return Point{cx + c * dx - s * dy, cy + s * dx + c * dy};
    };
    m.inverse = [=](double x, double y) {
        const double dx = x - cx, dy = y - cy;
        return Point{cx + c * dx + s * dy, cy - s * dx + c * dy};
    };
    m.jacobian_of_inverse = [=](double, double) { return Jacobian{c, s, -s, c}; };
    return m;
}

void validate_map(const AnalyticMap& map, const GridSpec& grid) {
    if (!map.forward || !map.inverse || !map.jacobian_of_inverse) {
        throw InvalidInput("AnalyticMap: forward, inverse and jacobian_of_inverse are all required");
    }
    const auto periodic_gap = [](double d, double period) { return std::abs(d - period * std::round(d / period)); };
    const int stride_x = std::max(1, grid.nx / 8);
    const int stride_y = std::max(1, grid.ny / 8);
    for (int i = 0; i < grid.nx; i += stride_x) {
        for (int j = 0; j < grid.ny; j += stride_y) {
            const double x = grid.x(i), y = grid.y(j);
            const auto p = map.inverse(x, y);
            const auto q = map.forward(p[0], p[1]);
            if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || periodic_gap(q[0] - x, grid.lx) > 1e-9 * grid.lx ||
                periodic_gap(q[1] - y, grid.ly) > 1e-9 * grid.ly) {
                throw InvalidInput("AnalyticMap: forward(inverse(p)) != p at grid point (" + std::to_string(i) + ", " +
                                   std::to_string(j) + ")");
            }
            const auto J = map.jacobian_of_inverse(x, y);
            const double det = J[0] * J[3] - J[1] * J[2];
            if (!(det > 0.0)) {
                throw InvalidInput("AnalyticMap: inverse is not orientation-preserving at grid point (" +
                                   std::to_string(i) + ", " + std::to_string(j) + ")");
            }
        }
    }
}

namespace {

std::vector<PeriodicBicubic> interpolants(const DiffForm& theta) {
    std::vector<PeriodicBicubic> out;
    for (std::size_t k = 0; k < theta.component_count(); ++k) out.emplace_back(theta.component(k));
    return out;
}

} // namespace

DiffForm pushforward(const DiffForm& theta, const AnalyticMap& map) {
    const GridSpec& g = theta.grid();
    validate_map(map, g);
    const auto interp = interpolants(theta);
    DiffForm out = DiffForm::zero(theta.degree(), g);
    for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.ny; ++j) {
            const double x = g.x(i), y = g.y(j);
            const auto p = map.inverse(x, y);
            switch (theta.degree()) {
            case Degree::Zero:
                out.component(0)(i, j) = interp[0](p[0], p[1]);
                break;
            case Degree::Two: {
                const auto J = map.jacobian_of_inverse(x, y);
                out.component(0)(i, j) = interp[0](p[0], p[1]) * (J[0] * J[3] - J[1] * J[2]);
                break;
            }
            case Degree::One: {
                const auto J = map.jacobian_of_inverse(x, y);
                const double a1 = interp[0](p[0], p[1]);
                const double a2 = interp[1](p[0], p[1]);
                out.component(0)(i, j) = a1 * J[0] + a2 * J[2];
                out.component(1)(i, j) = a1 * J[1] + a2 * J[3];
                break;
            }
            }
        }
    }
    return out;
}

DiffForm compose_naive(const DiffForm& theta, const AnalyticMap& map) {
    const GridSpec& g = theta.grid();
    validate_map(map, g);
    const auto interp = interpolants(theta);
    DiffForm out = DiffForm::zero(theta.degree(), g);
    for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.ny; ++j) {
            const auto p = map.inverse(g.x(i), g.y(j));
            for (std::size_t k = 0; k < interp.size(); ++k) out.component(k)(i, j) = interp[k](p[0], p[1]);
        }
    }
    return out;
}

} // namespace geomorph
