#include "geomorph/errors.hpp"
#include "geomorph/interpolation.hpp"
#include "geomorph/pushforward.hpp"
#include "geomorph/spectral.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace geomorph;
using namespace geomorph::testing;

namespace {

// Rotational 1-form v = (-(y - cy), x - cx) * bump, centred in the domain.
DiffForm swirl(const GridSpec& g, double cx, double cy, double r) {
    const auto a1 = ScalarField::from_function(g, [&](double x, double y) {
        return -(y - cy) * std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (2 * r * r));
    });
    const auto a2 = ScalarField::from_function(g, [&](double x, double y) {
        return (x - cx) * std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (2 * r * r));
    });
    return DiffForm::one_form(a1, a2);
}

double order(double e_coarse, double e_fine) { return std::log2(e_coarse / e_fine); }

} // namespace

TEST_CASE("bicubic interpolant reproduces nodal values and smooth fields") {
    const GridSpec g(32, 32, 1.0, 1.0);
    const auto f = random_band_limited(g, 3, 2);
    const PeriodicBicubic interp(f);
    for (int i = 0; i < g.nx; i += 5) {
        for (int j = 0; j < g.ny; j += 3) CHECK(interp(g.x(i), g.y(j)) == doctest::Approx(f(i, j)).epsilon(1e-13));
    }
    // Periodic wrap.
    CHECK(interp(g.x(3) + 2.0 * g.lx, g.y(4) - g.ly) == doctest::Approx(f(3, 4)).epsilon(1e-12));
    // Off-grid accuracy on a low mode.
    const double k = 2.0 * kPi;
    const auto s = ScalarField::from_function(g, [&](double x, double y) { return std::sin(k * x) * std::cos(k * y); });
    const PeriodicBicubic is(s);
    double err = 0.0;
    for (double x = 0.013; x < 1.0; x += 0.071) {
        for (double y = 0.007; y < 1.0; y += 0.093) err = std::max(err, std::abs(is(x, y) - std::sin(k * x) * std::cos(k * y)));
    }
    CHECK(err < 1e-5);
}

TEST_CASE("identity pushforward returns the form unchanged") {
    const GridSpec g(32, 32, 2.0, 2.0);
    const auto f = random_band_limited(g, 1);
    const auto h = random_band_limited(g, 2);
    for (const auto& theta : {DiffForm::function(f), DiffForm::one_form(f, h), DiffForm::density(h)}) {
        CHECK(max_abs_diff(pushforward(theta, AnalyticMap::identity()), theta) <= 1e-8);
    }
}

TEST_CASE("rotating a rotationally symmetric 1-form leaves it unchanged; naive composition does not") {
    const GridSpec g(64, 64, 1.0, 1.0);
    const double c = 0.5;
    const auto v = swirl(g, c, c, 0.08);
    const auto clockwise = AnalyticMap::rotation(c, c, -kPi / 2.0);
    const auto pushed = pushforward(v, clockwise);
    CHECK(max_abs_diff(pushed, v) <= 1e-8);
    const auto naive = compose_naive(v, clockwise);
    const double scale = std::max(v.component(0).max_abs(), v.component(1).max_abs());
    CHECK(max_abs_diff(naive, v) > 0.5 * scale);
}

TEST_CASE("density pushforward preserves total mass") {
    const GridSpec g(128, 128, 1.0, 1.0);
    const auto rho = DiffForm::density(bump_field(g, 0.45, 0.55, 0.1, 2.0, 1.0));
    const double mass = rho.scalar().integral();

    const auto shifted = pushforward(rho, AnalyticMap::translation(0.1234, -0.0567));
    CHECK(std::abs(shifted.scalar().integral() - mass) <= 1e-6 * mass);

    const auto rotated = pushforward(rho, AnalyticMap::rotation(0.5, 0.5, kPi / 2.0));
    CHECK(std::abs(rotated.scalar().integral() - mass) <= 1e-6 * mass);

    const AnalyticFlow flow{g, 1.0};
    const auto warped = pushforward(rho, near_identity_map(flow, 0.05));
    CHECK(std::abs(warped.scalar().integral() - mass) <= 1e-6 * mass);

    // The naive rule loses mass under a compressive map.
    const auto naive = compose_naive(rho, near_identity_map(flow, 0.05));
    CHECK(std::abs(naive.scalar().integral() - mass) > 1e-4 * mass);
}

TEST_CASE("1-form pushforward preserves total vorticity") {
    const GridSpec g(64, 64, 1.0, 1.0);
    const auto alpha = flat(random_vector_field(g, 33));
    const AnalyticFlow flow{g, 1.0};
    const auto pushed = pushforward(alpha, near_identity_map(flow, 0.03));
    const double before = exterior_derivative(alpha).scalar().integral();
    const double after = exterior_derivative(pushed).scalar().integral();
    CHECK(std::abs(after - before) <= 1e-6);
}

TEST_CASE("exterior derivative commutes with pushforward") {
    const GridSpec g(64, 64, 1.0, 1.0);
    // Grid-to-grid rotation: interpolation only ever hits nodes.
    const auto rot = AnalyticMap::rotation(0.5, 0.5, kPi / 2.0);
    const auto f = DiffForm::function(bump_field(g, 0.4, 0.45, 0.08));
    CHECK(max_abs_diff(exterior_derivative(pushforward(f, rot)), pushforward(exterior_derivative(f), rot)) <= 1e-8);
    const auto alpha = swirl(g, 0.45, 0.5, 0.07);
    CHECK(max_abs_diff(exterior_derivative(pushforward(alpha, rot)), pushforward(exterior_derivative(alpha), rot)) <= 1e-8);

    // General smooth map: agreement to interpolation accuracy.
    const AnalyticFlow flow{g, 1.0};
    const auto warp = near_identity_map(flow, 0.02);
    const auto smooth = DiffForm::function(random_band_limited(g, 77, 2));
    const auto lhs = exterior_derivative(pushforward(smooth, warp));
    const auto rhs = pushforward(exterior_derivative(smooth), warp);
    CHECK(max_abs_diff(lhs, rhs) <= 1e-3 * rhs.component(0).max_abs());
}

TEST_CASE("pushforward along x + eps u agrees with theta - eps L_u theta to second order") {
    const GridSpec g(64, 64, 1.0, 1.0);
    const AnalyticFlow flow{g, 1.0};
    const auto u = flow.sampled();
    const auto a = random_band_limited(g, 41, 2, 1.5);
    const auto b = random_band_limited(g, 42, 2);
    for (const auto& theta : {DiffForm::function(a), DiffForm::one_form(a, b), DiffForm::density(a)}) {
        const auto lie = lie_derivative(theta, u);
        double errs[3];
        const double eps[3] = {1e-2, 5e-3, 2.5e-3};
        for (int n = 0; n < 3; ++n) {
            const auto pushed = pushforward(theta, near_identity_map(flow, eps[n]));
            const auto linear = theta - eps[n] * lie;
            errs[n] = max_abs_diff(pushed, linear);
        }
        INFO("degree " << theta.degree_int() << " errors " << errs[0] << " " << errs[1] << " " << errs[2]);
        CHECK(order(errs[0], errs[1]) >= 1.9);
        CHECK(order(errs[1], errs[2]) >= 1.9);
    }
}

TEST_CASE("maps that are not inverse pairs or reverse orientation are rejected") {
    const GridSpec g(16, 16, 1.0, 1.0);
    const auto f = DiffForm::function(ScalarField(g, 1.0));
    AnalyticMap bad = AnalyticMap::identity();
    bad.inverse = [](double x, double y) { return AnalyticMap::Point{x + 0.1, y}; };
    CHECK_THROWS_AS(pushforward(f, bad), InvalidInput);

    AnalyticMap flip;
    flip.forward = [](double x, double y) { return AnalyticMap::Point{-x, y}; };
    flip.inverse = flip.forward;
    flip.jacobian_of_inverse = [](double, double) { return AnalyticMap::Jacobian{-1.0, 0.0, 0.0, 1.0}; };
    CHECK_THROWS_AS(pushforward(f, flip), InvalidInput);

    AnalyticMap nan_map = AnalyticMap::identity();
    nan_map.inverse = [](double, double) {
        return AnalyticMap::Point{std::numeric_limits<double>::quiet_NaN(), 0.0};
    };
    CHECK_THROWS_AS(compose_naive(f, nan_map), InvalidInput);
}
