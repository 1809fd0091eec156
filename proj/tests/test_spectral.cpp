#include "geomorph/errors.hpp"
#include "geomorph/spectral.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace geomorph;
using namespace geomorph::testing;
namespace sp = geomorph::spectral;

namespace {
const GridSpec kGrid(64, 64, 5000.0, 4000.0);
}

TEST_CASE("GridSpec rejects odd or tiny resolutions and bad extents") {
    CHECK_THROWS_AS(GridSpec(63, 64, 1.0, 1.0), InvalidInput);
    CHECK_THROWS_AS(GridSpec(2, 4, 1.0, 1.0), InvalidInput);
    CHECK_THROWS_AS(GridSpec(8, 8, 0.0, 1.0), InvalidInput);
    CHECK_THROWS_AS(GridSpec(8, 8, 1.0, -2.0), InvalidInput);
    const GridSpec g(8, 16, 2.0, 4.0);
    CHECK(g.dx() == doctest::Approx(0.25));
    CHECK(g.dy() == doctest::Approx(0.25));
    CHECK(g.kx(5) == doctest::Approx(2.0 * kPi * -3 / 2.0));
}

TEST_CASE("gradient of a constant vanishes") {
    const auto grad = sp::gradient(ScalarField(kGrid, 3.7));
    CHECK(grad.u1.max_abs() < 1e-12);
    CHECK(grad.u2.max_abs() < 1e-12);
}

TEST_CASE("gradient of sin(2 pi x / lx) matches the analytic derivative") {
    const double k = 2.0 * kPi / kGrid.lx;
    const auto f = ScalarField::from_function(kGrid, [&](double x, double) { return std::sin(k * x); });
    const auto expected = ScalarField::from_function(kGrid, [&](double x, double) { return k * std::cos(k * x); });
    const auto grad = sp::gradient(f);
    CHECK(max_abs_diff(grad.u1, expected) <= 1e-10);
    CHECK(grad.u2.max_abs() <= 1e-10);
}

TEST_CASE("gradient of a product of sines obeys the product rule") {
    const double kx = 2.0 * kPi / kGrid.lx;
    const double ky = 2.0 * kPi / kGrid.ly;
    const auto f = ScalarField::from_function(kGrid, [&](double x, double y) { return std::sin(kx * x) * std::sin(ky * y); });
    const auto fx = ScalarField::from_function(kGrid, [&](double x, double y) { return kx * std::cos(kx * x) * std::sin(ky * y); });
    const auto fy = ScalarField::from_function(kGrid, [&](double x, double y) { return ky * std::sin(kx * x) * std::cos(ky * y); });
    const auto grad = sp::gradient(f);
    CHECK(max_abs_diff(grad.u1, fx) <= 1e-10);
    CHECK(max_abs_diff(grad.u2, fy) <= 1e-10);
    CHECK(max_abs_diff(sp::ddx(f), fx) <= 1e-10);
    CHECK(max_abs_diff(sp::ddy(f), fy) <= 1e-10);
}

TEST_CASE("spectral operators reject non-finite input") {
    ScalarField f(kGrid, 1.0);
    f(3, 4) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(sp::gradient(f), InvalidInput);
    f(3, 4) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(sp::inverse_helmholtz(f), InvalidInput);
}

TEST_CASE("divergence: constants, sinusoid and stream-function fields") {
    const DisplacementField c{ScalarField(kGrid, 1.5), ScalarField(kGrid, -2.0)};
    CHECK(sp::divergence(c).max_abs() < 1e-12);

    const double k = 2.0 * kPi / kGrid.lx;
    const DisplacementField s{ScalarField::from_function(kGrid, [&](double x, double) { return std::sin(k * x); }),
                              ScalarField(kGrid)};
    const auto expected = ScalarField::from_function(kGrid, [&](double x, double) { return k * std::cos(k * x); });
    CHECK(max_abs_diff(sp::divergence(s), expected) <= 1e-10);

    const auto psi = random_band_limited(kGrid, 11);
    const auto grad = sp::gradient(psi);
    const DisplacementField stream{grad.u2, -grad.u1};
    CHECK(sp::divergence(stream).max_abs() <= 1e-10 * (1.0 + grad.max_abs()));
}

TEST_CASE("curl_2d: gradients, solid-body-like rotation and constants") {
    const auto f = random_band_limited(kGrid, 5);
    CHECK(sp::curl_2d(sp::gradient(f)).max_abs() <= 1e-10);

    // Periodic analogue of (-y, x): (-sin(ky y), sin(kx x)); curl = kx cos(kx x) + ky cos(ky y).
    const double kx = 2.0 * kPi / kGrid.lx;
    const double ky = 2.0 * kPi / kGrid.ly;
    const DisplacementField rot{ScalarField::from_function(kGrid, [&](double, double y) { return -std::sin(ky * y); }),
                                ScalarField::from_function(kGrid, [&](double x, double) { return std::sin(kx * x); })};
    const auto expected = ScalarField::from_function(
        kGrid, [&](double x, double y) { return kx * std::cos(kx * x) + ky * std::cos(ky * y); });
    CHECK(max_abs_diff(sp::curl_2d(rot), expected) <= 1e-10);

    const DisplacementField c{ScalarField(kGrid, 4.0), ScalarField(kGrid, 9.0)};
    CHECK(sp::curl_2d(c).max_abs() < 1e-12);
}

TEST_CASE("inverse_helmholtz: constants, eigenfunctions and round trip") {
    CHECK(max_abs_diff(sp::inverse_helmholtz(ScalarField(kGrid, 2.5)), ScalarField(kGrid, 2.5)) <= 1e-12);

    // Unit-length domain so that k = 2 pi makes the eigenvalue 1 + k^2 non-trivial.
    const GridSpec g(32, 32, 1.0, 1.0);
    const double k = 2.0 * kPi / g.lx;
    const auto sinkx = ScalarField::from_function(g, [&](double x, double) { return std::sin(k * x); });
    CHECK(max_abs_diff(sp::inverse_helmholtz((1.0 + k * k) * sinkx), sinkx) <= 1e-12);

    const auto f = random_band_limited(g, 99, 4);
    const auto gsol = sp::inverse_helmholtz(f);
    const auto back = gsol - sp::laplacian(gsol);
    CHECK(max_abs_diff(back, f) <= 1e-10);
}

TEST_CASE("inverse_helmholtz is linear") {
    const GridSpec g(32, 32, 1.0, 2.0);
    const auto f = random_band_limited(g, 1);
    const auto h = random_band_limited(g, 2);
    const double alpha = 0.7;
    const double beta = -1.3;
    const auto lhs = sp::inverse_helmholtz(alpha * f + beta * h);
    const auto rhs = alpha * sp::inverse_helmholtz(f) + beta * sp::inverse_helmholtz(h);
    CHECK(max_abs_diff(lhs, rhs) <= 1e-12);
}

TEST_CASE("spectral derivatives integrate to zero on the torus") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto f = random_band_limited(kGrid, seed, 5, 3.0);
        const auto grad = sp::gradient(f);
        const double scale = grad.max_abs() * kGrid.area();
        CHECK(std::abs(grad.u1.integral()) <= 1e-12 * scale);
        CHECK(std::abs(grad.u2.integral()) <= 1e-12 * scale);
        CHECK(std::abs(sp::laplacian(f).integral()) <= 1e-12 * sp::laplacian(f).max_abs() * kGrid.area());
    }
}

TEST_CASE("Hou-Li multiplier values") {
    const GridSpec g(64, 64, 5000.0, 5000.0);
    CHECK(sp::hou_li_multiplier(g, 0, 0, 12) == 1.0);
    const double at_kmax = sp::hou_li_multiplier(g, g.nx / 2, 0, 12);
    CHECK(std::abs(at_kmax - std::exp(-36.0)) <= 1e-18);
    CHECK(at_kmax == doctest::Approx(2.319522830243569e-16).epsilon(1e-12));
    CHECK_THROWS_AS(sp::hou_li_multiplier(g, 1, 1, 0), InvalidInput);
    CHECK_THROWS_AS(sp::hou_li_filter(ScalarField(g), -2), InvalidInput);
}

TEST_CASE("Hou-Li multiplier decays monotonically in |k|") {
    const GridSpec g(64, 64, 1.0, 1.0);
    for (int a : {12, 36}) {
        double prev = 2.0;
        for (int i = 0; i <= g.nx / 2; ++i) {
            const double m = sp::hou_li_multiplier(g, i, 0, a);
            CHECK(m <= prev);
            prev = m;
        }
        prev = 2.0;
        for (int d = 0; d <= g.nx / 2; ++d) {
            const double m = sp::hou_li_multiplier(g, d, d, a);
            CHECK(m <= prev);
            prev = m;
        }
    }
}

TEST_CASE("Hou-Li filter leaves constants unchanged and damps the grid-scale mode") {
    const ScalarField c(kGrid, 7.25);
    CHECK(max_abs_diff(sp::hou_li_filter(c, 12), c) <= 1e-12);
    CHECK(max_abs_diff(sp::hou_li_filter(c, 36), c) <= 1e-12);
    const auto zigzag = ScalarField::from_function(kGrid, [&](double x, double) { return std::cos(kPi * x / kGrid.dx()); });
    CHECK(sp::hou_li_filter(zigzag, 12).max_abs() <= 1e-15);
}

TEST_CASE("coarsen and refine: constants, round trip and surviving modes") {
    const GridSpec fine(64, 64, 3.0, 3.0);
    const GridSpec coarse(16, 16, 3.0, 3.0);
    const ScalarField c(fine, -1.25);
    CHECK(max_abs_diff(sp::coarsen(c, coarse), ScalarField(coarse, -1.25)) <= 1e-12);
    CHECK(max_abs_diff(sp::refine(ScalarField(coarse, 4.0), fine), ScalarField(fine, 4.0)) <= 1e-12);

    // Arbitrary coarse data, including energy at the coarse Nyquist.
    std::mt19937_64 rng(42);
    std::normal_distribution<double> nd;
    ScalarField g(coarse);
    for (auto& v : g.values()) v = nd(rng);
    CHECK(max_abs_diff(sp::coarsen(sp::refine(g, fine), coarse), g) <= 1e-12);

    const double k = 2.0 * kPi * 5 / fine.lx; // mode 5 < coarse Nyquist 8
    const auto mode_fine = ScalarField::from_function(fine, [&](double x, double y) { return std::cos(k * x + 2.0 * k * y / 5.0 * 3.0); });
    const auto mode_coarse = ScalarField::from_function(coarse, [&](double x, double y) { return std::cos(k * x + 2.0 * k * y / 5.0 * 3.0); });
    CHECK(max_abs_diff(sp::coarsen(mode_fine, coarse), mode_coarse) <= 1e-12);
    CHECK(max_abs_diff(sp::refine(mode_coarse, fine), mode_fine) <= 1e-12);
    CHECK(max_abs_diff(sp::low_pass(mode_fine, coarse), mode_fine) <= 1e-12);
}

TEST_CASE("low_pass removes modes above the coarse Nyquist") {
    const GridSpec fine(32, 32, 1.0, 1.0);
    const GridSpec coarse(8, 8, 1.0, 1.0);
    const auto high = ScalarField::from_function(fine, [&](double x, double) { return std::sin(2.0 * kPi * 9 * x); });
    CHECK(sp::low_pass(high, coarse).max_abs() <= 1e-12);
}

TEST_CASE("coarsen and refine reject incompatible grids") {
    const GridSpec fine(64, 64, 1.0, 1.0);
    CHECK_THROWS_AS(sp::coarsen(ScalarField(fine), GridSpec(24, 24, 1.0, 1.0)), InvalidInput);
    CHECK_THROWS_AS(sp::coarsen(ScalarField(fine), GridSpec(16, 16, 2.0, 1.0)), InvalidInput);
    CHECK_THROWS_AS(sp::refine(ScalarField(fine), GridSpec(16, 16, 1.0, 1.0)), InvalidInput);
}

TEST_CASE("operators preserve grid and finiteness") {
    const auto f = random_band_limited(kGrid, 3);
    for (const auto& out : {sp::ddx(f), sp::laplacian(f), sp::inverse_helmholtz(f), sp::hou_li_filter(f, 12)}) {
        CHECK(out.grid() == kGrid);
        CHECK(out.all_finite());
    }
}
