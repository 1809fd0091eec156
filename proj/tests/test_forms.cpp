#include "geomorph/errors.hpp"
#include "geomorph/forms.hpp"
#include "geomorph/spectral.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace geomorph;
using namespace geomorph::testing;
namespace sp = geomorph::spectral;

namespace {
const GridSpec kGrid(32, 32, 2.0, 3.0);
}

TEST_CASE("DiffForm enforces component count per degree") {
    const auto f = random_band_limited(kGrid, 1);
    CHECK(DiffForm::function(f).component_count() == 1);
    CHECK(DiffForm::one_form(f, f).component_count() == 2);
    CHECK(DiffForm::density(f).component_count() == 1);
    CHECK_THROWS_AS(DiffForm::one_form(f, ScalarField(GridSpec(8, 8, 1.0, 1.0))), InvalidInput);
    CHECK_THROWS_AS(DiffForm::one_form(f, f).scalar(), InvalidInput);
    CHECK_THROWS_AS(DiffForm::function(f) + DiffForm::density(f), InvalidInput);
}

TEST_CASE("lie_derivative with zero flow vanishes for every degree") {
    const auto f = random_band_limited(kGrid, 2);
    const DisplacementField zero(kGrid);
    for (const auto& theta : {DiffForm::function(f), DiffForm::one_form(f, 2.0 * f), DiffForm::density(f)}) {
        const auto l = lie_derivative(theta, zero);
        CHECK(l.degree() == theta.degree());
        for (std::size_t k = 0; k < l.component_count(); ++k) CHECK(l.component(k).max_abs() <= 1e-12);
    }
}

TEST_CASE("lie_derivative of a constant function vanishes") {
    const auto u = random_vector_field(kGrid, 3);
    CHECK(lie_derivative(DiffForm::function(ScalarField(kGrid, 4.0)), u).scalar().max_abs() <= 1e-12);
}

TEST_CASE("lie_derivative of a constant density along a divergence-free flow vanishes") {
    const auto psi = random_band_limited(kGrid, 4);
    const auto g = sp::gradient(psi);
    const DisplacementField u{g.u2, -g.u1};
    const auto l = lie_derivative(DiffForm::density(ScalarField(kGrid, 2.5)), u);
    CHECK(l.scalar().max_abs() <= 1e-10 * (1.0 + u.max_abs()));
}

TEST_CASE("lie_derivative of dx1 along a shear flow matches the component formula") {
    const double k = 2.0 * kPi / kGrid.ly;
    const auto alpha = DiffForm::one_form(ScalarField(kGrid, 1.0), ScalarField(kGrid, 0.0));
    const DisplacementField u{ScalarField::from_function(kGrid, [&](double, double y) { return std::sin(k * y); }),
                              ScalarField(kGrid)};
    const auto l = lie_derivative(alpha, u);
    const auto expected = ScalarField::from_function(kGrid, [&](double, double y) { return k * std::cos(k * y); });
    CHECK(l.component(0).max_abs() <= 1e-10);
    CHECK(max_abs_diff(l.component(1), expected) <= 1e-10);
}

TEST_CASE("lie_derivative on 0- and 2-forms matches the transport terms") {
    const auto f = random_band_limited(kGrid, 5, 3, 2.0);
    const auto u = random_vector_field(kGrid, 6);
    const auto gf = sp::gradient(f);
    const auto adv = multiply(u.u1, gf.u1) + multiply(u.u2, gf.u2);
    CHECK(max_abs_diff(lie_derivative(DiffForm::function(f), u).scalar(), adv) <= 1e-10);
    const auto flux = sp::divergence({multiply(f, u.u1), multiply(f, u.u2)});
    CHECK(max_abs_diff(lie_derivative(DiffForm::density(f), u).scalar(), flux) <= 1e-10);
}

TEST_CASE("lie_derivative is bilinear") {
    const auto a = random_band_limited(kGrid, 7);
    const auto b = random_band_limited(kGrid, 8);
    const auto u = random_vector_field(kGrid, 9);
    const auto w = random_vector_field(kGrid, 10);
    const double s = 0.6, t = -1.7;
    for (const auto make : {+[](const ScalarField& x, const ScalarField&) { return DiffForm::function(x); },
                            +[](const ScalarField& x, const ScalarField& y) { return DiffForm::one_form(x, y); },
                            +[](const ScalarField& x, const ScalarField&) { return DiffForm::density(x); }}) {
        const auto ta = make(a, b);
        const auto tb = make(b, a);
        const auto lin_theta = lie_derivative(s * ta + t * tb, u);
        const auto expected_theta = s * lie_derivative(ta, u) + t * lie_derivative(tb, u);
        CHECK(max_abs_diff(lin_theta, expected_theta) <= 1e-12 * (1.0 + lin_theta.component(0).max_abs()));
        const auto lin_u = lie_derivative(ta, s * u + t * w);
        const auto expected_u = s * lie_derivative(ta, u) + t * lie_derivative(ta, w);
        CHECK(max_abs_diff(lin_u, expected_u) <= 1e-12 * (1.0 + lin_u.component(0).max_abs()));
    }
}

TEST_CASE("exterior derivative: dd = 0, gradient and curl cross-checks") {
    const auto f = random_band_limited(kGrid, 11, 4);
    const auto df = exterior_derivative(DiffForm::function(f));
    CHECK(df.degree() == Degree::One);
    CHECK(exterior_derivative(df).scalar().max_abs() <= 1e-10);

    const double k = 2.0 * kPi / kGrid.lx;
    const auto s = ScalarField::from_function(kGrid, [&](double x, double) { return std::sin(k * x); });
    const auto ds = exterior_derivative(DiffForm::function(s));
    const auto grad = sp::gradient(s);
    CHECK(max_abs_diff(ds.component(0), grad.u1) <= 1e-14);
    CHECK(max_abs_diff(ds.component(1), grad.u2) <= 1e-14);

    const auto v = random_vector_field(kGrid, 12);
    CHECK(max_abs_diff(exterior_derivative(flat(v)).scalar(), sp::curl_2d(v)) <= 1e-14);

    CHECK_THROWS_AS(exterior_derivative(DiffForm::density(f)), InvalidInput);
}

TEST_CASE("hodge star table and double-star identity") {
    const auto a = random_band_limited(kGrid, 13);
    const auto b = random_band_limited(kGrid, 14);
    const auto alpha = DiffForm::one_form(a, b);
    const auto star = hodge_star(alpha);
    CHECK(max_abs_diff(star.component(0), -b) == 0.0);
    CHECK(max_abs_diff(star.component(1), a) == 0.0);
    CHECK(max_abs_diff(hodge_star(star), alpha * -1.0) == 0.0);
    CHECK(hodge_star(DiffForm::function(a)).degree() == Degree::Two);
    CHECK(hodge_star(DiffForm::density(a)).degree() == Degree::Zero);
}

TEST_CASE("codifferential: zero on functions and constants, explicit 1-form value") {
    const auto f = random_band_limited(kGrid, 15);
    CHECK(codifferential(DiffForm::function(f)).scalar().max_abs() == 0.0);
    const auto c = DiffForm::one_form(ScalarField(kGrid, 3.0), ScalarField(kGrid, -1.0));
    CHECK(codifferential(c).scalar().max_abs() <= 1e-12);
    const auto v = random_vector_field(kGrid, 16);
    CHECK(max_abs_diff(codifferential(flat(v)).scalar(), -sp::divergence(v)) <= 1e-12);
}

TEST_CASE("codifferential is the adjoint of d") {
    for (std::uint64_t seed = 20; seed < 25; ++seed) {
        const auto f = random_band_limited(kGrid, seed, 4);
        const auto alpha = flat(random_vector_field(kGrid, seed + 100, 4));
        const double lhs = inner(exterior_derivative(DiffForm::function(f)), alpha);
        const double rhs = inner(DiffForm::function(f), codifferential(alpha));
        CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));

        const auto beta = DiffForm::density(random_band_limited(kGrid, seed + 200, 4));
        const double lhs2 = inner(exterior_derivative(alpha), beta);
        const double rhs2 = inner(alpha, codifferential(beta));
        CHECK(std::abs(lhs2 - rhs2) <= 1e-10 * (1.0 + std::abs(lhs2)));
    }
}

TEST_CASE("h1_norm closed forms") {
    const GridSpec g(64, 64, 1.0, 2.0);
    CHECK(h1_norm(DisplacementField(g)) == 0.0);
    const double c = -1.5;
    CHECK(h1_norm({ScalarField(g, c), ScalarField(g)}) == doctest::Approx(std::abs(c) * std::sqrt(g.area())).epsilon(1e-12));
    const double k = 2.0 * kPi / g.lx;
    const DisplacementField s{ScalarField::from_function(g, [&](double x, double) { return std::sin(k * x); }), ScalarField(g)};
    const double expected = std::sqrt(g.lx * g.ly / 2.0 * (1.0 + k * k));
    CHECK(h1_norm(s) == doctest::Approx(expected).epsilon(1e-12));
}
