#include <catch_amalgamated.hpp>

#include "module_fixtures.hpp"
#include "toroidalkit/cyclicity.hpp"

using namespace toroidalkit;
using namespace fixtures;

TEST_CASE("characteristic polynomial") {
    DenseMatrix a(2, 2);
    a(0, 0) = 2;
    a(0, 1) = 1;
    a(1, 1) = 3;
    CHECK(detail::char_poly(a) == Poly{6, -5, 1});
}

TEST_CASE("generic tensor module regenerates the window") {
    auto t = tau3();
    TensorModule M(t, tau_spec(Rational(1, 2), {1}, {0, 0}, {Rational(1, 3), 0, 0}));
    auto rep = window_cyclicity_report(full_module_target(M), *t, WeightWindow::cube(3, -2, 2), 6, 42);
    CHECK(rep.pass);
    CHECK(rep.fibers == 125);
    CHECK(rep.fiber_dim_total == 250);
    CHECK_FALSE(rep.invariant_family);
}

TEST_CASE("exceptional module exhibits the d_0 image family") {
    auto t = tau3();
    std::vector<Rational> alpha{Rational(1, 3), 0, 0};
    auto window = WeightWindow::cube(3, -2, 2);
    TensorModule L1(t, differential_form_spec(3, 1, alpha, 1));
    auto rep = window_cyclicity_report(full_module_target(L1), *t, window, 6, 42);
    CHECK_FALSE(rep.pass);
    REQUIRE(rep.invariant_family);
    DeRham dr(3, alpha);
    for (const auto& [r, fam] : *rep.invariant_family) {
        auto img = dr.image_fiber(0, r);
        CHECK(fam.size() == img.size());
        CHECK(fam == img);
    }

    TensorModule L1zero(t, differential_form_spec(3, 1, {0, 0, 0}, 1));
    CHECK_FALSE(window_cyclicity_report(full_module_target(L1zero), *t, window, 6, 42).pass);
}

TEST_CASE("image module regenerates the window") {
    auto t = tau3();
    std::vector<Rational> alpha{Rational(1, 3), 0, 0};
    DeRham dr(3, alpha);
    TensorModule L1(t, differential_form_spec(3, 1, alpha, 1));
    auto rep = window_cyclicity_report(derham_image_target(dr, 0, L1), *t, WeightWindow::cube(3, -2, 2), 6, 42);
    CHECK(rep.pass);
    CHECK(rep.fiber_dim_total == 125);
}
