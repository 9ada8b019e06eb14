#include <catch_amalgamated.hpp>

#include "module_fixtures.hpp"

using namespace toroidalkit;
using namespace fixtures;

TEST_CASE("action examples") {
    auto t = tau3();
    Degree z{0, 0, 0}, e1{1, 0, 0};
    TensorModule M(t, tau_spec(1, {1}, {1, 0}, {0, 0, 0}));
    REQUIRE(M.fiber_dim() == 6);
    // v- is V1 index 1, w = e1 of the standard gl3 module (index 0)
    ModuleVector v = ModuleVector::unit({z, 1, 0});
    CHECK(M.act(t->loop("e", e1), v) == ModuleVector::unit({e1, 0, 0}));

    ModuleVector any = ModuleVector::unit({Degree{1, -2, 0}, 0, 2});
    CHECK(M.act(t->kahler(1, Degree{0, 1, 0}), any).is_zero());

    // (t^{e1} d_2)(v ⊗ w_2 ⊗ t^0) = v ⊗ w_1 ⊗ t^{e1}
    TensorModule N(t, tau_spec(1, {0}, {1, 0}, {0, 0, 0}));
    CHECK(N.act(t->der(1, e1), ModuleVector::unit({z, 0, 1})) == ModuleVector::unit({e1, 0, 0}));
}

TEST_CASE("module axiom examples") {
    Degree z{0, 0, 0};
    {
        auto t = tau3();
        TensorModule M(t, tau_spec(Rational(1, 2), {1}, {1, 0}, {Rational(1, 3), 0, 0}));
        Rng rng(2);
        for (int s = 0; s < 20; ++s) {
            ModuleVector v = random_vector(M, rng, -2, 2);
            CHECK(M.axiom_defect(t->der(0, z), t->der(1, z), v).is_zero());
        }
        ModuleVector v = ModuleVector::unit({z, 1, 0});
        CHECK(M.axiom_defect(t->loop("e", Degree{1, 0, 0}), t->loop("f", Degree{-1, 0, 0}), v).is_zero());
    }
    {
        auto t = tau3({Rational(1), Rational(0)});
        TensorModule M(t, tau_spec(Rational(1, 2), {1}, {1, 0}, {Rational(1, 3), 0, 0}));
        for (int a = 0; a < M.v1().dim; ++a)
            for (int b = 0; b < M.v2().dim; ++b) {
                ModuleVector v = ModuleVector::unit({Degree{0, 1, 0}, a, b});
                CHECK(M.axiom_defect(t->der(0, Degree{1, 0, 0}), t->der(1, Degree{-1, 0, 0}), v).is_zero());
            }
    }
}

TEST_CASE("module axioms on random triples") {
    for (CocycleSpec phi : {CocycleSpec{0, 0}, CocycleSpec{1, 0}, CocycleSpec{2, -3}}) {
        auto t = tau3(phi);
        std::vector<TensorModule> mods;
        mods.emplace_back(t, tau_spec(Rational(1, 2), {1}, {1, 0}, {Rational(1, 3), 0, 0}));
        mods.emplace_back(t, tau_spec(Rational(-2, 3), {2}, {1, 1}, {Rational(1, 2), Rational(-1, 5), 0}));
        mods.emplace_back(t, ring_spec(1, Rational(-1, 2), Rational(1, 2), {1}, {1}, {Rational(1, 3), 0}));
        mods.emplace_back(t, ring_spec(Rational(3), Rational(2), Rational(1), {0}, {1}, {0, Rational(1, 7)}));
        for (const auto& M : mods) {
            Rng rng(31);
            for (int s = 0; s < 150; ++s) {
                AlgElement x = random_element(*t, rng, -2, 2, M.is_ring());
                AlgElement y = random_element(*t, rng, -2, 2, M.is_ring());
                ModuleVector v = random_vector(M, rng, -2, 2);
                CHECK(M.axiom_defect(x, y, v).is_zero());
            }
        }
    }
}

TEST_CASE("ring module rejects degrees outside the subalgebra") {
    auto t = tau3();
    TensorModule M(t, ring_spec(1, 0, 0, {0}, {0}, {0, 0}));
    CHECK_THROWS_AS(M.act(t->der(0, Degree{1, 0, 0}), ModuleVector::unit({Degree{0, 0, 0}, 0, 0})),
                    ConfigurationError);
    Degree z{0, 0, 0};
    ModuleVector v = ModuleVector::unit({z, 0, 0});
    CHECK(M.act(t->kahler(0, z), v) == v);
    CHECK(M.act(t->der(0, z), v).is_zero());
}

TEST_CASE("weight tables") {
    auto t = tau3();
    auto w = WeightWindow::cube(3, -2, 2);
    TensorModule triv(t, tau_spec(Rational(5, 7), {0}, {0, 0}, {0, 0, 0}));
    for (const auto& [wt, d] : triv.weight_table(w)) CHECK(d == 1);

    TensorModule M(t, tau_spec(Rational(1, 2), {1}, {1, 0}, {Rational(1, 3), 0, 0}));
    auto table = M.weight_table(w);
    CHECK(table.size() == 125);
    for (const auto& [wt, d] : table) CHECK(d == 6);

    TensorModule R(t, ring_spec(1, 0, 0, {0}, {0}, {0, 0}));
    WeightWindow rw(Degree{0, -2, -2}, Degree{0, 2, 2});
    auto rt = R.weight_table(rw);
    CHECK(rt.size() == 25);
    for (const auto& [wt, d] : rt) {
        CHECK(wt.size() == 2);
        CHECK(d == 1);
    }
}

TEST_CASE("de Rham differential examples") {
    DeRham dr(3, {0, 0, 0});
    Degree e1{1, 0, 0}, z{0, 0, 0}, e2{0, 1, 0};
    // Λ^1 basis: e1, e2, e3; Λ^2 basis: e1^e2, e1^e3, e2^e3
    CHECK(dr.d(0, ModuleVector::unit({e1, 0, 0})) == ModuleVector::unit({e1, 0, 0}));
    CHECK(dr.d(0, ModuleVector::unit({z, 0, 0})).is_zero());
    CHECK(dr.d(1, ModuleVector::unit({e2, 0, 0})) == ModuleVector::unit({e2, 0, 0}).scaled(Rational(-1)));

    CHECK(dr.image_fiber(0, e1).size() == 1);
    CHECK(dr.image_fiber(0, z).empty());
    CHECK(dr.image_fiber(1, Degree{1, 2, -1}).size() == 2);
    CHECK_THROWS_AS(dr.d(3, ModuleVector()), ValidationError);
}

TEST_CASE("de Rham complex, exactness and homomorphism") {
    std::vector<Rational> alpha{Rational(1, 3), Rational(1, 5), Rational(1, 7)};
    DeRham dr(3, alpha);
    auto w = WeightWindow::cube(3, -2, 2);
    for (const auto& r : w.points()) {
        for (int k = 0; k + 1 <= 2; ++k)
            for (int s = 0; s < dr.rank_of_forms(k); ++s)
                CHECK(dr.d(k + 1, dr.d(k, ModuleVector::unit({r, 0, s}))).is_zero());
        std::vector<int> ranks;
        for (int k = 0; k <= 2; ++k) ranks.push_back(static_cast<int>(dr.image_fiber(k, r).size()));
        CHECK(ranks == std::vector<int>{1, 2, 1});
        for (int k = 1; k <= 2; ++k)
            CHECK(dr.kernel_fiber(k, r).size() == dr.image_fiber(k - 1, r).size());
    }

    auto t = tau3({Rational(2), Rational(-3)});
    std::vector<TensorModule> forms;
    for (int k = 0; k <= 3; ++k) forms.emplace_back(t, differential_form_spec(3, k, alpha, 1));
    Rng rng(6);
    for (int s = 0; s < 200; ++s) {
        int k = rng.index(3);
        Degree m = rng.degree(3, -1, 1);
        AlgElement wv = t->der(rng.index(3), m, rng.small_rational());
        Degree r = rng.degree(3, -1, 1);
        ModuleVector v = ModuleVector::unit({r, 0, rng.index(dr.rank_of_forms(k))});
        CHECK(dr.d(k, forms[k].act(wv, v)) == forms[k + 1].act(wv, dr.d(k, v)));
    }
}
