#include <catch_amalgamated.hpp>

#include "toroidalkit/maptoroidal.hpp"
#include "toroidalkit/random.hpp"

using namespace toroidalkit;

namespace {

MapToroidal make_map(CocycleSpec phi = {}) {
    auto tau = std::make_shared<Toroidal>(3, make_sl(2), phi);
    return MapToroidal(tau, univariate_quotient(parse_polynomial("s^2 - 3s + 2")));
}

MapElement random_map(const MapToroidal& L, Rng& rng, int lo, int hi) {
    AlgElement x = random_homogeneous(L.tau(), rng, lo, hi);
    BElement b;
    for (int i = 0; i < L.B().dim(); ++i) b.add(i, Rational(rng.uniform(-2, 2)));
    return L.tensor(x, b);
}

}  // namespace

TEST_CASE("map algebra bracket examples") {
    MapToroidal L = make_map();
    const Toroidal& t = L.tau();
    Degree z{0, 0, 0}, e1{1, 0, 0};
    Rng rng(1);
    for (int s = 0; s < 50; ++s) {
        MapElement y = random_map(L, rng, -2, 2);
        CHECK(L.bracket(L.tensor(t.kahler(0, z), "s"), y).is_zero());
    }

    // (h⊗t^{e1} + t^{e1}K_1)(3s-2); the K_1 term is zero in the Kähler quotient at degree e1
    MapElement got = L.bracket(L.tensor(t.loop("e", e1), "s"), L.tensor(t.loop("f", z), "s"));
    BElement b;
    b.add(0, Rational(-2));
    b.add(1, Rational(3));
    CHECK(got == L.tensor(t.loop("h", e1) + t.kahler(0, e1), b));
    CHECK(t.kahler(0, e1).is_zero());

    for (int i = 0; i < 3; ++i)
        for (int p = 1; p <= 3; ++p) {
            MapElement lhs = L.bracket(L.tensor(t.loop("h", Degree::unit(3, i, p)), "1"),
                                       L.tensor(t.loop("h", Degree::unit(3, i, -p)), "s"));
            // ⟨h,h⟩ = 2
            CHECK(lhs == L.tensor(t.kahler(i, z, Rational(2 * p)), "s"));
        }
}

TEST_CASE("map algebra Jacobi") {
    MapToroidal L = make_map({Rational(2), Rational(-3)});
    Rng rng(4);
    for (int s = 0; s < 200; ++s) {
        MapElement x = random_map(L, rng, -2, 2), y = random_map(L, rng, -2, 2), z = random_map(L, rng, -2, 2);
        CHECK(L.jacobi_defect(x, y, z).is_zero());
        CHECK((L.bracket(x, y) + L.bracket(y, x)).is_zero());
    }
}

TEST_CASE("triangular data and beta split") {
    TriangularData tri(Degree{1, 0, 0}, {Degree{0, 1, 0}, Degree{0, 0, 1}});
    MapToroidal L = make_map();
    const Toroidal& t = L.tau();
    Degree z{0, 0, 0};
    auto s0 = beta_split(L.tensor(t.der(0, z)), tri);
    CHECK(s0.minus.is_zero());
    CHECK(s0.plus.is_zero());
    CHECK(s0.zero == L.tensor(t.der(0, z)));

    auto s1 = beta_split(L.tensor(t.loop("e", Degree{2, 1, 0}), "s"), tri);
    CHECK(s1.minus.is_zero());
    CHECK(s1.zero.is_zero());
    CHECK(!s1.plus.is_zero());
    CHECK(tri.beta_coord(Degree{2, 1, 0}) == 2);

    auto s2 = beta_split(L.tensor(t.kahler(1, Degree{-1, 4, 0}), "s"), tri);
    CHECK(!s2.minus.is_zero());
    CHECK(s2.zero.is_zero());
    CHECK(s2.plus.is_zero());
    CHECK(tri.beta_coord(Degree{-1, 4, 0}) == -1);

    TriangularData skew(Degree{1, 1, 0}, {Degree{0, 1, 0}, Degree{0, 0, 1}});
    CHECK(skew.beta_coord(Degree{2, 5, 1}) == 2);
    CHECK(skew.compose(skew.m_coords(Degree{2, 5, 1}), 2) == Degree{2, 5, 1});
    CHECK_THROWS_AS(TriangularData(Degree{2, 0, 0}, {Degree{0, 1, 0}, Degree{0, 0, 1}}), ValidationError);

    Rng rng(9);
    for (int s = 0; s < 200; ++s) {
        MapElement x = random_map(L, rng, -2, 2), y = random_map(L, rng, -2, 2);
        auto sx = beta_split(x, tri), sy = beta_split(y, tri);
        CHECK(sx.minus + sx.zero + sx.plus == x);
        auto pp = beta_split(L.bracket(sx.plus, sy.plus), tri);
        CHECK(pp.minus.is_zero());
        CHECK(pp.zero.is_zero());
        auto zz = beta_split(L.bracket(sx.zero, sy.zero), tri);
        CHECK(zz.minus.is_zero());
        CHECK(zz.plus.is_zero());
    }
}

TEST_CASE("central elements") {
    MapToroidal L = make_map({Rational(1), Rational(1)});
    const Toroidal& t = L.tau();
    Degree z{0, 0, 0};
    MapElement k = L.tensor(t.kahler(0, z), "s");
    CHECK(is_central(k));
    CHECK_FALSE(is_central(L.tensor(t.der(0, z))));
    MapElement off = L.tensor(t.kahler(1, Degree{1, 0, 0}));
    CHECK_FALSE(is_central(off));
    CHECK_FALSE(L.bracket(L.tensor(t.der(0, z)), off).is_zero());
    Rng rng(12);
    for (int s = 0; s < 500; ++s) CHECK(L.bracket(k, random_map(L, rng, -3, 3)).is_zero());
}
