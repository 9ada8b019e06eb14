#pragma once

#include "toroidalkit/random.hpp"
#include "toroidalkit/tensormod.hpp"

namespace fixtures {

using namespace toroidalkit;

inline std::shared_ptr<const Toroidal> tau3(CocycleSpec phi = {}) {
    static auto g = make_sl(2);
    return std::make_shared<Toroidal>(3, g, phi);
}

inline TensorModuleSpec tau_spec(Rational c, std::vector<int> l1, std::vector<int> l2, std::vector<Rational> alpha) {
    TensorModuleSpec s;
    s.kind = ModuleKind::Tau;
    s.c = c;
    s.lam1 = {std::move(l1), {}};
    s.lam2 = {std::move(l2), c};
    s.alpha = std::move(alpha);
    return s;
}

inline TensorModuleSpec ring_spec(Rational a, Rational b, Rational c, std::vector<int> l1, std::vector<int> l2,
                                  std::vector<Rational> alpha_bar) {
    TensorModuleSpec s = tau_spec(c, std::move(l1), std::move(l2), std::move(alpha_bar));
    s.kind = ModuleKind::TauRing;
    s.a = a;
    s.b = b;
    return s;
}

// Random element of degree in [lo, hi]^n; for ring modules the first coordinate is zero.
inline AlgElement random_element(const Toroidal& t, Rng& rng, int lo, int hi, bool ring) {
    AlgElement x = random_homogeneous(t, rng, lo, hi);
    if (!ring) return x;
    AlgElement r;
    for (const auto& [s, c] : x) {
        Symbol q = s;
        q.m[0] = 0;
        if (q.kind == SymKind::Kahler)
            add_kahler(r, q.index, q.m, c);
        else
            r.add(q, c);
    }
    return r;
}

inline ModuleVector random_vector(const TensorModule& M, Rng& rng, int lo, int hi) {
    ModuleVector v;
    const int terms = static_cast<int>(rng.uniform(1, 3));
    for (int t = 0; t < terms; ++t) {
        Degree r = rng.degree(M.tau().n(), lo, hi);
        if (M.is_ring()) r[0] = 0;
        auto keys = M.fiber_keys(r);
        v.add(keys[rng.index(static_cast<int>(keys.size()))], rng.small_rational());
    }
    return v;
}

}  // namespace fixtures
