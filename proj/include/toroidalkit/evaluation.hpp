#pragma once

#include "toroidalkit/check.hpp"
#include "toroidalkit/coeffalg.hpp"
#include "toroidalkit/cyclicity.hpp"
#include "toroidalkit/random.hpp"
#include "toroidalkit/tensormod.hpp"

namespace toroidalkit {

struct EvalFactorizationReport {
    CheckResult scaling;  // X(b) v = ψ(b) X(1) v on samples
    CheckResult ideal;    // τ(ker ψ) kills every window fiber
    CheckResult kahler;   // K_i(b) and t^m K_i(b) act as zero
    bool pass() const { return scaling.pass && ideal.pass && kahler.pass; }
};

namespace detail {

inline BElement random_b(const CoeffAlgebra& B, Rng& rng) {
    BElement b;
    for (int j = 0; j < B.dim(); ++j)
        if (rng.coin()) b.add(j, rng.small_rational());
    if (b.is_zero()) b.add(rng.index(B.dim()), rng.small_rational());
    return b;
}

inline ModuleVector random_window_vector(const TensorModule& M, Rng& rng, const WeightWindow& w) {
    const auto pts = w.points();
    ModuleVector v;
    const int terms = static_cast<int>(rng.uniform(1, 3));
    for (int t = 0; t < terms; ++t) {
        Degree r = pts[rng.index(static_cast<int>(pts.size()))];
        if (M.is_ring()) r[0] = 0;
        const auto keys = M.fiber_keys(r);
        v.add(keys[rng.index(static_cast<int>(keys.size()))], rng.small_rational());
    }
    return v;
}

}  // namespace detail

// Checks on an evaluation module: the scaling identity on sampled (X, b, v); exhaustive
// annihilation by τ(ker ψ) over the cyclicity generator set and every fiber basis vector of the
// window; and vanishing of every K_i(b) with degree in the window on every window fiber.
inline EvalFactorizationReport evaluation_factorization_check(const TensorModule& M, const WeightWindow& window,
                                                              int samples, std::uint64_t seed) {
    if (M.kind() != ModuleKind::Eval) throw ValidationError("evaluation check needs an evaluation module");
    const MapToroidal& L = *M.map();
    const Toroidal& t = M.tau();
    const EvaluationPoint& psi = *M.spec().psi;
    EvalFactorizationReport rep;

    for (int s = 0; s < samples; ++s) {
        Rng rng = Rng::for_sample(seed, static_cast<std::uint64_t>(s));
        AlgElement x = random_homogeneous(t, rng, -2, 2);
        BElement b = detail::random_b(L.B(), rng);
        ModuleVector v = detail::random_window_vector(M, rng, window);
        ++rep.scaling.checked;
        ModuleVector lhs = M.act(L.tensor(x, b), v);
        ModuleVector rhs = M.act(L.tensor(x), v).scaled(psi(b));
        if (lhs != rhs)
            rep.scaling.fail("X = " + L.str(L.tensor(x, b)) + "; v = " + M.str(v) + "; difference " + M.str(lhs - rhs));
    }

    const auto gens = cyclicity_generators(t);
    for (const auto& m : ideal_of_point(psi)) {
        for (const auto& g : gens) {
            const MapElement gm = L.tensor(g, m);
            for (const auto& r : window.points()) {
                for (const auto& k : M.fiber_keys(r)) {
                    ++rep.ideal.checked;
                    ModuleVector img = M.act(gm, ModuleVector::unit(k));
                    if (!img.is_zero()) rep.ideal.fail("X = " + L.str(gm) + "; v = " + M.key_str(k) + "; image " + M.str(img));
                }
            }
        }
    }

    const auto pts = window.points();
    for (const auto& m : pts) {
        for (int i = 0; i < t.n(); ++i) {
            AlgElement k = t.kahler(i, m);
            if (k.is_zero()) continue;
            for (int j = 0; j < L.B().dim(); ++j) {
                MapElement kb = L.tensor(k, BElement::unit(j));
                for (const auto& r : pts)
                    for (const auto& key : M.fiber_keys(r)) {
                        ++rep.kahler.checked;
                        ModuleVector img = M.act(kb, ModuleVector::unit(key));
                        if (!img.is_zero())
                            rep.kahler.fail("X = " + L.str(kb) + "; v = " + M.key_str(key) + "; image " + M.str(img));
                    }
            }
        }
    }
    return rep;
}

}  // namespace toroidalkit
