#pragma once

#include "toroidalkit/coeffalg.hpp"
#include "toroidalkit/random.hpp"
#include "toroidalkit/tensormod.hpp"

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace toroidalkit {

// A weight module seen through a window: the fiber spaces to regenerate and the action.
struct CyclicityTarget {
    std::function<std::vector<ModuleVector>(const Degree&)> fiber_basis;
    std::function<ModuleVector(const AlgElement&, const ModuleVector&)> act;
};

inline CyclicityTarget full_module_target(const TensorModule& M) {
    return {[&M](const Degree& r) {
                std::vector<ModuleVector> b;
                for (const auto& k : M.fiber_keys(r)) b.push_back(ModuleVector::unit(k));
                return b;
            },
            [&M](const AlgElement& x, const ModuleVector& v) { return M.act(x, v); }};
}

// The submodule d_k 𝔏(k, 0, ω_k, α) inside 𝔏(k+1, 0, ω_{k+1}, α); ambient must be the latter.
inline CyclicityTarget derham_image_target(const DeRham& dr, int k, const TensorModule& ambient) {
    return {[&dr, k](const Degree& r) { return dr.image_fiber(k, r); },
            [&ambient](const AlgElement& x, const ModuleVector& v) { return ambient.act(x, v); }};
}

// x ⊗ t^{±e_i}, x ⊗ t^0 over the Chevalley generators of g, and t^{±e_i} d_j, d_j.
inline std::vector<AlgElement> cyclicity_generators(const Toroidal& t) {
    const GAlgebra& g = t.g();
    std::vector<int> gens;
    for (int i = 0; i < g.rank(); ++i) {
        gens.push_back(g.chevalley_e[i]);
        gens.push_back(g.chevalley_f[i]);
        gens.push_back(g.chevalley_h[i]);
    }
    std::vector<Degree> steps{t.zero_degree()};
    for (int i = 0; i < t.n(); ++i) {
        steps.push_back(Degree::unit(t.n(), i, 1));
        steps.push_back(Degree::unit(t.n(), i, -1));
    }
    std::vector<AlgElement> out;
    for (const auto& m : steps) {
        for (int a : gens) out.push_back(t.loop(g.labels[a], m));
        for (int j = 0; j < t.n(); ++j) out.push_back(t.der(j, m));
    }
    return out;
}

struct ProbeResult {
    std::string kind;  // "random" or "eigen"
    Degree fiber;
    ModuleVector start;
    bool regenerated = false;
    std::map<Degree, int> span_dims;  // only recorded when not regenerated
};

struct CyclicityReport {
    bool pass = true;
    int fibers = 0;
    int fiber_dim_total = 0;
    std::vector<ProbeResult> probes;
    // closure of the first non-regenerating probe: a proper invariant family inside the window
    std::optional<std::map<Degree, std::vector<ModuleVector>>> invariant_family;
};

namespace detail {

inline Degree element_degree(const AlgElement& x) { return x.leading_key().m; }

// Characteristic polynomial by Faddeev-LeVerrier, low to high coefficients.
inline Poly char_poly(const DenseMatrix& a) {
    const int n = a.rows();
    Poly c(n + 1);
    c[n] = Rational(1);
    DenseMatrix m(n, n);
    for (int k = 1; k <= n; ++k) {
        m = a * m + DenseMatrix::identity(n).scaled(c[n - k + 1]);
        DenseMatrix am = a * m;
        Rational tr;
        for (int i = 0; i < n; ++i) tr += am(i, i);
        c[n - k] = -tr / Rational(k);
    }
    return c;
}

}  // namespace detail

// Span closure of `start` under the generators, restricted to moves that stay in the window.
inline std::map<Degree, Echelon<MKey>> window_closure(const CyclicityTarget& target,
                                                      const std::vector<AlgElement>& gens,
                                                      const WeightWindow& window, const ModuleVector& start) {
    std::map<Degree, Echelon<MKey>> spans;
    std::deque<ModuleVector> queue;
    auto offer = [&](const ModuleVector& v) {
        if (v.is_zero()) return;
        const Degree& r = v.leading_key().r;
        if (spans[r].insert(v)) queue.push_back(v);
    };
    offer(start);
    while (!queue.empty()) {
        ModuleVector v = std::move(queue.front());
        queue.pop_front();
        const Degree r = v.leading_key().r;
        for (const auto& g : gens) {
            if (!window.contains(r + detail::element_degree(g))) continue;
            offer(target.act(g, v));
        }
    }
    return spans;
}

// Desk-scale evidence for irreducibility: every probe vector must regenerate every fiber of the
// window. Probes alternate between random fiber vectors and rational eigenvectors of a random
// fiber-preserving operator; the latter find invariant subspaces that random vectors miss.
inline CyclicityReport window_cyclicity_report(const CyclicityTarget& target, const Toroidal& t,
                                               const WeightWindow& window, int samples, std::uint64_t seed) {
    CyclicityReport rep;
    const auto gens = cyclicity_generators(t);
    const auto points = window.points();
    std::map<Degree, std::vector<ModuleVector>> basis;
    for (const auto& r : points) {
        basis[r] = target.fiber_basis(r);
        rep.fiber_dim_total += static_cast<int>(basis[r].size());
    }
    rep.fibers = static_cast<int>(points.size());

    // degree-cancelling pairs for the eigen probes
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t a = 0; a < gens.size(); ++a)
        for (std::size_t b = 0; b < gens.size(); ++b)
            if ((detail::element_degree(gens[a]) + detail::element_degree(gens[b])).is_zero() &&
                !detail::element_degree(gens[a]).is_zero())
                pairs.emplace_back(static_cast<int>(a), static_cast<int>(b));

    auto run_probe = [&](ProbeResult pr) {
        auto spans = window_closure(target, gens, window, pr.start);
        pr.regenerated = true;
        for (const auto& r : points) {
            int got = spans.count(r) ? spans.at(r).rank() : 0;
            if (got != static_cast<int>(basis[r].size())) pr.regenerated = false;
        }
        if (!pr.regenerated) {
            for (const auto& r : points) pr.span_dims[r] = spans.count(r) ? spans.at(r).rank() : 0;
            if (rep.pass) {
                std::map<Degree, std::vector<ModuleVector>> fam;
                for (const auto& r : points) fam[r] = spans.count(r) ? spans.at(r).reduced_rows() : std::vector<ModuleVector>{};
                rep.invariant_family = fam;
            }
            rep.pass = false;
        }
        rep.probes.push_back(std::move(pr));
    };

    for (int s = 0; s < samples; ++s) {
        Rng rng = Rng::for_sample(seed, static_cast<std::uint64_t>(s));
        // interior fibers only, so every generator move stays available
        std::vector<Degree> interior;
        for (const auto& r : points) {
            bool inside = !basis[r].empty();
            for (int i = 0; i < r.n && inside; ++i)
                if (window.lo[i] < window.hi[i] && (r[i] == window.lo[i] || r[i] == window.hi[i])) inside = false;
            if (inside) interior.push_back(r);
        }
        if (interior.empty())
            for (const auto& r : points)
                if (!basis[r].empty()) interior.push_back(r);
        if (interior.empty()) break;
        const Degree r0 = interior[rng.index(static_cast<int>(interior.size()))];
        const auto& B = basis[r0];
        const int d = static_cast<int>(B.size());

        if (s % 2 == 0 || pairs.empty()) {
            ModuleVector v;
            for (const auto& b : B) v.axpy(Rational(rng.uniform(-3, 3)), b);
            if (v.is_zero()) v = B[0];
            run_probe({"random", r0, v, false, {}});
            continue;
        }
        // θ = Σ c · g_a ∘ g_b over a few random degree-cancelling pairs, as a matrix on the fiber
        std::vector<std::pair<Rational, std::pair<int, int>>> theta;
        for (const auto& pr : pairs) theta.push_back({Rational(rng.uniform(-4, 4)), pr});
        Echelon<MKey> fib;
        for (const auto& b : B) fib.insert(b);
        DenseMatrix A(d, d);
        bool ok = true;
        for (int j = 0; j < d && ok; ++j) {
            ModuleVector img;
            for (const auto& [c, pr] : theta) img.axpy(c, target.act(gens[pr.first], target.act(gens[pr.second], B[j])));
            auto co = fib.solve(img);
            if (!co) {
                ok = false;  // the fiber basis is not θ-stable; fall back to a random probe
                break;
            }
            for (const auto& [i, x] : *co) A(i, j) = x;
        }
        std::vector<ModuleVector> starts;
        if (ok) {
            std::vector<Rational> roots;
            try {
                roots = rational_roots(detail::char_poly(A));
            } catch (const UnsupportedError&) {
            }
            roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
            for (const auto& lam : roots) {
                std::vector<int> cols(d);
                std::vector<SparseVec<int>> rows(d);
                for (int i = 0; i < d; ++i) {
                    cols[i] = i;
                    for (int j = 0; j < d; ++j) rows[i].add(j, A(i, j) - (i == j ? lam : Rational()));
                }
                for (const auto& kv : rref(ExactMatrix<int>(cols, rows)).kernel_basis) {
                    ModuleVector v;
                    for (const auto& [j, x] : kv) v.axpy(x, B[j]);
                    starts.push_back(v);
                }
            }
        }
        if (starts.empty()) {
            ModuleVector v;
            for (const auto& b : B) v.axpy(Rational(rng.uniform(-3, 3)), b);
            if (v.is_zero()) v = B[0];
            starts.push_back(v);
        }
        for (const auto& v : starts) run_probe({"eigen", r0, v, false, {}});
    }
    return rep;
}

}  // namespace toroidalkit
