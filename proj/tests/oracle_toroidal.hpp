#pragma once

// Independent bracket evaluator used as a test oracle. It never canonicalizes Kähler
// terms; equality with engine output is decided modulo the relations Σ m_i t^m K_i = 0
// by a per-degree span test.

#include "toroidalkit/toroidal.hpp"

#include <map>
#include <tuple>

namespace oracle {

using toroidalkit::Degree;
using toroidalkit::Rational;

// (kind, index, degree) with kind 0 loop, 1 K, 2 d
using Key = std::tuple<int, int, std::vector<int>>;
using Raw = std::map<Key, Rational>;

inline void add(Raw& r, const Key& k, const Rational& c) {
    if (c.is_zero()) return;
    r[k] += c;
    if (r[k].is_zero()) r.erase(k);
}

inline std::vector<int> sum(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> s(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i];
    return s;
}

struct Params {
    const toroidalkit::GAlgebra* g;
    int n;
    Rational mu1, mu2;
    bool form_factor = true;
};

inline Raw bracket_keys(const Params& P, const Key& x, const Key& y) {
    Raw r;
    auto [kx, ix, m] = x;
    auto [ky, iy, k] = y;
    auto mk = sum(m, k);
    if (kx == 0 && ky == 0) {
        for (const auto& [z, c] : P.g->table[ix][iy]) add(r, {0, z, mk}, c);
        Rational f = P.form_factor ? P.g->form(ix, iy) : Rational(1);
        for (int i = 0; i < P.n; ++i) add(r, {1, i, mk}, f * Rational(m[i]));
    } else if (kx == 2 && ky == 0) {
        add(r, {0, iy, mk}, Rational(k[ix]));
    } else if (kx == 0 && ky == 2) {
        add(r, {0, ix, mk}, Rational(-m[iy]));
    } else if (kx == 2 && ky == 1) {
        add(r, {1, iy, mk}, Rational(k[ix]));
        if (ix == iy)
            for (int p = 0; p < P.n; ++p) add(r, {1, p, mk}, Rational(m[p]));
    } else if (kx == 1 && ky == 2) {
        Raw s = bracket_keys(P, y, x);
        for (auto& [kk, c] : s) add(r, kk, -c);
    } else if (kx == 2 && ky == 2) {
        int i = ix, j = iy;
        add(r, {2, j, mk}, Rational(k[i]));
        add(r, {2, i, mk}, Rational(-m[j]));
        Rational phi1 = Rational(-k[i] * m[j]);
        Rational phi2 = Rational(m[i] * k[j]);
        Rational w = P.mu1 * phi1 + P.mu2 * phi2;
        for (int p = 0; p < P.n; ++p) add(r, {1, p, mk}, w * Rational(m[p]));
    }
    return r;
}

inline Raw bracket(const Params& P, const Raw& x, const Raw& y) {
    Raw r;
    for (const auto& [a, ca] : x)
        for (const auto& [b, cb] : y)
            for (const auto& [k, c] : bracket_keys(P, a, b)) add(r, k, ca * cb * c);
    return r;
}

inline Raw from_engine(const toroidalkit::AlgElement& e) {
    Raw r;
    for (const auto& [s, c] : e) add(r, {static_cast<int>(s.kind), s.index, s.m.to_vector()}, c);
    return r;
}

// True iff a - b is zero modulo the Kähler relations.
inline bool equal_mod_kahler(const Raw& a, const Raw& b, int n) {
    Raw d = a;
    for (const auto& [k, c] : b) add(d, k, -c);
    std::map<std::vector<int>, std::vector<Rational>> kahler_by_degree;
    for (const auto& [k, c] : d) {
        auto [kind, i, m] = k;
        if (kind != 1) return false;
        auto& v = kahler_by_degree[m];
        v.resize(n);
        v[i] += c;
    }
    for (const auto& [m, v] : kahler_by_degree) {
        // v must be a multiple of m
        int p = -1;
        for (int i = 0; i < n; ++i)
            if (m[i] != 0) {
                p = i;
                break;
            }
        if (p < 0) {
            for (const auto& x : v)
                if (!x.is_zero()) return false;
            continue;
        }
        Rational lambda = v[p] / Rational(m[p]);
        for (int i = 0; i < n; ++i)
            if (v[i] != lambda * Rational(m[i])) return false;
    }
    return true;
}

}  // namespace oracle
