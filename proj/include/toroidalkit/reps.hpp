#pragma once

#include "toroidalkit/errors.hpp"
#include "toroidalkit/exactlin.hpp"
#include "toroidalkit/galgebra.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace toroidalkit {

// Column-sparse copy of a matrix for repeated application to basis vectors.
struct SparseOp {
    std::vector<std::vector<std::pair<int, Rational>>> cols;

    SparseOp() = default;
    explicit SparseOp(const DenseMatrix& m) : cols(m.cols()) {
        for (int j = 0; j < m.cols(); ++j)
            for (int i = 0; i < m.rows(); ++i)
                if (!m(i, j).is_zero()) cols[j].emplace_back(i, m(i, j));
    }
    const std::vector<std::pair<int, Rational>>& column(int j) const { return cols[j]; }
};

struct HighestWeight {
    std::vector<int> coords;  // on fundamental weights
    Rational c;               // scalar for the identity of gl_n; unused for g

    bool is_zero() const {
        return std::all_of(coords.begin(), coords.end(), [](int x) { return x == 0; });
    }
    // index k (1-based) if this is ω_k, else 0
    int fundamental_index() const {
        int k = 0;
        for (std::size_t i = 0; i < coords.size(); ++i) {
            if (coords[i] == 0) continue;
            if (coords[i] != 1 || k != 0) return 0;
            k = static_cast<int>(i) + 1;
        }
        return k;
    }
};

inline void check_dominant(const HighestWeight& w, int rank) {
    if (static_cast<int>(w.coords.size()) != rank)
        throw ValidationError("highest weight needs " + std::to_string(rank) + " coordinates");
    for (int x : w.coords)
        if (x < 0) throw ValidationError("highest weight is not dominant");
}

// Finite-dimensional representation of g: one matrix per basis element of g.
struct GRep {
    std::shared_ptr<const GAlgebra> g;
    int dim = 0;
    std::vector<std::vector<int>> weights;  // eigenvalues of the Chevalley h_i per basis vector
    std::vector<DenseMatrix> action;
    std::vector<SparseOp> ops;

    void finalize() {
        ops.clear();
        for (const auto& m : action) ops.emplace_back(m);
    }

    std::string label(int i) const { return "v" + std::to_string(i + 1); }

    // ρ([x,y])v - ρ(x)ρ(y)v + ρ(y)ρ(x)v for basis elements x, y.
    std::vector<Rational> axiom_defect(int x, int y, const std::vector<Rational>& v) const {
        DenseMatrix bxy(dim, dim);
        for (const auto& [z, c] : g->table[x][y]) bxy = bxy + action[z].scaled(c);
        return (bxy - commutator(action[x], action[y])).apply(v);
    }
};

// gl_n-module: E(i, j) is the action of the matrix unit E_{i,j} (0-based indices).
struct GlRep {
    int n = 0;
    Rational c;
    int dim = 0;
    std::vector<std::string> labels;
    std::vector<DenseMatrix> units;  // units[i * n + j]
    std::vector<SparseOp> ops;

    const DenseMatrix& E(int i, int j) const { return units[i * n + j]; }
    const SparseOp& op(int i, int j) const { return ops[i * n + j]; }

    void finalize() {
        ops.clear();
        for (const auto& m : units) ops.emplace_back(m);
    }

    // [E_ij, E_kl] = δ_jk E_il - δ_li E_kj
    std::vector<Rational> axiom_defect(int i, int j, int k, int l, const std::vector<Rational>& v) const {
        DenseMatrix br(dim, dim);
        if (j == k) br = br + E(i, l);
        if (l == i) br = br - E(k, j);
        return (br - commutator(E(i, j), E(k, l))).apply(v);
    }
};

namespace detail {

// Cartan integers a_ij = α_j(h_i) read off [h_i, e_j] = a_ij e_j.
inline std::vector<std::vector<int>> cartan_matrix(const GAlgebra& g) {
    const int r = g.rank();
    std::vector<std::vector<int>> a(r, std::vector<int>(r));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            const auto& br = g.table[g.chevalley_h[i]][g.chevalley_e[j]];
            Rational c = br.at(g.chevalley_e[j]);
            if (!(br == GAlgebra::Elem::unit(g.chevalley_e[j]).scaled(c)))
                throw ValidationError(g.name + ": Chevalley e_j is not an h_i eigenvector");
            a[i][j] = static_cast<int>(c.to_int64());
        }
    return a;
}

}  // namespace detail

// Irreducible g-module of highest weight λ. Built level by level from a highest-weight vector:
// level L+1 is spanned by f_i applied to level L, and a vector there is zero exactly when every
// e_j kills it (irreducibility), so each candidate is represented by its e-images one level up.
inline GRep build_irrep_g(std::shared_ptr<const GAlgebra> gp, const HighestWeight& lam) {
    const GAlgebra& g = *gp;
    GRep rep;
    rep.g = gp;
    if (g.rank() == 0) {
        if (!lam.is_zero()) throw ValidationError(g.name + " has no Chevalley data; only the trivial module is available");
        rep.dim = 1;
        rep.weights = {{}};
        rep.action.assign(g.dim(), DenseMatrix(1, 1));
        rep.finalize();
        return rep;
    }
    check_dominant(lam, g.rank());
    const int r = g.rank();
    const auto A = detail::cartan_matrix(g);

    // global basis: index -> (level, weight); per level the list of global indices
    std::vector<std::vector<int>> wt;
    std::vector<std::vector<int>> levels;
    // f_i and e_i images as sparse vectors over global indices
    std::vector<std::map<int, SparseVec<int>>> fimg(r), eimg(r);

    wt.push_back(lam.coords);
    levels.push_back({0});
    for (int i = 0; i < r; ++i) eimg[i][0] = SparseVec<int>();

    const int max_vectors = 20000;
    for (int L = 0; !levels[L].empty(); ++L) {
        // candidates grouped by weight
        std::map<std::vector<int>, std::vector<std::pair<int, int>>> by_weight;  // (i, b)
        for (int b : levels[L])
            for (int i = 0; i < r; ++i) {
                std::vector<int> w = wt[b];
                for (int k = 0; k < r; ++k) w[k] -= A[k][i];
                by_weight[w].emplace_back(i, b);
            }
        std::vector<int> next;
        for (const auto& [w, cands] : by_weight) {
            // signature of f_i b: concatenated e_j images, e_j f_i b = f_i e_j b + δ_ij h_i b
            using SigKey = std::pair<int, int>;  // (j, global index)
            std::vector<SparseVec<SigKey>> sigs;
            for (const auto& [i, b] : cands) {
                SparseVec<SigKey> sig;
                for (int j = 0; j < r; ++j) {
                    for (const auto& [u, c] : eimg[j][b])
                        for (const auto& [v, d] : fimg[i].at(u)) sig.add({j, v}, c * d);
                    if (i == j) sig.add({j, b}, Rational(wt[b][i]));
                }
                sigs.push_back(std::move(sig));
            }
            Echelon<SigKey> ech;
            std::vector<int> global_of_pos(cands.size(), -1);
            for (std::size_t p = 0; p < cands.size(); ++p)
                if (ech.insert(sigs[p])) {
                    int idx = static_cast<int>(wt.size());
                    if (idx >= max_vectors) throw UnsupportedError("irreducible module too large");
                    wt.push_back(w);
                    next.push_back(idx);
                    global_of_pos[p] = idx;
                }
            // solve() returns coordinates over insertion positions, all of which are basis vectors
            for (std::size_t p = 0; p < cands.size(); ++p) {
                const auto& [i, b] = cands[p];
                SparseVec<int> img;
                if (global_of_pos[p] >= 0) {
                    img.add(global_of_pos[p], Rational(1));
                } else if (!sigs[p].is_zero()) {
                    auto co = ech.solve(sigs[p]);
                    for (const auto& [q, c] : *co) img.add(global_of_pos[q], c);
                }
                fimg[i][b] = img;
            }
            for (std::size_t p = 0; p < cands.size(); ++p) {
                if (global_of_pos[p] < 0) continue;
                int idx = global_of_pos[p];
                for (int j = 0; j < r; ++j) {
                    SparseVec<int> e;
                    for (const auto& [key, c] : sigs[p])
                        if (key.first == j) e.add(key.second, c);
                    eimg[j][idx] = e;
                }
            }
        }
        levels.push_back(next);
    }
    const int dim = static_cast<int>(wt.size());
    for (int i = 0; i < r; ++i)
        for (int b = 0; b < dim; ++b)
            if (!fimg[i].count(b)) fimg[i][b] = SparseVec<int>();  // last level maps to zero

    rep.dim = dim;
    rep.weights = wt;
    auto to_matrix = [dim](const std::map<int, SparseVec<int>>& img) {
        DenseMatrix m(dim, dim);
        for (const auto& [b, v] : img)
            for (const auto& [u, c] : v) m(u, b) = c;
        return m;
    };

    // Lie closure of the Chevalley generators, tracking their matrices
    Echelon<int> span;
    std::vector<DenseMatrix> mats;
    std::vector<GAlgebra::Elem> elems;
    // every pushed element is inserted, so Echelon insertion indices match positions in mats
    auto push = [&](const GAlgebra::Elem& x, const DenseMatrix& m) {
        span.insert(x);
        elems.push_back(x);
        mats.push_back(m);
    };
    for (int i = 0; i < r; ++i) {
        push(GAlgebra::Elem::unit(g.chevalley_e[i]), to_matrix(eimg[i]));
        push(GAlgebra::Elem::unit(g.chevalley_f[i]), to_matrix(fimg[i]));
    }
    for (std::size_t a = 0; a < elems.size() && span.rank() < g.dim(); ++a)
        for (std::size_t b = 0; b < a && span.rank() < g.dim(); ++b) {
            GAlgebra::Elem br = g.bracket(elems[a], elems[b]);
            if (br.is_zero() || span.contains(br)) continue;
            push(br, commutator(mats[a], mats[b]));
        }
    if (span.rank() < g.dim()) throw ValidationError(g.name + ": Chevalley generators do not generate the algebra");
    rep.action.resize(g.dim());
    for (int x = 0; x < g.dim(); ++x) {
        auto co = span.solve(GAlgebra::Elem::unit(x));
        DenseMatrix m(dim, dim);
        for (const auto& [k, c] : *co) m = m + mats[k].scaled(c);
        rep.action[x] = m;
    }
    rep.finalize();
    return rep;
}

// Sorted k-subsets of {0..n-1} in lexicographic order; the basis order of Λ^k.
inline std::vector<std::vector<int>> wedge_subsets(int n, int k) {
    std::vector<std::vector<int>> subsets;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == k) {
            subsets.push_back(cur);
            return;
        }
        for (int i = start; i < n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return subsets;
}

// Exterior power Λ^k of the standard gl_n-module, basis = sorted k-subsets.
inline GlRep build_wedge(int n, int k) {
    if (k < 0 || k > n) throw ValidationError("wedge degree out of range");
    GlRep rep;
    rep.n = n;
    rep.c = Rational(k);
    const auto subsets = wedge_subsets(n, k);
    rep.dim = static_cast<int>(subsets.size());
    std::map<std::vector<int>, int> index;
    for (int s = 0; s < rep.dim; ++s) {
        index[subsets[s]] = s;
        std::string l;
        for (int x : subsets[s]) l += (l.empty() ? "" : "^") + std::string("e") + std::to_string(x + 1);
        rep.labels.push_back(l.empty() ? "1" : l);
    }
    rep.units.assign(n * n, DenseMatrix(rep.dim, rep.dim));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int s = 0; s < rep.dim; ++s) {
                // E_{i,j} sends e_j to e_i inside the wedge
                const auto& S = subsets[s];
                auto pos = std::find(S.begin(), S.end(), j);
                if (pos == S.end()) continue;
                std::vector<int> T = S;
                T[pos - S.begin()] = i;
                if (i != j && std::find(S.begin(), S.end(), i) != S.end()) continue;
                // sort T, tracking the permutation sign
                int sign = 1;
                for (std::size_t a = 0; a < T.size(); ++a)
                    for (std::size_t b = a + 1; b < T.size(); ++b)
                        if (T[a] > T[b]) sign = -sign;
                std::sort(T.begin(), T.end());
                rep.units[i * n + j](index.at(T), s) += Rational(sign);
            }
    rep.finalize();
    return rep;
}

inline int sl_offdiag_index(const GAlgebra& g, int n, int i, int j) {
    if (n == 2) return (i == 0 && j == 1) ? 0 : 1;
    return g.index_of("E" + std::to_string(i + 1) + std::to_string(j + 1));
}

// V(c, λ2): the sl_n-irreducible module of highest weight λ2 with the identity acting by c.
// Λ^k W is used whenever (λ2, c) = (ω_k, k), including k = 0 and k = n with λ2 = 0.
inline GlRep build_gln_rep(int n, const Rational& c, const HighestWeight& lam2) {
    if (n < 1) throw ValidationError("gl_n needs n >= 1");
    check_dominant(lam2, n - 1);
    if (n == 1) {
        GlRep rep;
        rep.n = 1;
        rep.c = c;
        rep.dim = 1;
        rep.labels = {"w1"};
        DenseMatrix m(1, 1);
        m(0, 0) = c;
        rep.units = {m};
        rep.finalize();
        return rep;
    }
    int k = lam2.fundamental_index();
    if (k > 0 && c == Rational(k)) return build_wedge(n, k);
    if (lam2.is_zero() && (c.is_zero() || c == Rational(n))) return build_wedge(n, c.is_zero() ? 0 : n);

    auto sl = make_sl(n);
    GRep v = build_irrep_g(sl, lam2);
    GlRep rep;
    rep.n = n;
    rep.c = c;
    rep.dim = v.dim;
    for (int b = 0; b < v.dim; ++b) rep.labels.push_back("w" + std::to_string(b + 1));
    rep.units.assign(n * n, DenseMatrix(v.dim, v.dim));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i != j) {
                rep.units[i * n + j] = v.action[sl_offdiag_index(*sl, n, i, j)];
                continue;
            }
            // E_ii - I/n = Σ_k c_k H_k with c_k = Σ_{l<=k} d_l, d = diag(E_ii - I/n)
            DenseMatrix m = DenseMatrix::identity(v.dim).scaled(c / Rational(n));
            Rational acc;
            for (int h = 0; h + 1 < n; ++h) {
                acc += (h == i ? Rational(1) : Rational()) - Rational(1, n);
                m = m + v.action[sl->cartan[h]].scaled(acc);
            }
            rep.units[i * n + i] = m;
        }
    rep.finalize();
    return rep;
}

inline GlRep trivial_gl(int n) { return build_wedge(n, 0); }

}  // namespace toroidalkit
