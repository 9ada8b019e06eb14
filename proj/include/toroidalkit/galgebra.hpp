#pragma once

#include "toroidalkit/errors.hpp"
#include "toroidalkit/exactlin.hpp"

#include <memory>
#include <string>
#include <vector>

namespace toroidalkit {

// Finite-dimensional Lie algebra given by structure constants over a labelled basis,
// with an invariant symmetric form and (optionally) Chevalley generators.
struct GAlgebra {
    using Elem = SparseVec<int>;

    std::string name;
    std::vector<std::string> labels;
    std::vector<std::vector<Elem>> table;  // table[i][j] = [x_i, x_j]
    DenseMatrix form;
    std::vector<int> cartan;
    // simple root vectors; empty when the algebra came without a triangular decomposition
    std::vector<int> chevalley_e, chevalley_f, chevalley_h;

    int dim() const { return static_cast<int>(labels.size()); }
    int rank() const { return static_cast<int>(chevalley_h.size()); }

    int index_of(const std::string& label) const {
        for (int i = 0; i < dim(); ++i)
            if (labels[i] == label) return i;
        throw ValidationError("unknown basis label '" + label + "' for " + name);
    }

    Elem bracket(const Elem& x, const Elem& y) const {
        Elem r;
        for (const auto& [i, a] : x)
            for (const auto& [j, b] : y) r.axpy(a * b, table[i][j]);
        return r;
    }

    Rational pairing(const Elem& x, const Elem& y) const {
        Rational s;
        for (const auto& [i, a] : x)
            for (const auto& [j, b] : y) s += a * b * form(i, j);
        return s;
    }

    // Antisymmetry, Jacobi, and symmetry plus invariance of the form on all basis triples.
    void validate() const {
        const int d = dim();
        if (static_cast<int>(table.size()) != d || form.rows() != d || form.cols() != d)
            throw ValidationError(name + ": table or form has the wrong shape");
        for (const auto& r : table)
            if (static_cast<int>(r.size()) != d) throw ValidationError(name + ": table has the wrong shape");
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (!(table[i][j] + table[j][i]).is_zero())
                    throw ValidationError(name + ": bracket not antisymmetric on (" + labels[i] + ", " + labels[j] + ")");
                if (form(i, j) != form(j, i)) throw ValidationError(name + ": form not symmetric");
            }
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) {
                    Elem xi = Elem::unit(i), xj = Elem::unit(j), xk = Elem::unit(k);
                    Elem jac = bracket(xi, table[j][k]) + bracket(xj, table[k][i]) + bracket(xk, table[i][j]);
                    if (!jac.is_zero())
                        throw ValidationError(name + ": Jacobi fails on (" + labels[i] + ", " + labels[j] + ", " +
                                              labels[k] + ")");
                    if (pairing(table[i][j], xk) != pairing(xi, table[j][k]))
                        throw ValidationError(name + ": form not invariant");
                }
        for (int idx : cartan)
            if (idx < 0 || idx >= d) throw ValidationError(name + ": Cartan index out of range");
        if (chevalley_e.size() != chevalley_f.size() || chevalley_e.size() != chevalley_h.size())
            throw ValidationError(name + ": Chevalley generator lists differ in length");
    }
};

namespace detail {

inline DenseMatrix unit_matrix(int n, int i, int j) {
    DenseMatrix m(n, n);
    m(i, j) = Rational(1);
    return m;
}

inline Rational trace(const DenseMatrix& m) {
    Rational t;
    for (int i = 0; i < m.rows(); ++i) t += m(i, i);
    return t;
}

// Expresses m in the span of the given basis matrices; throws if it is not there.
inline SparseVec<int> matrix_coords(const std::vector<DenseMatrix>& basis, const DenseMatrix& m) {
    Echelon<int> ech;
    const int n = m.rows();
    auto flat = [n](const DenseMatrix& a) {
        SparseVec<int> v;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) v.add(i * n + j, a(i, j));
        return v;
    };
    for (const auto& b : basis) ech.insert(flat(b));
    auto c = ech.solve(flat(m));
    if (!c) throw ValidationError("matrix outside the span of the basis");
    return *c;
}

}  // namespace detail

// sl_n in the basis E_ij (i != j) followed by H_i = E_ii - E_{i+1,i+1}; form = trace form of
// the defining representation. For n = 2 the labels are e, f, h.
inline std::shared_ptr<const GAlgebra> make_sl(int n) {
    if (n < 2) throw ValidationError("sl_n needs n >= 2");
    auto g = std::make_shared<GAlgebra>();
    g->name = "sl" + std::to_string(n);
    std::vector<DenseMatrix> mats;
    std::vector<std::pair<int, int>> offdiag;
    if (n == 2) {
        g->labels = {"e", "f", "h"};
        mats = {detail::unit_matrix(2, 0, 1), detail::unit_matrix(2, 1, 0),
                detail::unit_matrix(2, 0, 0) - detail::unit_matrix(2, 1, 1)};
        g->chevalley_e = {0};
        g->chevalley_f = {1};
        g->chevalley_h = {2};
        g->cartan = {2};
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) {
                    g->labels.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
                    mats.push_back(detail::unit_matrix(n, i, j));
                    offdiag.emplace_back(i, j);
                }
        const int first_h = static_cast<int>(mats.size());
        for (int i = 0; i + 1 < n; ++i) {
            g->labels.push_back("H" + std::to_string(i + 1));
            mats.push_back(detail::unit_matrix(n, i, i) - detail::unit_matrix(n, i + 1, i + 1));
            g->cartan.push_back(first_h + i);
        }
        for (int i = 0; i + 1 < n; ++i) {
            for (int k = 0; k < first_h; ++k) {
                if (offdiag[k] == std::make_pair(i, i + 1)) g->chevalley_e.push_back(k);
                if (offdiag[k] == std::make_pair(i + 1, i)) g->chevalley_f.push_back(k);
            }
            g->chevalley_h.push_back(first_h + i);
        }
    }
    const int d = static_cast<int>(mats.size());
    g->table.assign(d, std::vector<GAlgebra::Elem>(d));
    g->form = DenseMatrix(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            g->table[i][j] = detail::matrix_coords(mats, commutator(mats[i], mats[j]));
            g->form(i, j) = detail::trace(mats[i] * mats[j]);
        }
    g->validate();
    return g;
}

inline std::shared_ptr<const GAlgebra> make_builtin_algebra(const std::string& name) {
    if (name.size() > 2 && name.rfind("sl", 0) == 0) {
        int n = 0;
        try {
            n = std::stoi(name.substr(2));
        } catch (const std::exception&) {
            throw ValidationError("unknown algebra '" + name + "'");
        }
        if (n >= 2 && n <= 6) return make_sl(n);
    }
    throw ValidationError("unknown algebra '" + name + "' (built in: sl2 .. sl6)");
}

}  // namespace toroidalkit
