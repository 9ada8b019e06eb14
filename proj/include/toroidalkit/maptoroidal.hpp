#pragma once

#include "toroidalkit/coeffalg.hpp"
#include "toroidalkit/toroidal.hpp"

#include <memory>
#include <tuple>

namespace toroidalkit {

struct MapKey {
    Symbol sym;
    int b = 0;  // coefficient-algebra basis index
    friend bool operator==(const MapKey&, const MapKey&) = default;
    friend auto operator<=>(const MapKey&, const MapKey&) = default;
};

using MapElement = SparseVec<MapKey>;

// τ(B) = τ ⊗ B with [X ⊗ a, Y ⊗ b] = [X, Y] ⊗ ab.
class MapToroidal {
public:
    MapToroidal(std::shared_ptr<const Toroidal> tau, std::shared_ptr<const CoeffAlgebra> b)
        : tau_(std::move(tau)), b_(std::move(b)) {
        if (!tau_ || !b_) throw ValidationError("map algebra needs τ and B");
    }

    const Toroidal& tau() const { return *tau_; }
    const std::shared_ptr<const Toroidal>& tau_ptr() const { return tau_; }
    const CoeffAlgebra& B() const { return *b_; }
    const std::shared_ptr<const CoeffAlgebra>& B_ptr() const { return b_; }

    bool same_config(const MapToroidal& o) const { return tau_->same_config(*o.tau_) && b_ == o.b_; }

    MapElement bracket(const MapElement& x, const MapElement& y) const {
        MapElement out;
        AlgElement tmp;
        for (const auto& [kx, a] : x)
            for (const auto& [ky, c] : y) {
                tmp = AlgElement();
                tau_->bracket_symbols(kx.sym, ky.sym, a * c, tmp);
                if (tmp.is_zero()) continue;
                const BElement& prod = b_->basis_product(kx.b, ky.b);
                for (const auto& [s, u] : tmp)
                    for (const auto& [k, w] : prod) out.add(MapKey{s, k}, u * w);
            }
        return out;
    }

    MapElement jacobi_defect(const MapElement& x, const MapElement& y, const MapElement& z) const {
        return bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
    }

    // X ⊗ b
    MapElement tensor(const AlgElement& x, const BElement& b) const {
        MapElement out;
        for (const auto& [s, c] : x)
            for (const auto& [k, w] : b) out.add(MapKey{s, k}, c * w);
        return out;
    }
    MapElement tensor(const AlgElement& x, const std::string& b_label = "1") const {
        return tensor(x, BElement::unit(b_->index_of(b_label)));
    }

    // Collapses the B factor through a linear functional (used by evaluation modules).
    template <class F>
    AlgElement contract(const MapElement& x, F&& functional) const {
        AlgElement out;
        for (const auto& [k, c] : x) out.add(k.sym, c * functional(k.b));
        return out;
    }

    std::string str(const MapElement& x) const {
        if (x.is_zero()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [k, c] : x) {
            if (!first) s += " + ";
            first = false;
            if (!c.is_one()) s += c.str() + " ";
            s += tau_->symbol_str(k.sym) + "(" + b_->labels()[k.b] + ")";
        }
        return s;
    }

private:
    std::shared_ptr<const Toroidal> tau_;
    std::shared_ptr<const CoeffAlgebra> b_;
};

// Z^n = M ⊕ Zβ, given by a basis of M and a vector β whose joint matrix is unimodular.
class TriangularData {
public:
    TriangularData(Degree beta, std::vector<Degree> m_basis) : beta_(beta), m_basis_(std::move(m_basis)) {
        const int n = beta_.n;
        if (static_cast<int>(m_basis_.size()) != n - 1)
            throw ValidationError("M basis needs n-1 = " + std::to_string(n - 1) + " vectors");
        for (const auto& d : m_basis_)
            if (d.n != n) throw ValidationError("M basis vector has wrong length");
        IntMatrix a;
        for (const auto& d : m_basis_) a.push_back(d.to_vector());
        a.push_back(beta_.to_vector());
        inv_ = unimodular_inverse(a);  // throws unless Z^n = M ⊕ Zβ
    }

    const Degree& beta() const { return beta_; }
    const std::vector<Degree>& m_basis() const { return m_basis_; }
    int n() const { return beta_.n; }

    // Coordinates (c_1..c_{n-1}, r) with m = Σ c_j M_j + r β.
    std::vector<int> coords(const Degree& m) const {
        const int n = m.n;
        std::vector<int> c(n, 0);
        for (int j = 0; j < n; ++j) {
            long long s = 0;
            for (int i = 0; i < n; ++i) s += static_cast<long long>(m[i]) * inv_[i][j];
            c[j] = static_cast<int>(s);
        }
        return c;
    }
    int beta_coord(const Degree& m) const { return coords(m).back(); }

    // M-component coordinates as a degree of length n-1.
    Degree m_coords(const Degree& m) const {
        auto c = coords(m);
        Degree d(n() - 1);
        for (int j = 0; j + 1 < n(); ++j) d[j] = c[j];
        return d;
    }

    Degree compose(const Degree& mbar, int r) const {
        Degree d(n());
        for (int j = 0; j + 1 < n(); ++j)
            for (int i = 0; i < n(); ++i) d[i] += mbar[j] * m_basis_[j][i];
        for (int i = 0; i < n(); ++i) d[i] += r * beta_[i];
        return d;
    }

    // α_1 = β, α_{j+1} = j-th M basis vector: the basis used to identify τ_M with the
    // subalgebra of degrees with vanishing first coordinate.
    std::vector<Degree> alpha_basis() const {
        std::vector<Degree> a{beta_};
        for (const auto& d : m_basis_) a.push_back(d);
        return a;
    }

private:
    Degree beta_;
    std::vector<Degree> m_basis_;
    IntMatrix inv_;
};

struct BetaSplit {
    MapElement minus, zero, plus;
};

inline BetaSplit beta_split(const MapElement& x, const TriangularData& t) {
    BetaSplit s;
    for (const auto& [k, c] : x) {
        int r = t.beta_coord(k.sym.m);
        (r < 0 ? s.minus : r > 0 ? s.plus : s.zero).add(k, c);
    }
    return s;
}

// True iff x is a combination of degree-zero K_i(b).
inline bool is_central(const MapElement& x) {
    for (const auto& [k, c] : x)
        if (k.sym.kind != SymKind::Kahler || !k.sym.m.is_zero()) return false;
    return true;
}

}  // namespace toroidalkit
