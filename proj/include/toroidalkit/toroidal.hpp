#pragma once

#include "toroidalkit/errors.hpp"
#include "toroidalkit/exactlin.hpp"
#include "toroidalkit/galgebra.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

namespace toroidalkit {

inline constexpr int kMaxRank = 8;

// Element of Z^n, n <= kMaxRank. Unused slots stay zero so comparison can ignore n.
struct Degree {
    std::array<int, kMaxRank> v{};
    int n = 0;

    Degree() = default;
    explicit Degree(int size) : n(size) {
        if (size < 0 || size > kMaxRank) throw ValidationError("degree length out of range");
    }
    Degree(std::initializer_list<int> xs) : Degree(static_cast<int>(xs.size())) {
        int i = 0;
        for (int x : xs) v[i++] = x;
    }
    static Degree from(const std::vector<int>& xs) {
        Degree d(static_cast<int>(xs.size()));
        for (int i = 0; i < d.n; ++i) d.v[i] = xs[i];
        return d;
    }
    static Degree unit(int size, int i, int sign = 1) {
        Degree d(size);
        d.v[i] = sign;
        return d;
    }

    int size() const { return n; }
    int& operator[](int i) { return v[i]; }
    int operator[](int i) const { return v[i]; }
    bool is_zero() const {
        for (int i = 0; i < n; ++i)
            if (v[i] != 0) return false;
        return true;
    }
    std::vector<int> to_vector() const { return {v.begin(), v.begin() + n}; }

    friend Degree operator+(Degree a, const Degree& b) {
        for (int i = 0; i < a.n; ++i) a.v[i] += b.v[i];
        return a;
    }
    friend Degree operator-(Degree a, const Degree& b) {
        for (int i = 0; i < a.n; ++i) a.v[i] -= b.v[i];
        return a;
    }
    Degree operator-() const {
        Degree r(n);
        for (int i = 0; i < n; ++i) r.v[i] = -v[i];
        return r;
    }
    friend bool operator==(const Degree&, const Degree&) = default;
    friend auto operator<=>(const Degree&, const Degree&) = default;

    std::string str() const {
        std::string s = "(";
        for (int i = 0; i < n; ++i) {
            if (i) s += ",";
            s += std::to_string(v[i]);
        }
        return s + ")";
    }
};

enum class SymKind : std::uint8_t { Loop = 0, Kahler = 1, Der = 2 };

// x ⊗ t^m (index = g basis index), t^m K_i or t^m d_i (index = i, zero based).
struct Symbol {
    SymKind kind = SymKind::Loop;
    int index = 0;
    Degree m;

    static Symbol loop(int a, const Degree& m) { return {SymKind::Loop, a, m}; }
    static Symbol kahler(int i, const Degree& m) { return {SymKind::Kahler, i, m}; }
    static Symbol der(int i, const Degree& m) { return {SymKind::Der, i, m}; }

    friend bool operator==(const Symbol&, const Symbol&) = default;
    friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

using AlgElement = SparseVec<Symbol>;

struct CocycleSpec {
    Rational mu1;
    Rational mu2;
    friend bool operator==(const CocycleSpec&, const CocycleSpec&) = default;
};

// Smallest index with a nonzero entry, or -1 for m = 0.
inline int kahler_pivot(const Degree& m) {
    for (int i = 0; i < m.n; ++i)
        if (m[i] != 0) return i;
    return -1;
}

// Adds c·t^m K_i to out in canonical form (the pivot K is rewritten through Σ m_i t^m K_i = 0).
inline void add_kahler(AlgElement& out, int i, const Degree& m, const Rational& c) {
    if (c.is_zero()) return;
    int p = kahler_pivot(m);
    if (p < 0 || i != p) {
        out.add(Symbol::kahler(i, m), c);
        return;
    }
    Rational s = -c / Rational(m[p]);
    for (int r = 0; r < m.n; ++r)
        if (r != p && m[r] != 0) out.add(Symbol::kahler(r, m), s * Rational(m[r]));
}

inline AlgElement canon_kahler(const AlgElement& raw) {
    AlgElement out;
    for (const auto& [sym, c] : raw) {
        if (sym.kind == SymKind::Kahler)
            add_kahler(out, sym.index, sym.m, c);
        else
            out.add(sym, c);
    }
    return out;
}

inline bool is_homogeneous(const AlgElement& x) {
    if (x.is_zero()) return true;
    const Degree& d = x.leading_key().m;
    for (const auto& [s, c] : x)
        if (!(s.m == d)) return false;
    return true;
}

// The full toroidal algebra over g in n variables with cocycle mu1·φ1 + mu2·φ2.
// form_factor = false drops ⟨x,y⟩ from the loop-loop central term (negative control only).
class Toroidal {
public:
    Toroidal(int n, std::shared_ptr<const GAlgebra> g, CocycleSpec phi = {}, bool form_factor = true)
        : n_(n), g_(std::move(g)), phi_(std::move(phi)), form_factor_(form_factor) {
        if (n < 2 || n > kMaxRank) throw ValidationError("toroidal rank n must be in [2, " + std::to_string(kMaxRank) + "]");
        if (!g_) throw ValidationError("missing finite-dimensional algebra");
    }

    int n() const { return n_; }
    const GAlgebra& g() const { return *g_; }
    const std::shared_ptr<const GAlgebra>& g_ptr() const { return g_; }
    const CocycleSpec& phi() const { return phi_; }
    bool form_factor() const { return form_factor_; }

    bool same_config(const Toroidal& o) const {
        return n_ == o.n_ && g_ == o.g_ && phi_ == o.phi_ && form_factor_ == o.form_factor_;
    }

    // Bracket of two basis symbols, accumulated into out with weight c.
    void bracket_symbols(const Symbol& x, const Symbol& y, const Rational& c, AlgElement& out) const {
        check_symbol(x);
        check_symbol(y);
        const Degree mk = x.m + y.m;
        if (x.kind == SymKind::Kahler || y.kind == SymKind::Kahler) {
            if (x.kind == SymKind::Der) der_kahler(x, y, c, out);
            else if (y.kind == SymKind::Der) der_kahler(y, x, -c, out);
            return;  // 𝒦 is central under loops and 𝒦
        }
        if (x.kind == SymKind::Loop && y.kind == SymKind::Loop) {
            for (const auto& [z, s] : g_->table[x.index][y.index]) out.add(Symbol::loop(z, mk), c * s);
            Rational f = form_factor_ ? g_->form(x.index, y.index) : Rational(1);
            if (!f.is_zero())
                for (int i = 0; i < n_; ++i)
                    if (x.m[i] != 0) add_kahler(out, i, mk, c * f * Rational(x.m[i]));
            return;
        }
        if (x.kind == SymKind::Der && y.kind == SymKind::Loop) {
            out.add(Symbol::loop(y.index, mk), c * Rational(y.m[x.index]));
            return;
        }
        if (x.kind == SymKind::Loop && y.kind == SymKind::Der) {
            out.add(Symbol::loop(x.index, mk), -c * Rational(x.m[y.index]));
            return;
        }
        // Der-Der: [t^m d_i, t^k d_j] = k_i t^{m+k} d_j - m_j t^{m+k} d_i + φ
        const int i = x.index, j = y.index;
        const Degree& m = x.m;
        const Degree& k = y.m;
        out.add(Symbol::der(j, mk), c * Rational(k[i]));
        out.add(Symbol::der(i, mk), -c * Rational(m[j]));
        Rational w = phi_.mu1 * Rational(-static_cast<std::int64_t>(k[i]) * m[j]) +
                     phi_.mu2 * Rational(static_cast<std::int64_t>(m[i]) * k[j]);
        if (!w.is_zero())
            for (int p = 0; p < n_; ++p)
                if (m[p] != 0) add_kahler(out, p, mk, c * w * Rational(m[p]));
    }

    AlgElement bracket(const AlgElement& x, const AlgElement& y) const {
        AlgElement out;
        for (const auto& [sx, a] : x)
            for (const auto& [sy, b] : y) bracket_symbols(sx, sy, a * b, out);
        return out;
    }

    AlgElement jacobi_defect(const AlgElement& x, const AlgElement& y, const AlgElement& z) const {
        return bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
    }

    // D(p, m) = Σ p_i t^m d_i and K(p, m) = Σ p_i t^m K_i.
    AlgElement make_D(const std::vector<Rational>& p, const Degree& m) const {
        check_vec(p, m);
        AlgElement out;
        for (int i = 0; i < n_; ++i) out.add(Symbol::der(i, m), p[i]);
        return out;
    }
    AlgElement make_K(const std::vector<Rational>& p, const Degree& m) const {
        check_vec(p, m);
        AlgElement out;
        for (int i = 0; i < n_; ++i) add_kahler(out, i, m, p[i]);
        return out;
    }

    AlgElement loop(const std::string& label, const Degree& m, const Rational& c = Rational(1)) const {
        check_degree(m);
        AlgElement out;
        out.add(Symbol::loop(g_->index_of(label), m), c);
        return out;
    }
    AlgElement kahler(int i, const Degree& m, const Rational& c = Rational(1)) const {
        check_degree(m);
        check_index(i);
        AlgElement out;
        add_kahler(out, i, m, c);
        return out;
    }
    AlgElement der(int i, const Degree& m, const Rational& c = Rational(1)) const {
        check_degree(m);
        check_index(i);
        AlgElement out;
        out.add(Symbol::der(i, m), c);
        return out;
    }

    Degree zero_degree() const { return Degree(n_); }

    std::string symbol_str(const Symbol& s) const {
        switch (s.kind) {
            case SymKind::Loop:
                return g_->labels[s.index] + "@" + s.m.str();
            case SymKind::Kahler:
                return "K" + std::to_string(s.index + 1) + "@" + s.m.str();
            case SymKind::Der:
                return "d" + std::to_string(s.index + 1) + "@" + s.m.str();
        }
        return {};
    }

    std::string str(const AlgElement& x) const {
        if (x.is_zero()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [sym, c] : x) {
            if (!first) s += " + ";
            first = false;
            if (!c.is_one()) s += c.str() + " ";
            s += symbol_str(sym);
        }
        return s;
    }

    void check_degree(const Degree& m) const {
        if (m.n != n_) throw ConfigurationError("degree " + m.str() + " has length " + std::to_string(m.n) +
                                                ", algebra rank is " + std::to_string(n_));
    }

private:
    void check_index(int i) const {
        if (i < 0 || i >= n_) throw ValidationError("index " + std::to_string(i + 1) + " out of range");
    }
    void check_symbol(const Symbol& s) const {
        check_degree(s.m);
        if (s.kind == SymKind::Loop) {
            if (s.index < 0 || s.index >= g_->dim()) throw ConfigurationError("loop label out of range");
        } else {
            check_index(s.index);
        }
    }
    void check_vec(const std::vector<Rational>& p, const Degree& m) const {
        check_degree(m);
        if (static_cast<int>(p.size()) != n_) throw ConfigurationError("coefficient vector has wrong length");
    }

    // [t^m d_i, t^k K_j] = k_i t^{m+k} K_j + δ_ij Σ_p m_p t^{m+k} K_p
    void der_kahler(const Symbol& d, const Symbol& kh, const Rational& c, AlgElement& out) const {
        const Degree mk = d.m + kh.m;
        add_kahler(out, kh.index, mk, c * Rational(kh.m[d.index]));
        if (d.index == kh.index)
            for (int p = 0; p < n_; ++p)
                if (d.m[p] != 0) add_kahler(out, p, mk, c * Rational(d.m[p]));
    }

    int n_;
    std::shared_ptr<const GAlgebra> g_;
    CocycleSpec phi_;
    bool form_factor_;
};

// Integer n×n matrix helpers for the coordinate changes.
using IntMatrix = std::vector<std::vector<int>>;

inline DenseMatrix to_dense(const IntMatrix& a) {
    const int n = static_cast<int>(a.size());
    DenseMatrix d(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(a[i].size()) != n) throw ValidationError("matrix is not square");
        for (int j = 0; j < n; ++j) d(i, j) = Rational(a[i][j]);
    }
    return d;
}

// Inverse of a unimodular integer matrix; throws ValidationError when det != ±1.
inline IntMatrix unimodular_inverse(const IntMatrix& a) {
    DenseMatrix d = to_dense(a);
    Rational det = determinant(d);
    if (det != Rational(1) && det != Rational(-1))
        throw ValidationError("matrix is not unimodular (det = " + det.str() + ")");
    DenseMatrix inv = *inverse(d);
    const int n = static_cast<int>(a.size());
    IntMatrix out(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[i][j] = static_cast<int>(inv(i, j).to_int64());
    return out;
}

inline Degree mat_vec(const IntMatrix& c, const Degree& m) {
    Degree r(m.n);
    for (int i = 0; i < m.n; ++i) {
        long long s = 0;
        for (int j = 0; j < m.n; ++j) s += static_cast<long long>(c[i][j]) * m[j];
        r[i] = static_cast<int>(s);
    }
    return r;
}

inline IntMatrix transpose(const IntMatrix& a) {
    const int n = static_cast<int>(a.size());
    IntMatrix t(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t[j][i] = a[i][j];
    return t;
}

// Change of coordinates by a unimodular C: degrees m ↦ Cm,
// t^m K_i ↦ Σ_r c_{ri} t^{Cm} K_r, t^m d_i ↦ Σ_r b_{ir} t^{Cm} d_r with B = C^{-1}.
class CoordinateChange {
public:
    explicit CoordinateChange(IntMatrix c) : c_(std::move(c)), b_(unimodular_inverse(c_)) {}

    const IntMatrix& matrix() const { return c_; }
    CoordinateChange inverse() const { return CoordinateChange(b_); }

    AlgElement apply(const Toroidal& tau, const AlgElement& x) const {
        const int n = tau.n();
        if (static_cast<int>(c_.size()) != n) throw ConfigurationError("coordinate change has wrong size");
        AlgElement out;
        for (const auto& [s, coef] : x) {
            Degree cm = mat_vec(c_, s.m);
            switch (s.kind) {
                case SymKind::Loop:
                    out.add(Symbol::loop(s.index, cm), coef);
                    break;
                case SymKind::Kahler:
                    for (int r = 0; r < n; ++r) add_kahler(out, r, cm, coef * Rational(c_[r][s.index]));
                    break;
                case SymKind::Der:
                    for (int r = 0; r < n; ++r) out.add(Symbol::der(r, cm), coef * Rational(b_[s.index][r]));
                    break;
            }
        }
        return out;
    }

private:
    IntMatrix c_;
    IntMatrix b_;
};

inline AlgElement coordinate_change(const Toroidal& tau, const IntMatrix& c, const AlgElement& x) {
    return CoordinateChange(c).apply(tau, x);
}

// Identification of the subalgebra supported on degrees with m_1 = 0 with its image under a
// new Z-basis α_1..α_n of Z^n: x ⊗ t^m ↦ x ⊗ t^{Σ m_i α_i}, t^m K_i ↦ K(α_i, ·), t^m d_i ↦ D(β_i, ·)
// with β_i the dual basis. This is the coordinate change with C = A^T, A having rows α_i.
class PhiEmbed {
public:
    explicit PhiEmbed(const std::vector<Degree>& alpha_basis) : change_(transpose(rows_of(alpha_basis))) {}

    AlgElement apply(const Toroidal& tau, const AlgElement& x) const {
        for (const auto& [s, c] : x)
            if (s.m.n > 0 && s.m[0] != 0)
                throw ValidationError("phi_embed: degree " + s.m.str() + " has nonzero first coordinate");
        return change_.apply(tau, x);
    }
    // Inverse image; the result has first coordinate zero iff the input degree lies in span(α_2..α_n).
    AlgElement apply_inverse(const Toroidal& tau, const AlgElement& y) const {
        return change_.inverse().apply(tau, y);
    }
    const CoordinateChange& change() const { return change_; }

private:
    static IntMatrix rows_of(const std::vector<Degree>& basis) {
        IntMatrix a;
        for (const auto& d : basis) a.push_back(d.to_vector());
        if (a.empty() || a.size() != a[0].size()) throw ValidationError("phi_embed: need n vectors of length n");
        return a;
    }
    CoordinateChange change_;
};

inline AlgElement phi_embed(const Toroidal& tau, const std::vector<Degree>& alpha_basis, const AlgElement& x) {
    return PhiEmbed(alpha_basis).apply(tau, x);
}

}  // namespace toroidalkit
