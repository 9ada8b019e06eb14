#pragma once

#include "toroidalkit/errors.hpp"
#include "toroidalkit/exactlin.hpp"

#include <cctype>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace toroidalkit {

using BElement = SparseVec<int>;

// Univariate polynomial, coefficients from the constant term up.
using Poly = std::vector<Rational>;

inline void poly_trim(Poly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline Rational poly_eval(const Poly& p, const Rational& x) {
    Rational r;
    for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * x + *it;
    return r;
}

// Divides p by (s - r); requires p(r) = 0.
inline Poly poly_deflate(const Poly& p, const Rational& r) {
    const int d = static_cast<int>(p.size()) - 1;
    Poly q(d);
    Rational carry;
    for (int i = d; i >= 1; --i) {
        carry = p[i] + carry * r;
        q[i - 1] = carry;
    }
    return q;
}

// Parses sums of terms like "s^2 - 3*s + 2", "-1/2 s", "s". Whitespace is ignored.
inline Poly parse_polynomial(const std::string& text, char var = 's') {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw ValidationError("empty polynomial");
    Poly p;
    std::size_t i = 0;
    auto fail = [&](const std::string& why) {
        throw ValidationError("malformed polynomial '" + text + "': " + why);
    };
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (!p.empty() || i != 0) {
            fail("expected + or -");
        }
        std::size_t start = i;
        while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) ++i;
        Rational coef(1);
        if (i > start) coef = Rational::parse(s.substr(start, i - start));
        int power = 0;
        if (i < s.size() && s[i] == '*') {
            ++i;
            if (i >= s.size() || s[i] != var) fail("expected variable after *");
        }
        if (i < s.size() && s[i] == var) {
            ++i;
            power = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::size_t ps = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (ps == i) fail("missing exponent");
                power = std::stoi(s.substr(ps, i - ps));
            }
        } else if (i == start) {
            fail("empty term");
        }
        if (static_cast<int>(p.size()) <= power) p.resize(power + 1);
        p[power] += coef * Rational(sign);
    }
    poly_trim(p);
    return p;
}

// Finite-dimensional commutative unital algebra given by a multiplication table on a
// labelled basis; basis element 0 is the unit.
class CoeffAlgebra {
public:
    CoeffAlgebra(std::vector<std::string> labels, std::vector<std::vector<BElement>> table,
                 std::optional<Poly> modulus = std::nullopt)
        : labels_(std::move(labels)), table_(std::move(table)), modulus_(std::move(modulus)) {
        validate();
    }

    int dim() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::optional<Poly>& modulus() const { return modulus_; }
    BElement unit() const { return BElement::unit(0); }
    BElement basis(int i) const { return BElement::unit(i); }

    int index_of(const std::string& label) const {
        for (int i = 0; i < dim(); ++i)
            if (labels_[i] == label) return i;
        throw ValidationError("unknown coefficient basis label '" + label + "'");
    }

    const BElement& basis_product(int i, int j) const { return table_[i][j]; }

    BElement mul(const BElement& a, const BElement& b) const {
        BElement r;
        for (const auto& [i, x] : a)
            for (const auto& [j, y] : b) r.axpy(x * y, table_[i][j]);
        return r;
    }

    std::string str(const BElement& b) const {
        if (b.is_zero()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [i, c] : b) {
            if (!first) s += " + ";
            first = false;
            s += c.str() + "*" + labels_[i];
        }
        return s;
    }

private:
    void validate() const {
        const int d = dim();
        if (d < 1) throw ValidationError("coefficient algebra needs at least one basis element");
        if (static_cast<int>(table_.size()) != d) throw ValidationError("multiplication table has wrong shape");
        for (const auto& r : table_) {
            if (static_cast<int>(r.size()) != d) throw ValidationError("multiplication table has wrong shape");
            for (const auto& e : r)
                for (const auto& [k, c] : e)
                    if (k < 0 || k >= d) throw ValidationError("multiplication table entry out of range");
        }
        for (int i = 0; i < d; ++i) {
            if (!(table_[0][i] == basis(i)) || !(table_[i][0] == basis(i)))
                throw ValidationError("first basis element '" + labels_[0] + "' is not a unit");
            for (int j = 0; j < d; ++j)
                if (!(table_[i][j] == table_[j][i]))
                    throw ValidationError("multiplication not commutative on (" + labels_[i] + ", " + labels_[j] + ")");
        }
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k)
                    if (!(mul(table_[i][j], basis(k)) == mul(basis(i), table_[j][k])))
                        throw ValidationError("multiplication not associative on (" + labels_[i] + ", " + labels_[j] +
                                              ", " + labels_[k] + ")");
    }

    std::vector<std::string> labels_;
    std::vector<std::vector<BElement>> table_;
    std::optional<Poly> modulus_;
};

// Q[s]/(f) for monic f, basis 1, s, ..., s^{deg f - 1}.
inline std::shared_ptr<const CoeffAlgebra> univariate_quotient(Poly f) {
    poly_trim(f);
    const int d = static_cast<int>(f.size()) - 1;
    if (d < 1) throw ValidationError("modulus must have degree >= 1");
    if (!f.back().is_one()) throw ValidationError("modulus must be monic");
    std::vector<std::string> labels;
    for (int i = 0; i < d; ++i) labels.push_back(i == 0 ? "1" : i == 1 ? "s" : "s^" + std::to_string(i));
    // powers[k] = s^k reduced, for k < 2d - 1
    std::vector<Poly> powers;
    Poly cur(d);
    cur[0] = Rational(1);
    for (int k = 0; k < 2 * d - 1; ++k) {
        powers.push_back(cur);
        Poly next(d);
        Rational top = cur[d - 1];
        for (int i = d - 1; i >= 1; --i) next[i] = cur[i - 1];
        for (int i = 0; i < d; ++i) next[i] -= top * f[i];
        cur = next;
    }
    std::vector<std::vector<BElement>> table(d, std::vector<BElement>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) table[i][j].add(k, powers[i + j][k]);
    return std::make_shared<CoeffAlgebra>(labels, table, f);
}

// An algebra homomorphism ψ: B → Q, stored by its values on the basis.
class EvaluationPoint {
public:
    EvaluationPoint(std::shared_ptr<const CoeffAlgebra> b, std::vector<Rational> values)
        : b_(std::move(b)), values_(std::move(values)) {
        if (static_cast<int>(values_.size()) != b_->dim()) throw ValidationError("point has wrong number of values");
        if (!values_[0].is_one()) throw ValidationError("point must send the unit to 1");
        for (int i = 0; i < b_->dim(); ++i)
            for (int j = 0; j < b_->dim(); ++j)
                if ((*this)(b_->basis_product(i, j)) != values_[i] * values_[j])
                    throw ValidationError("point is not multiplicative on (" + b_->labels()[i] + ", " +
                                          b_->labels()[j] + ")");
    }

    Rational operator()(const BElement& b) const {
        Rational r;
        for (const auto& [i, c] : b) r += c * values_[i];
        return r;
    }
    const std::vector<Rational>& values() const { return values_; }
    const CoeffAlgebra& algebra() const { return *b_; }
    const std::shared_ptr<const CoeffAlgebra>& algebra_ptr() const { return b_; }

    friend bool operator==(const EvaluationPoint& a, const EvaluationPoint& b) {
        return a.b_ == b.b_ && a.values_ == b.values_;
    }

private:
    std::shared_ptr<const CoeffAlgebra> b_;
    std::vector<Rational> values_;
};

// Rational roots with multiplicity of a rational polynomial (rational root theorem).
inline std::vector<Rational> rational_roots(Poly f) {
    poly_trim(f);
    std::vector<Rational> roots;
    while (f.size() > 1 && f[0].is_zero()) {
        roots.push_back(Rational());
        f.erase(f.begin());
    }
    if (f.size() <= 1) return roots;
    // clear denominators
    mpz_class l = 1;
    for (const auto& c : f) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.denominator().get_mpz_t());
    std::vector<mpz_class> ip;
    for (const auto& c : f) ip.push_back(c.numerator() * (l / c.denominator()));
    auto divisors = [](mpz_class v) {
        v = abs(v);
        std::vector<mpz_class> ds;
        if (v > mpz_class("1000000000000")) throw UnsupportedError("coefficient too large for rational root search");
        std::vector<mpz_class> big;
        for (mpz_class d = 1; d * d <= v; ++d)
            if (v % d == 0) {
                ds.push_back(d);
                if (d * d != v) big.push_back(v / d);
            }
        ds.insert(ds.end(), big.rbegin(), big.rend());
        return ds;
    };
    std::vector<Rational> candidates;
    for (const auto& p : divisors(ip.front()))
        for (const auto& q : divisors(ip.back())) {
            mpq_class x(p, q);
            x.canonicalize();
            candidates.emplace_back(x);
            candidates.emplace_back(mpq_class(-x));
        }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (const auto& r : candidates)
        while (f.size() > 1 && poly_eval(f, r).is_zero()) {
            roots.push_back(r);
            f = poly_deflate(f, r);
        }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// One evaluation point per distinct rational root of the modulus (or the unique point of a
// one-dimensional B).
inline std::vector<EvaluationPoint> points_of(const std::shared_ptr<const CoeffAlgebra>& b) {
    if (b->dim() == 1) return {EvaluationPoint(b, {Rational(1)})};
    if (!b->modulus()) throw UnsupportedError("points of a table-only algebra must be given explicitly");
    const Poly& f = *b->modulus();
    std::vector<Rational> roots = rational_roots(f);
    if (static_cast<int>(roots.size()) != static_cast<int>(f.size()) - 1)
        throw UnsupportedError("modulus has irrational or complex roots");
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    std::vector<EvaluationPoint> pts;
    for (const auto& r : roots) {
        std::vector<Rational> vals(b->dim());
        Rational p(1);
        for (int i = 0; i < b->dim(); ++i) {
            vals[i] = p;
            p *= r;
        }
        pts.emplace_back(b, vals);
    }
    return pts;
}

// Point of a univariate quotient sending s to the given root.
inline EvaluationPoint point_at(const std::shared_ptr<const CoeffAlgebra>& b, const Rational& s_value) {
    for (auto& p : points_of(b))
        if (b->dim() == 1 || p.values()[1] == s_value) return p;
    throw ValidationError("s = " + s_value.str() + " is not a root of the modulus");
}

// Basis of ker ψ.
inline std::vector<BElement> ideal_of_point(const EvaluationPoint& psi) {
    const int d = psi.algebra().dim();
    std::vector<int> cols(d);
    BElement row;
    for (int i = 0; i < d; ++i) {
        cols[i] = i;
        row.add(i, psi.values()[i]);
    }
    return rref(ExactMatrix<int>(cols, {row})).kernel_basis;
}

}  // namespace toroidalkit
