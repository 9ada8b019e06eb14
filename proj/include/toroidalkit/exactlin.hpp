#pragma once

#include "toroidalkit/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace toroidalkit {

// Finitely supported vector over an ordered key type. Zero entries are never stored.
template <class Key>
class SparseVec {
public:
    using map_type = std::map<Key, Rational>;
    using const_iterator = typename map_type::const_iterator;

    SparseVec() = default;
    SparseVec(std::initializer_list<std::pair<const Key, Rational>> init) {
        for (const auto& [k, c] : init) add(k, c);
    }

    static SparseVec unit(const Key& k) {
        SparseVec v;
        v.entries_.emplace(k, Rational(1));
        return v;
    }

    void add(const Key& k, const Rational& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = entries_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) entries_.erase(it);
        }
    }
    void set(const Key& k, const Rational& c) {
        if (c.is_zero())
            entries_.erase(k);
        else
            entries_[k] = c;
    }
    // this += c * other
    void axpy(const Rational& c, const SparseVec& other) {
        if (c.is_zero()) return;
        for (const auto& [k, x] : other.entries_) add(k, c * x);
    }
    SparseVec& operator+=(const SparseVec& o) {
        axpy(Rational(1), o);
        return *this;
    }
    SparseVec& operator-=(const SparseVec& o) {
        axpy(Rational(-1), o);
        return *this;
    }
    friend SparseVec operator+(SparseVec a, const SparseVec& b) { return a += b; }
    friend SparseVec operator-(SparseVec a, const SparseVec& b) { return a -= b; }
    SparseVec scaled(const Rational& c) const {
        SparseVec r;
        if (c.is_zero()) return r;
        for (const auto& [k, x] : entries_) r.entries_.emplace_hint(r.entries_.end(), k, x * c);
        return r;
    }
    SparseVec operator-() const { return scaled(Rational(-1)); }

    Rational at(const Key& k) const {
        auto it = entries_.find(k);
        return it == entries_.end() ? Rational() : it->second;
    }
    bool contains(const Key& k) const { return entries_.count(k) != 0; }
    bool empty() const { return entries_.empty(); }
    bool is_zero() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const Key& leading_key() const { return entries_.begin()->first; }
    const Rational& leading_coeff() const { return entries_.begin()->second; }
    const_iterator begin() const { return entries_.begin(); }
    const_iterator end() const { return entries_.end(); }
    const_iterator lower_bound(const Key& k) const { return entries_.lower_bound(k); }
    const map_type& entries() const { return entries_; }

    friend bool operator==(const SparseVec& a, const SparseVec& b) { return a.entries_ == b.entries_; }
    friend bool operator<(const SparseVec& a, const SparseVec& b) { return a.entries_ < b.entries_; }

    template <class F>
    auto transform_keys(F&& f) const {
        SparseVec<std::decay_t<decltype(f(std::declval<Key>()))>> r;
        for (const auto& [k, x] : entries_) r.add(f(k), x);
        return r;
    }

private:
    map_type entries_;
};

// Rows over an explicit, finite column-key universe.
template <class Key>
struct ExactMatrix {
    std::vector<Key> columns;
    std::vector<SparseVec<Key>> rows;

    ExactMatrix() = default;
    ExactMatrix(std::vector<Key> cols, std::vector<SparseVec<Key>> rs) : columns(std::move(cols)), rows(std::move(rs)) {
        normalize_columns();
    }

    // Column universe taken as the union of the row supports.
    static ExactMatrix from_rows(std::vector<SparseVec<Key>> rs) {
        ExactMatrix m;
        for (const auto& r : rs)
            for (const auto& [k, c] : r) m.columns.push_back(k);
        m.rows = std::move(rs);
        m.normalize_columns();
        return m;
    }

    void normalize_columns() {
        std::sort(columns.begin(), columns.end());
        columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
    }
};

template <class Key>
struct RrefResult {
    int rank = 0;
    std::vector<SparseVec<Key>> row_basis;     // reduced rows, pivot coefficient 1, ordered by pivot
    std::vector<SparseVec<Key>> kernel_basis;  // one vector per free column
    std::vector<Key> pivots;
};

// Incremental row echelon form. Stored rows have pairwise distinct leading keys
// and leading coefficient 1. Each row remembers how it was obtained as a
// combination of the inserted vectors, so membership queries can also return
// coordinates.
template <class Key>
class Echelon {
public:
    // Reduces v against the stored rows; returns the residual (zero iff v is in the span).
    SparseVec<Key> reduce(SparseVec<Key> v) const {
        SparseVec<int> unused;
        reduce_tracked(v, unused, false);
        return v;
    }

    bool contains(const SparseVec<Key>& v) const { return reduce(v).is_zero(); }

    // Returns true iff v was independent of the current span (and was added).
    bool insert(const SparseVec<Key>& v) {
        SparseVec<Key> r = v;
        SparseVec<int> combo = SparseVec<int>::unit(inserted_);
        reduce_tracked(r, combo, true);
        ++inserted_;
        if (r.is_zero()) return false;
        Rational inv = Rational(1) / r.leading_coeff();
        Key lead = r.leading_key();
        rows_.emplace(lead, Row{r.scaled(inv), combo.scaled(inv)});
        return true;
    }

    // Coordinates of v over the inserted vectors (by insertion index), or nullopt if v is not in the span.
    std::optional<SparseVec<int>> solve(SparseVec<Key> v) const {
        SparseVec<int> combo;
        reduce_tracked(v, combo, true);
        if (!v.is_zero()) return std::nullopt;
        return combo.scaled(Rational(-1));
    }

    int rank() const { return static_cast<int>(rows_.size()); }
    int inserted() const { return inserted_; }

    std::vector<SparseVec<Key>> rows() const {
        std::vector<SparseVec<Key>> out;
        out.reserve(rows_.size());
        for (const auto& [k, r] : rows_) out.push_back(r.vec);
        return out;
    }

    // Fully reduced basis of the span, ordered by pivot key.
    std::vector<SparseVec<Key>> reduced_rows() const {
        std::vector<std::pair<Key, SparseVec<Key>>> rs;
        for (const auto& [k, r] : rows_) rs.emplace_back(k, r.vec);
        for (std::size_t i = rs.size(); i-- > 0;) {
            for (std::size_t j = 0; j < i; ++j) {
                Rational c = rs[j].second.at(rs[i].first);
                if (!c.is_zero()) rs[j].second.axpy(-c, rs[i].second);
            }
        }
        std::vector<SparseVec<Key>> out;
        for (auto& [k, v] : rs) out.push_back(std::move(v));
        return out;
    }

    std::vector<Key> pivots() const {
        std::vector<Key> out;
        for (const auto& [k, r] : rows_) out.push_back(k);
        return out;
    }

private:
    struct Row {
        SparseVec<Key> vec;
        SparseVec<int> combo;
    };

    void reduce_tracked(SparseVec<Key>& v, SparseVec<int>& combo, bool track) const {
        if (rows_.empty()) return;
        auto it = v.begin();
        while (it != v.end()) {
            const Key k = it->first;
            auto row = rows_.find(k);
            if (row == rows_.end()) {
                ++it;
                continue;
            }
            Rational c = it->second;
            v.axpy(-c, row->second.vec);
            if (track) combo.axpy(-c, row->second.combo);
            it = v.lower_bound(k);
        }
    }

    std::map<Key, Row> rows_;
    int inserted_ = 0;
};

template <class Key>
RrefResult<Key> rref(const ExactMatrix<Key>& m) {
    Echelon<Key> ech;
    for (const auto& r : m.rows) {
        for (const auto& [k, c] : r)
            if (!std::binary_search(m.columns.begin(), m.columns.end(), k))
                throw std::invalid_argument("rref: row entry outside the column universe");
        ech.insert(r);
    }
    RrefResult<Key> out;
    out.row_basis = ech.reduced_rows();
    out.rank = static_cast<int>(out.row_basis.size());
    out.pivots = ech.pivots();
    for (const Key& col : m.columns) {
        if (std::binary_search(out.pivots.begin(), out.pivots.end(), col)) continue;
        SparseVec<Key> kv;
        kv.add(col, Rational(1));
        for (std::size_t i = 0; i < out.row_basis.size(); ++i) kv.add(out.pivots[i], -out.row_basis[i].at(col));
        out.kernel_basis.push_back(std::move(kv));
    }
    return out;
}

template <class Key>
bool span_contains(const std::vector<SparseVec<Key>>& basis, const SparseVec<Key>& v) {
    Echelon<Key> ech;
    for (const auto& b : basis) ech.insert(b);
    return ech.contains(v);
}

template <class Key>
int rank_of(const std::vector<SparseVec<Key>>& rows) {
    Echelon<Key> ech;
    for (const auto& r : rows) ech.insert(r);
    return ech.rank();
}

// Dense matrix of rationals; used for the small representation matrices.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}

    static DenseMatrix identity(int n) {
        DenseMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = Rational(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Rational& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    const Rational& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return x.is_zero(); });
    }

    friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch");
        DenseMatrix r(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const Rational& x = a(i, k);
                if (x.is_zero()) continue;
                for (int j = 0; j < b.cols_; ++j)
                    if (!b(k, j).is_zero()) r(i, j) += x * b(k, j);
            }
        return r;
    }
    friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) {
        a.check_same(b);
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
        return a;
    }
    friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) {
        a.check_same(b);
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
        return a;
    }
    DenseMatrix scaled(const Rational& c) const {
        DenseMatrix r = *this;
        for (auto& x : r.data_) x *= c;
        return r;
    }
    friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    std::vector<Rational> apply(const std::vector<Rational>& v) const {
        if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("vector length mismatch");
        std::vector<Rational> r(rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if (!(*this)(i, j).is_zero() && !v[j].is_zero()) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    // Column j as a sparse vector over row indices.
    SparseVec<int> column(int j) const {
        SparseVec<int> c;
        for (int i = 0; i < rows_; ++i) c.add(i, (*this)(i, j));
        return c;
    }

    DenseMatrix transpose() const {
        DenseMatrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

private:
    void check_same(const DenseMatrix& b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_) throw std::invalid_argument("matrix shape mismatch");
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<Rational> data_;
};

inline DenseMatrix commutator(const DenseMatrix& a, const DenseMatrix& b) { return a * b - b * a; }

inline Rational determinant(DenseMatrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
    const int n = m.rows();
    Rational det(1);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (!m(r, col).is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) return Rational();
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
            det = -det;
        }
        det *= m(col, col);
        Rational inv = Rational(1) / m(col, col);
        for (int r = col + 1; r < n; ++r) {
            Rational f = m(r, col) * inv;
            if (f.is_zero()) continue;
            for (int j = col; j < n; ++j) m(r, j) -= f * m(col, j);
        }
    }
    return det;
}

inline std::optional<DenseMatrix> inverse(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("inverse of non-square matrix");
    const int n = a.rows();
    DenseMatrix m = a;
    DenseMatrix inv = DenseMatrix::identity(n);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (!m(r, col).is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) return std::nullopt;
        for (int j = 0; j < n; ++j) {
            std::swap(m(piv, j), m(col, j));
            std::swap(inv(piv, j), inv(col, j));
        }
        Rational s = Rational(1) / m(col, col);
        for (int j = 0; j < n; ++j) {
            m(col, j) *= s;
            inv(col, j) *= s;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || m(r, col).is_zero()) continue;
            Rational f = m(r, col);
            for (int j = 0; j < n; ++j) {
                m(r, j) -= f * m(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

}  // namespace toroidalkit
