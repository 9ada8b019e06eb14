#pragma once

#include "toroidalkit/coeffalg.hpp"
#include "toroidalkit/errors.hpp"
#include "toroidalkit/maptoroidal.hpp"
#include "toroidalkit/reps.hpp"
#include "toroidalkit/toroidal.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace toroidalkit {

// Basis vector v1 ⊗ v2 ⊗ t^r. Ordered by r first so fibers are contiguous.
struct MKey {
    Degree r;
    int v1 = 0;
    int v2 = 0;
    friend bool operator==(const MKey&, const MKey&) = default;
    friend auto operator<=>(const MKey&, const MKey&) = default;
};

using ModuleVector = SparseVec<MKey>;

// Box lo <= r <= hi in Z^n.
struct WeightWindow {
    Degree lo, hi;

    WeightWindow() = default;
    WeightWindow(Degree l, Degree h) : lo(l), hi(h) {
        if (lo.n != hi.n) throw ValidationError("window bounds have different lengths");
        for (int i = 0; i < lo.n; ++i)
            if (lo[i] > hi[i]) throw ValidationError("window lower bound exceeds upper bound");
    }
    static WeightWindow cube(int n, int lo, int hi) {
        Degree l(n), h(n);
        for (int i = 0; i < n; ++i) {
            l[i] = lo;
            h[i] = hi;
        }
        return {l, h};
    }

    bool contains(const Degree& r) const {
        for (int i = 0; i < lo.n; ++i)
            if (r[i] < lo[i] || r[i] > hi[i]) return false;
        return true;
    }

    std::vector<Degree> points() const {
        std::vector<Degree> pts;
        Degree cur = lo;
        if (lo.n == 0) return {cur};
        while (true) {
            pts.push_back(cur);
            int i = lo.n - 1;
            while (i >= 0 && cur[i] == hi[i]) {
                cur[i] = lo[i];
                --i;
            }
            if (i < 0) break;
            ++cur[i];
        }
        return pts;
    }
};

enum class ModuleKind { Tau, TauRing, Eval };

inline std::string kind_name(ModuleKind k) {
    switch (k) {
        case ModuleKind::Tau:
            return "tau";
        case ModuleKind::TauRing:
            return "tau-ring";
        case ModuleKind::Eval:
            return "eval";
    }
    return {};
}

struct TensorModuleSpec {
    ModuleKind kind = ModuleKind::Tau;
    Rational c;
    HighestWeight lam1;
    HighestWeight lam2;
    std::vector<Rational> alpha;  // length n (Tau, Eval) or n-1 (TauRing)
    Rational a, b;                // TauRing: K_1 and d_1 scalars
    std::optional<EvaluationPoint> psi;  // Eval
};

// The weight modules 𝔏(c, λ1, λ2, α) over τ, their evaluation variants over τ(B), and the
// modules 𝔏(a, b, c, λ1, λ2, α̲) over the subalgebra of τ on degrees with vanishing first
// coordinate. For TauRing, vectors carry full-length degrees with r_1 = 0 and the gl_{n-1}
// factor acts through the coordinates 2..n.
class TensorModule {
public:
    TensorModule(std::shared_ptr<const Toroidal> tau, TensorModuleSpec spec,
                 std::shared_ptr<const CoeffAlgebra> B = nullptr)
        : tau_(std::move(tau)), spec_(std::move(spec)) {
        const int n = tau_->n();
        const int m = spec_.kind == ModuleKind::TauRing ? n - 1 : n;
        if (static_cast<int>(spec_.alpha.size()) != m)
            throw ConfigurationError(kind_name(spec_.kind) + " module needs alpha of length " + std::to_string(m));
        v1_ = build_irrep_g(tau_->g_ptr(), spec_.lam1);
        v2_ = build_gln_rep(m, spec_.c, spec_.lam2);
        if (spec_.kind == ModuleKind::Eval) {
            if (!spec_.psi) throw ConfigurationError("evaluation module needs a point psi");
            if (!B) B = spec_.psi->algebra_ptr();
            if (spec_.psi->algebra_ptr() != B) throw ConfigurationError("psi is defined on a different algebra");
            map_ = std::make_shared<MapToroidal>(tau_, B);
        } else if (B) {
            map_ = std::make_shared<MapToroidal>(tau_, B);
        }
    }

    const TensorModuleSpec& spec() const { return spec_; }
    ModuleKind kind() const { return spec_.kind; }
    const Toroidal& tau() const { return *tau_; }
    const std::shared_ptr<const Toroidal>& tau_ptr() const { return tau_; }
    const MapToroidal* map() const { return map_.get(); }
    const GRep& v1() const { return v1_; }
    const GlRep& v2() const { return v2_; }
    int fiber_dim() const { return v1_.dim * v2_.dim; }
    bool is_ring() const { return spec_.kind == ModuleKind::TauRing; }

    // Basis of the fiber at r.
    std::vector<MKey> fiber_keys(const Degree& r) const {
        check_degree(r);
        std::vector<MKey> keys;
        for (int i = 0; i < v1_.dim; ++i)
            for (int j = 0; j < v2_.dim; ++j) keys.push_back({r, i, j});
        return keys;
    }

    // d_i eigenvalues on the fiber at r: α + r (TauRing: α̲ + r̲ on coordinates 2..n).
    std::vector<Rational> weight_of(const Degree& r) const {
        std::vector<Rational> w;
        const int off = is_ring() ? 1 : 0;
        for (int i = off; i < tau_->n(); ++i) w.push_back(spec_.alpha[i - off] + Rational(r[i]));
        return w;
    }

    // Action of one symbol on one basis vector, accumulated into out with weight c.
    void act_symbol(const Symbol& s, const Rational& c, const MKey& k, ModuleVector& out) const {
        if (c.is_zero()) return;
        const Degree r = k.r + s.m;
        if (is_ring() && s.m[0] != 0)
            throw ConfigurationError("tau-ring module: degree " + s.m.str() + " has nonzero first coordinate");
        switch (s.kind) {
            case SymKind::Loop:
                for (const auto& [u, x] : v1_.ops[s.index].column(k.v1)) out.add({r, u, k.v2}, c * x);
                return;
            case SymKind::Kahler:
                if (is_ring() && s.index == 0) out.add({r, k.v1, k.v2}, c * spec_.a);
                return;
            case SymKind::Der: {
                if (is_ring() && s.index == 0) {
                    out.add({r, k.v1, k.v2}, c * spec_.b);
                    return;
                }
                const int off = is_ring() ? 1 : 0;
                const int i = s.index - off;
                out.add({r, k.v1, k.v2}, c * (spec_.alpha[i] + Rational(k.r[s.index])));
                for (int j = off; j < tau_->n(); ++j) {
                    if (s.m[j] == 0) continue;
                    for (const auto& [u, x] : v2_.op(j - off, i).column(k.v2))
                        out.add({r, k.v1, u}, c * Rational(s.m[j]) * x);
                }
                return;
            }
        }
    }

    ModuleVector act(const AlgElement& x, const ModuleVector& v) const {
        if (spec_.kind == ModuleKind::Eval) throw ConfigurationError("evaluation module acts by map-algebra elements");
        ModuleVector out;
        for (const auto& [s, a] : x)
            for (const auto& [k, b] : v) act_symbol(s, a * b, k, out);
        return out;
    }

    // X(b) acts as ψ(b) X.
    ModuleVector act(const MapElement& x, const ModuleVector& v) const {
        if (spec_.kind != ModuleKind::Eval) throw ConfigurationError("only evaluation modules take map-algebra elements");
        ModuleVector out;
        const auto& psi = spec_.psi->values();
        for (const auto& [mk, a] : x) {
            Rational w = a * psi[mk.b];
            if (w.is_zero()) continue;
            for (const auto& [k, b] : v) act_symbol(mk.sym, w * b, k, out);
        }
        return out;
    }

    ModuleVector axiom_defect(const AlgElement& x, const AlgElement& y, const ModuleVector& v) const {
        return act(tau_->bracket(x, y), v) - act(x, act(y, v)) + act(y, act(x, v));
    }
    ModuleVector axiom_defect(const MapElement& x, const MapElement& y, const ModuleVector& v) const {
        return act(map_->bracket(x, y), v) - act(x, act(y, v)) + act(y, act(x, v));
    }

    // Fiber dimension at every weight of the window.
    std::map<std::vector<Rational>, int> weight_table(const WeightWindow& w) const {
        std::map<std::vector<Rational>, int> t;
        for (const auto& r : w.points()) t[weight_of(r)] += static_cast<int>(fiber_keys(r).size());
        return t;
    }

    void check_degree(const Degree& r) const {
        tau_->check_degree(r);
        if (is_ring() && r[0] != 0) throw ConfigurationError("tau-ring module degrees have r_1 = 0");
    }

    std::string key_str(const MKey& k) const {
        return "[" + v1_.label(k.v1) + "|" + v2_.labels[k.v2] + "|" + k.r.str() + "]";
    }
    std::string str(const ModuleVector& v) const {
        if (v.is_zero()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [k, c] : v) {
            if (!first) s += " + ";
            first = false;
            if (!c.is_one()) s += c.str() + " ";
            s += key_str(k);
        }
        return s;
    }

private:
    std::shared_ptr<const Toroidal> tau_;
    TensorModuleSpec spec_;
    GRep v1_;
    GlRep v2_;
    std::shared_ptr<const MapToroidal> map_;
};

// ---- de Rham complex on the modules 𝔏(k, 0, ω_k, α) ----

inline TensorModuleSpec differential_form_spec(int n, int k, const std::vector<Rational>& alpha, int g_rank) {
    if (k < 0 || k > n) throw ValidationError("form degree out of range");
    TensorModuleSpec s;
    s.kind = ModuleKind::Tau;
    s.c = Rational(k);
    s.lam1.coords.assign(g_rank, 0);
    s.lam2.coords.assign(n - 1, 0);
    if (k >= 1 && k <= n - 1) s.lam2.coords[k - 1] = 1;
    s.lam2.c = s.c;
    s.alpha = alpha;
    return s;
}

class DeRham {
public:
    DeRham(int n, std::vector<Rational> alpha) : n_(n), alpha_(std::move(alpha)) {
        if (static_cast<int>(alpha_.size()) != n) throw ValidationError("alpha has wrong length");
        for (int k = 0; k <= n; ++k) {
            subsets_.push_back(wedge_subsets(n, k));
            std::map<std::vector<int>, int> idx;
            for (int s = 0; s < static_cast<int>(subsets_[k].size()); ++s) idx[subsets_[k][s]] = s;
            index_.push_back(idx);
        }
    }

    int n() const { return n_; }
    const std::vector<Rational>& alpha() const { return alpha_; }
    int rank_of_forms(int k) const { return static_cast<int>(subsets_[k].size()); }

    // d(ω ⊗ t^r) = Σ_j (α_j + r_j) (e_j ∧ ω) ⊗ t^r
    ModuleVector d(int k, const ModuleVector& v) const {
        if (k < 0 || k > n_ - 1) throw ValidationError("d_k needs 0 <= k <= n-1");
        ModuleVector out;
        for (const auto& [key, c] : v) {
            const auto& S = subsets_[k].at(key.v2);
            for (int j = 0; j < n_; ++j) {
                Rational w = alpha_[j] + Rational(key.r[j]);
                if (w.is_zero()) continue;
                if (std::find(S.begin(), S.end(), j) != S.end()) continue;
                int below = 0;
                for (int s : S)
                    if (s < j) ++below;
                std::vector<int> T = S;
                T.insert(std::upper_bound(T.begin(), T.end(), j), j);
                out.add({key.r, key.v1, index_[k + 1].at(T)}, (below % 2 ? -w : w) * c);
            }
        }
        return out;
    }

    // Reduced basis of d_k restricted to the fiber at r.
    std::vector<ModuleVector> image_fiber(int k, const Degree& r) const {
        Echelon<MKey> e;
        for (int s = 0; s < rank_of_forms(k); ++s) e.insert(d(k, ModuleVector::unit({r, 0, s})));
        return e.reduced_rows();
    }

    std::map<Degree, std::vector<ModuleVector>> image_basis(int k, const WeightWindow& w) const {
        std::map<Degree, std::vector<ModuleVector>> out;
        for (const auto& r : w.points()) out[r] = image_fiber(k, r);
        return out;
    }

    std::vector<ModuleVector> kernel_fiber(int k, const Degree& r) const {
        std::vector<MKey> cols;
        std::vector<SparseVec<MKey>> rows_by_target;
        // kernel of the map e_S ↦ d(e_S): build the transpose as rows over source keys
        std::map<MKey, SparseVec<MKey>> rows;
        for (int s = 0; s < rank_of_forms(k); ++s) {
            MKey src{r, 0, s};
            cols.push_back(src);
            for (const auto& [t, c] : d(k, ModuleVector::unit(src))) rows[t].add(src, c);
        }
        for (auto& [t, row] : rows) rows_by_target.push_back(row);
        return rref(ExactMatrix<MKey>(cols, rows_by_target)).kernel_basis;
    }

private:
    int n_;
    std::vector<Rational> alpha_;
    std::vector<std::vector<std::vector<int>>> subsets_;
    std::vector<std::map<std::vector<int>, int>> index_;
};

}  // namespace toroidalkit
