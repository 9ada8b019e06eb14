#pragma once

#include "toroidalkit/check.hpp"
#include "toroidalkit/coeffalg.hpp"
#include "toroidalkit/errors.hpp"
#include "toroidalkit/maptoroidal.hpp"
#include "toroidalkit/random.hpp"
#include "toroidalkit/tensormod.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace toroidalkit {

// Basis symbols of τ at degree m (canonical Kähler symbols only).
inline std::vector<Symbol> basis_symbols(const Toroidal& t, const Degree& m) {
    std::vector<Symbol> out;
    for (int a = 0; a < t.g().dim(); ++a) out.push_back(Symbol::loop(a, m));
    const int p = kahler_pivot(m);
    for (int i = 0; i < t.n(); ++i)
        if (i != p) out.push_back(Symbol::kahler(i, m));
    for (int i = 0; i < t.n(); ++i) out.push_back(Symbol::der(i, m));
    return out;
}

// PBW basis vector Y_1 ⋯ Y_k ⊗ x of U(τ(B)^-) ⊗ X, with Y_1 <= ... <= Y_k.
struct VKey {
    std::vector<MapKey> word;
    MKey x;
    friend bool operator==(const VKey&, const VKey&) = default;
    friend auto operator<=>(const VKey&, const VKey&) = default;
};

struct VKeyHash {
    std::size_t operator()(const VKey& k) const {
        std::uint64_t h = 0x51ed27;
        auto mix = [&h](std::uint64_t x) { h = splitmix64(h ^ x); };
        auto deg = [&mix](const Degree& d) {
            for (int i = 0; i < d.n; ++i) mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(d[i])));
        };
        for (const auto& y : k.word) {
            mix((static_cast<std::uint64_t>(y.sym.kind) << 32) ^ (static_cast<std::uint64_t>(y.sym.index) << 8) ^
                static_cast<std::uint64_t>(y.b));
            deg(y.sym.m);
        }
        mix(0xfeed);
        deg(k.x.r);
        mix((static_cast<std::uint64_t>(k.x.v1) << 32) ^ static_cast<std::uint64_t>(k.x.v2));
        return static_cast<std::size_t>(h);
    }
};

using MVec = SparseVec<VKey>;

// Basis vector of the quotient: (level, M-degree, index in the fiber basis).
struct QKey {
    int level = 0;
    Degree mu;
    int idx = 0;
    friend bool operator==(const QKey&, const QKey&) = default;
    friend auto operator<=>(const QKey&, const QKey&) = default;
};

using QVec = SparseVec<QKey>;

struct VermaConfig {
    std::shared_ptr<const MapToroidal> L;
    TriangularData tri;
    TensorModuleSpec x;     // kind TauRing
    int depth = 1;
    WeightWindow m_window;  // over M-coordinates, length n-1
    EvaluationPoint psi;
    std::optional<WeightWindow> gen_window;  // m of the ±β+m generators; defaults to m_window
    int patience = 0;             // stop a fiber after this many fruitless candidates; 0 = exhaustive
    std::uint64_t order_seed = 0;  // candidate order within a fiber
};

// Generalized Verma module induced from X, truncated to levels 0..depth and M-degrees in a
// window, with its quotient by the maximal graded submodule N. A level-r vector lies in N iff
// every recorded raising generator (degree β+m, target inside the window) sends it into N one
// level up. N is zero at level 0, so the quotient at level r is the span of "signatures": the
// quotient coordinates at level r-1 of all raising images.
class VermaStack {
public:
    struct Fiber {
        std::vector<MVec> lifts;  // quotient basis, as PBW vectors
        Echelon<std::int64_t> ech;  // span of the lift signatures, inserted in lift order
        std::vector<MVec> n_basis;  // part of N found among the examined candidates
        int candidates = 0;         // candidates available
        int examined = 0;           // candidates processed before saturation
        int verma_rank = 0;         // PBW rank of the examined candidates
        bool saturated = false;     // stopped early
    };

    struct Stats {
        long long escapes = 0;  // vectors whose signature left the computed span
    };

    explicit VermaStack(VermaConfig cfg) : cfg_(std::move(cfg)), phi_(cfg_.tri.alpha_basis()) {
        const Toroidal& t = cfg_.L->tau();
        if (cfg_.depth < 0) throw ValidationError("depth must be >= 0");
        if (cfg_.x.kind != ModuleKind::TauRing) throw ValidationError("verma: X must be a tau-ring module");
        if (cfg_.x.psi && !(*cfg_.x.psi == cfg_.psi))
            throw ValidationError("verma: the point attached to X differs from the evaluation point");
        if (cfg_.psi.algebra_ptr() != cfg_.L->B_ptr())
            throw ValidationError("verma: psi is defined on a different coefficient algebra");
        if (cfg_.tri.n() != t.n() || cfg_.m_window.lo.n != t.n() - 1)
            throw ValidationError("verma: triangular data or window has the wrong rank");
        if (cfg_.patience < 0) throw ValidationError("verma: patience must be >= 0");
        if (!cfg_.gen_window) cfg_.gen_window = cfg_.m_window;
        if (cfg_.gen_window->lo.n != t.n() - 1) throw ValidationError("verma: generator window has the wrong rank");
        x_ = std::make_unique<TensorModule>(cfg_.L->tau_ptr(), cfg_.x);
        const int bdim = cfg_.L->B().dim();
        for (const auto& m : cfg_.gen_window->points()) {
            for (const auto& s : basis_symbols(t, cfg_.tri.compose(m, -1)))
                for (int b = 0; b < bdim; ++b) lowering_.push_back({s, b});
            for (const auto& s : basis_symbols(t, cfg_.tri.compose(m, 1)))
                for (int b = 0; b < bdim; ++b) raising_.push_back({s, b});
            for (const auto& s : basis_symbols(t, cfg_.tri.compose(m, 0)))
                for (int b = 0; b < bdim; ++b) middle_.push_back({s, b});
        }
        bool hosts = false;
        for (const auto& y : lowering_)
            if (cfg_.m_window.contains(cfg_.tri.m_coords(y.sym.m))) hosts = true;
        if (cfg_.depth >= 1 && !hosts) throw ValidationError("verma: window too small to host a lowering generator");
        for (const auto& z : raising_) raising_shift_.push_back(cfg_.tri.m_coords(z.sym.m));
        levels_.resize(cfg_.depth + 1);
    }

    const VermaConfig& config() const { return cfg_; }
    const std::vector<MapKey>& lowering() const { return lowering_; }
    const std::vector<MapKey>& raising() const { return raising_; }
    const std::vector<MapKey>& middle() const { return middle_; }
    const TensorModule& x_module() const { return *x_; }
    const MapToroidal& map() const { return *cfg_.L; }
    const Stats& stats() const { return stats_; }
    int depth() const { return cfg_.depth; }
    bool built() const { return built_; }
    const std::map<Degree, Fiber>& level(int r) const { return levels_.at(r); }
    const Fiber& fiber(int r, const Degree& mu) const { return levels_.at(r).at(mu); }

    void build() {
        if (built_) return;
        const auto mus = cfg_.m_window.points();
        for (const auto& mu : mus) {
            Fiber f;
            for (const auto& k : x_->fiber_keys(x_degree(mu))) f.lifts.push_back(MVec::unit({{}, k}));
            f.candidates = f.examined = f.verma_rank = static_cast<int>(f.lifts.size());
            levels_[0][mu] = std::move(f);
        }
        for (int r = 1; r <= cfg_.depth; ++r) {
            std::uint64_t fi = 0;
            for (const auto& mu : mus) levels_[r][mu] = build_fiber(r, mu, fi++);
        }
        built_ = true;
    }

    // ---- PBW arithmetic ----

    MapElement bracket(const MapKey& a, const MapKey& b) const {
        auto key = std::make_pair(a, b);
        auto it = bracket_cache_.find(key);
        if (it != bracket_cache_.end()) return it->second;
        MapElement r = cfg_.L->bracket(MapElement::unit(a), MapElement::unit(b));
        bracket_cache_.emplace(key, r);
        return r;
    }

    int beta_level(const MapKey& k) const { return cfg_.tri.beta_coord(k.sym.m); }

    Degree degree_of(const VKey& v) const {
        Degree d = cfg_.tri.compose(m_of_x(v.x), 0);
        for (const auto& y : v.word) d = d + y.sym.m;
        return d;
    }
    int level_of(const VKey& v) const { return -cfg_.tri.beta_coord(degree_of(v)); }
    Degree mu_of(const VKey& v) const { return cfg_.tri.m_coords(degree_of(v)); }

    // Y · v for Y in τ(B)^-, normal ordered.
    void lower_mul(const MapKey& y, const Rational& c, const VKey& v, MVec& out) const {
        if (c.is_zero()) return;
        if (v.word.empty() || !(v.word.front() < y)) {
            VKey w = v;
            w.word.insert(w.word.begin(), y);
            out.add(w, c);
            return;
        }
        // Y Y1 rest = Y1 (Y rest) + [Y, Y1] rest
        VKey rest = v;
        const MapKey y1 = rest.word.front();
        rest.word.erase(rest.word.begin());
        MVec inner;
        lower_mul(y, Rational(1), rest, inner);
        for (const auto& [w, a] : inner) lower_mul(y1, c * a, w, out);
        for (const auto& [z, a] : bracket(y, y1)) act_key(z, c * a, rest, out);
    }

    // Action of one map-algebra basis element on a PBW vector.
    void act_key(const MapKey& g, const Rational& c, const VKey& v, MVec& out) const {
        if (c.is_zero()) return;
        const int lv = beta_level(g);
        if (lv < 0) {
            lower_mul(g, c, v, out);
            return;
        }
        if (v.word.empty()) {
            if (lv > 0) return;  // τ(B)^+ kills X
            act_on_x(g, c, v.x, out);
            return;
        }
        // G Y1 rest = [G, Y1] rest + Y1 (G rest)
        VKey rest = v;
        const MapKey y1 = rest.word.front();
        rest.word.erase(rest.word.begin());
        for (const auto& [z, a] : bracket(g, y1)) act_key(z, c * a, rest, out);
        MVec inner;
        act_key(g, Rational(1), rest, inner);
        for (const auto& [w, a] : inner) lower_mul(y1, c * a, w, out);
    }

    MVec act(const MapElement& g, const MVec& v) const {
        MVec out;
        for (const auto& [k, a] : g)
            for (const auto& [w, b] : v) act_key(k, a * b, w, out);
        return out;
    }
    MVec act(const MapKey& g, const MVec& v) const {
        MVec out;
        for (const auto& [w, b] : v) act_key(g, b, w, out);
        return out;
    }

    // ψ(b) times the X action, through the identification of τ_M with the ring subalgebra.
    void act_on_x(const MapKey& g, const Rational& c, const MKey& x, MVec& out) const {
        Rational w = c * cfg_.psi.values()[g.b];
        if (w.is_zero()) return;
        auto it = phi_inv_cache_.find(g.sym);
        if (it == phi_inv_cache_.end())
            it = phi_inv_cache_.emplace(g.sym, phi_.apply_inverse(cfg_.L->tau(), AlgElement::unit(g.sym))).first;
        ModuleVector res;
        for (const auto& [s, a] : it->second) x_->act_symbol(s, w * a, x, res);
        for (const auto& [k, a] : res) out.add({{}, k}, a);
    }

    // ---- quotient coordinates ----

    // Coordinates in the quotient basis; nullopt if a component lies outside the window or depth,
    // or its signature leaves the computed span.
    std::optional<QVec> coords(const MVec& v) const {
        std::map<std::pair<int, Degree>, MVec> parts;
        for (const auto& [k, c] : v) parts[{level_of(k), mu_of(k)}].add(k, c);
        QVec out;
        for (const auto& [lm, part] : parts) {
            const auto& [r, mu] = lm;
            if (r < 0 || r > cfg_.depth || !cfg_.m_window.contains(mu)) return std::nullopt;
            if (r == 0) {
                for (const auto& [k, c] : part) out.add({0, mu, k.x.v1 * x_->v2().dim + k.x.v2}, c);
                continue;
            }
            auto co = fiber_coords(r, mu, part);
            if (!co) return std::nullopt;
            for (const auto& [i, c] : *co) out.add({r, mu, i}, c);
        }
        return out;
    }

    std::optional<QVec> act_quotient(const MapElement& g, const QKey& q) const {
        return coords(act(g, lift(q)));
    }

    const MVec& lift(const QKey& q) const { return levels_.at(q.level).at(q.mu).lifts.at(q.idx); }

    int quotient_dim(int r, const Degree& mu) const { return static_cast<int>(fiber(r, mu).lifts.size()); }

    // Recorded raising action: quotient coordinates of Z·(basis vector q) for raising generator zi.
    std::optional<QVec> raising_image(int zi, const QKey& q) const { return coords(act(raising_.at(zi), lift(q))); }

    Degree x_degree(const Degree& mu) const {
        Degree r(cfg_.tri.n());
        for (int j = 0; j < mu.n; ++j) r[j + 1] = mu[j];
        return r;
    }
    Degree m_of_x(const MKey& x) const {
        Degree mu(cfg_.tri.n() - 1);
        for (int j = 0; j < mu.n; ++j) mu[j] = x.r[j + 1];
        return mu;
    }

    // Raising signature of a homogeneous level-r vector at M-degree mu (r >= 1).
    std::optional<SparseVec<std::int64_t>> signature_of(int r, const Degree& mu, const MVec& v) const {
        return signature(r, mu, v);
    }

    std::vector<QKey> quotient_basis() const {
        std::vector<QKey> out;
        for (int r = 0; r <= cfg_.depth; ++r)
            for (const auto& [mu, f] : levels_[r])
                for (int i = 0; i < static_cast<int>(f.lifts.size()); ++i) out.push_back({r, mu, i});
        return out;
    }

private:
    static constexpr std::int64_t kSigStride = std::int64_t{1} << 24;

    std::optional<SparseVec<int>> fiber_coords(int r, const Degree& mu, const MVec& part) const {
        auto fit = levels_[r].find(mu);
        if (fit == levels_[r].end()) throw std::logic_error("verma: coordinates requested before the level was built");
        SparseVec<int> acc;
        bool ok = true;
        for (const auto& [k, c] : part) {
            auto it = key_coords_.find(k);
            if (it == key_coords_.end()) {
                std::optional<SparseVec<int>> co;
                if (auto sig = raw_signature(r, mu, k)) co = fit->second.ech.solve(*sig);
                it = key_coords_.emplace(k, std::move(co)).first;
            }
            if (!it->second) {
                ok = false;
                break;
            }
            acc.axpy(c, *it->second);
        }
        if (ok) return acc;
        // some term escapes on its own; the combination may still lie in the span
        auto sig = signature(r, mu, part);
        std::optional<SparseVec<int>> co;
        if (sig) co = fit->second.ech.solve(*sig);
        if (!co) ++stats_.escapes;
        return co;
    }

    std::optional<SparseVec<std::int64_t>> signature(int r, const Degree& mu, const MVec& v) const {
        SparseVec<std::int64_t> sig;
        for (const auto& [k, c] : v) {
            auto s = raw_signature(r, mu, k);
            if (!s) return std::nullopt;
            sig.axpy(c, *s);
        }
        return sig;
    }

    std::optional<SparseVec<std::int64_t>> raw_signature(int r, const Degree& mu, const VKey& k) const {
        SparseVec<std::int64_t> sig;
        for (std::size_t zi = 0; zi < raising_.size(); ++zi) {
            const Degree target = mu + raising_shift_[zi];
            if (!cfg_.m_window.contains(target)) continue;
            MVec img;
            act_key(raising_[zi], Rational(1), k, img);
            if (img.is_zero()) continue;
            auto co = coords(img);
            if (!co) return std::nullopt;
            for (const auto& [q, c] : *co) {
                if (q.level != r - 1 || !(q.mu == target)) throw std::logic_error("verma: raising image has the wrong degree");
                sig.add(static_cast<std::int64_t>(zi) * kSigStride + q.idx, c);
            }
        }
        return sig;
    }

    Fiber build_fiber(int r, const Degree& mu, std::uint64_t fiber_index) {
        Fiber f;
        std::vector<std::pair<int, int>> order;  // (lowering generator, lift below)
        for (int yi = 0; yi < static_cast<int>(lowering_.size()); ++yi) {
            const Degree src = mu - cfg_.tri.m_coords(lowering_[yi].sym.m);
            if (!cfg_.m_window.contains(src)) continue;
            const int below = static_cast<int>(levels_[r - 1].at(src).lifts.size());
            for (int li = 0; li < below; ++li) order.emplace_back(yi, li);
        }
        f.candidates = static_cast<int>(order.size());
        if (cfg_.patience > 0) {
            Rng rng = Rng::for_sample(cfg_.order_seed ^ (static_cast<std::uint64_t>(r) << 40), fiber_index);
            for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(static_cast<int>(i))]);
        }
        Echelon<VKey> verma_span;
        int fruitless = 0;
        for (const auto& [yi, li] : order) {
            if (cfg_.patience > 0 && fruitless >= cfg_.patience) {
                f.saturated = true;
                break;
            }
            ++f.examined;
            ++fruitless;
            const MapKey& y = lowering_[yi];
            const MVec cand = act(y, levels_[r - 1].at(mu - cfg_.tri.m_coords(y.sym.m)).lifts[li]);
            if (cand.is_zero() || !verma_span.insert(cand)) continue;
            auto sig = signature(r, mu, cand);
            if (!sig) {
                ++stats_.escapes;
                continue;
            }
            if (auto co = f.ech.solve(*sig)) {
                // cand - Σ c_i lift_i has zero signature
                MVec nv = cand;
                for (const auto& [i, c] : *co) nv.axpy(-c, f.lifts[i]);
                f.n_basis.push_back(std::move(nv));
            } else {
                f.ech.insert(*sig);
                f.lifts.push_back(cand);
                fruitless = 0;
            }
        }
        f.verma_rank = verma_span.rank();
        Echelon<VKey> nb;
        for (const auto& v : f.n_basis) nb.insert(v);
        f.n_basis = nb.reduced_rows();
        return f;
    }

    VermaConfig cfg_;
    PhiEmbed phi_;
    std::unique_ptr<TensorModule> x_;
    std::vector<MapKey> lowering_, raising_, middle_;
    std::vector<Degree> raising_shift_;
    std::vector<std::map<Degree, Fiber>> levels_;
    bool built_ = false;
    mutable std::map<std::pair<MapKey, MapKey>, MapElement> bracket_cache_;
    mutable std::map<Symbol, AlgElement> phi_inv_cache_;
    mutable std::unordered_map<VKey, std::optional<SparseVec<int>>, VKeyHash> key_coords_;
    mutable Stats stats_;
};

using VermaCheck = CheckResult;

namespace detail {

inline std::string qkey_str(const QKey& q) {
    return "level " + std::to_string(q.level) + " mu " + q.mu.str() + " #" + std::to_string(q.idx);
}

inline std::string mapkey_str(const MapToroidal& L, const MapKey& k) {
    return L.tau().symbol_str(k.sym) + "(" + L.B().labels()[k.b] + ")";
}

// A generator applicable to a vector at (level, mu): target level within 0..depth and the
// target M-degree inside the window.
inline bool applicable(const VermaStack& st, const MapKey& g, int level, const Degree& mu) {
    const auto& tri = st.config().tri;
    const int tl = level - tri.beta_coord(g.sym.m);
    return tl >= 0 && tl <= st.depth() && st.config().m_window.contains(mu + tri.m_coords(g.sym.m));
}

inline const MapKey* pick_generator(const VermaStack& st, Rng& rng, int level, const Degree& mu) {
    const std::vector<MapKey>* families[3] = {&st.lowering(), &st.middle(), &st.raising()};
    for (int attempt = 0; attempt < 64; ++attempt) {
        const auto& fam = *families[rng.index(3)];
        if (fam.empty()) continue;
        const MapKey& g = fam[rng.index(static_cast<int>(fam.size()))];
        if (applicable(st, g, level, mu)) return &g;
    }
    return nullptr;
}

}  // namespace detail

// Lowering, degree-zero and raising generators shift level and M-degree as their degree says.
inline VermaCheck verma_grading_check(const VermaStack& st, int samples, std::uint64_t seed) {
    VermaCheck out;
    const auto& tri = st.config().tri;
    for (const auto& q : st.quotient_basis()) {
        for (const auto& [k, c] : st.lift(q)) {
            ++out.checked;
            if (st.level_of(k) != q.level || !(st.mu_of(k) == q.mu)) out.fail("basis vector " + detail::qkey_str(q) + " is not homogeneous");
        }
    }
    const auto basis = st.quotient_basis();
    for (int s = 0; s < samples && !basis.empty(); ++s) {
        Rng rng = Rng::for_sample(seed, static_cast<std::uint64_t>(s));
        const QKey& q = basis[rng.index(static_cast<int>(basis.size()))];
        const std::vector<MapKey>* fams[3] = {&st.lowering(), &st.middle(), &st.raising()};
        for (const auto* fam : fams) {
            if (fam->empty()) continue;
            const MapKey& g = (*fam)[rng.index(static_cast<int>(fam->size()))];
            const int want_level = q.level - tri.beta_coord(g.sym.m);
            const Degree want_mu = q.mu + tri.m_coords(g.sym.m);
            for (const auto& [k, c] : st.act(g, st.lift(q))) {
                ++out.checked;
                if (st.level_of(k) != want_level || !(st.mu_of(k) == want_mu))
                    out.fail(detail::mapkey_str(st.map(), g) + " on " + detail::qkey_str(q) + " leaves its graded piece");
            }
        }
    }
    return out;
}

// Generators applied to vectors of N stay in N (zero quotient coordinates).
inline VermaCheck verma_n_invariance_check(const VermaStack& st, int samples, std::uint64_t seed) {
    VermaCheck out;
    std::vector<std::pair<std::pair<int, Degree>, int>> pool;
    for (int r = 1; r <= st.depth(); ++r)
        for (const auto& [mu, f] : st.level(r))
            for (int i = 0; i < static_cast<int>(f.n_basis.size()); ++i) pool.push_back({{r, mu}, i});
    for (int s = 0; s < samples && !pool.empty(); ++s) {
        Rng rng = Rng::for_sample(seed, static_cast<std::uint64_t>(s));
        const auto& [lm, i] = pool[rng.index(static_cast<int>(pool.size()))];
        const auto& [r, mu] = lm;
        const MVec& w = st.fiber(r, mu).n_basis[i];
        const MapKey* g = detail::pick_generator(st, rng, r, mu);
        if (!g) continue;
        ++out.checked;
        auto co = st.coords(st.act(*g, w));
        const std::string where = detail::mapkey_str(st.map(), *g) + " on N vector #" + std::to_string(i) + " at level " +
                                  std::to_string(r) + " mu " + mu.str();
        if (!co)
            out.fail(where + ": image leaves the computed span");
        else if (!co->is_zero())
            out.fail(where + ": image has nonzero quotient coordinates");
    }
    return out;
}

struct HwResult {
    bool killed = true;           // every recorded raising generator kills v (in the quotient)
    std::optional<bool> ghw_box;  // τ_m(B) v = 0 for m in the box [k, k+1]^n
    std::string witness;
};

// v is a quotient vector given by a PBW representative at (level, mu).
inline HwResult verma_hw_vector_check(const VermaStack& st, int level, const Degree& mu, const MVec& v,
                                      std::optional<int> ghw_k = std::nullopt) {
    HwResult out;
    for (const auto& z : st.raising()) {
        if (!detail::applicable(st, z, level, mu)) continue;
        MVec img = st.act(z, v);
        if (img.is_zero()) continue;
        auto co = st.coords(img);
        if (!co || !co->is_zero()) {
            out.killed = false;
            if (out.witness.empty()) out.witness = detail::mapkey_str(st.map(), z) + " does not kill the vector";
        }
    }
    if (ghw_k) {
        out.ghw_box = true;
        const Toroidal& t = st.map().tau();
        const Degree lo = Degree::from(std::vector<int>(t.n(), *ghw_k));
        const Degree hi = Degree::from(std::vector<int>(t.n(), *ghw_k + 1));
        for (const auto& m : WeightWindow(lo, hi).points()) {
            for (const auto& s : basis_symbols(t, m)) {
                for (int b = 0; b < st.map().B().dim(); ++b) {
                    MVec img = st.act(MapKey{s, b}, v);
                    if (img.is_zero()) continue;
                    auto co = st.coords(img);
                    if (co && co->is_zero()) continue;
                    out.ghw_box = false;
                    if (out.witness.empty()) out.witness = detail::mapkey_str(st.map(), {s, b}) + " does not kill the vector";
                }
            }
        }
    }
    return out;
}

// Y(b - ψ(b)) kills quotient vectors at every computed level.
inline VermaCheck verma_evaluation_check(const VermaStack& st, int samples, std::uint64_t seed) {
    VermaCheck out;
    const MapToroidal& L = st.map();
    const auto& psi = st.config().psi;
    const int bdim = L.B().dim();
    std::vector<std::vector<QKey>> by_level(st.depth() + 1);
    for (const auto& q : st.quotient_basis()) by_level[q.level].push_back(q);
    auto check = [&](const MapKey& y1, const BElement& b, const QKey& q) {
        MapElement e;
        for (const auto& [j, c] : b) e.add({y1.sym, j}, c);
        e.add({y1.sym, 0}, -psi(b));
        ++out.checked;
        auto co = st.coords(st.act(e, st.lift(q)));
        const std::string where = L.tau().symbol_str(y1.sym) + "(" + L.B().str(b) + " - " + psi(b).str() + ") on " +
                                  detail::qkey_str(q);
        if (!co)
            out.fail(where + ": image leaves the computed span");
        else if (!co->is_zero())
            out.fail(where + ": nonzero");
    };
    // d_1 (b - ψ(b)) at degree zero on every basis vector of the first fibers of each level
    if (bdim > 1) {
        const Degree zero(L.tau().n());
        for (const auto& lv : by_level)
            for (std::size_t i = 0; i < lv.size() && i < 8; ++i) check({Symbol::der(0, zero), 0}, BElement::unit(1), lv[i]);
    }
    for (int s = 0; s < samples; ++s) {
        Rng rng = Rng::for_sample(seed, static_cast<std::uint64_t>(s));
        const auto& lv = by_level[s % (st.depth() + 1)];
        if (lv.empty()) continue;
        const QKey& q = lv[rng.index(static_cast<int>(lv.size()))];
        const MapKey* g = detail::pick_generator(st, rng, q.level, q.mu);
        if (!g) continue;
        BElement b;
        for (int j = 0; j < bdim; ++j)
            if (rng.coin()) b.add(j, rng.small_rational());
        if (b.is_zero()) b.add(bdim - 1, Rational(1));
        check({g->sym, 0}, b, q);
    }
    return out;
}

// Every nonzero quotient vector at level >= 1 has a nonzero raising image: the recomputed
// signatures of each fiber basis are independent.
inline VermaCheck verma_nondegeneracy_check(const VermaStack& st) {
    VermaCheck out;
    for (int r = 1; r <= st.depth(); ++r) {
        for (const auto& [mu, f] : st.level(r)) {
            Echelon<std::int64_t> e;
            for (std::size_t i = 0; i < f.lifts.size(); ++i) {
                ++out.checked;
                auto sig = st.signature_of(r, mu, f.lifts[i]);
                if (!sig || !e.insert(*sig))
                    out.fail("level " + std::to_string(r) + " mu " + mu.str() + " #" + std::to_string(i) +
                             " has a raising-trivial combination");
            }
        }
    }
    return out;
}

// Per level and M-degree: quotient fiber dimension.
inline std::map<std::pair<int, Degree>, int> verma_quotient_dims(const VermaStack& st) {
    std::map<std::pair<int, Degree>, int> out;
    for (int r = 0; r <= st.depth(); ++r)
        for (const auto& [mu, f] : st.level(r)) out[{r, mu}] = static_cast<int>(f.lifts.size());
    return out;
}

}  // namespace toroidalkit
