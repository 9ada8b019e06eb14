#pragma once

#include "toroidalkit/coeffalg.hpp"
#include "toroidalkit/errors.hpp"
#include "toroidalkit/galgebra.hpp"
#include "toroidalkit/maptoroidal.hpp"
#include "toroidalkit/tensormod.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace toroidalkit {

// Raised for malformed configuration text; carries a "line:column" prefix when known.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AlgebraBlock {
    int n = 3;
    std::string g = "sl2";
    Rational mu1, mu2;
    bool form_factor = true;  // false drops <x,y> from the loop central term (negative control)
};

struct CoeffBlock {
    std::string polynomial = "s^2 - 3*s + 2";
    Rational psi_s = Rational(2);  // the point is fixed by the value of s
};

struct ModuleBlock {
    std::string name;
    ModuleKind kind = ModuleKind::Tau;
    Rational c;
    std::vector<int> lam1, lam2;
    std::vector<Rational> alpha;
    Rational a, b;
};

struct DerhamBlock {
    std::vector<Rational> alpha;
    std::optional<std::vector<Rational>> witness_alpha;  // exceptional-case cyclicity scans
    int witness_samples = 6;
};

struct VermaBlock {
    Degree beta;
    std::vector<Degree> m_basis;
    int depth = 2;
    int lo = -2, hi = 2;  // M-window
    int patience = 150;
    ModuleBlock x;
};

// A single exact re-evaluation of a reported counterexample.
struct ReplayBlock {
    std::string check;  // antisymmetry | jacobi | module_axiom | eval_scaling
    std::string module;
    std::string x, y, z, v, b;
};

struct RunConfig {
    AlgebraBlock algebra;
    std::optional<CoeffBlock> coefficients;
    std::vector<ModuleBlock> modules;
    std::optional<DerhamBlock> derham;
    std::optional<VermaBlock> verma;
    std::optional<ReplayBlock> replay;
    std::vector<std::string> suites;
    std::uint64_t seed = 42;
    int samples = 200;
    int lo = -2, hi = 2;
    std::string output;
};

inline std::pair<int, int> parse_window(const std::string& s) {
    const auto dots = s.find("..");
    if (dots == std::string::npos) throw ConfigError("window '" + s + "' must look like lo..hi");
    try {
        std::size_t u1 = 0, u2 = 0;
        const std::string a = s.substr(0, dots), b = s.substr(dots + 2);
        int lo = std::stoi(a, &u1), hi = std::stoi(b, &u2);
        if (u1 != a.size() || u2 != b.size()) throw std::invalid_argument(s);
        if (lo > hi) throw ConfigError("window '" + s + "' has lo > hi");
        return {lo, hi};
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("window '" + s + "' must look like lo..hi");
    }
}

inline std::string kind_key(ModuleKind k) {
    switch (k) {
        case ModuleKind::Tau:
            return "tau";
        case ModuleKind::TauRing:
            return "tau_ring";
        case ModuleKind::Eval:
            return "eval";
    }
    return {};
}

namespace detail {

inline std::string where(const YAML::Node& n) {
    const auto m = n.Mark();
    if (m.is_null()) return "";
    return std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1) + ": ";
}

[[noreturn]] inline void config_fail(const YAML::Node& n, const std::string& msg) { throw ConfigError(where(n) + msg); }

inline void require_map(const YAML::Node& n, const std::string& what) {
    if (!n.IsMap()) config_fail(n, what + " must be a mapping");
}

inline void check_keys(const YAML::Node& n, const std::set<std::string>& allowed, const std::string& what) {
    require_map(n, what);
    for (const auto& kv : n) {
        const std::string k = kv.first.as<std::string>();
        if (!allowed.count(k)) config_fail(kv.first, "unknown key '" + k + "' in " + what);
    }
}

inline std::string scalar(const YAML::Node& n, const std::string& what) {
    if (!n.IsScalar()) config_fail(n, what + " must be a scalar");
    return n.Scalar();
}

inline Rational rational(const YAML::Node& n, const std::string& what) {
    const std::string s = scalar(n, what);
    try {
        return Rational::parse(s);
    } catch (const std::exception&) {
        config_fail(n, what + ": '" + s + "' is not a rational \"p/q\"");
    }
}

inline long long integer(const YAML::Node& n, const std::string& what) {
    const std::string s = scalar(n, what);
    try {
        std::size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        config_fail(n, what + ": '" + s + "' is not an integer");
    }
}

inline std::uint64_t unsigned64(const YAML::Node& n, const std::string& what) {
    const std::string s = scalar(n, what);
    try {
        std::size_t used = 0;
        if (!s.empty() && s[0] == '-') throw std::invalid_argument(s);
        unsigned long long v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        config_fail(n, what + ": '" + s + "' is not a non-negative 64-bit integer");
    }
}

inline bool boolean(const YAML::Node& n, const std::string& what) {
    const std::string s = scalar(n, what);
    if (s == "true") return true;
    if (s == "false") return false;
    config_fail(n, what + " must be true or false");
}

inline std::vector<Rational> rational_list(const YAML::Node& n, const std::string& what) {
    if (!n.IsSequence()) config_fail(n, what + " must be a list");
    std::vector<Rational> out;
    for (const auto& x : n) out.push_back(rational(x, what));
    return out;
}

inline std::vector<int> int_list(const YAML::Node& n, const std::string& what) {
    if (!n.IsSequence()) config_fail(n, what + " must be a list");
    std::vector<int> out;
    for (const auto& x : n) out.push_back(static_cast<int>(integer(x, what)));
    return out;
}

inline Degree degree(const YAML::Node& n, const std::string& what) {
    auto xs = int_list(n, what);
    if (xs.empty() || static_cast<int>(xs.size()) > kMaxRank) config_fail(n, what + " has a bad length");
    return Degree::from(xs);
}

inline ModuleBlock module_block(const YAML::Node& n, const std::string& what) {
    check_keys(n, {"name", "kind", "c", "lam1", "lam2", "alpha", "a", "b"}, what);
    ModuleBlock m;
    if (n["name"]) m.name = scalar(n["name"], what + ".name");
    if (!n["kind"]) config_fail(n, what + " needs a kind (tau, tau_ring or eval)");
    const std::string k = scalar(n["kind"], what + ".kind");
    if (k == "tau")
        m.kind = ModuleKind::Tau;
    else if (k == "tau_ring")
        m.kind = ModuleKind::TauRing;
    else if (k == "eval")
        m.kind = ModuleKind::Eval;
    else
        config_fail(n["kind"], what + ".kind must be tau, tau_ring or eval");
    if (n["c"]) m.c = rational(n["c"], what + ".c");
    if (n["lam1"]) m.lam1 = int_list(n["lam1"], what + ".lam1");
    if (n["lam2"]) m.lam2 = int_list(n["lam2"], what + ".lam2");
    if (!n["alpha"]) config_fail(n, what + " needs alpha");
    m.alpha = rational_list(n["alpha"], what + ".alpha");
    if (n["a"]) m.a = rational(n["a"], what + ".a");
    if (n["b"]) m.b = rational(n["b"], what + ".b");
    if (m.kind != ModuleKind::TauRing && (n["a"] || n["b"])) config_fail(n, what + ": a and b only apply to tau_ring");
    return m;
}

}  // namespace detail

inline RunConfig parse_run_config(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) + ": " + e.msg);
    }
    using namespace detail;
    RunConfig cfg;
    if (root.IsNull()) return cfg;
    check_keys(root, {"algebra", "coefficients", "modules", "derham", "verma", "replay", "suites", "seed", "samples",
                      "window", "output"},
               "config");
    if (auto a = root["algebra"]) {
        check_keys(a, {"n", "g", "mu1", "mu2", "form_factor"}, "algebra");
        if (a["n"]) cfg.algebra.n = static_cast<int>(integer(a["n"], "algebra.n"));
        if (cfg.algebra.n < 1 || cfg.algebra.n > kMaxRank) config_fail(a["n"], "algebra.n must be in 1.." + std::to_string(kMaxRank));
        if (a["g"]) cfg.algebra.g = scalar(a["g"], "algebra.g");
        if (a["mu1"]) cfg.algebra.mu1 = rational(a["mu1"], "algebra.mu1");
        if (a["mu2"]) cfg.algebra.mu2 = rational(a["mu2"], "algebra.mu2");
        if (a["form_factor"]) cfg.algebra.form_factor = boolean(a["form_factor"], "algebra.form_factor");
    }
    if (auto c = root["coefficients"]) {
        check_keys(c, {"polynomial", "psi_s"}, "coefficients");
        CoeffBlock cb;
        if (c["polynomial"]) cb.polynomial = scalar(c["polynomial"], "coefficients.polynomial");
        if (c["psi_s"]) cb.psi_s = rational(c["psi_s"], "coefficients.psi_s");
        cfg.coefficients = cb;
    }
    if (auto ms = root["modules"]) {
        if (!ms.IsSequence()) config_fail(ms, "modules must be a list");
        int i = 0;
        for (const auto& m : ms) {
            auto mb = module_block(m, "modules[" + std::to_string(i) + "]");
            if (mb.name.empty()) mb.name = "m" + std::to_string(i);
            for (const auto& other : cfg.modules)
                if (other.name == mb.name) config_fail(m, "duplicate module name '" + mb.name + "'");
            cfg.modules.push_back(mb);
            ++i;
        }
    }
    if (auto d = root["derham"]) {
        check_keys(d, {"alpha", "witness_alpha", "witness_samples"}, "derham");
        DerhamBlock db;
        if (!d["alpha"]) config_fail(d, "derham needs alpha");
        db.alpha = rational_list(d["alpha"], "derham.alpha");
        if (d["witness_alpha"]) db.witness_alpha = rational_list(d["witness_alpha"], "derham.witness_alpha");
        if (d["witness_samples"]) db.witness_samples = static_cast<int>(integer(d["witness_samples"], "derham.witness_samples"));
        cfg.derham = db;
    }
    if (auto v = root["verma"]) {
        check_keys(v, {"beta", "m_basis", "depth", "m_window", "patience", "x"}, "verma");
        VermaBlock vb;
        if (!v["beta"] || !v["m_basis"] || !v["x"]) config_fail(v, "verma needs beta, m_basis and x");
        vb.beta = degree(v["beta"], "verma.beta");
        if (!v["m_basis"].IsSequence()) config_fail(v["m_basis"], "verma.m_basis must be a list of degrees");
        for (const auto& d : v["m_basis"]) vb.m_basis.push_back(degree(d, "verma.m_basis"));
        if (v["depth"]) vb.depth = static_cast<int>(integer(v["depth"], "verma.depth"));
        if (vb.depth < 1) config_fail(v["depth"], "verma.depth must be >= 1");
        if (v["m_window"]) {
            try {
                std::tie(vb.lo, vb.hi) = parse_window(scalar(v["m_window"], "verma.m_window"));
            } catch (const ConfigError& e) {
                config_fail(v["m_window"], e.what());
            }
        }
        if (v["patience"]) vb.patience = static_cast<int>(integer(v["patience"], "verma.patience"));
        if (vb.patience < 0) config_fail(v["patience"], "verma.patience must be >= 0");
        vb.x = module_block(v["x"], "verma.x");
        if (vb.x.kind != ModuleKind::TauRing) config_fail(v["x"], "verma.x must be a tau_ring module");
        cfg.verma = vb;
    }
    if (auto r = root["replay"]) {
        check_keys(r, {"check", "module", "x", "y", "z", "v", "b"}, "replay");
        ReplayBlock rb;
        if (!r["check"]) config_fail(r, "replay needs a check");
        rb.check = scalar(r["check"], "replay.check");
        static const std::set<std::string> known{"antisymmetry", "jacobi", "module_axiom", "eval_scaling"};
        if (!known.count(rb.check)) config_fail(r["check"], "replay.check must be antisymmetry, jacobi, module_axiom or eval_scaling");
        for (auto [key, dst] : {std::pair{"module", &rb.module}, {"x", &rb.x}, {"y", &rb.y}, {"z", &rb.z}, {"v", &rb.v}, {"b", &rb.b}})
            if (r[key]) *dst = scalar(r[key], std::string("replay.") + key);
        cfg.replay = rb;
    }
    if (auto s = root["suites"]) {
        if (!s.IsSequence()) config_fail(s, "suites must be a list");
        static const std::set<std::string> known{"algebra", "module", "weights", "derham", "eval", "verma"};
        for (const auto& x : s) {
            const std::string name = scalar(x, "suites entry");
            if (!known.count(name)) config_fail(x, "unknown suite '" + name + "'");
            cfg.suites.push_back(name);
        }
    }
    if (root["seed"]) cfg.seed = unsigned64(root["seed"], "seed");
    if (root["samples"]) {
        cfg.samples = static_cast<int>(integer(root["samples"], "samples"));
        if (cfg.samples < 0) config_fail(root["samples"], "samples must be >= 0");
    }
    if (root["window"]) {
        try {
            std::tie(cfg.lo, cfg.hi) = parse_window(scalar(root["window"], "window"));
        } catch (const ConfigError& e) {
            config_fail(root["window"], e.what());
        }
    }
    if (root["output"]) cfg.output = scalar(root["output"], "output");
    return cfg;
}

// ---- object construction (semantic errors surface as ConfigurationError / ValidationError) ----

inline std::shared_ptr<const Toroidal> build_tau(const AlgebraBlock& a, std::optional<bool> form_factor = std::nullopt) {
    return std::make_shared<Toroidal>(a.n, make_builtin_algebra(a.g), CocycleSpec{a.mu1, a.mu2},
                                      form_factor.value_or(a.form_factor));
}

inline std::shared_ptr<const CoeffAlgebra> build_coefficients(const CoeffBlock& c) {
    return univariate_quotient(parse_polynomial(c.polynomial));
}

inline TensorModuleSpec build_spec(const ModuleBlock& m, const Toroidal& t, std::optional<EvaluationPoint> psi) {
    TensorModuleSpec s;
    s.kind = m.kind;
    s.c = m.c;
    s.lam1 = {m.lam1, {}};
    if (s.lam1.coords.empty()) s.lam1.coords.assign(t.g().rank(), 0);
    const int gl = m.kind == ModuleKind::TauRing ? t.n() - 1 : t.n();
    s.lam2 = {m.lam2, m.c};
    if (s.lam2.coords.empty()) s.lam2.coords.assign(gl > 1 ? gl - 1 : 0, 0);
    s.alpha = m.alpha;
    s.a = m.a;
    s.b = m.b;
    if (m.kind == ModuleKind::Eval) {
        if (!psi) throw ConfigurationError("module '" + m.name + "' is an evaluation module but no coefficients block is given");
        s.psi = psi;
    }
    return s;
}

}  // namespace toroidalkit
