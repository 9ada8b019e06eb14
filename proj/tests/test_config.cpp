#include <catch_amalgamated.hpp>

#include "module_fixtures.hpp"
#include "toroidalkit/report.hpp"

using namespace toroidalkit;
using namespace fixtures;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_run_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("FNV-1a reference values") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("config parses every block") {
    RunConfig c = parse_run_config(R"(
algebra: {n: 3, g: sl2, mu1: "2", mu2: "-3"}
coefficients: {polynomial: "s^2", psi_s: "0"}
modules:
  - {name: A, kind: tau, c: "1/2", lam1: [1], lam2: [1, 0], alpha: ["1/3", "0", "0"]}
  - {kind: tau_ring, a: "1", b: "-1/2", alpha: ["0", "0"]}
derham: {alpha: ["1/3", "1/5", "1/7"]}
verma:
  beta: [1, 0, 0]
  m_basis: [[0, 1, 0], [0, 0, 1]]
  m_window: "-1..1"
  x: {kind: tau_ring, a: "1", alpha: ["0", "0"]}
suites: [algebra, verma]
seed: 18446744073709551615
samples: 7
window: "-1..2"
)");
    CHECK(c.algebra.mu1 == Rational(2));
    CHECK(c.algebra.mu2 == Rational(-3));
    CHECK(c.coefficients->polynomial == "s^2");
    REQUIRE(c.modules.size() == 2);
    CHECK(c.modules[0].c == Rational(1, 2));
    CHECK(c.modules[1].name == "m1");
    CHECK(c.modules[1].b == Rational(-1, 2));
    CHECK(c.derham->alpha[2] == Rational(1, 7));
    CHECK(c.verma->lo == -1);
    CHECK(c.verma->patience == 150);
    CHECK(c.suites == std::vector<std::string>{"algebra", "verma"});
    CHECK(c.seed == 18446744073709551615ULL);
    CHECK(c.samples == 7);
    CHECK(c.lo == -1);
    CHECK(c.hi == 2);
}

TEST_CASE("config errors carry line and column") {
    CHECK(error_of("algebra:\n  n: 3\n  gg: sl2\n").rfind("3:3: unknown key 'gg'", 0) == 0);
    CHECK(error_of("seed: 1\nbogus: 2\n").rfind("2:1: unknown key 'bogus'", 0) == 0);
    CHECK(error_of("modules:\n  - {kind: tau, c: \"1/x\", alpha: [\"0\"]}\n").rfind("2:20:", 0) == 0);
    CHECK(error_of("window: \"3..1\"\n").find("lo > hi") != std::string::npos);
    CHECK(error_of("modules:\n  - {kind: spin, alpha: []}\n").find("kind must be") != std::string::npos);
    CHECK(error_of("modules:\n  - {kind: tau, a: \"1\", alpha: [\"0\"]}\n").find("only apply to tau_ring") !=
          std::string::npos);
    CHECK(error_of("suites: [algebra, nope]\n").find("unknown suite 'nope'") != std::string::npos);
    CHECK(error_of("algebra: {n: [3\n").rfind("2:1:", 0) == 0);
    CHECK(error_of("verma: {beta: [1,0,0], m_basis: [[0,1,0]], x: {kind: tau, alpha: [\"0\",\"0\",\"0\"]}}\n")
              .find("tau_ring") != std::string::npos);
    CHECK(error_of("seed: -4\n").find("non-negative") != std::string::npos);
    CHECK(error_of("").empty());
}

TEST_CASE("window strings") {
    CHECK(parse_window("-2..2") == std::pair{-2, 2});
    CHECK(parse_window("0..0") == std::pair{0, 0});
    CHECK_THROWS_AS(parse_window("-2.2"), ConfigError);
    CHECK_THROWS_AS(parse_window("a..2"), ConfigError);
}

TEST_CASE("printed elements parse back to themselves") {
    auto t = tau3({Rational(2), Rational(-3)});
    for (int s = 0; s < 200; ++s) {
        Rng rng = Rng::for_sample(9, s);
        AlgElement x = random_homogeneous(*t, rng, -3, 3);
        CHECK(parse_alg_element(*t, t->str(x)) == x);
    }
    CHECK(parse_alg_element(*t, "0").is_zero());
    CHECK(parse_alg_element(*t, "-e@(1,0,0)") == t->loop("e", Degree{1, 0, 0}, Rational(-1)));
    CHECK_THROWS_AS(parse_alg_element(*t, "x@(1,0,0)"), ValidationError);
    CHECK_THROWS_AS(parse_alg_element(*t, "K4@(1,0,0)"), ValidationError);
    CHECK_THROWS_AS(parse_alg_element(*t, "e@(1,0)"), std::exception);

    auto B = univariate_quotient(parse_polynomial("s^2 - 3*s + 2"));
    MapToroidal L(t, B);
    MapElement m = L.tensor(t->der(0, Degree{0, 1, 0}), "s") + L.tensor(t->loop("h", Degree{1, 1, 1}, Rational(2, 3)));
    CHECK(parse_map_element(L, L.str(m)) == m);

    TensorModule M(t, tau_spec(Rational(1, 2), {1}, {1, 0}, {Rational(1, 3), 0, 0}));
    for (int s = 0; s < 50; ++s) {
        Rng rng = Rng::for_sample(4, s);
        ModuleVector v = random_vector(M, rng, -2, 2);
        CHECK(parse_module_vector(M, M.str(v)) == v);
    }
}

TEST_CASE("evaluation check rejects other module kinds and catches a bad point") {
    auto t = tau3();
    TensorModule M(t, tau_spec(Rational(1, 2), {1}, {1, 0}, {Rational(1, 3), 0, 0}));
    CHECK_THROWS_AS(evaluation_factorization_check(M, WeightWindow::cube(3, 0, 0), 5, 1), ValidationError);

    // Brute force on a tiny window: s - ψ(s) acts as zero through every generator.
    auto B = univariate_quotient(parse_polynomial("s^2 - 3*s + 2"));
    TensorModuleSpec spec = tau_spec(Rational(1, 2), {1}, {1, 0}, {Rational(1, 3), 0, 0});
    spec.kind = ModuleKind::Eval;
    spec.psi = point_at(B, Rational(1));
    TensorModule E(t, spec, B);
    auto rep = evaluation_factorization_check(E, WeightWindow::cube(3, -1, 1), 40, 3);
    CHECK(rep.pass());
    const MapToroidal& L = *E.map();
    BElement sm1 = BElement::unit(1);
    sm1.add(0, Rational(-1));
    for (const auto& g : cyclicity_generators(*t))
        for (const auto& k : E.fiber_keys(Degree{0, 1, -1})) CHECK(E.act(L.tensor(g, sm1), ModuleVector::unit(k)).is_zero());
}

TEST_CASE("suites are deterministic and sorted") {
    RunConfig c = parse_run_config(R"(
algebra: {n: 3, g: sl2}
coefficients: {polynomial: "s^2 - 3*s + 2", psi_s: "2"}
modules:
  - {name: b, kind: eval, c: "1/2", lam1: [1], lam2: [1, 0], alpha: ["1/3", "0", "0"]}
  - {name: a, kind: tau, c: "1/2", lam1: [1], lam2: [1, 0], alpha: ["1/3", "0", "0"]}
samples: 30
window: "-1..1"
)");
    const std::vector<std::string> suites{"algebra", "module", "weights", "eval"};
    auto r1 = run_suites(suites, c);
    auto r2 = run_suites(suites, c);
    ReportMeta meta{"all", c.seed, c.samples, c.lo, c.hi, false};
    CHECK(report_json(meta, r1).dump() == report_json(meta, r2).dump());
    CHECK(std::is_sorted(r1.begin(), r1.end(), [](const Record& x, const Record& y) { return x.name < y.name; }));
    CHECK(all_pass(r1));
    auto doc = report_json(meta, r1);
    CHECK(doc["schema_version"] == kReportSchemaVersion);
    CHECK_FALSE(doc["records"][0].contains("wall_ms"));
    CHECK(report_table(meta, r1).find("verdict: PASS") != std::string::npos);

    RunConfig other = c;
    other.seed = 43;
    auto r3 = run_suites({"algebra"}, other);
    CHECK(r3[0].inputs_digest != run_suites({"algebra"}, c)[0].inputs_digest);
}

TEST_CASE("a failing sample yields a replayable counterexample") {
    RunConfig c = parse_run_config("algebra: {n: 3, g: sl2, form_factor: false}\nsamples: 100\nwindow: \"-1..1\"\n");
    Record jac = algebra_lie_axioms(c.algebra, c.samples, c.seed, c.lo, c.hi, true);
    REQUIRE_FALSE(jac.pass);
    const Json& ce = jac.counterexample;
    c.replay = ReplayBlock{"jacobi", "", ce["x"], ce["y"], ce["z"], "", ""};
    Record again = replay_record(c);
    CHECK_FALSE(again.pass);
    CHECK(again.counterexample["defect"] == ce["defect"]);
    c.algebra.form_factor = true;
    CHECK(replay_record(c).pass);
}

TEST_CASE("module axiom replay through the printed forms") {
    RunConfig c = parse_run_config(R"yaml(
algebra: {n: 3, g: sl2}
coefficients: {polynomial: "s^2 - 3*s + 2", psi_s: "2"}
modules:
  - {name: E, kind: eval, c: "1/2", lam1: [1], lam2: [1, 0], alpha: ["1/3", "0", "0"]}
replay:
  check: eval_scaling
  module: E
  x: "e@(1,0,0) + d2@(1,0,0)"
  v: "[v1|w1|(0,0,0)]"
  b: s
)yaml");
    CHECK(replay_record(c).pass);
    c.replay->check = "module_axiom";
    c.replay->x = "e@(1,0,0)(s)";
    c.replay->y = "2 d1@(0,-1,0)(1)";
    CHECK(replay_record(c).pass);
    c.replay->module = "missing";
    CHECK_THROWS_AS(replay_record(c), ConfigurationError);
}
