#include "toroidalkit/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace toroidalkit;

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> samples;
    std::string window;
    std::string format = "json";
    std::string out;
    bool no_timing = false;
};

const std::map<std::string, std::string> kSuiteOf{{"verify-algebra", "algebra"}, {"verify-module", "module"},
                                                  {"weights", "weights"},        {"derham", "derham"},
                                                  {"eval-check", "eval"},        {"verma", "verma"}};

std::vector<std::string> suites_for(const std::string& cmd, const RunConfig& cfg) {
    if (cmd != "all") return {kSuiteOf.at(cmd)};
    if (!cfg.suites.empty()) return cfg.suites;
    std::vector<std::string> s{"algebra"};
    if (!cfg.modules.empty()) {
        s.push_back("module");
        s.push_back("weights");
    }
    if (cfg.derham) s.push_back("derham");
    if (std::any_of(cfg.modules.begin(), cfg.modules.end(), [](const ModuleBlock& m) { return m.kind == ModuleKind::Eval; }))
        s.push_back("eval");
    if (cfg.verma) s.push_back("verma");
    return s;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::string& cmd, const Options& o) {
    RunConfig cfg;
    std::vector<Record> records;
    try {
        cfg = parse_run_config(read_file(o.config));
        if (o.seed) cfg.seed = *o.seed;
        if (o.samples) {
            if (*o.samples < 0) throw ConfigError("--samples must be >= 0");
            cfg.samples = *o.samples;
        }
        if (!o.window.empty()) std::tie(cfg.lo, cfg.hi) = parse_window(o.window);
        records = run_suites(suites_for(cmd, cfg), cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << o.config << ":" << e.what() << "\n";
        return 1;
    } catch (const ConfigurationError& e) {
        std::cerr << "config error: " << o.config << ": " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "config error: " << o.config << ": " << e.what() << "\n";
        return 1;
    }

    ReportMeta meta{cmd, cfg.seed, cfg.samples, cfg.lo, cfg.hi, !o.no_timing};
    const std::string text = o.format == "table" ? report_table(meta, records) : report_json(meta, records).dump(2) + "\n";
    const std::string path = !o.out.empty() ? o.out : cfg.output;
    if (path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(path);
        if (!f) {
            std::cerr << "cannot write report to '" << path << "'\n";
            return 1;
        }
        f << text;
    }
    return all_pass(records) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact verification suites for toroidal Lie algebras and their modules"};
    app.require_subcommand(1);
    Options o;
    std::string chosen;
    auto add = [&](const std::string& name, const std::string& help) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", o.config, "YAML run configuration")->required();
        sub->add_option("--seed", o.seed, "64-bit seed (overrides the config)");
        sub->add_option("--samples", o.samples, "samples per sampled check (overrides the config)");
        sub->add_option("--window", o.window, "degree window lo..hi (overrides the config)");
        sub->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "table"}));
        sub->add_option("--out", o.out, "write the report here instead of stdout");
        sub->add_flag("--no-timing", o.no_timing, "omit wall-time fields");
        sub->callback([&chosen, name] { chosen = name; });
    };
    add("verify-algebra", "antisymmetry, Jacobi, grading, Kähler quotient and the form-factor control");
    add("verify-module", "module axiom on every configured module; replays a counterexample if given");
    add("weights", "weight tables of the configured modules");
    add("derham", "de Rham differentials: d∘d = 0, equivariance, exactness; exceptional-case witness");
    add("eval-check", "evaluation factorization of every evaluation module");
    add("verma", "generalized Verma stack and its irreducible quotient");
    add("all", "every suite the configuration supports");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    return run(chosen, o);
}
