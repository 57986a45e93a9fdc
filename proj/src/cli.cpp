#include "blframe/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "blframe/checks.hpp"
#include "blframe/errors.hpp"
#include "blframe/lp_ref.hpp"
#include "blframe/mra.hpp"
#include "blframe/norms.hpp"
#include "blframe/sweep.hpp"

namespace blf::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Config {
    int order = 1;
    int trunc = -1;  // automatic
    int symbol_samples = 8192;
    int j_max = 8;
    double tol = 1e-10;
    std::string space = "besov";
    double s = 0.0;
    std::string p = "2";
    std::string q = "2";
    std::string fn = "gaussian:0,1";
    int dilate = 0;
    double scale = 1.0;
    int levels = 12;
    int dilation_max = 3;
    std::string out;
    std::string cache_dir;
    bool with_reference = false;
};

json to_json(const Config& c) {
    return json{{"order", c.order},
                {"trunc", c.trunc},
                {"symbol_samples", c.symbol_samples},
                {"j_max", c.j_max},
                {"tol", c.tol},
                {"space", c.space},
                {"s", c.s},
                {"p", c.p},
                {"q", c.q},
                {"fn", c.fn},
                {"dilate", c.dilate},
                {"scale", c.scale},
                {"levels", c.levels},
                {"dilation_max", c.dilation_max},
                {"out", c.out},
                {"cache_dir", c.cache_dir},
                {"with_reference", c.with_reference}};
}

void from_json(const json& j, Config& c) {
    c.order = j.value("order", c.order);
    c.trunc = j.value("trunc", c.trunc);
    c.symbol_samples = j.value("symbol_samples", c.symbol_samples);
    c.j_max = j.value("j_max", c.j_max);
    c.tol = j.value("tol", c.tol);
    c.space = j.value("space", c.space);
    c.s = j.value("s", c.s);
    c.p = j.value("p", c.p);
    c.q = j.value("q", c.q);
    c.fn = j.value("fn", c.fn);
    c.dilate = j.value("dilate", c.dilate);
    c.scale = j.value("scale", c.scale);
    c.levels = j.value("levels", c.levels);
    c.dilation_max = j.value("dilation_max", c.dilation_max);
    c.out = j.value("out", c.out);
    c.cache_dir = j.value("cache_dir", c.cache_dir);
    c.with_reference = j.value("with_reference", c.with_reference);
}

double parse_pq(const std::string& v) {
    if (v == "inf" || v == "Inf" || v == "INF") return kInf;
    return std::stod(v);
}

Space parse_space(const std::string& v) {
    if (v == "besov") return Space::Besov;
    if (v == "triebel") return Space::TriebelLizorkin;
    if (v == "sobolev") return Space::SobolevEndpoint;
    throw CLI::ValidationError("--space", "must be one of besov|triebel|sobolev");
}

std::string cache_path(const Config& c) {
    std::string dir = c.cache_dir;
    if (dir.empty())
        if (const char* env = std::getenv("BLFRAME_CACHE_DIR")) dir = env;
    if (dir.empty()) dir = ".blframe-cache";
    std::ostringstream name;
    name << "system_n" << c.order << "_K";
    if (c.trunc == -1)
        name << "auto";
    else
        name << c.trunc;
    name << "_N" << c.symbol_samples << ".json";
    return (fs::path(dir) / name.str()).string();
}

SplineSystem get_system(const Config& c, bool write_cache) {
    const std::string path = cache_path(c);
    if (fs::exists(path)) {
        std::ifstream in(path);
        json j;
        in >> j;
        SplineSystem sys = SplineSystem::from_json(j);
        if (sys.order() == c.order && sys.symbol_samples() == c.symbol_samples) return sys;
    }
    SplineSystem sys = SplineSystem::build(
        {.order = c.order, .trunc = c.trunc, .symbol_samples = c.symbol_samples});
    if (write_cache) {
        fs::create_directories(fs::path(path).parent_path());
        std::ofstream out(path);
        out << sys.to_json().dump(1) << "\n";
    }
    return sys;
}

TestFunction make_fn(const Config& c) {
    TestFunction f = TestFunction::parse(c.fn);
    if (c.dilate != 0) f = f.dilated(c.dilate);
    if (c.scale != 1.0) f = f.scaled(c.scale);
    return f;
}

std::ostream& open_out(const Config& c, std::ofstream& file) {
    if (c.out.empty()) return std::cout;
    file.open(c.out);
    if (!file) throw std::runtime_error("cannot open output file " + c.out);
    return file;
}

int dispatch(const std::string& cmd, const Config& cfg) {
    if (cmd == "build") {
        const SplineSystem sys = get_system(cfg, true);
        json rep{{"order", sys.order()},
                 {"trunc", sys.trunc()},
                 {"symbol_samples", sys.symbol_samples()},
                 {"truncation_tail", sys.truncation_tail()},
                 {"decay_C0", sys.decay().C},
                 {"decay_gamma", sys.decay().gamma},
                 {"cache", cache_path(cfg)}};
        std::cout << rep.dump(1) << "\n";
        return 0;
    }
    if (cmd == "check") {
        const SplineSystem sys = get_system(cfg, false);
        auto rep = checks::construction_report(sys);
        json j = rep.to_json();
        if (cfg.order == 0) j["haar_anchor"] = checks::haar_anchor(sys);
        const auto pc = checks::piece_coefficient_report(sys, true);
        j["piece_nonleading_mismatch"] = pc.nonleading_mismatch;
        j["piece_envelope_margin"] = pc.envelope_margin;
        std::cout << j.dump(1) << "\n";
        return rep.pass() ? 0 : 1;
    }
    if (cmd == "coeffs") {
        const SplineSystem sys = get_system(cfg, false);
        const TestFunction f = make_fn(cfg);
        const FrameCoefficients table = frame_coefficients(f, sys, cfg.j_max, cfg.tol);
        std::ofstream file;
        table.write_csv(open_out(cfg, file));
        return 0;
    }
    if (cmd == "norm") {
        const SplineSystem sys = get_system(cfg, false);
        const TestFunction f = make_fn(cfg);
        NormParams prm{cfg.s, parse_pq(cfg.p), parse_pq(cfg.q), parse_space(cfg.space),
                       cfg.order};
        const FrameNormResult res = frame_norm(f, sys, prm, cfg.j_max, cfg.tol);
        json j = res.report(f.describe());
        if (cfg.with_reference && prm.space != Space::SobolevEndpoint)
            j["reference_norm"] = lp::reference_norm(f, prm, cfg.levels);
        if (prm.space == Space::SobolevEndpoint)
            j["reference_norm"] = sobolev_reference_norm(f, prm.p, cfg.order + 1);
        std::cout << j.dump(1) << "\n";
        return 0;
    }
    if (cmd == "equiv-sweep") {
        const SplineSystem sys = get_system(cfg, false);
        const auto suite = sweep::default_suite();
        const auto rows = sweep::run_sweep(sys, parse_space(cfg.space), suite,
                                           cfg.dilation_max, cfg.j_max, cfg.levels);
        std::ofstream file;
        sweep::write_csv(open_out(cfg, file), rows);
        return 0;
    }
    if (cmd == "endpoint") {
        if (cfg.order < 1)
            throw RangeError("endpoint comparison requires order >= 1");
        const SplineSystem sys = get_system(cfg, false);
        const double ps[] = {2.0, kInf};
        auto suite = sweep::default_suite();
        const auto rows =
            sweep::run_endpoint(sys, ps, suite, cfg.dilation_max, cfg.j_max);
        std::ofstream file;
        sweep::write_endpoint_csv(open_out(cfg, file), rows);
        return 0;
    }
    if (cmd == "lp-recon") {
        const TestFunction f = make_fn(cfg);
        const double residual = lp::lp_reconstruct(f, cfg.levels);
        const lp::GridSpec g = lp::default_grid(f, cfg.levels);
        json j{{"fn", f.describe()},
               {"levels", cfg.levels},
               {"residual", residual},
               {"grid", {{"x_min", g.x_min}, {"x_max", g.x_max}, {"samples", g.samples}}},
               {"partition", {{"c1", lp::Partition::c1}, {"c2", lp::Partition::c2}}}};
        std::cout << j.dump(1) << "\n";
        return 0;
    }
    throw std::runtime_error("unknown command " + cmd);
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
    Config cfg;

    // --config seeds the defaults; explicit flags then override
    std::vector<std::string> argv = args;
    for (std::size_t i = 0; i + 1 < argv.size(); ++i) {
        if (argv[i] == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) {
                std::cerr << "cannot read config file " << argv[i + 1] << "\n";
                return 1;
            }
            json j;
            in >> j;
            from_json(j, cfg);
            argv.erase(argv.begin() + static_cast<long>(i),
                       argv.begin() + static_cast<long>(i) + 2);
            break;
        }
    }

    CLI::App app{"Battle-Lemarie spline frame toolkit"};
    app.name("blframe");
    bool dump_config = false;
    app.add_flag("--dump-config", dump_config,
                 "print the effective configuration as JSON and exit");

    auto add_system_opts = [&](CLI::App* sub) {
        sub->add_option("--order", cfg.order, "spline order n >= 0");
        sub->add_option("--trunc", cfg.trunc, "coefficient half-width K (-1 = auto)");
        sub->add_option("--symbol-samples", cfg.symbol_samples,
                        "symbol sampling resolution N (power of two)");
        sub->add_option("--cache-dir", cfg.cache_dir, "system cache directory");
    };
    auto add_fn_opts = [&](CLI::App* sub) {
        sub->add_option("--fn", cfg.fn,
                        "test function, e.g. gaussian:0,1 indicator:0,1 "
                        "bspline:3,1,0 polybump:6,-1,1 modbump:9.5,-1,1");
        sub->add_option("--dilate", cfg.dilate, "replace f by f(2^m .)");
        sub->add_option("--scale", cfg.scale, "scalar multiple of f");
    };

    CLI::App* build = app.add_subcommand("build", "construct and cache a spline system");
    add_system_opts(build);

    CLI::App* check = app.add_subcommand("check", "run the construction invariant suite");
    add_system_opts(check);

    CLI::App* coeffs = app.add_subcommand("coeffs", "emit the frame coefficient table as CSV");
    add_system_opts(coeffs);
    add_fn_opts(coeffs);
    coeffs->add_option("--jmax", cfg.j_max, "finest scale");
    coeffs->add_option("--tol", cfg.tol, "tail tolerance");
    coeffs->add_option("--out", cfg.out, "output file (default stdout)");

    CLI::App* norm = app.add_subcommand("norm", "compute frame and reference norms");
    add_system_opts(norm);
    add_fn_opts(norm);
    norm->add_option("--space", cfg.space, "besov|triebel|sobolev");
    norm->add_option("--s", cfg.s, "smoothness parameter");
    norm->add_option("--p", cfg.p, "integrability (number or inf)");
    norm->add_option("--q", cfg.q, "summability (number or inf)");
    norm->add_option("--jmax", cfg.j_max, "finest scale");
    norm->add_option("--tol", cfg.tol, "tail tolerance");
    norm->add_option("--levels", cfg.levels, "reference decomposition levels");
    norm->add_flag("--with-reference", cfg.with_reference,
                   "also compute the frequency-decomposition reference norm");

    CLI::App* sweepc = app.add_subcommand("equiv-sweep",
                                          "norm-equivalence ratio sweep over a parameter grid");
    add_system_opts(sweepc);
    sweepc->add_option("--space", cfg.space, "besov|triebel");
    sweepc->add_option("--jmax", cfg.j_max, "base finest scale");
    sweepc->add_option("--levels", cfg.levels, "base reference levels");
    sweepc->add_option("--dilation-max", cfg.dilation_max, "largest dyadic dilation");
    sweepc->add_option("--out", cfg.out, "output CSV file");

    CLI::App* endpoint = app.add_subcommand("endpoint", "endpoint-space comparison table");
    add_system_opts(endpoint);
    endpoint->add_option("--jmax", cfg.j_max, "finest scale");
    endpoint->add_option("--dilation-max", cfg.dilation_max, "largest dyadic dilation");
    endpoint->add_option("--out", cfg.out, "output CSV file");

    CLI::App* recon = app.add_subcommand("lp-recon", "frequency-decomposition reconstruction residual");
    add_fn_opts(recon);
    recon->add_option("--levels", cfg.levels, "decomposition levels");

    app.require_subcommand(1);

    std::vector<const char*> cargs;
    cargs.push_back("blframe");
    for (const auto& a : argv) cargs.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (dump_config) {
            std::cout << to_json(cfg).dump(1) << "\n";
            return 0;
        }
        for (const CLI::App* sub : app.get_subcommands()) return dispatch(sub->get_name(), cfg);
        return 0;
    } catch (const RangeError& e) {
        std::cerr << "range error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace blf::cli
