#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

namespace lozi::cli {

namespace fs = std::filesystem;

Params RunConfig::params() const {
    if (mode != "exact" && mode != "float") throw PreconditionError("mode must be exact or float");
    return Params::from_strings(a, b, mode == "exact", precision_bits);
}

ClassifyBudgets RunConfig::budgets() const {
    ClassifyBudgets c;
    c.crossing_depth = crossing_depth;
    c.homoclinic_u = homoclinic_u;
    c.homoclinic_s = homoclinic_s;
    c.lap_n_max = lap_n_max;
    c.lap_threshold = lap_threshold;
    c.manifold.max_vertices = vertex_cap;
    c.manifold.max_bits = bit_cap;
    return c;
}

int default_threads() {
    if (const char* env = std::getenv("LOZI_LAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parse_range(const std::string& text, Rational& lo, Rational& hi, Rational& step) {
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
    if (c2 == std::string::npos) throw PreconditionError("range must look like lo:hi:step, got '" + text + "'");
    lo = parse_decimal(text.substr(0, c1));
    hi = parse_decimal(text.substr(c1 + 1, c2 - c1 - 1));
    step = parse_decimal(text.substr(c2 + 1));
    if (sgn(step) <= 0) throw PreconditionError("range step must be positive");
    if (hi < lo) throw PreconditionError("range is empty");
}

namespace {

std::string path_in(const RunConfig& c, const std::string& name) { return (fs::path(c.out) / name).string(); }

Json config_json(const RunConfig& c) {
    Json formats = Json::array();
    for (const auto& f : c.formats) formats.push_back(f);
    return Json{{"a", c.a},
                {"b", c.b},
                {"mode", c.mode},
                {"precision_bits", c.precision_bits},
                {"depth", c.depth},
                {"crossing_depth", c.crossing_depth},
                {"homoclinic_u", c.homoclinic_u},
                {"homoclinic_s", c.homoclinic_s},
                {"iterates", c.iterates},
                {"orbit_cap", c.orbit_cap},
                {"bit_cap", c.bit_cap},
                {"vertex_cap", c.vertex_cap},
                {"formats", formats}};
}

int code_for(const std::exception_ptr& e, Json& err) {
    try {
        std::rethrow_exception(e);
    } catch (const InconsistencyError& x) {
        err = Json{{"kind", "inconsistency"}, {"message", x.what()}};
        return kInconsistent;
    } catch (const BudgetExhausted& x) {
        err = Json{{"kind", "budget"}, {"message", x.what()}};
        return kBudget;
    } catch (const UncertainSign& x) {
        err = Json{{"kind", "budget"}, {"message", std::string("precision: ") + x.what()}};
        return kBudget;
    } catch (const std::exception& x) {
        err = Json{{"kind", "error"}, {"message", x.what()}};
        return kUsage;
    }
}

void write_json(const RunConfig& c, const std::string& name, const Json& j) {
    write_file(path_in(c, name), j.dump(2) + "\n");
}

}  // namespace

int cmd_analyze(const RunConfig& config) {
    fs::create_directories(config.out);
    Json report;
    report["config"] = config_json(config);
    int code = kOk;
    try {
        const Params params = config.params();
        report["constants"] = constants_json(params);
        if (!params.standard()) {
            RegionVerdict v;
            v.a = to_string(params.a_rational());
            v.b = to_string(params.b_rational());
            v.regime = Regime::OutOfScope;
            v.notes.push_back("outside 0 < b < 1, a + b > 1");
            report["verdict"] = to_json(v);
        } else {
            const RegionVerdict verdict = classify_parameters(params, config.budgets());
            report["verdict"] = to_json(verdict);

            ManifoldBudget mb{config.vertex_cap, config.bit_cap, true};
            const UnstableManifold wu = unstable_manifold(params, config.depth, mb, true);
            report["manifold"] = Json{{"depth_requested", wu.depth_requested},
                                      {"depth_reached", wu.depth_reached},
                                      {"truncated", wu.truncated},
                                      {"vertices", wu.vertex_count()},
                                      {"injectivity_verified", wu.injectivity_verified}};
            if (config.wants("csv")) write_file(path_in(config, "manifold.csv"), manifold_csv(wu, config.precision_bits));
            if (config.wants("svg")) {
                const StableManifold ws = stable_manifold(params, config.depth, mb);
                write_file(path_in(config, "manifold.svg"), manifold_svg(params, wu, &ws, config.precision_bits));
            }

            std::optional<SimplePolygon> D;
            int ell_k = config.iterates;
            const CrossingCensus census = crossing_census(axis_crossings(params, wu));
            if (!census.finite_evidence && two_cycle_attracting(params) &&
                verdict.regime != Regime::PositiveEntropySignal) {
                const TrapReport trap = run_trap(params, wu, config.iterates, mb);
                report["trap"] = to_json(trap);
                if (config.wants("svg")) {
                    write_file(path_in(config, "trap.svg"), trap_svg(params, wu, trap, config.precision_bits));
                    write_file(path_in(config, "kpolygon.svg"), kpolygon_svg(params, trap, config.precision_bits));
                }
                D = trap.D;
                if (trap.trapping_index) ell_k = *trap.trapping_index;
            } else if (verdict.certificate && verdict.certificate->verified() &&
                       verdict.certificate->hull_R.size() >= 3) {
                // the invariant hull of the certificate stands in for D
                D = SimplePolygon(verdict.certificate->hull_R);
            }
            if (D) {
                const EllApproximation ell = ell_approximation(params, *D, ell_k, 0.0, mb);
                report["ell"] = to_json(ell);
                if (config.wants("svg")) {
                    write_file(path_in(config, "ell_k.svg"), ell_svg(params, *D, ell, config.precision_bits));
                }
            }
        }
    } catch (...) {
        Json err;
        code = code_for(std::current_exception(), err);
        report["error"] = err;
    }
    report["exit_code"] = code;
    if (config.wants("json")) write_json(config, "report.json", report);
    if (code != kOk) std::cerr << "lozi_lab: " << report["error"]["message"].get<std::string>() << "\n";
    return code;
}

int cmd_orbits(const RunConfig& config, int n) {
    fs::create_directories(config.out);
    Json out;
    out["config"] = config_json(config);
    out["n"] = n;
    int code = kOk;
    try {
        if (n < 1) throw PreconditionError("n must be >= 1");
        if (n > config.orbit_cap) {
            throw BudgetExhausted("period " + std::to_string(n) + " exceeds orbit cap " +
                                  std::to_string(config.orbit_cap));
        }
        const Params params = config.params();
        Json orbits = Json::array();
        for (int p = 1; p <= n; ++p) {
            for (const auto& o : periodic_orbits(params, p, config.threads)) orbits.push_back(to_json(o));
        }
        out["orbits"] = orbits;
    } catch (...) {
        Json err;
        code = code_for(std::current_exception(), err);
        out["error"] = err;
    }
    out["exit_code"] = code;
    write_json(config, "orbits.json", out);
    if (code != kOk) std::cerr << "lozi_lab: " << out["error"]["message"].get<std::string>() << "\n";
    return code;
}

int cmd_sweep(const RunConfig& config, const SweepGrid& grid) {
    fs::create_directories(config.out);
    const std::string csv = path_in(config, "sweep.csv");
    const std::string manifest = path_in(config, "sweep.manifest");

    std::set<std::string> done;
    if (std::ifstream in{manifest}) {
        for (std::string line; std::getline(in, line);) {
            if (!line.empty()) done.insert(line);
        }
    }
    const bool fresh = !fs::exists(csv) || done.empty();
    std::ofstream rows(csv, fresh ? std::ios::trunc : std::ios::app);
    std::ofstream mf(manifest, fresh ? std::ios::trunc : std::ios::app);
    if (!rows || !mf) {
        std::cerr << "lozi_lab: cannot write to " << config.out << "\n";
        return kUsage;
    }
    if (fresh) {
        done.clear();
        rows << sweep_csv_header() << std::flush;
    }
    auto key = [](const Rational& a, const Rational& b) { return to_string(a) + ',' + to_string(b); };

    SweepOptions opt;
    opt.budgets = config.budgets();
    opt.trap_depth = config.depth;
    opt.trap_max_k = config.iterates;
    opt.threads = config.threads;
    try {
        sweep(
            grid, opt, [&](const Rational& a, const Rational& b) { return done.count(key(a, b)) != 0; },
            [&](const SweepRow& r) {
                // the row goes first so an interrupted run never lists a missing row
                rows << sweep_csv_row(r) << std::flush;
                mf << key(r.a, r.b) << '\n' << std::flush;
            });
    } catch (...) {
        Json err;
        const int code = code_for(std::current_exception(), err);
        std::cerr << "lozi_lab: " << err["message"].get<std::string>() << "\n";
        return code;
    }
    return kOk;
}

int run(int argc, char** argv) {
    CLI::App app{"Exact computations for the Lozi map L(x, y) = (1 + y - a|x|, b x)", "lozi_lab"};
    app.config_formatter(std::make_shared<CLI::ConfigINI>());
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.require_subcommand(1);

    RunConfig c;
    c.threads = default_threads();
    std::vector<std::string> formats;
    app.add_option("--a", c.a, "parameter a (exact decimal or p/q)")->capture_default_str();
    app.add_option("--b", c.b, "parameter b (exact decimal or p/q)")->capture_default_str();
    app.add_option("--mode", c.mode, "exact or float")->check(CLI::IsMember({"exact", "float"}))->capture_default_str();
    app.add_option("--precision-bits", c.precision_bits, "float mode precision")
        ->check(CLI::Range(53, 1 << 16))
        ->capture_default_str();
    app.add_option("--depth", c.depth, "unstable manifold arcs (figures, trap)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--crossing-depth", c.crossing_depth, "arcs for the crossing census")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--homoclinic-u", c.homoclinic_u, "unstable depth of the homoclinic search")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--homoclinic-s", c.homoclinic_s, "stable depth of the homoclinic search")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--iterates", c.iterates, "largest k for L^2k(D)")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--orbit-cap", c.orbit_cap, "largest period for orbits")
        ->check(CLI::Range(1, 24))
        ->capture_default_str();
    app.add_option("--bit-cap", c.bit_cap, "bit-length budget per coordinate")->capture_default_str();
    app.add_option("--vertex-cap", c.vertex_cap, "vertex budget per polyline")->capture_default_str();
    app.add_option("--out", c.out, "output directory")->capture_default_str();
    app.add_option("--format", formats, "svg, csv, json (repeatable; default all)")
        ->check(CLI::IsMember({"svg", "csv", "json"}))
        ->delimiter(',');
    app.add_option("--threads", c.threads, "worker threads (default LOZI_LAB_THREADS)")->check(CLI::PositiveNumber);

    auto* analyze = app.add_subcommand("analyze", "classify, build manifolds and the trapping region, write reports");
    analyze->fallthrough();
    int n = 1;
    auto* orbits = app.add_subcommand("orbits", "periodic orbits of period <= n");
    orbits->fallthrough();
    orbits->add_option("--n,n", n, "largest period")->required();
    std::string a_range, b_range;
    auto* sweep_cmd = app.add_subcommand("sweep", "classify a rational grid into sweep.csv");
    sweep_cmd->fallthrough();
    sweep_cmd->add_option("--a-range", a_range, "lo:hi:step")->required();
    sweep_cmd->add_option("--b-range", b_range, "lo:hi:step")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int r = app.exit(e);
        return r == 0 ? kOk : kUsage;
    }
    if (!formats.empty()) c.formats = std::set<std::string>(formats.begin(), formats.end());

    if (*analyze) return cmd_analyze(c);
    if (*orbits) return cmd_orbits(c, n);
    SweepGrid grid;
    try {
        parse_range(a_range, grid.a_min, grid.a_max, grid.a_step);
        parse_range(b_range, grid.b_min, grid.b_max, grid.b_step);
    } catch (const Error& e) {
        std::cerr << "lozi_lab: " << e.what() << "\n";
        return kUsage;
    }
    return cmd_sweep(c, grid);
}

}  // namespace lozi::cli
