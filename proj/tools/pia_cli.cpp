// Command-line front end: solve / baseline / validate over a JSON config.
//
// Exit codes: 0 success, 2 config error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pia/analysis.hpp"
#include "pia/mc_oracle.hpp"
#include "pia/policy_iteration.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct McBlock {
    std::int64_t n_paths = 100000;
    double dt = 1e-4;
    std::uint64_t seed = 1;
    double max_time = 500.0;
    std::vector<pia::Vec2> probes;
};

struct RunConfig {
    double sigma = 2.0, eta = 0.2, alpha = 0.03;
    double x_min = 0.5, x_max = 2.0, y_min = 0.5, y_max = 2.0;
    int n = 100;
    double tol1 = 1e-5, tol2 = 1e-3;
    pia::Scheme scheme = pia::Scheme::gauss_seidel;
    std::int64_t max_sweeps = 1'000'000;
    int max_pia_steps = 50;
    std::optional<McBlock> mc;
};

void require_keys(const json& j, const std::vector<std::string>& allowed, const std::string& where) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const auto& k : allowed)
            if (item.key() == k) { known = true; break; }
        if (!known) throw ConfigError("config error: unknown key \"" + where + item.key() + "\"");
    }
}

double positive_number(const json& j, const std::string& key, double fallback, bool required = false,
                       bool present_ok = true) {
    if (!j.contains(key)) {
        if (required) throw ConfigError("config error: missing key \"" + key + "\"");
        return fallback;
    }
    if (!present_ok) throw ConfigError("config error: unexpected key \"" + key + "\"");
    if (!j[key].is_number()) throw ConfigError("config error: \"" + key + "\" must be a number");
    const double v = j[key].get<double>();
    if (!(v > 0.0)) throw ConfigError("config error: \"" + key + "\" must be positive");
    return v;
}

pia::Scheme parse_scheme(const std::string& name) {
    if (name == "gauss_seidel") return pia::Scheme::gauss_seidel;
    if (name == "jacobi") return pia::Scheme::jacobi;
    throw ConfigError("config error: \"scheme\" must be gauss_seidel or jacobi, got \"" + name + "\"");
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config error: cannot open config file \"" + path + "\"");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config error: invalid JSON: ") + e.what());
    }

    require_keys(j, {"sigma", "eta", "alpha", "x_min", "x_max", "y_min", "y_max", "n", "tol1",
                     "tol2", "scheme", "max_sweeps", "max_pia_steps", "mc"},
                 "");

    RunConfig cfg;
    cfg.sigma = positive_number(j, "sigma", cfg.sigma);
    cfg.eta = positive_number(j, "eta", cfg.eta);
    cfg.alpha = positive_number(j, "alpha", cfg.alpha);
    cfg.x_min = positive_number(j, "x_min", cfg.x_min);
    cfg.x_max = positive_number(j, "x_max", cfg.x_max);
    cfg.y_min = positive_number(j, "y_min", cfg.y_min);
    cfg.y_max = positive_number(j, "y_max", cfg.y_max);
    cfg.tol1 = positive_number(j, "tol1", cfg.tol1);
    cfg.tol2 = positive_number(j, "tol2", cfg.tol2);
    cfg.n = static_cast<int>(positive_number(j, "n", cfg.n));
    cfg.max_sweeps = static_cast<std::int64_t>(positive_number(j, "max_sweeps", static_cast<double>(cfg.max_sweeps)));
    cfg.max_pia_steps = static_cast<int>(positive_number(j, "max_pia_steps", cfg.max_pia_steps));
    if (j.contains("scheme")) {
        if (!j["scheme"].is_string()) throw ConfigError("config error: \"scheme\" must be a string");
        cfg.scheme = parse_scheme(j["scheme"].get<std::string>());
    }
    if (cfg.x_min >= cfg.x_max) throw ConfigError("config error: \"x_min\" must be below \"x_max\"");
    if (cfg.y_min >= cfg.y_max) throw ConfigError("config error: \"y_min\" must be below \"y_max\"");
    if (cfg.n < 3) throw ConfigError("config error: \"n\" must be at least 3");

    if (j.contains("mc")) {
        const json& m = j["mc"];
        if (!m.is_object()) throw ConfigError("config error: \"mc\" must be an object");
        require_keys(m, {"n_paths", "dt", "seed", "max_time", "probes"}, "mc.");
        McBlock mc;
        mc.n_paths = static_cast<std::int64_t>(positive_number(m, "n_paths", static_cast<double>(mc.n_paths)));
        mc.dt = positive_number(m, "dt", mc.dt);
        mc.max_time = positive_number(m, "max_time", mc.max_time);
        if (m.contains("seed")) {
            if (!m["seed"].is_number_integer()) throw ConfigError("config error: \"mc.seed\" must be an integer");
            mc.seed = m["seed"].get<std::uint64_t>();
        }
        if (m.contains("probes")) {
            if (!m["probes"].is_array()) throw ConfigError("config error: \"mc.probes\" must be an array");
            for (const auto& p : m["probes"]) {
                if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                    throw ConfigError("config error: each entry of \"mc.probes\" must be [x, y]");
                mc.probes.push_back({p[0].get<double>(), p[1].get<double>()});
            }
        }
        cfg.mc = mc;
    }
    return cfg;
}

pia::ControlProblem build_problem(const RunConfig& cfg) {
    return pia::make_example_problem(cfg.sigma, cfg.eta, cfg.alpha, cfg.x_min, cfg.x_max, cfg.y_min,
                                     cfg.y_max);
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("config error: output directory not writable: " + path.string());
    out << contents;
}

void write_field_csv(const fs::path& path, const pia::ScalarField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("config error: output directory not writable: " + path.string());
    pia::write_csv(f, out);
}

void write_manifest(const fs::path& dir, const std::vector<std::string>& artifacts,
                    const std::string& status) {
    std::string text = "status: " + status + "\nartifacts:\n";
    for (const auto& a : artifacts) text += a + "\n";
    write_file(dir / "MANIFEST", text);
}

std::string format_convergence_csv(const std::vector<pia::IterationRecord>& records) {
    std::string out = "step,max_dpi,max_dv,point_updates,wall_ms\n";
    char buf[192];
    for (const auto& r : records) {
        if (r.max_dv) {
            std::snprintf(buf, sizeof buf, "%d,%.8f,%.8f,%lld,%.3f\n", r.step, r.max_dpi, *r.max_dv,
                          static_cast<long long>(r.point_updates), r.wall_ms);
        } else {
            std::snprintf(buf, sizeof buf, "%d,%.8f,,%lld,%.3f\n", r.step, r.max_dpi,
                          static_cast<long long>(r.point_updates), r.wall_ms);
        }
        out += buf;
    }
    return out;
}

std::string format_timing_csv(const std::vector<pia::IterationRecord>& records) {
    std::string out = "step,wall_ms\n";
    char buf[64];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%d,%.3f\n", r.step, r.wall_ms);
        out += buf;
    }
    return out;
}

void print_run_summary(const pia::PiaResult& result) {
    std::printf("%-5s %-14s %-14s %-14s %-10s %s\n", "step", "max_dpi", "max_dv", "point_updates",
                "wall_ms", "diag_dom");
    for (const auto& r : result.records) {
        char dv[32] = "-";
        if (r.max_dv) std::snprintf(dv, sizeof dv, "%.8f", *r.max_dv);
        std::printf("%-5d %-14.8f %-14s %-14lld %-10.1f %s\n", r.step, r.max_dpi, dv,
                    static_cast<long long>(r.point_updates), r.wall_ms,
                    r.dominance_holds ? "holds" : "violated");
    }
}

void print_qlc_summary(const pia::ControlProblem& problem, const pia::Grid2D& grid,
                       const std::vector<pia::RunQlc>& reports) {
    const auto bounds = pia::ellipticity_bounds(problem);
    const double lambda = pia::min_reward_curvature(problem, grid);
    std::printf("\nQLC summary  (a_min=%.6g a_max=%.6g nu=%.6g lambda=%.6g)\n", bounds.a_min,
                bounds.a_max, bounds.nu(), lambda);
    for (const auto& rq : reports) {
        std::printf("  norm=%s:", pia::norm_kind_name(rq.kind));
        for (const auto& e : rq.report.entries)
            std::printf(" C_%d=%.4g%s", e.step, e.ratio, e.floor_flagged ? "(floor)" : "");
        if (rq.report.empirical_c)
            std::printf("  empirical C=%.4g", *rq.report.empirical_c);
        std::printf("\n");
        if (rq.report.empirical_c) {
            const auto chk = pia::doubling_check(rq.report.w_norms, *rq.report.empirical_c);
            std::printf("    doubling bound: %s", chk.in_contraction_region
                                                      ? "inside contraction region,"
                                                      : "NOT in contraction region,");
            for (std::size_t i = 0; i < chk.holds.size(); ++i)
                std::printf(" step%zu=%s", i + 1, chk.holds[i] ? "ok" : "exceeded");
            std::printf("\n");
        }
    }
}

int cmd_solve(const RunConfig& cfg, const fs::path& out_dir) {
    const pia::ControlProblem problem = build_problem(cfg);
    const pia::Grid2D grid = pia::build_grid(cfg.x_min, cfg.x_max, cfg.y_min, cfg.y_max, cfg.n);
    pia::PiaConfig pc{cfg.tol1, cfg.tol2, cfg.max_pia_steps, cfg.scheme, cfg.max_sweeps};

    const std::vector<std::string> artifacts{"convergence.csv", "value.csv", "policy.csv",
                                             "qlc_report.csv", "timing.csv"};
    pia::PiaResult result;
    try {
        result = pia::run_pia(problem, grid, pc);
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        write_manifest(out_dir, {}, std::string("incomplete (") + e.what() + ")");
        return 3;
    }

    write_file(out_dir / "convergence.csv", format_convergence_csv(result.records));
    write_file(out_dir / "timing.csv", format_timing_csv(result.records));
    write_field_csv(out_dir / "value.csv", result.v);
    {
        std::ofstream out(out_dir / "policy.csv", std::ios::binary);
        pia::write_csv(result.policy, out);
    }
    const auto reports = pia::qlc_from_run(result.w_fields, 10.0 * cfg.tol1);
    {
        std::ofstream out(out_dir / "qlc_report.csv", std::ios::binary);
        pia::write_qlc_csv(reports, out);
    }

    print_run_summary(result);
    print_qlc_summary(problem, grid, reports);
    if (result.w_fields.size() >= 2) {
        std::printf("\nW-equation check (max |stencil(pi_next) W + R|):\n");
        for (std::size_t i = 1; i < result.w_fields.size(); ++i) {
            const pia::ResidualReport rr = pia::residual_report(
                problem, result.w_fields[i - 1], result.w_fields[i], result.policies[i], grid);
            std::printf("  step %zu: max R = %.6g, residual = %.6g\n", i, rr.max_abs_r,
                        rr.max_w_pde_residual);
        }
        std::printf("semilinear residual of the converged value: %.6g\n",
                    pia::semilinear_residual(problem, result.v, grid));
    }

    if (!result.converged) {
        std::fprintf(stderr, "numerical failure: policy not stabilized within max_pia_steps\n");
        write_manifest(out_dir, artifacts, "incomplete (max_pia_steps exceeded)");
        return 3;
    }
    write_manifest(out_dir, artifacts, "complete");
    return 0;
}

int cmd_baseline(const RunConfig& cfg, const fs::path& out_dir, const std::string& trace_path) {
    const pia::ControlProblem problem = build_problem(cfg);
    const pia::Grid2D grid = pia::build_grid(cfg.x_min, cfg.x_max, cfg.y_min, cfg.y_max, cfg.n);

    std::ofstream trace_file;
    std::function<void(std::int64_t, double)> on_sweep;
    if (!trace_path.empty()) {
        trace_file.open(trace_path, std::ios::binary);
        if (!trace_file) throw ConfigError("config error: cannot open trace file \"" + trace_path + "\"");
        on_sweep = pia::sweep_trace_to_csv(trace_file);
    }
    const auto [v, stats] = pia::solve_linear_baseline(problem, grid, cfg.tol1, cfg.scheme,
                                                       cfg.max_sweeps, on_sweep);
    write_field_csv(out_dir / "linear_value.csv", v);
    // reference count: published point-update total for this configuration
    constexpr long long kReferenceCount = 24'541'704LL;
    std::printf("linear baseline: %lld point updates in %lld sweeps (%s)\n",
                static_cast<long long>(stats.point_updates), static_cast<long long>(stats.sweeps),
                cfg.scheme == pia::Scheme::gauss_seidel ? "gauss_seidel" : "jacobi");
    std::printf("reference count: %lld, ratio %.4f\n", kReferenceCount,
                static_cast<double>(stats.point_updates) / static_cast<double>(kReferenceCount));
    if (!stats.converged) {
        std::fprintf(stderr, "numerical failure: baseline solve did not converge\n");
        write_manifest(out_dir, {"linear_value.csv"}, "incomplete (baseline non-convergence)");
        return 3;
    }
    write_manifest(out_dir, {"linear_value.csv"}, "complete");
    return 0;
}

int cmd_validate(const RunConfig& cfg, const fs::path& out_dir) {
    if (!cfg.mc) throw ConfigError("config error: \"mc\" block required for validate");
    const McBlock& mc = *cfg.mc;
    if (mc.probes.empty()) throw ConfigError("config error: \"mc.probes\" must list at least one probe");
    for (const auto& p : mc.probes) {
        if (p.x < cfg.x_min || p.x > cfg.x_max || p.y < cfg.y_min || p.y > cfg.y_max)
            throw ConfigError("probe-outside-domain: probe (" + std::to_string(p.x) + ", " +
                              std::to_string(p.y) + ") is outside the closed domain");
    }

    const pia::ControlProblem problem = build_problem(cfg);
    const pia::Grid2D grid = pia::build_grid(cfg.x_min, cfg.x_max, cfg.y_min, cfg.y_max, cfg.n);
    // The sup-diff stopping rule measures stagnation, not algebraic error; at
    // the table tolerance the remaining slow-mode error is far larger than the
    // Monte Carlo bands, so the comparison fields are solved much tighter.
    const double tol_ref = std::min(cfg.tol1, 1e-9);
    pia::PiaConfig pc{tol_ref, cfg.tol2, cfg.max_pia_steps, cfg.scheme, cfg.max_sweeps};

    pia::PiaResult result;
    pia::ScalarField v_linear;
    try {
        result = pia::run_pia(problem, grid, pc);
        auto [vl, stats] = pia::solve_linear_baseline(problem, grid, tol_ref, cfg.scheme, cfg.max_sweeps);
        if (!result.converged || !stats.converged)
            throw std::runtime_error("solver did not converge");
        v_linear = std::move(vl);
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        write_manifest(out_dir, {}, std::string("incomplete (") + e.what() + ")");
        return 3;
    }

    pia::McConfig mcfg;
    mcfg.n_paths = mc.n_paths;
    mcfg.dt = mc.dt;
    mcfg.seed = mc.seed;
    mcfg.max_time = mc.max_time;

    std::string csv = "x,y,policy,fdm_value,mc_mean,std_error,z_score,flagged\n";
    char buf[256];
    bool any_flagged = false;
    for (const auto& probe : mc.probes) {
        struct Row {
            const char* label;
            double fdm;
            pia::McEstimate est;
        };
        const Row rows[2] = {
            {"zero", v_linear.interpolate(probe),
             pia::estimate_value(problem, pia::Action{0.0}, probe, mcfg)},
            {"pia", result.v.interpolate(probe),
             pia::estimate_value(problem, result.policy, probe, mcfg)},
        };
        for (const Row& r : rows) {
            const double excess = std::max(0.0, std::abs(r.est.mean - r.fdm) - 0.02 * std::abs(r.fdm));
            const double z = excess == 0.0 ? 0.0
                             : r.est.std_error > 0.0
                                 ? excess / r.est.std_error
                                 : std::numeric_limits<double>::infinity();
            const bool flagged = z > 3.0;
            any_flagged = any_flagged || flagged;
            std::snprintf(buf, sizeof buf, "%.8f,%.8f,%s,%.8f,%.8f,%.8f,%.8f,%d\n", probe.x, probe.y,
                          r.label, r.fdm, r.est.mean, r.est.std_error, z, flagged ? 1 : 0);
            csv += buf;
            std::printf("probe (%.4f, %.4f) policy=%-4s fdm=%.6f mc=%.6f +- %.6f %s\n", probe.x,
                        probe.y, r.label, r.fdm, r.est.mean, r.est.std_error,
                        flagged ? "FLAGGED" : "ok");
        }
    }
    write_file(out_dir / "mc_check.csv", csv);
    write_manifest(out_dir, {"mc_check.csv"}, "complete");
    if (any_flagged) std::fprintf(stderr, "warning: disagreement beyond 3 sigma + 2%% allowance\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Policy improvement solver for discounted-control elliptic PDEs"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string scheme_override;
    std::string trace_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", out_dir, "output directory for CSV artifacts");
        sub->add_option("--scheme", scheme_override, "override solver scheme: gauss_seidel|jacobi");
    };
    CLI::App* solve = app.add_subcommand("solve", "run the policy improvement loop");
    CLI::App* baseline = app.add_subcommand("baseline", "solve the zero-policy linear problem only");
    CLI::App* validate = app.add_subcommand("validate", "Monte Carlo cross-check at probe points");
    add_common(solve);
    add_common(baseline);
    baseline->add_option("--trace", trace_path, "write a per-sweep sweep,max_diff CSV to this file");
    add_common(validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg = load_config(config_path);
        if (!scheme_override.empty()) cfg.scheme = parse_scheme(scheme_override);

        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) throw ConfigError("config error: cannot create output directory \"" + out_dir + "\"");

        if (solve->parsed()) return cmd_solve(cfg, out_dir);
        if (baseline->parsed()) return cmd_baseline(cfg, out_dir, trace_path);
        if (validate->parsed()) return cmd_validate(cfg, out_dir);
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
}
