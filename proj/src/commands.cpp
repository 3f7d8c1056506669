#include "gmflou/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "gmflou/errors.hpp"
#include "gmflou/gmflou.hpp"
#include "gmflou/io.hpp"

namespace gmflou {

namespace {

namespace fs = std::filesystem;

std::size_t row_of(const LinearFunctional& f, double t) {
    for (std::size_t i = 0; i < f.rows(); ++i) {
        if (std::fabs(f.times[i] - t) < 1e-12) return i;
    }
    throw RangeError("no row for t = " + std::to_string(t));
}

std::vector<double> column(const PathEnsemble& ens, const LinearFunctional& f, double t) {
    return ens.column(row_of(f, t));
}

void check_on_grid(const SampleGrid& grid, double t) {
    const double k = t * grid.n;
    if (t > grid.horizon + 1e-12 || std::fabs(k - std::round(k)) > 1e-9) {
        throw RangeError("time " + format_double(t) + " is not a point of the grid (n = " + std::to_string(grid.n) +
                         ", T = " + format_double(grid.horizon) + ")");
    }
}

std::string fmt_pair(double s, double t) { return "(" + format_double(s) + "," + format_double(t) + ")"; }

}  // namespace

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const auto setup = cfg.setup();
    PathEnsemble ens;
    std::optional<LambdaSample> lambdas;
    if (cfg.process == "flp") {
        ens = simulate_flp(cfg.flp(), setup);
    } else if (cfg.process == "flou") {
        ens = simulate_flou_fixed(cfg.lambda, cfg.flp(), setup, cfg.warmup);
    } else if (cfg.process == "aggregated") {
        auto run = simulate_aggregated(cfg.gmflou().mixing(), cfg.m, cfg.flp(), setup, cfg.warmup);
        if (run.warmup.capped) log << "warning: warmup window capped at " << format_double(run.warmup.window) << '\n';
        if (run.lambdas.resampled > 0) log << "note: " << run.lambdas.resampled << " lambda draws below the floor were resampled\n";
        ens = std::move(run.ensemble);
        lambdas = std::move(run.lambdas);
    } else if (cfg.process == "Z") {
        ens = simulate_Z(cfg.gmflou(), setup);
    } else {
        ens = simulate_Y(cfg.gmflou(), setup);
    }

    const fs::path dir(cfg.out);
    const std::string stem = cfg.process + "_paths";
    std::ostringstream csv;
    write_paths_csv(csv, ens);
    write_text(dir / (stem + ".csv"), csv.str());
    if (cfg.gnuplot) {
        std::ostringstream gp;
        write_paths_gnuplot(gp, ens);
        write_text(dir / (stem + ".dat"), gp.str());
    }
    if (lambdas) {
        std::ostringstream lc;
        write_lambda_csv(lc, *lambdas);
        write_text(dir / "lambdas.csv", lc.str());
    }
    auto side = sidecar(config_to_json(cfg), cfg.seed);
    side["process_params"] = ens.params;
    side["lattice"] = ens.lattice_signature;
    write_json(dir / (stem + ".json"), side);
    log << "wrote " << (dir / (stem + ".csv")).string() << " (" << ens.replicas << " replicas, " << ens.points()
        << " points)\n";
    return kExitPass;
}

std::vector<MomentReport> verify_battery(const RunConfig& cfg) {
    cfg.validate();
    const auto prm = cfg.gmflou();
    const double m2 = cfg.spec.m2();
    const double scale = cfg.target_scale;
    const double allow = discretization_allowance(cfg.grid.n, cfg.allowance);
    const std::vector<double> quarter{0.25, 0.5, 1.0};
    const std::vector<double> half{0.5, 1.0};
    const std::vector<double> one{1.0};
    for (double t : quarter) check_on_grid(cfg.grid, t);

    auto lattice = std::make_shared<const Lattice>(Lattice::build(cfg.grid, cfg.scheme, cfg.d));
    FlpOperator op(lattice, cfg.d);
    const double lambda = cfg.lambda < 0.0 ? cfg.lambda : -1.0;
    ExponentialKernel flou_kernel(lambda, cfg.warmup.value_or(default_warmup(lambda)));
    const auto lambdas = sample_lambda(prm.mixing(), cfg.m, SeedLineage{cfg.seed, kModelStream});
    const auto warm = cfg.warmup ? WarmupChoice{*cfg.warmup, false} : aggregated_warmup(lambdas.values);
    MixtureKernel mix_kernel(lambdas.values, warm.window);
    GammaMixedKernel z_kernel(prm.alpha, prm.h);
    YKernel y_kernel(prm.h);

    const std::vector<LinearFunctional> fns{
        compile_flp(op, "flp", quarter),
        compile_moving_average(op, flou_kernel, "flou", half),
        compile_moving_average(op, mix_kernel, "aggregated", one),
        compile_moving_average(op, z_kernel, "Z", quarter),
        compile_moving_average(op, y_kernel, "Y", half),
    };
    const auto ens = simulate_coupled(*lattice, cfg.spec, fns, cfg.seed, cfg.replicas, cfg.threads);
    const nlohmann::json base = {{"d", cfg.d}, {"n", cfg.grid.n}, {"replicas", cfg.replicas}, {"scheme", to_string(cfg.scheme.kind)}};

    std::vector<MomentReport> out;
    auto params = [&](nlohmann::json extra) {
        nlohmann::json p = base;
        for (auto& [k, v] : extra.items()) p[k] = v;
        return p;
    };

    for (std::size_t i = 0; i < quarter.size(); ++i) {
        for (std::size_t j = i; j < quarter.size(); ++j) {
            const double s = quarter[i], t = quarter[j];
            const auto est = sample_covariance(column(ens[0], fns[0], s), column(ens[0], fns[0], t));
            out.push_back(MomentReport::make("flp_cov" + fmt_pair(s, t), params({{"s", s}, {"t", t}}), est,
                                             scale * flp_covariance(cfg.d, s, t, m2), allow, cfg.k_sigma));
        }
    }
    for (double t : half) {
        const auto est = sample_variance(column(ens[1], fns[1], t));
        out.push_back(MomentReport::make("flou_var(t=" + format_double(t) + ")", params({{"lambda", lambda}, {"t", t}}), est,
                                         scale * variance_flou(lambda, cfg.d, m2), allow, cfg.k_sigma));
    }
    {
        const auto est = sample_variance(column(ens[2], fns[2], 1.0));
        out.push_back(MomentReport::make("aggregated_var(t=1)",
                                         params({{"h", prm.h}, {"alpha", prm.alpha}, {"m", cfg.m}, {"warmup", warm.window}}),
                                         est, scale * variance_aggregated(lambdas.values, cfg.d, m2), allow, cfg.k_sigma));
    }
    const double vz = variance_Z(prm.alpha, prm.h, prm.d, m2);
    const nlohmann::json zp = {{"h", prm.h}, {"alpha", prm.alpha}};
    for (double t : quarter) {
        auto p = params(zp);
        p["t"] = t;
        out.push_back(MomentReport::make("Z_var(t=" + format_double(t) + ")", p,
                                         sample_variance(column(ens[3], fns[3], t)), scale * vz, allow, cfg.k_sigma));
    }
    out.push_back(MomentReport::make("Z_mean(t=1)", params(zp), sample_mean(column(ens[3], fns[3], 1.0)), 0.0, 0.0,
                                     cfg.k_sigma));
    {
        const auto est = variance_ratio(column(ens[4], fns[4], 1.0), column(ens[4], fns[4], 0.5));
        out.push_back(MomentReport::make("Y_var_ratio(1/0.5)", params({{"h", prm.h}}), est,
                                         scale * std::pow(2.0, 2.0 * prm.h + 2.0 * prm.d + 1.0), allow, cfg.k_sigma));
    }
    {
        const Estimate quad{variance_Z_quadrature(prm.alpha, prm.h, prm.d, m2), 0.0};
        out.push_back(MomentReport::make("variance_Z_quadrature", zp, quad, scale * vz, 1e-3, cfg.k_sigma));
    }
    return out;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
    const auto reports = verify_battery(cfg);
    nlohmann::json arr = nlohmann::json::array();
    bool ok = true;
    for (const auto& r : reports) {
        arr.push_back(r);
        ok = ok && r.pass;
        log << (r.pass ? "PASS " : "FAIL ") << r.quantity << " mc=" << format_double(r.mc_estimate)
            << " target=" << format_double(r.target) << " tol=" << format_double(r.tolerance()) << '\n';
    }
    nlohmann::json doc = sidecar(config_to_json(cfg), cfg.seed);
    doc["reports"] = arr;
    doc["pass"] = ok;
    write_json(fs::path(cfg.out) / "verify_report.json", doc);
    return ok ? kExitPass : kExitVerifyFailed;
}

ConvergenceTable discretization_table(const RunConfig& cfg) {
    const auto prm = cfg.gmflou();
    prm.validate();
    const double target = variance_Z(prm.alpha, prm.h, prm.d, cfg.spec.m2());
    GammaMixedKernel kernel(prm.alpha, prm.h);
    ConvergenceTable table;
    table.axis = "n";
    table.params = {{"quantity", "relative variance bias of Z(t)"}, {"t", cfg.converge_time}, {"scheme", to_string(cfg.scheme.kind)}};
    for (int n : cfg.n_axis) {
        SampleGrid grid{n, std::max(cfg.grid.horizon, cfg.converge_time), cfg.grid.trunc_a_n};
        check_on_grid(grid, cfg.converge_time);
        auto lattice = std::make_shared<const Lattice>(Lattice::build(grid, cfg.scheme, prm.d));
        FlpOperator op(lattice, prm.d);
        const double t[1] = {cfg.converge_time};
        const auto f = compile_moving_average(op, kernel, "Z", t);
        const double bias = std::fabs(scheme_covariance(f.row(0), f.row(0), lattice->widths(), cfg.spec.m2()) / target - 1.0);
        table.axis_values.push_back(n);
        table.residuals.push_back(bias);
        table.std_errors.push_back(0.0);
        table.scheme_residuals.push_back(bias);
    }
    return table;
}

int cmd_converge(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const auto prm = cfg.gmflou();
    const auto setup = cfg.setup();
    const double t = cfg.converge_time;
    std::vector<ConvergenceTable> tables{
        aggregation_residual(cfg.m_axis, t, prm, setup),
        limit_residual_alpha_inf(cfg.alpha_up, t, prm, setup),
        limit_residual_alpha_zero(cfg.alpha_down, t, prm, setup),
        discretization_table(cfg),
    };
    nlohmann::json doc = sidecar(config_to_json(cfg), cfg.seed);
    doc["tables"] = nlohmann::json::array();
    bool ok = true;
    for (const auto& tb : tables) {
        doc["tables"].push_back(tb);
        ok = ok && tb.monotone();
        log << (tb.monotone() ? "PASS " : "FAIL ") << tb.axis << ':';
        for (std::size_t i = 0; i < tb.residuals.size(); ++i) {
            log << ' ' << format_double(tb.axis_values[i]) << "->" << format_double(tb.residuals[i]);
        }
        log << '\n';
    }
    doc["pass"] = ok;
    write_json(fs::path(cfg.out) / "converge.json", doc);
    return ok ? kExitPass : kExitVerifyFailed;
}

std::vector<CfRow> cf_table(const RunConfig& cfg) {
    cfg.validate();
    const auto prm = cfg.gmflou();
    std::vector<double> times;
    for (const auto& p : cfg.cf_points) {
        for (double t : p.times) {
            check_on_grid(cfg.grid, t);
            if (std::find(times.begin(), times.end(), t) == times.end()) times.push_back(t);
        }
    }
    std::sort(times.begin(), times.end());
    auto lattice = std::make_shared<const Lattice>(Lattice::build(cfg.grid, cfg.scheme, prm.d));
    FlpOperator op(lattice, prm.d);
    GammaMixedKernel kernel(prm.alpha, prm.h);
    const LinearFunctional fn[1] = {compile_moving_average(op, kernel, "Z", times)};
    const auto ens = simulate_coupled(*lattice, cfg.spec, fn, cfg.seed, cfg.replicas, cfg.threads);

    std::vector<CfPoint> points;
    points.push_back({{times.back()}, {0.0}});
    points.insert(points.end(), cfg.cf_points.begin(), cfg.cf_points.end());
    std::vector<CfRow> rows;
    for (const auto& p : points) {
        CfRow row;
        row.point = p;
        row.analytic = char_function_Z(p.thetas, p.times, prm, cfg.cf_normalization);
        std::vector<std::vector<double>> cols;
        std::vector<double> combined(lattice->cells(), 0.0);
        for (std::size_t j = 0; j < p.times.size(); ++j) {
            const std::size_t r = row_of(fn[0], p.times[j]);
            cols.push_back(ens[0].column(r));
            const auto w = fn[0].row(r);
            for (std::size_t c = 0; c < combined.size(); ++c) combined[c] += p.thetas[j] * w[c];
        }
        row.scheme = scheme_char_function(combined, lattice->widths(), cfg.spec);
        row.empirical = empirical_char_function(cols, p.thetas);
        const double k = cfg.k_sigma;
        row.pass = std::fabs(row.empirical.value.real() - row.analytic.real()) <= k * row.empirical.se_re &&
                   std::fabs(row.empirical.value.imag() - row.analytic.imag()) <= k * row.empirical.se_im;
        if (std::all_of(p.thetas.begin(), p.thetas.end(), [](double v) { return v == 0.0; })) {
            row.pass = row.analytic == std::complex<double>(1.0, 0.0) && row.empirical.value == std::complex<double>(1.0, 0.0);
        }
        rows.push_back(row);
    }
    return rows;
}

int cmd_cf(const RunConfig& cfg, std::ostream& log) {
    const auto rows = cf_table(cfg);
    std::ostringstream csv;
    csv << "times,thetas,analytic_re,analytic_im,empirical_re,empirical_im,stderr_re,stderr_im,scheme_re,scheme_im,pass\n";
    nlohmann::json reports = nlohmann::json::array();
    bool ok = true;
    auto join = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_double(v[i]);
        return s;
    };
    for (const auto& r : rows) {
        ok = ok && r.pass;
        csv << join(r.point.times) << ',' << join(r.point.thetas) << ',' << format_double(r.analytic.real()) << ','
            << format_double(r.analytic.imag()) << ',' << format_double(r.empirical.value.real()) << ','
            << format_double(r.empirical.value.imag()) << ',' << format_double(r.empirical.se_re) << ','
            << format_double(r.empirical.se_im) << ',' << format_double(r.scheme.real()) << ','
            << format_double(r.scheme.imag()) << ',' << (r.pass ? 1 : 0) << '\n';
        const nlohmann::json p = {{"times", r.point.times}, {"thetas", r.point.thetas}};
        for (int part = 0; part < 2; ++part) {
            MomentReport m;
            m.quantity = part == 0 ? "cf_re" : "cf_im";
            m.params = p;
            m.mc_estimate = part == 0 ? r.empirical.value.real() : r.empirical.value.imag();
            m.std_error = part == 0 ? r.empirical.se_re : r.empirical.se_im;
            m.target = part == 0 ? r.analytic.real() : r.analytic.imag();
            m.k_sigma = cfg.k_sigma;
            m.pass = r.pass;
            reports.push_back(m);
        }
        log << (r.pass ? "PASS " : "FAIL ") << "theta=" << join(r.point.thetas) << " t=" << join(r.point.times)
            << " analytic=" << format_double(r.analytic.real()) << (r.analytic.imag() < 0 ? "" : "+")
            << format_double(r.analytic.imag()) << "i empirical=" << format_double(r.empirical.value.real())
            << (r.empirical.value.imag() < 0 ? "" : "+") << format_double(r.empirical.value.imag()) << "i\n";
    }
    write_text(fs::path(cfg.out) / "cf.csv", csv.str());
    nlohmann::json doc = sidecar(config_to_json(cfg), cfg.seed);
    doc["reports"] = reports;
    doc["pass"] = ok;
    write_json(fs::path(cfg.out) / "cf_report.json", doc);
    return ok ? kExitPass : kExitVerifyFailed;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulation and moment verification for Gamma-mixed fractional Levy OU processes", "gmflou"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replicas;
    std::optional<int> grid_n;
    std::optional<double> horizon;
    std::optional<std::string> out_dir;
    std::optional<unsigned> threads;
    std::optional<std::string> process, scheme, trunc_rule;
    std::optional<long> a_n;
    std::optional<double> d, h, alpha, lambda, warmup;
    std::optional<std::size_t> m;
    bool gnuplot = false;
    bool literal = false;

    app.set_help_flag("--help", "print help");
    auto add_common = [&](CLI::App* sub) {
        sub->set_help_flag("--help", "print help");
        sub->add_option("--config", config_path, "JSON config file (a replay sidecar also works)");
        sub->add_option("--seed", seed, "root seed");
        sub->add_option("--replicas", replicas, "Monte Carlo replicas");
        sub->add_option("--grid-n", grid_n, "grid points per unit time");
        sub->add_option("--horizon", horizon, "time horizon T");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--threads", threads, "worker threads (results do not depend on it)");
        sub->add_option("--process", process, "flp|flou|aggregated|Z|Y");
        sub->add_option("--scheme", scheme, "extended|uniform");
        sub->add_option("--trunc-rule", trunc_rule, "square|optimal");
        sub->add_option("--a-n", a_n, "left truncation index");
        sub->add_option("--d", d, "memory parameter");
        sub->add_option("--h", h, "mixing shape complement");
        sub->add_option("--alpha", alpha, "mixing rate");
        sub->add_option("--lambda", lambda, "fixed fLOU rate (< 0)");
        sub->add_option("--m", m, "number of aggregated coordinates");
        sub->add_option("--warmup", warmup, "warmup window M");
        sub->add_flag("--gnuplot", gnuplot, "also write a two-column gnuplot file");
        sub->add_flag("--cf-literal-prefactor", literal, "use the literal prefactor d in the transferred kernel");
    };
    std::vector<CLI::App*> subs;
    const std::pair<const char*, const char*> commands[] = {
        {"simulate", "write sample paths of one process as CSV"},
        {"verify", "check Monte Carlo moments against closed forms"},
        {"converge", "coupled residual tables along the m, alpha and n axes"},
        {"cf", "analytic vs empirical characteristic function"},
    };
    for (const auto& [name, description] : commands) {
        auto* sub = app.add_subcommand(name, description);
        add_common(sub);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ParameterError("cannot read config file " + config_path);
            cfg = config_from_json(nlohmann::json::parse(in));
        }
        for (auto* sub : subs) {
            if (sub->parsed()) cfg.command = sub->get_name();
        }
        if (seed) cfg.seed = *seed;
        if (replicas) cfg.replicas = *replicas;
        if (grid_n) cfg.grid.n = *grid_n;
        if (horizon) cfg.grid.horizon = *horizon;
        if (out_dir) cfg.out = *out_dir;
        if (threads) cfg.threads = *threads;
        if (process) cfg.process = *process;
        if (scheme) cfg.scheme.kind = scheme_kind_from_string(*scheme);
        if (trunc_rule) {
            if (*trunc_rule != "square" && *trunc_rule != "optimal") throw ParameterError("--trunc-rule must be square|optimal");
            cfg.scheme.truncation = *trunc_rule == "optimal" ? TruncationRule::Optimal : TruncationRule::Square;
        }
        if (a_n) cfg.grid.trunc_a_n = *a_n;
        if (d) cfg.d = *d;
        if (h) cfg.h = *h;
        if (alpha) cfg.alpha = *alpha;
        if (lambda) cfg.lambda = *lambda;
        if (m) cfg.m = *m;
        if (warmup) cfg.warmup = *warmup;
        if (gnuplot) cfg.gnuplot = true;
        if (literal) cfg.cf_normalization = CfNormalization::LiteralD;
        cfg.validate();

        if (cfg.command == "simulate") return cmd_simulate(cfg, out);
        if (cfg.command == "verify") return cmd_verify(cfg, out);
        if (cfg.command == "converge") return cmd_converge(cfg, out);
        return cmd_cf(cfg, out);
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const FitError& e) {
        err << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const nlohmann::json::exception& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace gmflou
