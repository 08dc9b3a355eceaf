// sisclose: exact SIS master equation vs moment-closure models.
//
//   sisclose timeseries --beta 5 --gamma 2 --N 200 --out ts.csv
//   sisclose scan       --beta 5 --gamma 2 --N 100,200,400,800 --out scan.csv
//   sisclose steady     --beta 5 --gamma 2 --N 200
//   sisclose validate   --beta 5 --gamma 2 --N 10 --runs 100000 --t 2 --seed 7
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or parameter error.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sisclosure/errors.hpp"
#include "sisclosure/harness.hpp"
#include "sisclosure/ssa.hpp"

using namespace sisclosure;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Family { Complete, Homogeneous, Rlad };

struct RunConfig {
    std::string family_name = "complete";
    Family family = Family::Complete;
    std::optional<double> beta, gamma, tau;
    std::optional<int> degree;
    std::string variant = "modified";
    std::optional<double> alpha, omega, k1max;
    std::vector<int> sizes;
    std::optional<int> k0;
    double t_end = 15.0;
    std::size_t points = 301;
    std::vector<std::string> models = {"exact", "pair", "triple", "binomial"};
    std::string out = "-";
    std::string format;  // csv | json | text; empty picks from the extension
    double rel_tol = IntegratorConfig{}.rel_tol;
    double abs_tol = IntegratorConfig{}.abs_tol;
    std::size_t runs = 100000;
    std::vector<double> t_record = {1.0, 5.0};
    std::uint64_t seed = 1;
    double tv_tolerance = 0.02;
    bool verify = false;
};

void add_model_options(CLI::App& cmd, RunConfig& cfg, bool many_sizes) {
    cmd.add_option("--family", cfg.family_name, "Chain family: complete | homogeneous | rlad")
        ->check(CLI::IsMember({"complete", "homogeneous", "rlad"}))
        ->capture_default_str();
    cmd.add_option("--beta", cfg.beta, "Aggregate transmission rate (complete graph)");
    cmd.add_option("--gamma", cfg.gamma, "Recovery rate (SIS families)");
    cmd.add_option("--tau", cfg.tau, "Per-link transmission rate (homogeneous)");
    cmd.add_option("--n", cfg.degree, "Node degree (homogeneous)");
    cmd.add_option("--variant", cfg.variant,
                   "Homogeneous rate denominator: original (N-1) | modified (N)")
        ->check(CLI::IsMember({"original", "modified"}))
        ->capture_default_str();
    cmd.add_option("--alpha", cfg.alpha, "Link activation rate (rlad)");
    cmd.add_option("--omega", cfg.omega, "Link deletion rate (rlad)");
    cmd.add_option("--k1max", cfg.k1max, "Carrying capacity (rlad)");
    auto* sizes = cmd.add_option("--N", cfg.sizes,
                                 many_sizes ? "System sizes, comma separated" : "System size")
                      ->required()
                      ->delimiter(',');
    if (!many_sizes) sizes->expected(1);
}

void add_output_options(CLI::App& cmd, RunConfig& cfg, const std::string& formats) {
    cmd.add_option("--out", cfg.out, "Output path, '-' for standard output")->capture_default_str();
    cmd.add_option("--format", cfg.format, "Output format: " + formats + " (default from --out)");
}

SisRates resolve_rates(const RunConfig& cfg, int N) {
    switch (cfg.family) {
    case Family::Complete:
        if (!cfg.beta || !cfg.gamma) throw UsageError("--beta and --gamma are required");
        if (cfg.tau || cfg.degree) throw UsageError("--tau/--n apply to --family homogeneous");
        return {*cfg.beta, *cfg.gamma, N};
    case Family::Homogeneous: {
        if (!cfg.tau || !cfg.degree || !cfg.gamma) {
            throw UsageError("--family homogeneous requires --tau, --n and --gamma");
        }
        if (cfg.beta) throw UsageError("--beta does not apply to --family homogeneous");
        const SisHomogeneousParams params{N, *cfg.degree, *cfg.tau, *cfg.gamma,
                                          cfg.variant == "original" ? HomogeneousVariant::Original
                                                                    : HomogeneousVariant::Modified};
        build_sis_homogeneous(params);  // validates n < N
        return {params.effective_beta(), *cfg.gamma, N};
    }
    case Family::Rlad: break;
    }
    throw UsageError("--family rlad has no SIS rates");
}

RateCoefficients resolve_coefficients(const RunConfig& cfg, int N) {
    switch (cfg.family) {
    case Family::Complete: {
        const auto rates = resolve_rates(cfg, N);
        return build_sis_complete({N, rates.beta, rates.gamma});
    }
    case Family::Homogeneous:
        resolve_rates(cfg, N);
        return build_sis_homogeneous({N, *cfg.degree, *cfg.tau, *cfg.gamma,
                                      cfg.variant == "original" ? HomogeneousVariant::Original
                                                                : HomogeneousVariant::Modified});
    case Family::Rlad:
        if (!cfg.alpha || !cfg.omega || !cfg.k1max) {
            throw UsageError("--family rlad requires --alpha, --omega and --k1max");
        }
        return build_rlad({N, *cfg.alpha, *cfg.omega, *cfg.k1max});
    }
    throw UsageError("unknown family");
}

int single_size(const RunConfig& cfg) {
    if (cfg.sizes.size() != 1) throw UsageError("exactly one --N is expected");
    if (cfg.sizes[0] < 2) throw UsageError("--N must be at least 2");
    return cfg.sizes[0];
}

ExportFormat export_format(const RunConfig& cfg) {
    std::string format = cfg.format;
    if (format.empty()) {
        format = cfg.out.size() >= 5 && cfg.out.substr(cfg.out.size() - 5) == ".json" ? "json"
                                                                                       : "csv";
    }
    if (format == "csv") return ExportFormat::Csv;
    if (format == "json") return ExportFormat::Json;
    throw UsageError("--format must be csv or json");
}

template <typename Result>
void emit(const Result& result, const RunConfig& cfg) {
    const auto format = export_format(cfg);
    if (cfg.out == "-") {
        std::cout << (format == ExportFormat::Csv ? to_csv(result) : to_json(result).dump(2) + "\n");
    } else {
        export_result(result, format, cfg.out);
    }
}

std::string describe(const SisRates& rates) {
    std::ostringstream s;
    s << "beta=" << format_number(rates.beta) << " gamma=" << format_number(rates.gamma)
      << " N=" << rates.N;
    return s.str();
}

IntegratorConfig integrator_config(const RunConfig& cfg) {
    IntegratorConfig config;
    config.rel_tol = cfg.rel_tol;
    config.abs_tol = cfg.abs_tol;
    return config;
}

int cmd_timeseries(const RunConfig& cfg) {
    const int N = single_size(cfg);
    TimeSeriesRequest request;
    request.k0 = cfg.k0.value_or(default_initial_infected(N));
    if (request.k0 < 0 || request.k0 > N) throw UsageError("--k0 must lie in 0..N");
    request.t_end = cfg.t_end;
    request.n_points = cfg.points;
    request.integrator = integrator_config(cfg);
    for (const auto& name : cfg.models) {
        const auto kind = parse_model(name);
        if (!kind) throw UsageError("unknown model '" + name + "'");
        request.models.push_back(*kind);
    }

    if (cfg.family == Family::Rlad) {
        const bool only_exact = std::all_of(request.models.begin(), request.models.end(),
                                            [](ModelKind k) { return k == ModelKind::ExactKE; });
        if (!only_exact) throw UsageError("--family rlad supports only --models exact");
        request.exact_coefficients = resolve_coefficients(cfg, N);
        // Placeholder rates; only the exact chain is integrated.
        request.rates = {*cfg.alpha, *cfg.omega, N};
        std::cerr << "timeseries: rlad alpha=" << format_number(*cfg.alpha)
                  << " omega=" << format_number(*cfg.omega)
                  << " k1max=" << format_number(*cfg.k1max) << " N=" << N;
    } else {
        request.rates = resolve_rates(cfg, N);
        request.exact_coefficients = resolve_coefficients(cfg, N);
        std::cerr << "timeseries: " << describe(request.rates);
    }
    std::cerr << " k0=" << request.k0 << " t_end=" << format_number(request.t_end)
              << " points=" << request.n_points << "\n";

    emit(run_timeseries(request), cfg);
    return 0;
}

void print_slope(const char* name, const std::optional<SlopeFit>& fit) {
    if (fit) {
        std::printf("slope_%-9s %8.4f  (se %.2e, %zu points)\n", name, fit->slope,
                    fit->standard_error, fit->fit_window.size());
    } else {
        std::printf("slope_%-9s      n/a\n", name);
    }
}

int cmd_scan(const RunConfig& cfg) {
    if (cfg.sizes.empty()) throw UsageError("--N requires at least one value");
    for (int n : cfg.sizes) {
        if (n < 2) throw UsageError("every --N must be at least 2");
    }
    const auto rates = resolve_rates(cfg, cfg.sizes.front());
    std::cerr << "scan: beta=" << format_number(rates.beta)
              << " gamma=" << format_number(rates.gamma) << " N=" << cfg.sizes.size()
              << " values\n";

    const auto result = run_error_scan(rates.beta, rates.gamma, cfg.sizes);
    for (const auto& note : result.notes) std::cerr << "note: " << note << "\n";
    if (result.n_values.size() == 1) std::cerr << "warning: a single N gives no slope\n";

    if (cfg.out != "-") emit(result, cfg);

    std::printf("%8s %14s %14s %14s\n", "N", "pair_x1000", "triple_x1000", "binomial_x1000");
    for (const auto& r : result.reports) {
        std::printf("%8d %14.4f %14.4f %14.4f\n", r.N, r.err_pair_x1000(), r.err_triple_x1000(),
                    r.err_binomial_x1000());
    }
    print_slope("pair", result.slope_pair);
    print_slope("triple", result.slope_triple);
    print_slope("binomial", result.slope_binomial);

    if (cfg.verify) {
        IntegratorConfig config = integrator_config(cfg);
        config.rel_tol = std::min(config.rel_tol, 1e-11);
        config.abs_tol = std::min(config.abs_tol, 1e-12);
        bool ok = true;
        for (int n : result.n_values) {
            for (const auto& check : verify_fixed_points({rates.beta, rates.gamma, n}, config)) {
                const bool pass = check.converged && check.difference() <= 1e-7;
                ok = ok && pass;
                std::printf("verify N=%d %-9s analytic %.10f integrated %.10f %s\n", n,
                            std::string(model_name(check.model)).c_str(), check.analytic,
                            check.integrated, pass ? "ok" : "MISMATCH");
            }
        }
        if (!ok) return kExitRuntime;
    }
    return 0;
}

int cmd_steady(const RunConfig& cfg) {
    const int N = single_size(cfg);
    const auto rates = resolve_rates(cfg, N);
    std::cerr << "steady: " << describe(rates) << "\n";
    const auto report = build_report(rates.beta, rates.gamma, N);

    const std::string format = cfg.format.empty() ? "text" : cfg.format;
    std::string text;
    if (format == "json") {
        text = to_json(report).dump(2) + "\n";
    } else if (format == "text") {
        std::ostringstream s;
        s << "N " << report.N << "\n"
          << "exact " << format_number(report.exact) << "\n"
          << "pair " << format_number(report.pair) << "\n"
          << "triple " << format_number(report.triple) << "\n"
          << "binomial " << format_number(report.binomial) << "\n"
          << "err_pair " << format_number(report.err_pair()) << "\n"
          << "err_triple " << format_number(report.err_triple()) << "\n"
          << "err_binomial " << format_number(report.err_binomial()) << "\n"
          << "below_threshold " << (report.below_threshold ? "true" : "false") << "\n";
        text = s.str();
    } else {
        throw UsageError("--format must be text or json for steady");
    }
    if (report.below_threshold) std::cerr << "note: below the endemic threshold\n";
    if (cfg.out == "-") {
        std::cout << text;
    } else {
        write_atomically(cfg.out, text);
    }
    return 0;
}

int cmd_validate(const RunConfig& cfg) {
    const int N = single_size(cfg);
    if (cfg.runs == 0) throw UsageError("--runs must be at least 1");
    const auto coeffs = resolve_coefficients(cfg, N);
    const int k0 = cfg.k0.value_or(default_initial_infected(N));
    if (k0 < 0 || k0 > N) throw UsageError("--k0 must lie in 0..N");

    std::vector<double> times = cfg.t_record;
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    if (times.empty() || times.front() <= 0.0) throw UsageError("--t values must be positive");

    std::cerr << "validate: N=" << N << " k0=" << k0 << " runs=" << cfg.runs
              << " seed=" << cfg.seed << "\n";
    const auto samples = gillespie_run(coeffs, k0, {cfg.runs, times, cfg.seed});
    IntegratorConfig config = integrator_config(cfg);
    config.rel_tol = std::min(config.rel_tol, 1e-10);
    config.abs_tol = std::min(config.abs_tol, 1e-12);
    const auto exact = integrate(rhs_exact(coeffs), ProbabilityVector::point_mass(N, k0).p, 0.0,
                                 times.back(), times, config);

    bool ok = true;
    std::string report;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto empirical = empirical_distribution(samples.states[i], N);
        const double tv =
            total_variation(empirical, ProbabilityVector{exact.states[i], times[i]}.clamped());
        const bool pass = tv <= cfg.tv_tolerance;
        ok = ok && pass;
        char line[128];
        std::snprintf(line, sizeof(line), "t=%s tv=%.6f %s\n", format_number(times[i]).c_str(),
                      tv, pass ? "ok" : "FAIL");
        report += line;
    }
    if (cfg.out == "-") {
        std::cout << report;
    } else {
        write_atomically(cfg.out, report);
    }
    return ok ? 0 : kExitRuntime;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact SIS master equation and moment-closure models"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file supplying option values (flags take precedence)");

    RunConfig cfg;
    auto* timeseries = app.add_subcommand("timeseries", "Prevalence I/N over time per model");
    add_model_options(*timeseries, cfg, false);
    timeseries
        ->add_option("--k0", cfg.k0, "Initially infected count (default round(0.05 N), at least 1)");
    timeseries->add_option("--t-end", cfg.t_end, "End time")->capture_default_str();
    timeseries->add_option("--points", cfg.points, "Number of output times")->capture_default_str();
    timeseries
        ->add_option("--models", cfg.models,
                     "Comma separated: exact, pair, triple, classic, binomial, binomial_simplified")
        ->delimiter(',')
        ->capture_default_str();
    timeseries->add_option("--rtol", cfg.rel_tol, "Integrator relative tolerance")->capture_default_str();
    timeseries->add_option("--atol", cfg.abs_tol, "Integrator absolute tolerance")->capture_default_str();
    add_output_options(*timeseries, cfg, "csv | json");

    auto* scan = app.add_subcommand("scan", "Steady-state closure errors over N with slope fits");
    add_model_options(*scan, cfg, true);
    scan->add_flag("--verify", cfg.verify,
                   "Also integrate each reduced model to its plateau and compare");
    add_output_options(*scan, cfg, "csv | json");

    auto* steady = app.add_subcommand("steady", "Closed-form steady states at one N");
    add_model_options(*steady, cfg, false);
    add_output_options(*steady, cfg, "text | json");

    auto* validate = app.add_subcommand("validate", "Gillespie simulation vs integrated master equation");
    add_model_options(*validate, cfg, false);
    validate
        ->add_option("--k0", cfg.k0, "Initially infected count (default round(0.05 N), at least 1)");
    validate->add_option("--runs", cfg.runs, "Independent realisations")->capture_default_str();
    validate->add_option("--t", cfg.t_record, "Comparison times, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    validate->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    validate->add_option("--tolerance", cfg.tv_tolerance, "Maximum total-variation distance")
        ->capture_default_str();
    validate->add_option("--out", cfg.out, "Report path, '-' for standard output")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    cfg.family = cfg.family_name == "rlad"          ? Family::Rlad
                 : cfg.family_name == "homogeneous" ? Family::Homogeneous
                                                    : Family::Complete;
    try {
        if (timeseries->parsed()) return cmd_timeseries(cfg);
        if (scan->parsed()) return cmd_scan(cfg);
        if (steady->parsed()) return cmd_steady(cfg);
        if (validate->parsed()) return cmd_validate(cfg);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\nRun with --help for usage.\n";
        return kExitUsage;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
