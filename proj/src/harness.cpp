#include "sisclosure/harness.hpp"

#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include "sisclosure/errors.hpp"

namespace sisclosure {

namespace {

using nlohmann::json;

// Runs body(i) for i in [0, count) across OpenMP threads and rethrows the
// first failure (by index) on the calling thread.
template <typename Body>
void parallel_for_each_index(std::size_t count, Body&& body) {
    std::vector<std::exception_ptr> failures(count);
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            failures[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }
}

Rhs model_rhs(ModelKind kind, const TimeSeriesRequest& request) {
    const SisRates& rates = request.rates;
    switch (kind) {
    case ModelKind::ExactKE:
        return rhs_exact(request.exact_coefficients
                             ? *request.exact_coefficients
                             : build_sis_complete({rates.N, rates.beta, rates.gamma}));
    case ModelKind::MeanFieldPair: return rhs_mean_field(rates);
    case ModelKind::PairwiseTriple: return rhs_pairwise_triple(rates);
    case ModelKind::MomentClassic: return rhs_moment(rates, MomentClosure::Classic);
    case ModelKind::MomentBinomial: return rhs_moment(rates, MomentClosure::Binomial);
    case ModelKind::MomentBinomialSimplified:
        return rhs_moment(rates, MomentClosure::SimplifiedBinomial);
    }
    throw ParameterError("unknown model kind");
}

json slope_to_json(const std::optional<SlopeFit>& fit) {
    if (!fit) return nullptr;
    return {{"slope", fit->slope},
            {"intercept", fit->intercept},
            {"standard_error", fit->standard_error},
            {"fit_window", fit->fit_window}};
}

std::optional<SlopeFit> slope_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    SlopeFit fit;
    fit.slope = j.at("slope").get<double>();
    fit.intercept = j.at("intercept").get<double>();
    fit.standard_error = j.at("standard_error").get<double>();
    fit.fit_window = j.at("fit_window").get<std::vector<int>>();
    return fit;
}

void append_row(std::string& out, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) out += ',';
        out += format_number(v);
        first = false;
    }
    out += '\n';
}

} // namespace

TimeSeriesResult run_timeseries(const TimeSeriesRequest& request) {
    request.rates.validate();
    if (!(request.t_end > 0.0)) throw ParameterError("t_end must be positive");
    if (request.n_points < 2) throw ParameterError("at least two output points are required");
    if (request.models.empty()) throw ParameterError("no models selected");

    const int exact_n =
        request.exact_coefficients ? request.exact_coefficients->N() : request.rates.N;
    TimeSeriesResult result;
    result.rates = request.rates;
    result.k0 = request.k0;
    result.times = linspace(0.0, request.t_end, request.n_points);
    result.models = request.models;
    result.curves.resize(request.models.size());

    parallel_for_each_index(request.models.size(), [&](std::size_t m) {
        const ModelKind kind = request.models[m];
        const int n = kind == ModelKind::ExactKE ? exact_n : request.rates.N;
        try {
            const auto trajectory = integrate(model_rhs(kind, request),
                                              initial_state(kind, n, request.k0), 0.0,
                                              request.t_end, result.times, request.integrator);
            auto& curve = result.curves[m];
            curve.reserve(trajectory.states.size());
            for (const auto& state : trajectory.states) curve.push_back(prevalence(kind, state, n));
        } catch (const IntegrationError& e) {
            throw IntegrationError(std::string(model_name(kind)) + " model: " + e.what());
        }
    });
    return result;
}

std::optional<SlopeFit> fit_loglog_slope(const std::vector<int>& n_values,
                                         const std::vector<double>& errors) {
    if (n_values.size() != errors.size()) throw DimensionError("mismatched scan columns");
    std::vector<double> xs, ys;
    SlopeFit fit;
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (errors[i] > 0.0 && n_values[i] > 0) {
            xs.push_back(std::log(static_cast<double>(n_values[i])));
            ys.push_back(std::log(errors[i]));
            fit.fit_window.push_back(n_values[i]);
        }
    }
    if (xs.size() < 3) return std::nullopt;

    const double count = static_cast<double>(xs.size());
    double x_mean = 0.0, y_mean = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        x_mean += xs[i];
        y_mean += ys[i];
    }
    x_mean /= count;
    y_mean /= count;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - x_mean) * (xs[i] - x_mean);
        sxy += (xs[i] - x_mean) * (ys[i] - y_mean);
    }
    if (sxx == 0.0) return std::nullopt;
    fit.slope = sxy / sxx;
    fit.intercept = y_mean - fit.slope * x_mean;
    double ssr = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ssr += r * r;
    }
    fit.standard_error = std::sqrt(ssr / (count - 2.0) / sxx);
    return fit;
}

ErrorScanResult run_error_scan(double beta, double gamma, const std::vector<int>& n_values) {
    ErrorScanResult result;
    result.beta = beta;
    result.gamma = gamma;
    std::set<int> seen;
    for (int n : n_values) {
        if (n < 2) throw ParameterError("every N must be at least 2, got " + std::to_string(n));
        if (seen.insert(n).second) {
            result.n_values.push_back(n);
        } else {
            result.notes.push_back("duplicate N = " + std::to_string(n) + " dropped");
        }
    }

    result.reports.resize(result.n_values.size());
    parallel_for_each_index(result.n_values.size(), [&](std::size_t i) {
        result.reports[i] = build_report(beta, gamma, result.n_values[i]);
    });

    std::vector<double> pair, triple, binomial;
    for (const auto& r : result.reports) {
        if (r.below_threshold) {
            result.notes.push_back("N = " + std::to_string(r.N) +
                                   " is below the endemic threshold; excluded from fits");
        }
        pair.push_back(r.below_threshold ? 0.0 : r.err_pair());
        triple.push_back(r.below_threshold ? 0.0 : r.err_triple());
        binomial.push_back(r.below_threshold ? 0.0 : r.err_binomial());
    }
    result.slope_pair = fit_loglog_slope(result.n_values, pair);
    result.slope_triple = fit_loglog_slope(result.n_values, triple);
    result.slope_binomial = fit_loglog_slope(result.n_values, binomial);
    if (!result.slope_pair || !result.slope_triple || !result.slope_binomial) {
        result.notes.push_back("slope fits need at least three N values with positive error");
    }
    return result;
}

double FixedPointCheck::difference() const { return std::abs(integrated - analytic); }

std::vector<FixedPointCheck> verify_fixed_points(const SisRates& rates,
                                                 const IntegratorConfig& config,
                                                 double plateau_tol, double t_max) {
    rates.validate();
    const int k0 = default_initial_infected(rates.N);
    const std::vector<std::pair<ModelKind, double>> cases = {
        {ModelKind::MeanFieldPair, ss_pair(rates.beta, rates.gamma).value},
        {ModelKind::PairwiseTriple, ss_triple(rates.beta, rates.gamma, rates.N).value},
        {ModelKind::MomentBinomial, ss_binomial(rates.beta, rates.gamma, rates.N).value},
    };
    TimeSeriesRequest request{rates, k0, {}, 1.0, 2, config, std::nullopt};

    std::vector<FixedPointCheck> out(cases.size());
    parallel_for_each_index(cases.size(), [&](std::size_t i) {
        const auto [kind, analytic] = cases[i];
        const auto steady = integrate_to_steady(model_rhs(kind, request),
                                                initial_state(kind, rates.N, k0), config,
                                                plateau_tol, t_max);
        out[i] = {kind, analytic, prevalence(kind, steady.state, rates.N), steady.converged()};
    });
    return out;
}

std::string format_number(double value) {
    char buffer[64];
    const auto [end, ec] =
        std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 10);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buffer, end);
}

std::string to_csv(const TimeSeriesResult& result) {
    std::string out = "t";
    for (ModelKind kind : result.models) {
        out += ',';
        out += model_name(kind);
    }
    out += '\n';
    for (std::size_t i = 0; i < result.times.size(); ++i) {
        out += format_number(result.times[i]);
        for (const auto& curve : result.curves) {
            out += ',';
            out += format_number(curve[i]);
        }
        out += '\n';
    }
    return out;
}

std::string to_csv(const ErrorScanResult& result) {
    std::string out =
        "N,exact,pair,triple,binomial,err_pair,err_triple,err_binomial,"
        "err_pair_x1000,err_triple_x1000,err_binomial_x1000\n";
    for (const auto& r : result.reports) {
        append_row(out, {static_cast<double>(r.N), r.exact, r.pair, r.triple, r.binomial,
                         r.err_pair(), r.err_triple(), r.err_binomial(), r.err_pair_x1000(),
                         r.err_triple_x1000(), r.err_binomial_x1000()});
    }
    return out;
}

nlohmann::json to_json(const SteadyStateReport& r) {
    return {{"N", r.N},
            {"exact", r.exact},
            {"pair", r.pair},
            {"triple", r.triple},
            {"binomial", r.binomial},
            {"below_threshold", r.below_threshold},
            {"err_pair", r.err_pair()},
            {"err_triple", r.err_triple()},
            {"err_binomial", r.err_binomial()},
            {"err_pair_x1000", r.err_pair_x1000()},
            {"err_triple_x1000", r.err_triple_x1000()},
            {"err_binomial_x1000", r.err_binomial_x1000()}};
}

nlohmann::json to_json(const TimeSeriesResult& result) {
    json curves = json::object();
    for (std::size_t m = 0; m < result.models.size(); ++m) {
        curves[std::string(model_name(result.models[m]))] = result.curves[m];
    }
    std::vector<std::string> names;
    for (ModelKind kind : result.models) names.emplace_back(model_name(kind));
    return {{"parameters",
             {{"beta", result.rates.beta},
              {"gamma", result.rates.gamma},
              {"N", result.rates.N},
              {"k0", result.k0}}},
            {"models", names},
            {"t", result.times},
            {"curves", curves}};
}

nlohmann::json to_json(const ErrorScanResult& result) {
    json reports = json::array();
    for (const auto& r : result.reports) reports.push_back(to_json(r));
    return {{"parameters", {{"beta", result.beta}, {"gamma", result.gamma}}},
            {"N", result.n_values},
            {"reports", reports},
            {"slopes",
             {{"pair", slope_to_json(result.slope_pair)},
              {"triple", slope_to_json(result.slope_triple)},
              {"binomial", slope_to_json(result.slope_binomial)}}},
            {"notes", result.notes}};
}

TimeSeriesResult timeseries_from_json(const nlohmann::json& j) {
    TimeSeriesResult result;
    const auto& params = j.at("parameters");
    result.rates = {params.at("beta").get<double>(), params.at("gamma").get<double>(),
                    params.at("N").get<int>()};
    result.k0 = params.at("k0").get<int>();
    result.times = j.at("t").get<std::vector<double>>();
    for (const auto& name : j.at("models")) {
        const auto kind = parse_model(name.get<std::string>());
        if (!kind) throw ParameterError("unknown model in JSON: " + name.get<std::string>());
        result.models.push_back(*kind);
        result.curves.push_back(j.at("curves").at(name.get<std::string>()).get<std::vector<double>>());
    }
    return result;
}

ErrorScanResult scan_from_json(const nlohmann::json& j) {
    ErrorScanResult result;
    result.beta = j.at("parameters").at("beta").get<double>();
    result.gamma = j.at("parameters").at("gamma").get<double>();
    result.n_values = j.at("N").get<std::vector<int>>();
    for (const auto& r : j.at("reports")) {
        SteadyStateReport report;
        report.N = r.at("N").get<int>();
        report.exact = r.at("exact").get<double>();
        report.pair = r.at("pair").get<double>();
        report.triple = r.at("triple").get<double>();
        report.binomial = r.at("binomial").get<double>();
        report.below_threshold = r.at("below_threshold").get<bool>();
        result.reports.push_back(report);
    }
    const auto& slopes = j.at("slopes");
    result.slope_pair = slope_from_json(slopes.at("pair"));
    result.slope_triple = slope_from_json(slopes.at("triple"));
    result.slope_binomial = slope_from_json(slopes.at("binomial"));
    result.notes = j.at("notes").get<std::vector<std::string>>();
    return result;
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
    auto temp = path;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + temp.string() + " for writing");
        out << contents;
        out.flush();
        if (!out) throw std::runtime_error("failed writing " + temp.string());
    }
    std::error_code ec;
    std::filesystem::rename(temp, path, ec);
    if (ec) {
        std::filesystem::remove(temp);
        throw std::runtime_error("cannot move output into " + path.string() + ": " + ec.message());
    }
}

void export_result(const TimeSeriesResult& result, ExportFormat format,
                   const std::filesystem::path& path) {
    write_atomically(path, format == ExportFormat::Csv ? to_csv(result)
                                                       : to_json(result).dump(2) + "\n");
}

void export_result(const ErrorScanResult& result, ExportFormat format,
                   const std::filesystem::path& path) {
    write_atomically(path, format == ExportFormat::Csv ? to_csv(result)
                                                       : to_json(result).dump(2) + "\n");
}

} // namespace sisclosure
