#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sisclosure/integrator.hpp"
#include "sisclosure/models.hpp"
#include "sisclosure/steady_state.hpp"

namespace sisclosure {

struct TimeSeriesRequest {
    SisRates rates;
    int k0 = 1;
    std::vector<ModelKind> models;
    double t_end = 15.0;
    std::size_t n_points = 301;
    IntegratorConfig integrator;
    /// Overrides the exact chain's coefficients (RLAD, homogeneous graphs).
    std::optional<RateCoefficients> exact_coefficients;
};

struct TimeSeriesResult {
    SisRates rates;
    int k0 = 0;
    std::vector<double> times;
    std::vector<ModelKind> models;
    std::vector<std::vector<double>> curves;  // curves[m][i] = I/N of models[m] at times[i]

    bool operator==(const TimeSeriesResult&) const = default;
};

TimeSeriesResult run_timeseries(const TimeSeriesRequest& request);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double standard_error = 0.0;
    std::vector<int> fit_window;  // N values that entered the fit

    bool operator==(const SlopeFit&) const = default;
};

/// Least-squares slope of log(error) against log(N). Needs at least three
/// points, all with positive error; returns nullopt otherwise.
std::optional<SlopeFit> fit_loglog_slope(const std::vector<int>& n_values,
                                         const std::vector<double>& errors);

struct ErrorScanResult {
    double beta = 0.0;
    double gamma = 0.0;
    std::vector<int> n_values;
    std::vector<SteadyStateReport> reports;
    std::optional<SlopeFit> slope_pair;
    std::optional<SlopeFit> slope_triple;
    std::optional<SlopeFit> slope_binomial;
    std::vector<std::string> notes;

    bool operator==(const ErrorScanResult&) const = default;
};

/// Closed-form steady states per N (input order kept, duplicates dropped
/// with a note) and log-log slope fits for each closure.
ErrorScanResult run_error_scan(double beta, double gamma, const std::vector<int>& n_values);

struct FixedPointCheck {
    ModelKind model;
    double analytic = 0.0;
    double integrated = 0.0;
    bool converged = false;

    double difference() const;
};

/// Integrates the mean-field, pairwise-triple and binomial moment models to
/// their plateaus and compares with the closed-form steady states.
std::vector<FixedPointCheck> verify_fixed_points(const SisRates& rates,
                                                 const IntegratorConfig& config = {},
                                                 double plateau_tol = 1e-12,
                                                 double t_max = 1e4);

enum class ExportFormat { Csv, Json };

/// Fixed 10-significant-digit, locale-independent formatting.
std::string format_number(double value);

std::string to_csv(const TimeSeriesResult& result);
std::string to_csv(const ErrorScanResult& result);
nlohmann::json to_json(const TimeSeriesResult& result);
nlohmann::json to_json(const ErrorScanResult& result);
nlohmann::json to_json(const SteadyStateReport& report);
TimeSeriesResult timeseries_from_json(const nlohmann::json& j);
ErrorScanResult scan_from_json(const nlohmann::json& j);

/// Writes via a temporary sibling file and rename.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

void export_result(const TimeSeriesResult& result, ExportFormat format,
                   const std::filesystem::path& path);
void export_result(const ErrorScanResult& result, ExportFormat format,
                   const std::filesystem::path& path);

} // namespace sisclosure
