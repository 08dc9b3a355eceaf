#include "sisclosure/steady_state.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "sisclosure/errors.hpp"

namespace sisclosure {

namespace {

void check_rates(double beta, double gamma) {
    if (!(beta > 0.0) || !(gamma > 0.0) || !std::isfinite(beta) || !std::isfinite(gamma)) {
        throw ParameterError("beta and gamma must be positive and finite");
    }
}

void check_size(int N) {
    if (N < 2) throw ParameterError("N must be at least 2");
}

SteadyValue endemic_or_zero(double value) {
    if (!(value > 0.0)) return {0.0, true};
    return {value, false};
}

// Normalises log-weights into probabilities using the running maximum.
std::vector<double> normalise_log_weights(const std::vector<double>& log_w) {
    double peak = -std::numeric_limits<double>::infinity();
    for (double w : log_w) peak = std::max(peak, w);
    std::vector<double> out(log_w.size());
    double total = 0.0;
    for (std::size_t i = 0; i < log_w.size(); ++i) {
        out[i] = std::exp(log_w[i] - peak);
        total += out[i];
    }
    for (double& x : out) x /= total;
    return out;
}

} // namespace

SteadyValue ss_pair(double beta, double gamma) {
    check_rates(beta, gamma);
    return endemic_or_zero(1.0 - gamma / beta);
}

SteadyValue ss_triple(double beta, double gamma, int N) {
    check_rates(beta, gamma);
    check_size(N);
    const double n = N;
    const double numerator = (n - 2.0) * beta - n * gamma;
    if (!(numerator > 0.0)) return {0.0, true};
    return endemic_or_zero((n - 1.0) * numerator / ((n - 1.0) * (n - 2.0) * beta - n * gamma));
}

SteadyValue ss_binomial(double beta, double gamma, int N) {
    check_rates(beta, gamma);
    check_size(N);
    const double q = 1.0 - gamma / beta;
    if (!(N * q > 1.0)) return {0.0, true};
    return endemic_or_zero((N * q * q - 1.0) / (N * q - 1.0));
}

SteadyValue ss_limiting_pair(double beta, double gamma, int N) {
    check_rates(beta, gamma);
    check_size(N);
    // Root of (beta - gamma) y - beta (y / N + (1 - 1/N) y^2) = 0.
    return endemic_or_zero((N * (beta - gamma) - beta) / (beta * (N - 1.0)));
}

double ss_exact(double beta, double gamma, int N) {
    check_rates(beta, gamma);
    check_size(N);
    // log A_k = k log(beta / (gamma N)) + sum_{j=1}^{k} log(N - j) - log(k + 1)
    std::vector<double> log_a(static_cast<std::size_t>(N));
    const double log_ratio = std::log(beta / (gamma * N));
    double log_falling = 0.0;
    for (int k = 0; k < N; ++k) {
        if (k > 0) log_falling += std::log(static_cast<double>(N - k));
        log_a[static_cast<std::size_t>(k)] = k * log_ratio + log_falling - std::log(k + 1.0);
    }
    const auto weights = normalise_log_weights(log_a);
    double mean = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        mean += static_cast<double>(k + 1) * weights[k];
    }
    return mean / N;
}

ProbabilityVector quasi_stationary_distribution(const RateCoefficients& coeffs) {
    const int N = coeffs.N();
    const int first = coeffs.birth(0) == 0.0 ? 1 : 0;
    if (coeffs.death(first) == 0.0 && first > 0) {
        throw ParameterError("state 1 has no recovery; no quasi-stationary distribution");
    }

    std::vector<double> log_w;
    log_w.push_back(0.0);
    for (int k = first; k < N; ++k) {
        const double up = coeffs.birth(k);
        const double down = coeffs.death(k + 1);
        if (up == 0.0) break;
        if (down == 0.0) {
            throw ParameterError("zero death rate inside the support; chain is not reversible");
        }
        log_w.push_back(log_w.back() + std::log(up) - std::log(down));
    }
    const auto weights = normalise_log_weights(log_w);
    ProbabilityVector out{std::vector<double>(static_cast<std::size_t>(N) + 1, 0.0), 0.0};
    for (std::size_t i = 0; i < weights.size(); ++i) {
        out.p[static_cast<std::size_t>(first) + i] = weights[i];
    }
    return out;
}

double SteadyStateReport::err_pair() const { return std::abs(pair - exact); }
double SteadyStateReport::err_triple() const { return std::abs(triple - exact); }
double SteadyStateReport::err_binomial() const { return std::abs(binomial - exact); }

SteadyStateReport build_report(double beta, double gamma, int N) {
    check_rates(beta, gamma);
    check_size(N);
    SteadyStateReport report;
    report.N = N;
    if (beta <= gamma) {
        report.below_threshold = true;
        return report;
    }
    report.exact = ss_exact(beta, gamma, N);
    const auto pair = ss_pair(beta, gamma);
    const auto triple = ss_triple(beta, gamma, N);
    const auto binomial = ss_binomial(beta, gamma, N);
    report.pair = pair.value;
    report.triple = triple.value;
    report.binomial = binomial.value;
    report.below_threshold =
        pair.below_threshold || triple.below_threshold || binomial.below_threshold;
    return report;
}

} // namespace sisclosure
