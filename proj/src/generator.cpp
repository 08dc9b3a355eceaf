#include "sisclosure/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sisclosure/errors.hpp"

namespace sisclosure {

namespace {

// Below this size the OpenMP fork/join costs more than the stencil itself.
constexpr std::ptrdiff_t kParallelThreshold = 1 << 14;

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ParameterError(std::string(name) + " must be positive and finite, got " +
                             std::to_string(value));
    }
}

void check_dimensions(const RateCoefficients& coeffs, std::span<const double> p,
                      std::span<double> dp) {
    if (p.size() != coeffs.size() || dp.size() != coeffs.size()) {
        throw DimensionError("generator expects vectors of length " +
                             std::to_string(coeffs.size()) + ", got " +
                             std::to_string(p.size()) + " and " + std::to_string(dp.size()));
    }
}

inline double stencil(std::span<const double> a, std::span<const double> c,
                      std::span<const double> p, std::size_t k, std::size_t last) {
    double value = -(a[k] + c[k]) * p[k];
    if (k > 0) value += a[k - 1] * p[k - 1];
    if (k < last) value += c[k + 1] * p[k + 1];
    return value;
}

} // namespace

double SisHomogeneousParams::effective_beta() const {
    const double degree_rate = tau * n;
    if (variant == HomogeneousVariant::Modified) return degree_rate;
    return degree_rate * N / (N - 1.0);
}

RateCoefficients::RateCoefficients(std::vector<double> birth, std::vector<double> death)
    : birth_(std::move(birth)), death_(std::move(death)) {
    if (birth_.size() != death_.size() || birth_.size() < 2) {
        throw DimensionError("rate sequences must have equal length N + 1 >= 2");
    }
    if (birth_.back() != 0.0 || death_.front() != 0.0) {
        throw ParameterError("boundary rates a[N] and c[0] must vanish");
    }
    auto bad = [](double r) { return !(r >= 0.0) || !std::isfinite(r); };
    if (std::any_of(birth_.begin(), birth_.end(), bad) ||
        std::any_of(death_.begin(), death_.end(), bad)) {
        throw ParameterError("transition rates must be finite and non-negative");
    }
}

ProbabilityVector ProbabilityVector::point_mass(int N, int k, double t) {
    if (N < 0 || k < 0 || k > N) {
        throw ParameterError("point mass state " + std::to_string(k) + " outside 0.." +
                             std::to_string(N));
    }
    ProbabilityVector out{std::vector<double>(static_cast<std::size_t>(N) + 1, 0.0), t};
    out.p[static_cast<std::size_t>(k)] = 1.0;
    return out;
}

void ProbabilityVector::validate() const {
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (!(p[k] >= -kNegativeTolerance)) {
            throw ParameterError("probability p[" + std::to_string(k) +
                                 "] = " + std::to_string(p[k]) + " is negative");
        }
    }
    if (std::abs(mass() - 1.0) > kNegativeTolerance) {
        throw ParameterError("probabilities sum to " + std::to_string(mass()));
    }
}

ProbabilityVector ProbabilityVector::clamped() const {
    ProbabilityVector out = *this;
    for (double& x : out.p) {
        if (x < 0.0 && x > -kNegativeTolerance) x = 0.0;
    }
    return out;
}

double ProbabilityVector::mass() const { return std::accumulate(p.begin(), p.end(), 0.0); }

double ProbabilityVector::mean() const {
    double m = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) m += static_cast<double>(k) * p[k];
    return m;
}

RateCoefficients build_sis_complete(const SisCompleteParams& params) {
    if (params.N < 2) throw ParameterError("N must be at least 2");
    require_positive(params.beta, "beta");
    require_positive(params.gamma, "gamma");

    const auto size = static_cast<std::size_t>(params.N) + 1;
    std::vector<double> a(size), c(size);
    const double tau = params.tau();
    for (int k = 0; k <= params.N; ++k) {
        a[static_cast<std::size_t>(k)] = tau * k * (params.N - k);
        c[static_cast<std::size_t>(k)] = params.gamma * k;
    }
    return RateCoefficients(std::move(a), std::move(c));
}

RateCoefficients build_sis_homogeneous(const SisHomogeneousParams& params) {
    if (params.N < 2) throw ParameterError("N must be at least 2");
    if (params.n < 1 || params.n >= params.N) {
        throw ParameterError("degree n must satisfy 1 <= n < N, got n = " +
                             std::to_string(params.n));
    }
    require_positive(params.tau, "tau");
    require_positive(params.gamma, "gamma");

    // Same expression order as build_sis_complete so the Modified variant is
    // bit-identical to the complete graph with beta = tau * n.
    const double denominator =
        params.variant == HomogeneousVariant::Modified ? params.N : params.N - 1.0;
    const double scale = params.tau * params.n / denominator;
    const auto size = static_cast<std::size_t>(params.N) + 1;
    std::vector<double> a(size), c(size);
    for (int k = 0; k <= params.N; ++k) {
        a[static_cast<std::size_t>(k)] = scale * k * (params.N - k);
        c[static_cast<std::size_t>(k)] = params.gamma * k;
    }
    return RateCoefficients(std::move(a), std::move(c));
}

RateCoefficients build_rlad(const RladParams& params) {
    if (params.N < 1) throw ParameterError("N must be at least 1");
    require_positive(params.alpha, "alpha");
    require_positive(params.omega, "omega");
    require_positive(params.k1max, "k1max");

    const auto size = static_cast<std::size_t>(params.N) + 1;
    std::vector<double> a(size), c(size);
    for (int k = 0; k <= params.N; ++k) {
        // Above the carrying capacity the raw rate is negative; clamp to zero.
        const double raw = params.alpha * (params.N - k) * (1.0 - k / params.k1max);
        a[static_cast<std::size_t>(k)] = std::max(0.0, raw);
        c[static_cast<std::size_t>(k)] = params.omega * k;
    }
    return RateCoefficients(std::move(a), std::move(c));
}

void apply_generator(const RateCoefficients& coeffs, std::span<const double> p,
                     std::span<double> dp) {
    check_dimensions(coeffs, p, dp);
    const auto a = coeffs.birth();
    const auto c = coeffs.death();
    const auto size = static_cast<std::ptrdiff_t>(p.size());
    const auto last = p.size() - 1;

#pragma omp parallel for schedule(static) if (size >= kParallelThreshold)
    for (std::ptrdiff_t k = 0; k < size; ++k) {
        dp[static_cast<std::size_t>(k)] = stencil(a, c, p, static_cast<std::size_t>(k), last);
    }
}

std::vector<double> apply_generator(const RateCoefficients& coeffs,
                                    std::span<const double> p) {
    std::vector<double> dp(p.size());
    apply_generator(coeffs, p, dp);
    return dp;
}

void apply_generator_serial(const RateCoefficients& coeffs, std::span<const double> p,
                            std::span<double> dp) {
    check_dimensions(coeffs, p, dp);
    const auto a = coeffs.birth();
    const auto c = coeffs.death();
    const auto last = p.size() - 1;
    for (std::size_t k = 0; k < p.size(); ++k) dp[k] = stencil(a, c, p, k, last);
}

} // namespace sisclosure
