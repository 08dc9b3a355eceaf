#include "sisclosure/moments.hpp"

#include <cmath>
#include <string>

#include "sisclosure/errors.hpp"

namespace sisclosure {

namespace {
constexpr double kDegenerateEps = 1e-12;
}

void MomentState::validate(double slack) const {
    if (y1 < -slack || y1 > 1.0 + slack) {
        throw ParameterError("first moment y1 = " + std::to_string(y1) + " outside [0, 1]");
    }
    if (y2 < y1 * y1 - slack) {
        throw ParameterError("y2 below y1^2: negative variance");
    }
    if (y2 > y1 + slack) {
        throw ParameterError("y2 above y1: violates k/N <= 1");
    }
}

double PairwiseState::pair_conservation_residual(int N) const {
    return SS + 2.0 * SI + II - static_cast<double>(N) * (N - 1);
}

double raw_moment_from_distribution(const ProbabilityVector& p, int j) {
    if (j < 1) throw ParameterError("moment order must be positive");
    double sum = 0.0;
    for (std::size_t k = 0; k < p.p.size(); ++k) {
        sum += std::pow(static_cast<double>(k), j) * p.p[k];
    }
    return sum;
}

double moment_from_distribution(const ProbabilityVector& p, int j) {
    if (j < 1) throw ParameterError("moment order must be positive");
    const int N = p.N();
    if (N < 1) throw DimensionError("distribution needs at least two states");
    double sum = 0.0;
    for (std::size_t k = 0; k < p.p.size(); ++k) {
        sum += std::pow(static_cast<double>(k) / N, j) * p.p[k];
    }
    return sum;
}

MomentState moments_from_distribution(const ProbabilityVector& p) {
    return {moment_from_distribution(p, 1), moment_from_distribution(p, 2), p.N()};
}

PairwiseCounts pairwise_from_moments(double y1, double y2, double y3, int N) {
    const double n = N;
    const double inv = 1.0 / n;
    PairwiseCounts out;
    out.I = n * y1;
    out.S = n * (1.0 - y1);
    out.SI = n * n * (y1 - y2);
    out.II = n * n * (y2 - y1 * inv);
    out.SS = n * n * (1.0 - inv + (inv - 2.0) * y1 + y2);
    out.SSI = n * n * n * ((1.0 - inv) * y1 + (inv - 2.0) * y2 + y3);
    out.ISI = n * n * n * (-y1 * inv + (inv + 1.0) * y2 - y3);
    return out;
}

PairwiseCounts pairwise_from_distribution(const ProbabilityVector& p) {
    const int N = p.N();
    PairwiseCounts out;
    for (int k = 0; k <= N; ++k) {
        const double pk = p.p[static_cast<std::size_t>(k)];
        const double inf = k;
        const double sus = N - k;
        out.I += inf * pk;
        out.S += sus * pk;
        out.SI += inf * sus * pk;
        out.II += inf * (inf - 1.0) * pk;
        out.SS += sus * (sus - 1.0) * pk;
        out.SSI += sus * (sus - 1.0) * inf * pk;
        out.ISI += inf * (inf - 1.0) * sus * pk;
    }
    return out;
}

ClosureValue classic_triple_closure(double ab, double bc, double b, int N) {
    if (b <= kDegenerateEps) return {0.0, true};
    return {(N - 2.0) / (N - 1.0) * ab * bc / b, false};
}

ClosureValue classic_closure_y3(double y1, double y2, int N) {
    if (1.0 - y1 <= kDegenerateEps) return {1.0, true};
    const double inv = 1.0 / N;
    const double spread = y1 - y2;
    return {-inv * y1 + (1.0 + inv) * y2 - (N - 2.0) / (N - 1.0) * spread * spread / (1.0 - y1),
            false};
}

double pair_closure_y2(double y1) { return y1 * y1; }

double limiting_pair_closure_y2(double y1, int N) {
    const double inv = 1.0 / N;
    return y1 * inv + (1.0 - inv) * y1 * y1;
}

BinomialFit binomial_fit(double Y1, double Y2) {
    if (!(Y1 > 0.0)) return {};
    // Equals n p^2; vanishes when the variance equals the mean (n -> infinity).
    const double variance_gap = Y1 + Y1 * Y1 - Y2;
    if (std::abs(variance_gap) <= kDegenerateEps * std::max(1.0, Y1 * Y1)) return {};
    BinomialFit fit;
    fit.p = 1.0 + Y1 - Y2 / Y1;
    fit.n = Y1 * Y1 / variance_gap;
    fit.valid = fit.p >= 0.0 && fit.p <= 1.0 && fit.n > 0.0;
    return fit;
}

ClosureValue binomial_closure_Y3(double Y1, double Y2) {
    if (Y1 <= 0.0) return {0.0, true};
    return {2.0 * Y2 * Y2 / Y1 - Y2 - Y1 * (Y2 - Y1), false};
}

ClosureValue binomial_closure_y3(double y1, double y2, int N) {
    if (y1 <= 0.0) return {0.0, true};
    return {2.0 * y2 * y2 / y1 - y1 * y2 + (y1 * y1 - y2) / N, false};
}

double simplified_binomial_closure_y3(double y1, double y2) {
    return 3.0 * y1 * y2 - 2.0 * y1 * y1 * y1;
}

BinomialMoments binomial_moments(double n, double p) {
    const double np = n * p;
    const double pair = n * (n - 1.0) * p * p;
    const double triple = n * (n - 1.0) * (n - 2.0) * p * p * p;
    return {np, np + pair, np + 3.0 * pair + triple};
}

} // namespace sisclosure
