#pragma once

#include "sisclosure/generator.hpp"

namespace sisclosure {

/// Steady-state prevalence. Below the endemic threshold `value` is 0 and
/// `below_threshold` is set.
struct SteadyValue {
    double value = 0.0;
    bool below_threshold = false;
};

/// Mean-field (pair closure): 1 - gamma / beta.
SteadyValue ss_pair(double beta, double gamma);

/// Pairwise model with the classic triple closure.
SteadyValue ss_triple(double beta, double gamma, int N);

/// Moment model with the binomial closure: (N q^2 - 1) / (N q - 1), q = 1 - gamma / beta.
SteadyValue ss_binomial(double beta, double gamma, int N);

/// Moment model with the n = N pair closure.
SteadyValue ss_limiting_pair(double beta, double gamma, int N);

/// Quasi-stationary prevalence of the exact chain (conditioned on
/// non-extinction), from the detailed-balance product A_k summed in log space.
double ss_exact(double beta, double gamma, int N);

/// Detailed-balance distribution of a birth-death chain built from the rate
/// ratios a_k / c_{k+1}. When state 0 is absorbing (a_0 = 0) the chain is
/// conditioned on non-extinction and p_0 = 0. Support ends at the first
/// state with a_k = 0.
ProbabilityVector quasi_stationary_distribution(const RateCoefficients& coeffs);

struct SteadyStateReport {
    int N = 0;
    double exact = 0.0;
    double pair = 0.0;
    double triple = 0.0;
    double binomial = 0.0;
    bool below_threshold = false;

    double err_pair() const;
    double err_triple() const;
    double err_binomial() const;

    static constexpr double kPresentationScale = 1000.0;
    double err_pair_x1000() const { return kPresentationScale * err_pair(); }
    double err_triple_x1000() const { return kPresentationScale * err_triple(); }
    double err_binomial_x1000() const { return kPresentationScale * err_binomial(); }

    bool operator==(const SteadyStateReport&) const = default;
};

SteadyStateReport build_report(double beta, double gamma, int N);

} // namespace sisclosure
