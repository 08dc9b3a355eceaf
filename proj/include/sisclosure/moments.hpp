#pragma once

#include "sisclosure/generator.hpp"

namespace sisclosure {

/// Density-dependent moments y_j = sum_k (k/N)^j p_k for j = 1, 2.
struct MomentState {
    double y1 = 0.0;
    double y2 = 0.0;
    int N = 0;

    /// Raw moment Y_j = N^j y_j.
    double raw1() const { return N * y1; }
    double raw2() const { return static_cast<double>(N) * N * y2; }

    /// Checks 0 <= y1 <= 1 and y1^2 <= y2 <= y1 up to `slack`; throws
    /// ParameterError naming the violated bound.
    void validate(double slack = 1e-12) const;
};

/// Expected counts of singles, ordered pairs and ordered triples on the
/// complete graph.
struct PairwiseCounts {
    double I = 0.0;
    double S = 0.0;
    double SI = 0.0;
    double II = 0.0;
    double SS = 0.0;
    double SSI = 0.0;
    double ISI = 0.0;
};

/// State of the pairwise model.
struct PairwiseState {
    double I = 0.0;
    double SI = 0.0;
    double II = 0.0;
    double SS = 0.0;

    /// SS + 2 SI + II - N (N - 1); zero on the complete graph.
    double pair_conservation_residual(int N) const;
};

struct BinomialFit {
    double n = 0.0;  // real-valued size parameter
    double p = 0.0;
    bool valid = false;
};

/// Result of a closure that may hit a singular denominator. `degenerate`
/// reports that `value` is the defined fallback rather than the formula.
struct ClosureValue {
    double value = 0.0;
    bool degenerate = false;
};

double moment_from_distribution(const ProbabilityVector& p, int j);
double raw_moment_from_distribution(const ProbabilityVector& p, int j);
MomentState moments_from_distribution(const ProbabilityVector& p);

PairwiseCounts pairwise_from_moments(double y1, double y2, double y3, int N);

/// Sums k(N-k) p_k and friends directly over the distribution.
PairwiseCounts pairwise_from_distribution(const ProbabilityVector& p);

/// [ABC] = (N-2)/(N-1) [AB][BC]/[B]; zero with a flag when [B] <= eps.
ClosureValue classic_triple_closure(double ab, double bc, double b, int N);

/// Third moment implied by the classic triple closure. Singular at y1 = 1,
/// where the all-infected value y3 = 1 is returned with the flag set.
ClosureValue classic_closure_y3(double y1, double y2, int N);

double pair_closure_y2(double y1);

/// Second moment of a binomial with n = N and mean N y1.
double limiting_pair_closure_y2(double y1, int N);

BinomialFit binomial_fit(double Y1, double Y2);

/// Y3 of the binomial sharing (Y1, Y2); zero with a flag when Y1 <= 0.
ClosureValue binomial_closure_Y3(double Y1, double Y2);
ClosureValue binomial_closure_y3(double y1, double y2, int N);

double simplified_binomial_closure_y3(double y1, double y2);

/// Raw binomial moments Y1..Y3 for size n and probability p.
struct BinomialMoments {
    double Y1, Y2, Y3;
};
BinomialMoments binomial_moments(double n, double p);

} // namespace sisclosure
