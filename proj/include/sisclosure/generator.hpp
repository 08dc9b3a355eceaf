#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sisclosure {

/// Probabilities in (-kNegativeTolerance, 0) are treated as round-off.
inline constexpr double kNegativeTolerance = 1e-10;

struct SisCompleteParams {
    int N = 0;
    double beta = 0.0;  // aggregate transmission rate, tau = beta / N
    double gamma = 0.0;

    double tau() const { return beta / N; }
};

enum class HomogeneousVariant {
    Original,  // denominator N - 1
    Modified,  // denominator N, equivalent to the complete graph with beta = tau * n
};

struct SisHomogeneousParams {
    int N = 0;
    int n = 0;  // node degree
    double tau = 0.0;
    double gamma = 0.0;
    HomogeneousVariant variant = HomogeneousVariant::Modified;

    /// Transmission rate beta' such that a_k = (beta' / N) k (N - k).
    double effective_beta() const;
};

/// Random link activation/deletion with a global carrying capacity.
struct RladParams {
    int N = 0;  // potential edges
    double alpha = 0.0;
    double omega = 0.0;
    double k1max = 0.0;
};

/// Birth rates a[k] and death rates c[k] of a birth-death chain on 0..N.
class RateCoefficients {
public:
    RateCoefficients(std::vector<double> birth, std::vector<double> death);

    int N() const { return static_cast<int>(birth_.size()) - 1; }
    std::size_t size() const { return birth_.size(); }
    std::span<const double> birth() const { return birth_; }
    std::span<const double> death() const { return death_; }
    double birth(int k) const { return birth_[static_cast<std::size_t>(k)]; }
    double death(int k) const { return death_[static_cast<std::size_t>(k)]; }

private:
    std::vector<double> birth_;
    std::vector<double> death_;
};

struct ProbabilityVector {
    std::vector<double> p;
    double t = 0.0;

    int N() const { return static_cast<int>(p.size()) - 1; }

    static ProbabilityVector point_mass(int N, int k, double t = 0.0);

    /// Throws if any entry is below -kNegativeTolerance or the mass is off by
    /// more than kNegativeTolerance.
    void validate() const;

    /// Copy with round-off negatives in (-kNegativeTolerance, 0) set to zero.
    ProbabilityVector clamped() const;

    double mass() const;
    double mean() const;
};

RateCoefficients build_sis_complete(const SisCompleteParams& params);
RateCoefficients build_sis_homogeneous(const SisHomogeneousParams& params);
RateCoefficients build_rlad(const RladParams& params);

/// dp_k = a_{k-1} p_{k-1} - (a_k + c_k) p_k + c_{k+1} p_{k+1}, OpenMP-parallel
/// over k for large chains.
void apply_generator(const RateCoefficients& coeffs, std::span<const double> p,
                     std::span<double> dp);
std::vector<double> apply_generator(const RateCoefficients& coeffs,
                                    std::span<const double> p);

/// Single-threaded reference for apply_generator.
void apply_generator_serial(const RateCoefficients& coeffs, std::span<const double> p,
                            std::span<double> dp);

} // namespace sisclosure
