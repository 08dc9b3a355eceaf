#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "sisclosure/generator.hpp"

namespace sisclosure {

struct SsaConfig {
    std::size_t runs = 1;
    std::vector<double> t_record;
    std::uint64_t seed = 0;

    void validate() const;
};

/// states[i][r] is the state of run r at t_record[i].
struct SsaSamples {
    int N = 0;
    std::vector<double> t_record;
    std::vector<std::vector<int>> states;
};

/// Generator for run `run`; depends only on (seed, run) so parallel and
/// serial execution draw identical paths.
std::mt19937_64 run_stream(std::uint64_t seed, std::uint64_t run);

/// Uniform double in [0, 1) from 53 random bits.
double uniform01(std::mt19937_64& rng);

/// One Gillespie path recorded at `t_record` (increasing, >= 0).
std::vector<int> gillespie_path(const RateCoefficients& coeffs, int k0,
                                std::span<const double> t_record, std::mt19937_64& rng);

/// Time until the chain first reaches a state with zero total rate, or
/// +inf if `t_max` passes first.
double absorption_time(const RateCoefficients& coeffs, int k0, std::mt19937_64& rng,
                       double t_max);

/// All runs, OpenMP-parallel across runs.
SsaSamples gillespie_run(const RateCoefficients& coeffs, int k0, const SsaConfig& config);

/// Single-threaded reference for gillespie_run.
SsaSamples gillespie_run_serial(const RateCoefficients& coeffs, int k0, const SsaConfig& config);

ProbabilityVector empirical_distribution(std::span<const int> samples, int N);

/// Half the L1 distance.
double total_variation(const ProbabilityVector& lhs, const ProbabilityVector& rhs);

} // namespace sisclosure
