#include "sisclosure/ssa.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sisclosure/errors.hpp"

namespace sisclosure {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void check_start(const RateCoefficients& coeffs, int k0) {
    if (k0 < 0 || k0 > coeffs.N()) {
        throw ParameterError("initial state " + std::to_string(k0) + " outside 0..N");
    }
}

SsaSamples make_samples(const RateCoefficients& coeffs, const SsaConfig& config) {
    SsaSamples out;
    out.N = coeffs.N();
    out.t_record = config.t_record;
    out.states.assign(config.t_record.size(), std::vector<int>(config.runs, 0));
    return out;
}

void store(SsaSamples& out, std::size_t run, const std::vector<int>& path) {
    for (std::size_t i = 0; i < path.size(); ++i) out.states[i][run] = path[i];
}

} // namespace

void SsaConfig::validate() const {
    if (runs == 0) throw ParameterError("runs must be at least 1");
    for (std::size_t i = 0; i < t_record.size(); ++i) {
        if (!(t_record[i] >= 0.0) || !std::isfinite(t_record[i])) {
            throw ParameterError("recording times must be finite and non-negative");
        }
        if (i > 0 && !(t_record[i] > t_record[i - 1])) {
            throw ParameterError("recording times must be strictly increasing");
        }
    }
}

std::mt19937_64 run_stream(std::uint64_t seed, std::uint64_t run) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(~run)));
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<int> gillespie_path(const RateCoefficients& coeffs, int k0,
                                std::span<const double> t_record, std::mt19937_64& rng) {
    check_start(coeffs, k0);
    std::vector<int> out(t_record.size());
    int k = k0;
    double t = 0.0;
    std::size_t next = 0;
    while (next < t_record.size()) {
        const double up = coeffs.birth(k);
        const double total = up + coeffs.death(k);
        if (total == 0.0) break;  // absorbed
        const double wait = -std::log1p(-uniform01(rng)) / total;
        // Record the current state at every time passed before the jump.
        while (next < t_record.size() && t_record[next] < t + wait) out[next++] = k;
        t += wait;
        k += uniform01(rng) * total < up ? 1 : -1;
    }
    for (; next < t_record.size(); ++next) out[next] = k;
    return out;
}

double absorption_time(const RateCoefficients& coeffs, int k0, std::mt19937_64& rng,
                       double t_max) {
    check_start(coeffs, k0);
    int k = k0;
    double t = 0.0;
    while (t <= t_max) {
        const double up = coeffs.birth(k);
        const double total = up + coeffs.death(k);
        if (total == 0.0) return t;
        t += -std::log1p(-uniform01(rng)) / total;
        k += uniform01(rng) * total < up ? 1 : -1;
    }
    return std::numeric_limits<double>::infinity();
}

SsaSamples gillespie_run(const RateCoefficients& coeffs, int k0, const SsaConfig& config) {
    config.validate();
    check_start(coeffs, k0);
    SsaSamples out = make_samples(coeffs, config);
    const auto runs = static_cast<std::ptrdiff_t>(config.runs);

#pragma omp parallel for schedule(dynamic, 256)
    for (std::ptrdiff_t r = 0; r < runs; ++r) {
        auto rng = run_stream(config.seed, static_cast<std::uint64_t>(r));
        store(out, static_cast<std::size_t>(r), gillespie_path(coeffs, k0, config.t_record, rng));
    }
    return out;
}

SsaSamples gillespie_run_serial(const RateCoefficients& coeffs, int k0,
                                const SsaConfig& config) {
    config.validate();
    check_start(coeffs, k0);
    SsaSamples out = make_samples(coeffs, config);
    for (std::size_t r = 0; r < config.runs; ++r) {
        auto rng = run_stream(config.seed, r);
        store(out, r, gillespie_path(coeffs, k0, config.t_record, rng));
    }
    return out;
}

ProbabilityVector empirical_distribution(std::span<const int> samples, int N) {
    if (samples.empty()) throw ParameterError("empirical distribution needs at least one sample");
    ProbabilityVector out{std::vector<double>(static_cast<std::size_t>(N) + 1, 0.0), 0.0};
    for (int k : samples) {
        if (k < 0 || k > N) throw ParameterError("sample outside 0..N");
        out.p[static_cast<std::size_t>(k)] += 1.0;
    }
    for (double& x : out.p) x /= static_cast<double>(samples.size());
    return out;
}

double total_variation(const ProbabilityVector& lhs, const ProbabilityVector& rhs) {
    if (lhs.p.size() != rhs.p.size()) throw DimensionError("distributions differ in length");
    double sum = 0.0;
    for (std::size_t k = 0; k < lhs.p.size(); ++k) sum += std::abs(lhs.p[k] - rhs.p[k]);
    return 0.5 * sum;
}

} // namespace sisclosure
