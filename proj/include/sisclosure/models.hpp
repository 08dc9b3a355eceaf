#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "sisclosure/generator.hpp"
#include "sisclosure/integrator.hpp"
#include "sisclosure/moments.hpp"

namespace sisclosure {

enum class ModelKind {
    ExactKE,
    MeanFieldPair,
    PairwiseTriple,
    MomentClassic,
    MomentBinomial,
    MomentBinomialSimplified,
};

inline constexpr std::array kAllModels = {
    ModelKind::ExactKE,       ModelKind::MeanFieldPair,  ModelKind::PairwiseTriple,
    ModelKind::MomentClassic, ModelKind::MomentBinomial, ModelKind::MomentBinomialSimplified,
};

enum class MomentClosure { Classic, Binomial, SimplifiedBinomial };

/// Short names used in CLI flags and CSV headers: exact, pair, triple,
/// classic, binomial, binomial_simplified.
std::string_view model_name(ModelKind kind);
std::optional<ModelKind> parse_model(std::string_view name);

/// Rates of the SIS chain on the complete graph (or a homogeneous graph via
/// its effective beta).
struct SisRates {
    double beta = 0.0;
    double gamma = 0.0;
    int N = 0;

    void validate() const;
    double tau() const { return beta / N; }

    bool operator==(const SisRates&) const = default;
};

/// round(0.05 N) infected, at least one.
int default_initial_infected(int N);

Rhs rhs_exact(RateCoefficients coeffs);

/// State: [I~].
Rhs rhs_mean_field(const SisRates& rates);

struct PairwiseDerivative {
    std::array<double, 4> value{};
    bool degenerate = false;  // S <= eps, closed triples set to zero
};

/// d/dt of (I, SI, II, SS) with SSI and ISI closed by the classic triple closure.
PairwiseDerivative pairwise_triple_derivative(const SisRates& rates, const PairwiseState& state);

/// State: [I, SI, II, SS].
Rhs rhs_pairwise_triple(const SisRates& rates);

/// State: [x1, x2]. `rates.beta` is the effective transmission rate.
Rhs rhs_moment(const SisRates& rates, MomentClosure closure);

/// Third moment supplied by `closure` for the given (x1, x2).
ClosureValue close_third_moment(MomentClosure closure, double x1, double x2, int N);

/// Unclosed moment equations: d/dt (y1, y2) given y3.
std::array<double, 2> moment_derivative(const SisRates& rates, double y1, double y2, double y3);

/// State: [y1] with y2 from the n = N binomial (limiting pair closure).
Rhs rhs_limiting_pair(const SisRates& rates);

/// Initial state of `kind` consistent with a point mass at k0 infected.
State initial_state(ModelKind kind, int N, int k0);

/// Prevalence I/N read from a state of `kind`.
double prevalence(ModelKind kind, const State& state, int N);

} // namespace sisclosure
