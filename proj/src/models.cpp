#include "sisclosure/models.hpp"

#include <cmath>
#include <string>

#include "sisclosure/errors.hpp"

namespace sisclosure {

namespace {
constexpr double kDegenerateEps = 1e-12;

std::size_t state_size(ModelKind kind, int N) {
    switch (kind) {
    case ModelKind::ExactKE: return static_cast<std::size_t>(N) + 1;
    case ModelKind::MeanFieldPair: return 1;
    case ModelKind::PairwiseTriple: return 4;
    case ModelKind::MomentClassic:
    case ModelKind::MomentBinomial:
    case ModelKind::MomentBinomialSimplified: return 2;
    }
    return 0;
}
} // namespace

std::string_view model_name(ModelKind kind) {
    switch (kind) {
    case ModelKind::ExactKE: return "exact";
    case ModelKind::MeanFieldPair: return "pair";
    case ModelKind::PairwiseTriple: return "triple";
    case ModelKind::MomentClassic: return "classic";
    case ModelKind::MomentBinomial: return "binomial";
    case ModelKind::MomentBinomialSimplified: return "binomial_simplified";
    }
    return "unknown";
}

std::optional<ModelKind> parse_model(std::string_view name) {
    for (ModelKind kind : kAllModels) {
        if (model_name(kind) == name) return kind;
    }
    return std::nullopt;
}

void SisRates::validate() const {
    if (N < 2) throw ParameterError("N must be at least 2");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be positive");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ParameterError("gamma must be positive");
}

int default_initial_infected(int N) {
    return std::max(1, static_cast<int>(std::lround(0.05 * N)));
}

Rhs rhs_exact(RateCoefficients coeffs) {
    return [coeffs = std::move(coeffs)](std::span<const double> p, std::span<double> dp) {
        apply_generator(coeffs, p, dp);
    };
}

Rhs rhs_mean_field(const SisRates& rates) {
    rates.validate();
    return [rates](std::span<const double> y, std::span<double> dy) {
        const double infected = y[0];
        dy[0] = rates.tau() * infected * (rates.N - infected) - rates.gamma * infected;
    };
}

PairwiseDerivative pairwise_triple_derivative(const SisRates& rates, const PairwiseState& s) {
    const double tau = rates.tau();
    const double gamma = rates.gamma;
    const double susceptible = rates.N - s.I;

    PairwiseDerivative out;
    double ssi = 0.0;
    double isi = 0.0;
    if (susceptible > kDegenerateEps) {
        ssi = classic_triple_closure(s.SS, s.SI, susceptible, rates.N).value;
        isi = classic_triple_closure(s.SI, s.SI, susceptible, rates.N).value;
    } else {
        out.degenerate = true;
    }
    out.value[0] = tau * s.SI - gamma * s.I;
    out.value[1] = gamma * (s.II - s.SI) + tau * (ssi - isi - s.SI);
    out.value[2] = -2.0 * gamma * s.II + 2.0 * tau * (isi + s.SI);
    out.value[3] = 2.0 * gamma * s.SI - 2.0 * tau * ssi;
    return out;
}

Rhs rhs_pairwise_triple(const SisRates& rates) {
    rates.validate();
    return [rates](std::span<const double> y, std::span<double> dy) {
        const auto d = pairwise_triple_derivative(rates, {y[0], y[1], y[2], y[3]});
        for (std::size_t i = 0; i < 4; ++i) dy[i] = d.value[i];
    };
}

ClosureValue close_third_moment(MomentClosure closure, double x1, double x2, int N) {
    switch (closure) {
    case MomentClosure::Classic: return classic_closure_y3(x1, x2, N);
    case MomentClosure::Binomial: return binomial_closure_y3(x1, x2, N);
    case MomentClosure::SimplifiedBinomial: return {simplified_binomial_closure_y3(x1, x2), false};
    }
    return {};
}

std::array<double, 2> moment_derivative(const SisRates& rates, double y1, double y2, double y3) {
    const double beta = rates.beta;
    const double gamma = rates.gamma;
    return {
        (beta - gamma) * y1 - beta * y2,
        2.0 * (beta - gamma) * y2 - 2.0 * beta * y3 + ((beta + gamma) * y1 - beta * y2) / rates.N,
    };
}

Rhs rhs_moment(const SisRates& rates, MomentClosure closure) {
    rates.validate();
    return [rates, closure](std::span<const double> x, std::span<double> dx) {
        const double x3 = close_third_moment(closure, x[0], x[1], rates.N).value;
        const auto d = moment_derivative(rates, x[0], x[1], x3);
        dx[0] = d[0];
        dx[1] = d[1];
    };
}

Rhs rhs_limiting_pair(const SisRates& rates) {
    rates.validate();
    return [rates](std::span<const double> y, std::span<double> dy) {
        dy[0] = (rates.beta - rates.gamma) * y[0] -
                rates.beta * limiting_pair_closure_y2(y[0], rates.N);
    };
}

State initial_state(ModelKind kind, int N, int k0) {
    if (N < 2) throw ParameterError("N must be at least 2");
    if (k0 < 0 || k0 > N) {
        throw ParameterError("initial infected count k0 = " + std::to_string(k0) +
                             " outside 0..N");
    }
    const double x = static_cast<double>(k0) / N;
    switch (kind) {
    case ModelKind::ExactKE: return ProbabilityVector::point_mass(N, k0).p;
    case ModelKind::MeanFieldPair: return {static_cast<double>(k0)};
    case ModelKind::PairwiseTriple: {
        const auto counts = pairwise_from_moments(x, x * x, x * x * x, N);
        return {counts.I, counts.SI, counts.II, counts.SS};
    }
    case ModelKind::MomentClassic:
    case ModelKind::MomentBinomial:
    case ModelKind::MomentBinomialSimplified: return {x, x * x};
    }
    return {};
}

double prevalence(ModelKind kind, const State& state, int N) {
    if (state.size() != state_size(kind, N)) {
        throw DimensionError("state of size " + std::to_string(state.size()) +
                             " does not match model " + std::string(model_name(kind)));
    }
    switch (kind) {
    case ModelKind::ExactKE: {
        double mean = 0.0;
        for (std::size_t k = 0; k < state.size(); ++k) mean += static_cast<double>(k) * state[k];
        return mean / N;
    }
    case ModelKind::MeanFieldPair:
    case ModelKind::PairwiseTriple: return state[0] / N;
    case ModelKind::MomentClassic:
    case ModelKind::MomentBinomial:
    case ModelKind::MomentBinomialSimplified: return state[0];
    }
    return 0.0;
}

} // namespace sisclosure
