// Acceptance suite. Prints one PASS/FAIL line per criterion; with arguments,
// runs only the listed criteria. Exit status is 1 if any criterion fails.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "sisclosure/generator.hpp"
#include "sisclosure/harness.hpp"
#include "sisclosure/integrator.hpp"
#include "sisclosure/models.hpp"
#include "sisclosure/moments.hpp"
#include "sisclosure/ssa.hpp"
#include "sisclosure/steady_state.hpp"

using namespace sisclosure;

namespace {

constexpr double kBeta = 5.0;
constexpr double kGamma = 2.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

IntegratorConfig tight() {
    IntegratorConfig c;
    c.rel_tol = 1e-10;
    c.abs_tol = 1e-12;
    return c;
}

// Reference x1000 errors, rows pair/triple/binomial, columns N = 100..800.
constexpr std::array<int, 4> kTableN{100, 200, 400, 800};
constexpr std::array<std::array<double, 4>, 3> kTable{{
    {6.9486, 3.4008, 1.6832, 0.8374},
    {1.2355, 0.5729, 0.2763, 0.1357},
    {0.1689, 0.0395, 0.0096, 0.0024},
}};

Outcome table_reproduction() {
    const auto start = std::chrono::steady_clock::now();
    const auto scan = run_error_scan(kBeta, kGamma, {kTableN.begin(), kTableN.end()});
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const char* rows[] = {"pair", "triple", "binomial"};
    int within = 0, rounded_match = 0;
    double worst = 0.0;
    std::string misses;
    for (std::size_t j = 0; j < kTableN.size(); ++j) {
        const auto& r = scan.reports[j];
        const double got[] = {r.err_pair_x1000(), r.err_triple_x1000(), r.err_binomial_x1000()};
        for (int i = 0; i < 3; ++i) {
            const double want = kTable[i][j];
            const double rel = std::abs(got[i] - want) / want;
            worst = std::max(worst, rel);
            if (rel <= 5e-3) {
                ++within;
            } else {
                misses += fmt(" %s@N=%d: %.6f vs %.4f (%.2f%%);", rows[i], kTableN[j], got[i],
                              want, 100 * rel);
            }
            if (std::abs(std::round(got[i] * 1e4) / 1e4 - want) < 1e-9) ++rounded_match;
        }
    }
    std::string detail = fmt("%d/12 cells within 0.5%%, worst %.2f%%, %d/12 equal at printed "
                             "4 decimals, %.3f s",
                             within, 100 * worst, rounded_match, seconds);
    if (!misses.empty()) detail += "; misses:" + misses;
    return {within == 12 && seconds < 1.0, detail};
}

Outcome convergence_order() {
    const auto scan = run_error_scan(kBeta, kGamma, {100, 200, 400, 800, 1600});
    if (!scan.slope_pair || !scan.slope_triple || !scan.slope_binomial) {
        return {false, "slope fit unavailable"};
    }
    const double p = scan.slope_pair->slope, t = scan.slope_triple->slope,
                 b = scan.slope_binomial->slope;
    auto in = [](double x, double lo, double hi) { return x >= lo && x <= hi; };
    const bool ok = in(p, -1.15, -0.85) && in(t, -1.15, -0.85) && in(b, -2.25, -1.75);
    return {ok, fmt("slopes pair %.4f, triple %.4f, binomial %.4f", p, t, b)};
}

Outcome fixed_points() {
    IntegratorConfig config;
    config.rel_tol = 1e-11;
    config.abs_tol = 1e-12;
    bool ok = true;
    double worst = 0.0;
    std::string detail;
    for (int N : {100, 400}) {
        for (const auto& c : verify_fixed_points({kBeta, kGamma, N}, config)) {
            worst = std::max(worst, c.difference());
            ok = ok && c.converged && c.difference() <= 1e-7;
            if (!c.converged) {
                detail += fmt(" %s@N=%d not converged;", std::string(model_name(c.model)).c_str(),
                              N);
            }
        }
    }
    return {ok, fmt("3 models x N in {100, 400}, max |integrated - analytic| = %.3e", worst) +
                    detail};
}

Outcome exact_chain() {
    const int N = 200;
    const SisRates rates{kBeta, kGamma, N};
    const auto coeffs = build_sis_complete({N, kBeta, kGamma});
    const auto times = linspace(0.0, 15.0, 151);
    const auto traj = integrate(rhs_exact(coeffs), initial_state(ModelKind::ExactKE, N,
                                                                 default_initial_infected(N)),
                                0.0, 15.0, times, tight());
    double mass_err = 0.0, min_p = 0.0, residual = 0.0;
    std::vector<double> dp(N + 1);
    for (const auto& p : traj.states) {
        double mass = 0.0;
        for (double x : p) {
            mass += x;
            min_p = std::min(min_p, x);
        }
        mass_err = std::max(mass_err, std::abs(mass - 1.0));

        const ProbabilityVector pv{p, 0.0};
        const double y1 = moment_from_distribution(pv, 1);
        const double y2 = moment_from_distribution(pv, 2);
        const double y3 = moment_from_distribution(pv, 3);
        apply_generator(coeffs, p, dp);
        double dy1 = 0.0, dy2 = 0.0;
        for (int k = 0; k <= N; ++k) {
            const double x = static_cast<double>(k) / N;
            dy1 += x * dp[k];
            dy2 += x * x * dp[k];
        }
        const auto model = moment_derivative(rates, y1, y2, y3);
        residual = std::max({residual, std::abs(dy1 - model[0]), std::abs(dy2 - model[1])});
    }
    const bool ok = mass_err <= 1e-9 && min_p >= -1e-10 && residual <= 1e-6;
    return {ok, fmt("max |sum p - 1| = %.3e, min p = %.3e, moment residual = %.3e", mass_err,
                    min_p, residual)};
}

Outcome moment_pairwise_equivalence() {
    TimeSeriesRequest request;
    request.rates = {kBeta, kGamma, 200};
    request.k0 = default_initial_infected(200);
    request.models = {ModelKind::MomentClassic, ModelKind::PairwiseTriple};
    request.integrator = tight();
    const auto result = run_timeseries(request);
    double worst = 0.0;
    for (std::size_t i = 0; i < result.times.size(); ++i) {
        worst = std::max(worst, std::abs(result.curves[0][i] - result.curves[1][i]));
    }
    return {worst <= 1e-6, fmt("max |I/N classic - I/N pairwise| on [0, 15] = %.3e", worst)};
}

Outcome binomial_exactness() {
    double worst_y3 = 0.0, worst_fit = 0.0;
    for (int n = 1; n <= 200; ++n) {
        for (int i = 1; i <= 9; ++i) {
            const double p = 0.1 * i;
            const auto m = binomial_moments(n, p);
            const auto closed = binomial_closure_Y3(m.Y1, m.Y2);
            worst_y3 = std::max(worst_y3, std::abs(closed.value - m.Y3) / std::abs(m.Y3));
            const auto fit = binomial_fit(m.Y1, m.Y2);
            if (!fit.valid) return {false, fmt("binomial_fit rejected n=%d p=%.1f", n, p)};
            worst_fit = std::max({worst_fit, std::abs(fit.n - n) / n, std::abs(fit.p - p) / p});
        }
    }
    return {worst_y3 <= 1e-9 && worst_fit <= 1e-12,
            fmt("1800 (n, p) pairs: max rel Y3 error %.3e, max rel fit error %.3e", worst_y3,
                worst_fit)};
}

Outcome ssa_oracle() {
    const std::vector<double> t_record{1.0, 5.0};
    double worst = 0.0;
    for (int N : {10, 20}) {
        const auto coeffs = build_sis_complete({N, kBeta, kGamma});
        const auto samples = gillespie_run(coeffs, 1, {100'000, t_record, 20240601});
        const auto traj = integrate(rhs_exact(coeffs), ProbabilityVector::point_mass(N, 1).p,
                                    0.0, 5.0, t_record, tight());
        for (std::size_t i = 0; i < t_record.size(); ++i) {
            const auto empirical = empirical_distribution(samples.states[i], N);
            const ProbabilityVector exact{traj.states[i], t_record[i]};
            worst = std::max(worst, total_variation(empirical, exact));
        }
    }
    return {worst <= 0.02, fmt("N in {10, 20}, t in {1, 5}, 1e5 runs: max TV = %.5f", worst)};
}

Outcome pair_conservation() {
    const int N = 200;
    const SisRates rates{kBeta, kGamma, N};
    const auto traj = integrate(rhs_pairwise_triple(rates),
                                initial_state(ModelKind::PairwiseTriple, N,
                                              default_initial_infected(N)),
                                0.0, 15.0, {}, tight());
    double worst = 0.0;
    for (const auto& s : traj.states) {
        const PairwiseState ps{s[0], s[1], s[2], s[3]};
        worst = std::max(worst, std::abs(ps.pair_conservation_residual(N)));
    }
    const double bound = 1e-8 * N * N;
    return {worst <= bound, fmt("%zu accepted steps: max |SS + 2SI + II - N(N-1)| = %.3e "
                                "(bound %.1e)",
                                traj.states.size(), worst, bound)};
}

Outcome rlad_sanity() {
    const RladParams params{50, 1.0, 1.0, 25.0};
    const auto coeffs = build_rlad(params);
    const auto times = linspace(0.0, 200.0, 201);
    const auto traj = integrate(rhs_exact(coeffs), ProbabilityVector::point_mass(params.N, 0).p,
                                0.0, 200.0, times, tight());
    double mass_err = 0.0;
    for (const auto& p : traj.states) {
        double mass = 0.0;
        for (double x : p) mass += x;
        mass_err = std::max(mass_err, std::abs(mass - 1.0));
    }
    const ProbabilityVector last{traj.states.back(), 200.0};
    const double mean = last.mean();
    return {mass_err <= 1e-9 && mean < params.k1max,
            fmt("max |sum p - 1| = %.3e, mean links at t = 200: %.6f (K1max 25)", mass_err,
                mean)};
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
};

const std::array<Criterion, 9> kCriteria{{
    {"reference error table", table_reproduction},
    {"order of convergence", convergence_order},
    {"fixed-point consistency", fixed_points},
    {"exact-chain properties", exact_chain},
    {"moment/pairwise equivalence", moment_pairwise_equivalence},
    {"binomial-closure exactness", binomial_exactness},
    {"SSA oracle", ssa_oracle},
    {"pairwise conservation", pair_conservation},
    {"RLAD sanity", rlad_sanity},
}};

} // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int id = std::atoi(argv[i]);
        if (id < 1 || id > static_cast<int>(kCriteria.size())) {
            std::fprintf(stderr, "usage: %s [criterion 1..%zu ...]\n", argv[0], kCriteria.size());
            return 2;
        }
        selected.push_back(id);
    }
    if (selected.empty()) {
        for (std::size_t i = 1; i <= kCriteria.size(); ++i) selected.push_back(static_cast<int>(i));
    }

    bool all = true;
    for (int id : selected) {
        const auto& c = kCriteria[id - 1];
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, c.name,
                    o.detail.c_str(), seconds);
        std::fflush(stdout);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
