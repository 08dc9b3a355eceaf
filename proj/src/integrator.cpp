#include "sisclosure/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "sisclosure/errors.hpp"

namespace sisclosure {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// Fifth-order weights minus embedded fourth-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI controller exponents (Hairer & Wanner, DOPRI5).
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;

class DormandPrince {
public:
    DormandPrince(const Rhs& rhs, std::size_t dim, const IntegratorConfig& config)
        : rhs_(rhs), config_(config), k_{}, y_stage_(dim), y_new_(dim) {
        for (auto& k : k_) k.assign(dim, 0.0);
    }

    IntegratorStats stats;

    void prime(double t, const State& y) { eval(t, y, k_[0]); }

    /// Derivative at the current point (valid after prime or an accepted step).
    const State& derivative() const { return k_[0]; }

    /// Attempts one step of size h from (t, y). On acceptance updates y in
    /// place and returns true. `h_next` receives the controller's proposal.
    bool step(double t, State& y, double h, double& h_next) {
        const std::size_t n = y.size();
        auto& [k1, k2, k3, k4, k5, k6, k7] = k_;

        for (std::size_t i = 0; i < n; ++i) y_stage_[i] = y[i] + h * a21 * k1[i];
        eval(t + c2 * h, y_stage_, k2);
        for (std::size_t i = 0; i < n; ++i) y_stage_[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        eval(t + c3 * h, y_stage_, k3);
        for (std::size_t i = 0; i < n; ++i)
            y_stage_[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        eval(t + c4 * h, y_stage_, k4);
        for (std::size_t i = 0; i < n; ++i)
            y_stage_[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        eval(t + c5 * h, y_stage_, k5);
        for (std::size_t i = 0; i < n; ++i)
            y_stage_[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                      a65 * k5[i]);
        eval(t + h, y_stage_, k6);
        for (std::size_t i = 0; i < n; ++i)
            y_new_[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                                    a76 * k6[i]);
        eval(t + h, y_new_, k7);

        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double err = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                    e6 * k6[i] + e7 * k7[i]);
            const double scale =
                config_.abs_tol + config_.rel_tol * std::max(std::abs(y[i]), std::abs(y_new_[i]));
            sum += (err / scale) * (err / scale);
        }
        const double err = n == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(n));

        const double fac11 = std::pow(std::max(err, 1e-300), kExpo);
        if (err <= 1.0) {
            double fac = fac11 / std::pow(err_old_, kBeta) / kSafety;
            fac = std::clamp(fac, 1.0 / kMaxFactor, 1.0 / kMinFactor);
            h_next = h / fac;
            err_old_ = std::max(err, 1e-4);
            y.swap(y_new_);
            std::swap(k1, k7);  // first-same-as-last
            ++stats.accepted;
            return true;
        }
        h_next = h / std::min(1.0 / kMinFactor, fac11 / kSafety);
        ++stats.rejected;
        return false;
    }

private:
    void eval(double t, const State& y, State& out) {
        rhs_(y, out);
        ++stats.rhs_evaluations;
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (!std::isfinite(out[i])) {
                std::ostringstream msg;
                msg << "non-finite derivative at t = " << t << " in component " << i;
                throw IntegrationError(msg.str());
            }
        }
    }

    const Rhs& rhs_;
    const IntegratorConfig& config_;
    std::array<State, 7> k_;
    State y_stage_;
    State y_new_;
    double err_old_ = 1e-4;
};

void check_initial_state(const State& y0) {
    for (std::size_t i = 0; i < y0.size(); ++i) {
        if (!std::isfinite(y0[i])) {
            throw ParameterError("initial state component " + std::to_string(i) +
                                 " is not finite");
        }
    }
}

[[noreturn]] void step_underflow(double t) {
    std::ostringstream msg;
    msg << "step size underflow at t = " << t;
    throw IntegrationError(msg.str());
}

[[noreturn]] void budget_exhausted(double t, std::size_t steps) {
    std::ostringstream msg;
    msg << "step budget of " << steps << " exhausted at t = " << t;
    throw IntegrationError(msg.str());
}

} // namespace

void IntegratorConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw ParameterError("integrator tolerances must be positive");
    }
    if (!(initial_step > 0.0)) throw ParameterError("initial_step must be positive");
    if (max_step != 0.0 && !(max_step >= initial_step)) {
        throw ParameterError("max_step must be at least initial_step");
    }
    if (max_steps == 0) throw ParameterError("max_steps must be positive");
}

Trajectory integrate(const Rhs& rhs, State y0, double t0, double t1,
                     std::span<const double> output_times, const IntegratorConfig& config) {
    config.validate();
    if (!(t0 < t1)) throw ParameterError("integration span requires t0 < t1");
    check_initial_state(y0);
    for (std::size_t i = 0; i < output_times.size(); ++i) {
        if (output_times[i] < t0 || output_times[i] > t1) {
            throw ParameterError("output time outside the integration span");
        }
        if (i > 0 && !(output_times[i] > output_times[i - 1])) {
            throw ParameterError("output times must be strictly increasing");
        }
    }

    const bool every_step = output_times.empty();
    Trajectory out;
    out.mode = every_step ? SampleMode::AcceptedSteps : SampleMode::OutputTimes;

    const double max_step = config.max_step > 0.0 ? config.max_step : (t1 - t0) / 10.0;
    double h = std::min(config.initial_step, max_step);
    double t = t0;
    State y = std::move(y0);
    std::size_t next = 0;

    if (every_step || output_times.front() == t0) {
        out.times.push_back(t0);
        out.states.push_back(y);
        if (!every_step) ++next;
    }

    DormandPrince solver(rhs, y.size(), config);
    solver.prime(t, y);
    std::size_t steps = 0;

    while (t < t1 && (every_step || next < output_times.size())) {
        if (steps++ >= config.max_steps) budget_exhausted(t, config.max_steps);
        const double target = every_step ? t1 : output_times[next];
        double trial = std::min(h, max_step);
        bool lands = false;
        // Stretch slightly rather than leave a sliver before the target.
        if (t + 1.01 * trial >= target) {
            trial = target - t;
            lands = true;
        }
        if (trial <= 1e-14 * std::max(1.0, std::abs(t))) step_underflow(t);

        double proposal = trial;
        if (solver.step(t, y, trial, proposal)) {
            t = lands ? target : t + trial;
            if (every_step || lands) {
                out.times.push_back(t);
                out.states.push_back(y);
                if (!every_step) ++next;
            }
            // A clamped step says nothing about the achievable step size.
            h = lands ? std::max(h, proposal) : proposal;
        } else {
            h = proposal;
        }
    }
    out.stats = solver.stats;
    return out;
}

SteadyResult integrate_to_steady(const Rhs& rhs, State y0, const IntegratorConfig& config,
                                 double plateau_tol, double t_max) {
    config.validate();
    if (!(plateau_tol > 0.0)) throw ParameterError("plateau_tol must be positive");
    if (!(t_max > 0.0)) throw ParameterError("t_max must be positive");
    check_initial_state(y0);

    auto inf_norm = [](const State& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    };

    // Near a stable fixed point the controller settles at the stability
    // boundary, leaving a deviation of order the local tolerance. Keep that
    // below the plateau threshold.
    IntegratorConfig local = config;
    local.rel_tol = std::min(config.rel_tol, 0.1 * plateau_tol);
    local.abs_tol = std::min(config.abs_tol, 0.1 * plateau_tol);

    const double max_step = config.max_step > 0.0 ? config.max_step : t_max / 10.0;
    double h = std::min(config.initial_step, max_step);
    SteadyResult result{std::move(y0), 0.0, StopReason::TimeLimit, {}};
    State& y = result.state;
    double& t = result.time;

    DormandPrince solver(rhs, y.size(), local);
    solver.prime(t, y);
    std::size_t steps = 0;
    while (true) {
        if (inf_norm(solver.derivative()) <= plateau_tol * (1.0 + inf_norm(y))) {
            result.reason = StopReason::Plateau;
            break;
        }
        if (t >= t_max) break;
        if (steps++ >= config.max_steps) budget_exhausted(t, config.max_steps);

        double trial = std::min(h, max_step);
        bool lands = false;
        if (t + 1.01 * trial >= t_max) {
            trial = t_max - t;
            lands = true;
        }
        if (trial <= 1e-14 * std::max(1.0, std::abs(t))) step_underflow(t);
        double proposal = trial;
        if (solver.step(t, y, trial, proposal)) {
            t = lands ? t_max : t + trial;
            h = lands ? std::max(h, proposal) : proposal;
        } else {
            h = proposal;
        }
    }
    result.stats = solver.stats;
    return result;
}

std::vector<double> linspace(double t0, double t1, std::size_t count) {
    if (count == 0) return {};
    if (count == 1) return {t0};
    std::vector<double> out(count);
    const double dt = (t1 - t0) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = t0 + dt * static_cast<double>(i);
    out.back() = t1;
    return out;
}

} // namespace sisclosure
