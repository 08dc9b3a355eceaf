#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sisclosure {

using State = std::vector<double>;

/// Autonomous right-hand side: writes f(y) into dydt.
using Rhs = std::function<void(std::span<const double> y, std::span<double> dydt)>;

struct IntegratorConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double initial_step = 1e-3;
    double max_step = 0.0;  // 0 selects (t1 - t0) / 10
    std::size_t max_steps = 10'000'000;

    void validate() const;
};

enum class SampleMode {
    AcceptedSteps,  // one snapshot per accepted step
    OutputTimes,    // snapshots exactly at the requested times
};

struct IntegratorStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evaluations = 0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    SampleMode mode = SampleMode::OutputTimes;
    IntegratorStats stats;
};

/// Dormand-Prince 5(4) with PI step-size control. With a non-empty
/// `output_times` the steps are clamped to land on each requested time;
/// otherwise every accepted step is recorded (including t0).
Trajectory integrate(const Rhs& rhs, State y0, double t0, double t1,
                     std::span<const double> output_times, const IntegratorConfig& config = {});

enum class StopReason { Plateau, TimeLimit };

struct SteadyResult {
    State state;
    double time = 0.0;
    StopReason reason = StopReason::TimeLimit;
    IntegratorStats stats;

    bool converged() const { return reason == StopReason::Plateau; }
};

/// Integrates until ||f(y)||_inf <= plateau_tol * (1 + ||y||_inf) or t_max.
/// Hitting t_max is reported through `reason`, not thrown. Local tolerances
/// are capped at plateau_tol / 10.
SteadyResult integrate_to_steady(const Rhs& rhs, State y0, const IntegratorConfig& config,
                                 double plateau_tol = 1e-9, double t_max = 1e4);

/// `count` equally spaced times covering [t0, t1] inclusive.
std::vector<double> linspace(double t0, double t1, std::size_t count);

} // namespace sisclosure
