#pragma once

#include "kuramoto/model.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace kuramoto {

// Raised when a state entry turns non-finite during integration.
class NumericAbort : public std::runtime_error {
public:
    NumericAbort(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
    double time() const { return t_; }

private:
    double t_;
};

struct IntegratorConfig {
    double dt = 0.01;
    double t_end = 30.0;
    std::size_t observer_stride = 1;
    double refine_tol = 1e-12;

    void validate() const;
    std::size_t steps() const;
    double time_at(std::size_t k) const;
    // Same horizon and snapshot times with the step divided by factor.
    IntegratorConfig reference(std::size_t factor = 20) const;
};

struct CollisionEvent {
    std::size_t i = 0;
    std::size_t j = 0;
    double t_star = 0.0;
    long branch = 0;
};

using Observer = std::function<void(const PhaseState&)>;
using StepHook = std::function<void(const PhaseState& before, const PhaseState& after)>;

struct Rk4Workspace {
    Vec k1t, k2t, k3t, k4t, k1w, k2w, k3w, k4w, tmp_t, tmp_w, cpl;
};

void rk4_step(const SystemParams& p, PhaseState& s, double h, Rk4Workspace& ws);
void rk4_step_first_order(const SystemParams& p, PhaseState& s, double h, Rk4Workspace& ws);

PhaseState integrate(const SystemParams& p, PhaseState state0, const IntegratorConfig& cfg,
                     const Observer& observer = {}, const StepHook& hook = {});

// Snapshots carry omega = d theta/dt of the first-order field.
PhaseState integrate_first_order(const SystemParams& p, const Vec& theta0,
                                 const IntegratorConfig& cfg, const Observer& observer = {},
                                 const StepHook& hook = {});

// Collects every snapshot handed to the observer.
struct Recorder {
    std::vector<PhaseState> snapshots;
    Observer observer() {
        return [this](const PhaseState& s) { snapshots.push_back(s); };
    }
};

// Step-by-step collision bookkeeping; attach on_step as the integrator's step hook.
class CollisionDetector {
public:
    CollisionDetector(const SystemParams& p, const PhaseState& s0, double refine_tol,
                      bool first_order = false);

    void on_step(const PhaseState& before, const PhaseState& after);
    StepHook hook() {
        return [this](const PhaseState& a, const PhaseState& b) { on_step(a, b); };
    }
    const std::vector<CollisionEvent>& events() const { return events_; }
    bool excluded(std::size_t i, std::size_t j) const;

private:
    double pair_value(const PhaseState& s, std::size_t i, std::size_t j) const;
    CollisionEvent refine(const PhaseState& before, double h, std::size_t i, std::size_t j);

    SystemParams params_;
    double refine_tol_;
    bool first_order_;
    std::size_t n_;
    std::vector<bool> excluded_;
    std::vector<double> prev_sign_;
    Vec half_sin_, half_cos_;
    Rk4Workspace ws_;
    std::vector<CollisionEvent> events_;
};

std::vector<CollisionEvent> detect_collisions(const SystemParams& p, const PhaseState& state0,
                                              const IntegratorConfig& cfg);

} // namespace kuramoto
