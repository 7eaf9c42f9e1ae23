#include "kuramoto/integrator.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace kuramoto {

void IntegratorConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("dt must be finite and > 0");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InputError("t_end must be finite and >= 0");
    if (observer_stride == 0) throw InputError("observer_stride must be >= 1");
    if (!(refine_tol > 0.0)) throw InputError("refine_tol must be > 0");
}

std::size_t IntegratorConfig::steps() const {
    const double ratio = t_end / dt;
    const double r = std::round(ratio);
    if (std::abs(ratio - r) <= 1e-9 * std::max(1.0, ratio)) return static_cast<std::size_t>(r);
    return static_cast<std::size_t>(std::ceil(ratio));
}

double IntegratorConfig::time_at(std::size_t k) const {
    const std::size_t n = steps();
    if (k >= n) return t_end;
    return static_cast<double>(k) * dt;
}

IntegratorConfig IntegratorConfig::reference(std::size_t factor) const {
    IntegratorConfig r = *this;
    r.dt = dt / static_cast<double>(factor);
    r.observer_stride = observer_stride * factor;
    return r;
}

namespace {

void inertial_field(const SystemParams& p, const Vec& theta, const Vec& omega, Vec& dtheta,
                    Vec& domega, Vec& cpl) {
    coupling_into(p.kappa, theta, cpl, Coupling::MeanField);
    const std::size_t n = theta.size();
    dtheta.resize(n);
    domega.resize(n);
    const double inv_m = 1.0 / p.m;
    for (std::size_t i = 0; i < n; ++i) {
        dtheta[i] = omega[i];
        domega[i] = (p.nu[i] - omega[i] + cpl[i]) * inv_m;
    }
}

void first_order_field(const SystemParams& p, const Vec& theta, Vec& dtheta) {
    coupling_into(p.kappa, theta, dtheta, Coupling::MeanField);
    for (std::size_t i = 0; i < theta.size(); ++i) dtheta[i] += p.nu[i];
}

void check_finite(const PhaseState& s) {
    for (std::size_t i = 0; i < s.theta.size(); ++i)
        if (!std::isfinite(s.theta[i]) || !std::isfinite(s.omega[i]))
            throw NumericAbort("non-finite state at t=" + std::to_string(s.t) + " (oscillator " +
                                   std::to_string(i) + ")",
                               s.t);
}

template <class Step>
PhaseState run(PhaseState s, const IntegratorConfig& cfg, const Observer& observer,
               const StepHook& hook, Step&& step) {
    const std::size_t n = cfg.steps();
    if (observer) observer(s);
    PhaseState before;
    for (std::size_t k = 1; k <= n; ++k) {
        const double t_next = cfg.time_at(k);
        const double h = t_next - s.t;
        if (hook) before = s;
        step(s, h);
        s.t = t_next;
        check_finite(s);
        if (hook) hook(before, s);
        if (observer && k % cfg.observer_stride == 0) observer(s);
    }
    return s;
}

} // namespace

void rk4_step(const SystemParams& p, PhaseState& s, double h, Rk4Workspace& w) {
    const std::size_t n = s.theta.size();
    inertial_field(p, s.theta, s.omega, w.k1t, w.k1w, w.cpl);
    w.tmp_t.resize(n);
    w.tmp_w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        w.tmp_t[i] = s.theta[i] + 0.5 * h * w.k1t[i];
        w.tmp_w[i] = s.omega[i] + 0.5 * h * w.k1w[i];
    }
    inertial_field(p, w.tmp_t, w.tmp_w, w.k2t, w.k2w, w.cpl);
    for (std::size_t i = 0; i < n; ++i) {
        w.tmp_t[i] = s.theta[i] + 0.5 * h * w.k2t[i];
        w.tmp_w[i] = s.omega[i] + 0.5 * h * w.k2w[i];
    }
    inertial_field(p, w.tmp_t, w.tmp_w, w.k3t, w.k3w, w.cpl);
    for (std::size_t i = 0; i < n; ++i) {
        w.tmp_t[i] = s.theta[i] + h * w.k3t[i];
        w.tmp_w[i] = s.omega[i] + h * w.k3w[i];
    }
    inertial_field(p, w.tmp_t, w.tmp_w, w.k4t, w.k4w, w.cpl);
    const double c = h / 6.0;
    for (std::size_t i = 0; i < n; ++i) {
        s.theta[i] += c * (w.k1t[i] + 2.0 * w.k2t[i] + 2.0 * w.k3t[i] + w.k4t[i]);
        s.omega[i] += c * (w.k1w[i] + 2.0 * w.k2w[i] + 2.0 * w.k3w[i] + w.k4w[i]);
    }
    s.t += h;
}

void rk4_step_first_order(const SystemParams& p, PhaseState& s, double h, Rk4Workspace& w) {
    const std::size_t n = s.theta.size();
    first_order_field(p, s.theta, w.k1t);
    w.tmp_t.resize(n);
    for (std::size_t i = 0; i < n; ++i) w.tmp_t[i] = s.theta[i] + 0.5 * h * w.k1t[i];
    first_order_field(p, w.tmp_t, w.k2t);
    for (std::size_t i = 0; i < n; ++i) w.tmp_t[i] = s.theta[i] + 0.5 * h * w.k2t[i];
    first_order_field(p, w.tmp_t, w.k3t);
    for (std::size_t i = 0; i < n; ++i) w.tmp_t[i] = s.theta[i] + h * w.k3t[i];
    first_order_field(p, w.tmp_t, w.k4t);
    const double c = h / 6.0;
    for (std::size_t i = 0; i < n; ++i)
        s.theta[i] += c * (w.k1t[i] + 2.0 * w.k2t[i] + 2.0 * w.k3t[i] + w.k4t[i]);
    first_order_field(p, s.theta, s.omega);
    s.t += h;
}

PhaseState integrate(const SystemParams& p, PhaseState state0, const IntegratorConfig& cfg,
                     const Observer& observer, const StepHook& hook) {
    p.validate();
    cfg.validate();
    if (!(p.m > 0.0)) throw InputError("inertial integration needs m > 0; use integrate_first_order");
    state0.validate(p.size());
    state0.t = 0.0;
    Rk4Workspace ws;
    return run(std::move(state0), cfg, observer, hook,
               [&](PhaseState& s, double h) { rk4_step(p, s, h, ws); });
}

PhaseState integrate_first_order(const SystemParams& p, const Vec& theta0,
                                 const IntegratorConfig& cfg, const Observer& observer,
                                 const StepHook& hook) {
    p.validate();
    cfg.validate();
    PhaseState s0;
    s0.theta = theta0;
    s0.omega = rhs_first_order(p, theta0);
    s0.validate(p.size());
    Rk4Workspace ws;
    return run(std::move(s0), cfg, observer, hook,
               [&](PhaseState& s, double h) { rk4_step_first_order(p, s, h, ws); });
}

CollisionDetector::CollisionDetector(const SystemParams& p, const PhaseState& s0,
                                     double refine_tol, bool first_order)
    : params_(p), refine_tol_(refine_tol), first_order_(first_order), n_(p.size()) {
    if (!(refine_tol > 0.0)) throw InputError("refine_tol must be > 0");
    s0.validate(n_);
    const double two_pi = 2.0 * std::numbers::pi;
    excluded_.assign(n_ * n_, false);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double d = std::remainder(s0.theta[i] - s0.theta[j], two_pi);
            const bool same_omega = first_order || s0.omega[i] == s0.omega[j];
            if (p.nu[i] == p.nu[j] && same_omega && std::abs(d) <= 1e-12)
                excluded_[i * n_ + j] = true;
        }
    prev_sign_.assign(n_ * n_, 0.0);
    half_sin_.resize(n_);
    half_cos_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        half_sin_[i] = std::sin(0.5 * s0.theta[i]);
        half_cos_[i] = std::cos(0.5 * s0.theta[i]);
    }
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double v = half_sin_[i] * half_cos_[j] - half_cos_[i] * half_sin_[j];
            prev_sign_[i * n_ + j] = (v > 0.0) - (v < 0.0);
        }
}

bool CollisionDetector::excluded(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return excluded_[i * n_ + j];
}

double CollisionDetector::pair_value(const PhaseState& s, std::size_t i, std::size_t j) const {
    return std::sin(0.5 * (s.theta[i] - s.theta[j]));
}

CollisionEvent CollisionDetector::refine(const PhaseState& before, double h, std::size_t i,
                                         std::size_t j) {
    const double v0 = pair_value(before, i, j);
    const double s0 = (v0 > 0.0) - (v0 < 0.0);
    double lo = 0.0, hi = h;
    PhaseState probe;
    auto advance = [&](double tau) {
        probe = before;
        if (tau == 0.0) return;
        if (first_order_)
            rk4_step_first_order(params_, probe, tau, ws_);
        else
            rk4_step(params_, probe, tau, ws_);
    };
    while (hi - lo > refine_tol_) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        advance(mid);
        const double v = pair_value(probe, i, j);
        if (v == 0.0) {
            lo = hi = mid;
            break;
        }
        if (((v > 0.0) - (v < 0.0)) == s0)
            lo = mid;
        else
            hi = mid;
    }
    const double tau = 0.5 * (lo + hi);
    advance(tau);
    CollisionEvent ev;
    ev.i = i;
    ev.j = j;
    ev.t_star = before.t + tau;
    ev.branch = std::lround((probe.theta[i] - probe.theta[j]) / (2.0 * std::numbers::pi));
    return ev;
}

void CollisionDetector::on_step(const PhaseState& before, const PhaseState& after) {
    for (std::size_t i = 0; i < n_; ++i) {
        half_sin_[i] = std::sin(0.5 * after.theta[i]);
        half_cos_[i] = std::cos(0.5 * after.theta[i]);
    }
    const double h = after.t - before.t;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j) {
            const std::size_t idx = i * n_ + j;
            const double v = half_sin_[i] * half_cos_[j] - half_cos_[i] * half_sin_[j];
            const double sg = (v > 0.0) - (v < 0.0);
            const double prev = prev_sign_[idx];
            prev_sign_[idx] = sg;
            if (excluded_[idx] || prev == 0.0 || sg == prev) continue;
            events_.push_back(refine(before, h, i, j));
        }
}

std::vector<CollisionEvent> detect_collisions(const SystemParams& p, const PhaseState& state0,
                                              const IntegratorConfig& cfg) {
    CollisionDetector det(p, state0, cfg.refine_tol);
    integrate(p, state0, cfg, {}, det.hook());
    return det.events();
}

} // namespace kuramoto
