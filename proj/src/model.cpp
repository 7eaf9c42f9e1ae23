#include "kuramoto/model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace kuramoto {

double mean(std::span<const double> x) {
    if (x.empty()) throw InputError("mean of empty vector");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double diameter(std::span<const double> x) {
    if (x.empty()) throw InputError("diameter of empty vector");
    auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return *hi - *lo;
}

double variance(std::span<const double> x) {
    const double c = mean(x);
    double acc = 0.0;
    for (double v : x) acc += (v - c) * (v - c);
    return acc / static_cast<double>(x.size());
}

void SystemParams::validate() const {
    if (nu.empty()) throw InputError("system needs at least one oscillator");
    if (!(m >= 0.0) || !std::isfinite(m)) throw InputError("inertia m must be finite and >= 0");
    if (!(kappa >= 0.0) || !std::isfinite(kappa))
        throw InputError("coupling kappa must be finite and >= 0");
    for (double v : nu)
        if (!std::isfinite(v)) throw InputError("natural frequencies must be finite");
}

void PhaseState::validate(std::size_t n) const {
    if (theta.size() != n || omega.size() != n)
        throw InputError("state size does not match the number of oscillators");
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(theta[i]) || !std::isfinite(omega[i]))
            throw InputError("state entries must be finite");
}

void coupling_into(double kappa, std::span<const double> theta, Vec& out, Coupling how) {
    const std::size_t n = theta.size();
    out.assign(n, 0.0);
    if (n <= 1 || kappa == 0.0) return;
    const double scale = kappa / static_cast<double>(n);
    if (how == Coupling::DirectSum) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += std::sin(theta[j] - theta[i]);
            out[i] = scale * acc;
        }
        return;
    }
    // sum_j sin(theta_j - theta_i) = S cos(theta_i) - C sin(theta_i)
    double s = 0.0, c = 0.0;
    for (double th : theta) {
        s += std::sin(th);
        c += std::cos(th);
    }
    for (std::size_t i = 0; i < n; ++i)
        out[i] = scale * (s * std::cos(theta[i]) - c * std::sin(theta[i]));
}

Vec coupling(double kappa, std::span<const double> theta, Coupling how) {
    Vec out;
    coupling_into(kappa, theta, out, how);
    return out;
}

Derivative rhs_inertial(const SystemParams& p, const PhaseState& s, Coupling how) {
    if (!(p.m > 0.0)) throw InputError("inertial vector field needs m > 0; use rhs_first_order");
    const std::size_t n = p.size();
    if (s.theta.size() != n || s.omega.size() != n)
        throw InputError("state size does not match the number of oscillators");
    Derivative d;
    d.dtheta = s.omega;
    coupling_into(p.kappa, s.theta, d.domega, how);
    for (std::size_t i = 0; i < n; ++i) d.domega[i] = (p.nu[i] - s.omega[i] + d.domega[i]) / p.m;
    return d;
}

Vec rhs_first_order(const SystemParams& p, std::span<const double> theta, Coupling how) {
    if (theta.size() != p.size())
        throw InputError("phase vector size does not match the number of oscillators");
    Vec out;
    coupling_into(p.kappa, theta, out, how);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += p.nu[i];
    return out;
}

double relaxation(double m, double t) { return -std::expm1(-t / m); }

double drift_response(double m, double t) {
    // t - m(1 - e^{-t/m}); the series avoids cancellation for t << m
    const double x = t / m;
    if (x < 1e-3) return m * x * x * (0.5 - x / 6.0 + x * x / 24.0);
    return t - m * relaxation(m, t);
}

Transformed galilean_transform(const SystemParams& p, const PhaseState& s, double nu_shift,
                               double theta_shift, double omega_shift) {
    if (!(p.m > 0.0)) throw InputError("Galilean transform needs m > 0");
    const double t = s.t;
    const double decay = std::exp(-t / p.m);
    const double rel = relaxation(p.m, t);
    const double drift = drift_response(p.m, t);
    Transformed out{p, s};
    for (std::size_t i = 0; i < p.size(); ++i) {
        out.params.nu[i] = p.nu[i] - nu_shift;
        out.state.theta[i] = s.theta[i] - theta_shift - p.m * omega_shift * rel - nu_shift * drift;
        out.state.omega[i] = s.omega[i] - omega_shift * decay - nu_shift * rel;
    }
    return out;
}

Transformed dilate_transform(const SystemParams& p, const PhaseState& s, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InputError("dilation factor must be > 0");
    Transformed out{p, s};
    out.params.kappa = alpha * p.kappa;
    out.params.m = p.m / alpha;
    for (double& v : out.params.nu) v *= alpha;
    for (double& w : out.state.omega) w *= alpha;
    out.state.t = s.t / alpha;
    return out;
}

Transformed reflect_transform(const SystemParams& p, const PhaseState& s) {
    Transformed out{p, s};
    for (double& v : out.params.nu) v = -v;
    for (double& v : out.state.theta) v = -v;
    for (double& v : out.state.omega) v = -v;
    return out;
}

Transformed permute_transform(const SystemParams& p, const PhaseState& s,
                              std::span<const std::size_t> perm) {
    const std::size_t n = p.size();
    if (perm.size() != n) throw InputError("permutation size mismatch");
    std::vector<bool> seen(n, false);
    for (std::size_t k : perm) {
        if (k >= n || seen[k]) throw InputError("not a permutation");
        seen[k] = true;
    }
    Transformed out{p, s};
    for (std::size_t i = 0; i < n; ++i) {
        out.params.nu[i] = p.nu[perm[i]];
        out.state.theta[i] = s.theta[perm[i]];
        out.state.omega[i] = s.omega[perm[i]];
    }
    return out;
}

DimensionlessTriple dimensionless(const SystemParams& p, double d_omega0) {
    if (!(p.kappa > 0.0)) throw InputError("dimensionless triple needs kappa > 0");
    return {p.m * p.kappa, p.nu_diameter() / p.kappa, d_omega0 / p.kappa};
}

MeanTrajectory::MeanTrajectory(double m, double theta_c0, double omega_c0, double nu_c)
    : m_(m), theta_c0_(theta_c0), omega_c0_(omega_c0), nu_c_(nu_c) {
    if (!(m > 0.0)) throw InputError("mean closed form needs m > 0");
}

double MeanTrajectory::theta_c(double t) const {
    return m_ * omega_c0_ * relaxation(m_, t) + nu_c_ * drift_response(m_, t) + theta_c0_;
}

double MeanTrajectory::omega_c(double t) const {
    return omega_c0_ * std::exp(-t / m_) + nu_c_ * relaxation(m_, t);
}

MeanTrajectory mean_closed_form(const SystemParams& p, const PhaseState& s0) {
    s0.validate(p.size());
    return MeanTrajectory(p.m, mean(s0.theta), mean(s0.omega), p.nu_c());
}

NonsyncExact::NonsyncExact(double m, double kappa, std::vector<OscillatorGroup> groups,
                           Vec theta0)
    : groups_(std::move(groups)), theta0_(std::move(theta0)) {
    if (!(m > 0.0)) throw InputError("exact incoherent family needs m > 0");
    const std::size_t n = theta0_.size();
    if (n == 0) throw InputError("empty phase vector");
    params_.m = m;
    params_.kappa = kappa;
    params_.nu.assign(n, 0.0);
    omega0_.assign(n, 0.0);
    std::vector<int> owner(n, -1);
    for (std::size_t g = 0; g < groups_.size(); ++g) {
        const auto& grp = groups_[g];
        if (grp.members.empty()) throw InputError("empty group in partition");
        std::complex<double> z = 0.0;
        for (std::size_t i : grp.members) {
            if (i >= n) throw InputError("group member out of range");
            if (owner[i] != -1) throw InputError("groups overlap");
            owner[i] = static_cast<int>(g);
            params_.nu[i] = grp.nu;
            omega0_[i] = grp.omega0;
            z += std::polar(1.0, theta0_[i]);
        }
        if (std::abs(z) > 1e-12)
            throw InputError("group " + std::to_string(g) + " has a nonzero phase centroid");
    }
    for (int o : owner)
        if (o == -1) throw InputError("groups do not cover every oscillator");
    params_.validate();
}

PhaseState NonsyncExact::initial() const { return at(0.0); }

PhaseState NonsyncExact::at(double t) const {
    const double m = params_.m;
    const double rel = relaxation(m, t);
    const double decay = std::exp(-t / m);
    const double drift = drift_response(m, t);
    PhaseState s;
    s.t = t;
    s.theta.resize(theta0_.size());
    s.omega.resize(theta0_.size());
    for (std::size_t i = 0; i < theta0_.size(); ++i) {
        s.theta[i] = m * omega0_[i] * rel + params_.nu[i] * drift + theta0_[i];
        s.omega[i] = omega0_[i] * decay + params_.nu[i] * rel;
    }
    return s;
}

} // namespace kuramoto
