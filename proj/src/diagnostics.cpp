#include "kuramoto/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace kuramoto {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> centroid(std::span<const double> theta) {
    double s = 0.0, c = 0.0;
    for (double th : theta) {
        s += std::sin(th);
        c += std::cos(th);
    }
    const double n = static_cast<double>(theta.size());
    return {c / n, s / n};
}

double mean_sin2(std::span<const double> theta, double phi) {
    double acc = 0.0;
    for (double th : theta) {
        const double v = std::sin(th - phi);
        acc += v * v;
    }
    return acc / static_cast<double>(theta.size());
}
} // namespace

OrderState order_state(std::span<const double> theta) {
    if (theta.empty()) throw InputError("order parameter of empty phase vector");
    const auto z = centroid(theta);
    OrderState o;
    o.R = std::abs(z);
    if (o.R >= kPhiThreshold) {
        o.phi = std::arg(z);
        o.Delta = mean_sin2(theta, *o.phi);
        return o;
    }
    o.delta_fallback = true;
    double best = 1.0;
    for (int k = 0; k < 64; ++k) best = std::min(best, mean_sin2(theta, kTwoPi * k / 64.0));
    o.Delta = best;
    return o;
}

double order_amplitude(std::span<const double> theta) { return std::abs(centroid(theta)); }

Vec gather(std::span<const double> x, std::span<const std::size_t> subset) {
    Vec out;
    out.reserve(subset.size());
    for (std::size_t i : subset) {
        if (i >= x.size()) throw InputError("subset index out of range");
        out.push_back(x[i]);
    }
    return out;
}

Diameters diameters(const PhaseState& s) { return {diameter(s.theta), diameter(s.omega)}; }

Diameters diameters(const PhaseState& s, std::span<const std::size_t> subset) {
    if (subset.empty()) throw InputError("diameter of an empty subset");
    return {diameter(gather(s.theta, subset)), diameter(gather(s.omega, subset))};
}

double potential(const SystemParams& p, std::span<const double> theta) {
    if (theta.size() != p.size()) throw InputError("phase vector size mismatch");
    double linear = 0.0;
    for (std::size_t k = 0; k < theta.size(); ++k) linear += p.nu[k] * theta[k];
    double pair = 0.0;
    for (std::size_t k = 0; k < theta.size(); ++k)
        for (std::size_t l = 0; l < theta.size(); ++l) pair += 1.0 - std::cos(theta[k] - theta[l]);
    return -linear + 0.5 * p.kappa * pair;
}

double energy(const SystemParams& p, const PhaseState& s) {
    const double r = order_amplitude(s.theta);
    return 0.5 * p.kappa * (1.0 - r * r) + 0.5 * p.m * variance(s.omega);
}

std::vector<ResidualPoint> energy_dissipation_residual(const SystemParams& p,
                                                       std::span<const PhaseState> snaps) {
    if (p.nu_diameter() > 1e-12)
        throw InputError("energy dissipation identity needs identical natural frequencies");
    std::vector<ResidualPoint> out;
    if (snaps.size() < 3) return out;
    const double h = snaps[1].t - snaps[0].t;
    for (std::size_t k = 1; k < snaps.size(); ++k)
        if (std::abs((snaps[k].t - snaps[k - 1].t) - h) > 1e-9 * std::max(1.0, h) + 1e-12)
            throw InputError("snapshots are not equally spaced");
    std::vector<double> e(snaps.size());
    for (std::size_t k = 0; k < snaps.size(); ++k) e[k] = energy(p, snaps[k]);
    for (std::size_t k = 1; k + 1 < snaps.size(); ++k) {
        const double rate = (e[k + 1] - e[k - 1]) / (2.0 * h);
        out.push_back({snaps[k].t, e[k], rate + variance(snaps[k].omega)});
    }
    return out;
}

std::size_t majority_count(double lambda, std::size_t n) {
    return static_cast<std::size_t>(std::ceil(lambda * static_cast<double>(n) - 1e-9));
}

ClusterReport largest_arc_cluster(std::span<const double> theta, double ell) {
    const std::size_t n = theta.size();
    if (n == 0) throw InputError("cluster search on empty phase vector");
    std::vector<double> res(n);
    std::vector<long> wraps(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = std::floor(theta[i] / kTwoPi);
        double r = theta[i] - kTwoPi * f;
        long w = static_cast<long>(f);
        if (r >= kTwoPi) {
            r -= kTwoPi;
            ++w;
        }
        res[i] = r;
        wraps[i] = w;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return res[a] < res[b]; });
    auto val = [&](std::size_t pos) {
        return res[order[pos % n]] + (pos >= n ? kTwoPi : 0.0);
    };

    std::size_t best_s = 0, best_count = 0;
    double best_arc = 0.0;
    std::size_t e = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (e < s + 1) e = s + 1;
        while (e < s + n && val(e) - val(s) <= ell) ++e;
        const std::size_t count = e - s;
        const double arc = val(e - 1) - val(s);
        const bool better =
            count > best_count || (count == best_count && arc < best_arc) ||
            (count == best_count && arc == best_arc && order[s] < order[best_s]);
        if (better) {
            best_s = s;
            best_count = count;
            best_arc = arc;
        }
    }

    const double mid = 0.5 * (val(best_s) + val(best_s + best_count - 1));
    const long shift = static_cast<long>(std::floor((mid + std::numbers::pi) / kTwoPi));
    std::vector<std::pair<std::size_t, long>> members;
    for (std::size_t pos = best_s; pos < best_s + best_count; ++pos) {
        const std::size_t i = order[pos % n];
        const long k = wraps[i] - (pos >= n ? 1 : 0) + shift;
        members.emplace_back(i, k);
    }
    std::sort(members.begin(), members.end());
    ClusterReport rep;
    double lo = 0.0, hi = 0.0;
    for (std::size_t q = 0; q < members.size(); ++q) {
        rep.indices.push_back(members[q].first);
        rep.translations.push_back(members[q].second);
        const double v = theta[members[q].first] - kTwoPi * static_cast<double>(members[q].second);
        if (q == 0 || v < lo) lo = v;
        if (q == 0 || v > hi) hi = v;
    }
    rep.arc_diameter = hi - lo;
    rep.fraction = static_cast<double>(best_count) / static_cast<double>(n);
    return rep;
}

std::optional<ClusterReport> find_majority_cluster(std::span<const double> theta, double lambda,
                                                   double ell) {
    if (!(lambda > 0.0 && lambda <= 1.0)) throw InputError("lambda must lie in (0,1]");
    if (!(ell > 0.0 && ell < kTwoPi)) throw InputError("ell must lie in (0, 2 pi)");
    auto rep = largest_arc_cluster(theta, ell);
    if (rep.indices.size() < majority_count(lambda, theta.size())) return std::nullopt;
    return rep;
}

std::optional<ClusterReport> cluster_from_condensation(const OrderState& order,
                                                       std::span<const double> theta,
                                                       double lambda, double beta) {
    if (!(beta > 0.0 && beta < 0.5 * std::numbers::pi))
        throw InputError("beta must lie in (0, pi/2)");
    if (!(lambda > 0.0 && lambda <= 1.0)) throw InputError("lambda must lie in (0,1]");
    if (!order.phi) return std::nullopt;
    const double cb = std::cos(beta);
    const bool gate_r = order.R >= lambda + (1.0 - lambda) * cb;
    const bool gate_delta = 2.0 * lambda + order.Delta / (1.0 - cb) <= 1.0 + order.R;
    if (!gate_r && !gate_delta) return std::nullopt;
    const double phi = *order.phi;
    ClusterReport rep;
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double d = std::remainder(theta[i] - phi, kTwoPi);
        if (std::abs(d) >= beta) continue;
        rep.indices.push_back(i);
        rep.translations.push_back(std::lround((theta[i] - phi - d) / kTwoPi));
        if (rep.indices.size() == 1 || d < lo) lo = d;
        if (rep.indices.size() == 1 || d > hi) hi = d;
    }
    if (rep.indices.size() < majority_count(lambda, theta.size()))
        throw std::logic_error("condensation gate held but the arc holds fewer than ceil(lambda N)");
    rep.arc_diameter = hi - lo;
    rep.fraction = static_cast<double>(rep.indices.size()) / static_cast<double>(theta.size());
    return rep;
}

double arrangement_constant(double phi1, double lambda) {
    return phi1 / (2.0 * std::sin(0.5 * phi1) * (lambda * std::cos(phi1) - (1.0 - lambda)));
}

ArrangementReport arrangement_check(std::span<const PhaseState> tail, const SystemParams& p,
                                    std::span<const std::size_t> subset, double phi1,
                                    double lambda, double tol) {
    if (tail.empty()) throw InputError("arrangement check needs a nonempty tail");
    if (!(p.kappa > 0.0)) throw InputError("arrangement check needs kappa > 0");
    ArrangementReport rep;
    rep.c = arrangement_constant(phi1, lambda);
    rep.worst_slack = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < subset.size(); ++a)
        for (std::size_t b = 0; b < subset.size(); ++b) {
            std::size_t i = subset[a], j = subset[b];
            if (i == j) continue;
            if (p.nu[i] < p.nu[j] || (p.nu[i] == p.nu[j] && i > j)) continue;
            PairGap g;
            g.i = i;
            g.j = j;
            g.lower = (p.nu[i] - p.nu[j]) / p.kappa;
            g.upper = rep.c * g.lower;
            double acc = 0.0;
            for (std::size_t k = 0; k < tail.size(); ++k) {
                const double gap = std::remainder(tail[k].theta[i] - tail[k].theta[j], kTwoPi);
                if (k == 0 || gap < g.gap_min) g.gap_min = gap;
                if (k == 0 || gap > g.gap_max) g.gap_max = gap;
                acc += gap;
            }
            g.gap_mean = acc / static_cast<double>(tail.size());
            g.slack = std::min(g.gap_min - g.lower, g.upper - g.gap_max);
            rep.worst_slack = std::min(rep.worst_slack, g.slack);
            if (g.slack < -tol) rep.ok = false;
            rep.pairs.push_back(g);
        }
    if (rep.pairs.empty()) rep.worst_slack = 0.0;
    return rep;
}

LockTolerances LockTolerances::defaults_for(double kappa) {
    LockTolerances t;
    t.eps_omega = 1e-4 * std::max(1.0, kappa);
    return t;
}

LockReport detect_locking(std::span<const PhaseState> snaps, double nu_c,
                          const LockTolerances& tol) {
    if (snaps.empty()) throw InputError("lock detection needs snapshots");
    const double t_last = snaps.back().t;
    if (t_last - snaps.front().t < tol.window - 1e-9)
        throw InputError("snapshots do not cover the lock window");
    const std::size_t n = snaps.front().theta.size();
    const std::size_t pairs = n * (n - 1) / 2;
    std::vector<double> dmin(pairs), dmax(pairs);

    auto omega_dev = [&](const PhaseState& s) {
        double d = 0.0;
        for (double w : s.omega) d = std::max(d, std::abs(w - nu_c));
        return d;
    };
    // Backward scan: extend the suffix while it satisfies both criteria.
    LockReport rep;
    double suffix_omega = 0.0, suffix_drift = 0.0;
    std::size_t first_ok = snaps.size();
    bool window_done = false;
    for (std::size_t k = snaps.size(); k-- > 0;) {
        const PhaseState& s = snaps[k];
        const double od = std::max(suffix_omega, omega_dev(s));
        double drift = suffix_drift;
        std::size_t q = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j, ++q) {
                const double d = s.theta[i] - s.theta[j];
                if (k + 1 == snaps.size()) {
                    dmin[q] = dmax[q] = d;
                } else {
                    dmin[q] = std::min(dmin[q], d);
                    dmax[q] = std::max(dmax[q], d);
                }
                drift = std::max(drift, dmax[q] - dmin[q]);
            }
        if (!window_done) {
            rep.omega_spread_final = od;
            rep.relative_phase_drift_final = drift;
            if (t_last - s.t >= tol.window - 1e-9) window_done = true;
        }
        const bool ok = od < tol.eps_omega && drift < tol.eps_theta;
        suffix_omega = od;
        suffix_drift = drift;
        if (!ok) break;
        first_ok = k;
    }
    if (first_ok < snaps.size() && t_last - snaps[first_ok].t >= tol.window - 1e-9) {
        rep.locked = true;
        rep.t_lock = snaps[first_ok].t;
    }
    return rep;
}

std::optional<double> PhaseUnwrapper::operator()(std::optional<double> phi) {
    if (!phi) return phi;
    if (last_) *phi = *last_ + std::remainder(*phi - *last_, kTwoPi);
    last_ = phi;
    return phi;
}

DiagRow diag_row(const SystemParams& p, const PhaseState& s, double cluster_ell) {
    DiagRow r;
    r.t = s.t;
    const auto o = order_state(s.theta);
    r.R = o.R;
    r.phi = o.phi;
    r.Delta = o.Delta;
    const auto d = diameters(s);
    r.D_theta = d.theta;
    r.D_omega = d.omega;
    r.P = potential(p, s.theta);
    r.E = energy(p, s);
    const auto c = largest_arc_cluster(s.theta, cluster_ell);
    r.cluster_fraction = c.fraction;
    r.cluster_arc = c.arc_diameter;
    return r;
}

double PropagationSlack::min() const {
    return std::min(std::min(omega_lower, omega_upper), std::min(pair, diameter));
}

PropagationSlack propagation_slack(const SystemParams& p, const PhaseState& s0,
                                   const PhaseState& s) {
    if (!(p.m > 0.0)) throw InputError("propagation bounds need m > 0");
    const double decay = std::exp(-s.t / p.m);
    const double rel = -std::expm1(-s.t / p.m);
    const std::size_t n = p.size();
    PropagationSlack out;
    out.omega_lower = out.omega_upper = out.pair = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double base = decay * s0.omega[i];
        out.omega_lower = std::min(out.omega_lower, s.omega[i] - (base + rel * (p.nu[i] - p.kappa)));
        out.omega_upper = std::min(out.omega_upper, base + rel * (p.nu[i] + p.kappa) - s.omega[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double bound = decay * std::abs(s0.omega[i] - s0.omega[j]) +
                                 rel * (std::abs(p.nu[i] - p.nu[j]) + 2.0 * p.kappa);
            out.pair = std::min(out.pair, bound - std::abs(s.omega[i] - s.omega[j]));
        }
    }
    if (n == 1) out.pair = 0.0;
    out.diameter = decay * diameter(s0.omega) + rel * (p.nu_diameter() + 2.0 * p.kappa) -
                   diameter(s.omega);
    return out;
}

double quasi_monotonicity_slack(const SystemParams& p, double xi_eta, double eta,
                                std::span<const PhaseState> snaps) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k + 1 < snaps.size(); ++k) {
        const double t = snaps[k].t;
        if (t < eta * p.m) continue;
        const double rdot = (order_amplitude(snaps[k + 1].theta) - order_amplitude(snaps[k - 1].theta)) /
                            (snaps[k + 1].t - snaps[k - 1].t);
        const auto o = order_state(snaps[k].theta);
        const double sd = std::sqrt(o.Delta);
        const double rhs = p.kappa * sd * (-std::expm1(-t / p.m)) * (o.R * sd - xi_eta);
        worst = std::min(worst, rdot - rhs);
    }
    return worst;
}

double initial_layer_slack(double R0, double zeta_eta, double layer_end,
                           std::span<const PhaseState> snaps) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& s : snaps) {
        if (s.t > layer_end) break;
        worst = std::min(worst, order_amplitude(s.theta) - (R0 - zeta_eta));
    }
    return worst;
}

} // namespace kuramoto
