#include "kuramoto/selftest.hpp"

#include "kuramoto/experiments.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace kuramoto {

namespace {

constexpr double kN3Expected = 0.123003;

double max_abs_diff(const Vec& a, const Vec& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double state_diff(const PhaseState& a, const PhaseState& b) {
    return std::max(max_abs_diff(a.theta, b.theta), max_abs_diff(a.omega, b.omega));
}

SelfCheck make(std::string name, double err, double tol, std::string detail = {}) {
    return {std::move(name), err <= tol, err, tol, std::move(detail)};
}

Instance probe_instance(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return sample_instance(n, 0.7, 1.3, 0.8, 0.6, rng);
}

IntegratorConfig short_run(double t_end, double dt) {
    IntegratorConfig c;
    c.dt = dt;
    c.t_end = t_end;
    return c;
}

SelfCheck identities() {
    double err = 0.0;
    for (double m : {0.05, 1.0, 4.0})
        for (double t : {1e-6, 1e-3, 0.5, 3.0, 40.0}) {
            const double e = std::exp(-t / m);
            err = std::max(err, std::abs(relaxation(m, t) - (1.0 - e)));
            err = std::max(err, std::abs(drift_response(m, t) - (t - m * (1.0 - e))) /
                                    std::max(1.0, t));
        }
    return make("relaxation and drift identities", err, 1e-12);
}

SelfCheck rhs_agreement() {
    const Instance inst = probe_instance(37, 11);
    const auto a = rhs_inertial(inst.params, inst.state0, Coupling::DirectSum);
    const auto b = rhs_inertial(inst.params, inst.state0, Coupling::MeanField);
    const double err = std::max(max_abs_diff(a.dtheta, b.dtheta), max_abs_diff(a.domega, b.domega));
    return make("direct-sum vs mean-field right-hand side", err, 1e-12);
}

SelfCheck symmetries() {
    const Instance inst = probe_instance(9, 12);
    const auto base = rhs_inertial(inst.params, inst.state0);
    const auto r = reflect_transform(inst.params, inst.state0);
    const auto rb = rhs_inertial(r.params, r.state);
    double err = 0.0;
    for (std::size_t i = 0; i < base.domega.size(); ++i)
        err = std::max(err, std::abs(rb.domega[i] + base.domega[i]));
    std::vector<std::size_t> perm{4, 2, 7, 0, 8, 1, 3, 6, 5};
    const auto pt = permute_transform(inst.params, inst.state0, perm);
    const auto pb = rhs_inertial(pt.params, pt.state);
    for (std::size_t i = 0; i < perm.size(); ++i)
        err = std::max(err, std::abs(pb.domega[i] - base.domega[perm[i]]));
    return make("reflection and exchange equivariance", err, 1e-12);
}

SelfCheck galilean() {
    const Instance inst = probe_instance(6, 13);
    const auto cfg = short_run(5.0, 0.005);
    const PhaseState end = integrate(inst.params, inst.state0, cfg);
    const auto g0 = galilean_transform(inst.params, inst.state0, 0.3, -0.4, 0.25);
    const PhaseState end_g = integrate(g0.params, g0.state, cfg);
    const auto g_end = galilean_transform(inst.params, end, 0.3, -0.4, 0.25);
    return make("Galilean shift commutes with the flow", state_diff(end_g, g_end.state), 1e-9);
}

SelfCheck dilation() {
    const Instance inst = probe_instance(6, 14);
    const double alpha = 2.5;
    const PhaseState end = integrate(inst.params, inst.state0, short_run(5.0, 0.005));
    const auto d0 = dilate_transform(inst.params, inst.state0, alpha);
    const PhaseState end_d = integrate(d0.params, d0.state, short_run(5.0 / alpha, 0.005 / alpha));
    const auto d_end = dilate_transform(inst.params, end, alpha);
    return make("dilation commutes with the flow", state_diff(end_d, d_end.state), 1e-9);
}

SelfCheck nonsync_oracle() {
    std::vector<OscillatorGroup> groups{{{0, 1, 2}, 0.4, 0.1}, {{3, 4}, -0.7, 0.5}};
    const double tp = 2.0 * std::numbers::pi;
    const Vec theta0{0.2, 0.2 + tp / 3.0, 0.2 + 2.0 * tp / 3.0, 1.0, 1.0 + std::numbers::pi};
    const NonsyncExact exact(0.8, 1.0, groups, theta0);
    const PhaseState end = integrate(exact.params(), exact.initial(), short_run(20.0, 0.01));
    return make("incoherent exact solution", state_diff(end, exact.at(20.0)), 1e-8);
}

SelfCheck mean_motion() {
    const Instance inst = probe_instance(8, 15);
    const auto mt = mean_closed_form(inst.params, inst.state0);
    const PhaseState end = integrate(inst.params, inst.state0, short_run(10.0, 0.01));
    const double err = std::max(std::abs(mean(end.theta) - mt.theta_c(10.0)),
                                std::abs(mean(end.omega) - mt.omega_c(10.0)));
    return make("mean phase closed form", err, 1e-9);
}

SelfCheck lemma_constants() {
    const auto rep = lemma_numeric_suite(1000);
    std::ostringstream os;
    os << "min ratios " << rep.min_ratio[0] << ", " << rep.min_ratio[1] << ", " << rep.min_ratio[2];
    const double worst = std::min({rep.min_slack[0], rep.min_slack[1], rep.min_slack[2]});
    SelfCheck c = make("numeric lemma constants", worst < 0.0 ? -worst : 0.0, 0.0, os.str());
    c.pass = rep.pass;
    return c;
}

SelfCheck n3_constant(double perturb) {
    const double err = std::abs(n3_threshold() - (kN3Expected + perturb));
    std::ostringstream os;
    os.precision(9);
    os << "threshold " << n3_threshold();
    return make("three-oscillator threshold", err, 5e-7, os.str());
}

SelfCheck phi_root_grid() {
    double err = 0.0;
    std::size_t checked = 0;
    for (int a = 1; a < 40; ++a) {
        const double lambda = 0.5 + 0.5 * a / 40.0;
        const double top = f_max(lambda);
        for (int b = 1; b < 40; ++b) {
            const double d = top * b / 40.0;
            const auto roots = phi_roots(lambda, d);
            if (!roots) {
                err = 1.0;
                continue;
            }
            const double ts = theta_star(lambda);
            if (!(roots->phi1 < ts && ts < roots->phi2)) err = 1.0;
            err = std::max({err, std::abs(f_lambda(lambda, roots->phi1) - d),
                            std::abs(f_lambda(lambda, roots->phi2) - d)});
            ++checked;
        }
    }
    return make("level-set roots around the maximiser", err, 1e-12,
                std::to_string(checked) + " (lambda, delta) pairs");
}

SelfCheck remark_triples() {
    double worst = 0.0;
    std::ostringstream os;
    for (const SimpleScaled s : {SimpleScaled{0.5, 0.015, 0.12}, SimpleScaled{0.3, 0.05, 0.76}}) {
        const auto mn = minimize_simple_objective(s, default_xyz_constant());
        worst = std::max(worst, mn.value);
        os << "(" << s.x << ", " << s.y << ", " << s.z << ") -> " << mn.value << "; ";
    }
    SelfCheck c = make("sample (x, y, z) triples satisfy the criterion", worst, 1.0, os.str());
    c.pass = worst < 1.0;
    return c;
}

} // namespace

std::vector<SelfCheck> run_selftest(double perturb) {
    std::vector<SelfCheck> out;
    auto guarded = [&](const char* name, auto fn) {
        try {
            out.push_back(fn());
        } catch (const std::exception& e) {
            out.push_back({name, false, 0.0, 0.0, std::string("threw: ") + e.what()});
        }
    };
    guarded("identities", identities);
    guarded("rhs", rhs_agreement);
    guarded("symmetries", symmetries);
    guarded("galilean", galilean);
    guarded("dilation", dilation);
    guarded("nonsync", nonsync_oracle);
    guarded("mean", mean_motion);
    guarded("lemma", lemma_constants);
    guarded("n3", [&] { return n3_constant(perturb); });
    guarded("phi roots", phi_root_grid);
    guarded("triples", remark_triples);
    return out;
}

json selftest_json(const std::vector<SelfCheck>& checks) {
    json arr = json::array();
    bool all = true;
    for (const auto& c : checks) {
        all = all && c.pass;
        arr.push_back({{"name", c.name},
                       {"pass", c.pass},
                       {"error", c.error},
                       {"tolerance", c.tolerance},
                       {"detail", c.detail}});
    }
    return {{"pass", all}, {"checks", arr}};
}

} // namespace kuramoto
