#include <doctest.h>

#include "oracles.hpp"

#include "kuramoto/certifier.hpp"
#include "kuramoto/experiments.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

using namespace kuramoto;

namespace {
constexpr double kPi = std::numbers::pi;

const Condition* find(const CertificateReport& r, const std::string& name) {
    for (const auto& c : r.per_condition)
        if (c.name == name) return &c;
    for (const auto& c : r.auxiliary)
        if (c.name == name) return &c;
    return nullptr;
}

// Instance with prescribed (x, y, z) relative to its own R0.
CertInputs scaled_inputs(double x, double y, double z, double R0, double kappa = 1.0) {
    const double r2 = R0 * R0;
    return {y * r2 / kappa, kappa, x * kappa * r2, z * kappa * r2};
}
} // namespace

TEST_CASE("zeta") {
    CHECK(zeta(CertInputs{0.0, 1.0, 0.3, 0.4}, 2.0) == 0.0);
    CHECK(zeta(CertInputs{0.1, 1.0, 0.3, 0.4}, 1e-9) < 1e-9);
    const CertInputs in{0.01, 1.0, 0.1, 0.2};
    CHECK(zeta(in, 1.0) == doctest::Approx(oracle::zeta(0.01, 1.0, 0.1, 0.2, 1.0)).epsilon(1e-14));
    for (double eta : {0.01, 0.3, 2.0, 7.5, 40.0})
        CHECK(zeta(CertInputs{0.3, 2.0, 0.7, 1.1}, eta) ==
              doctest::Approx(oracle::zeta(0.3, 2.0, 0.7, 1.1, eta)).epsilon(1e-14));
    CHECK_THROWS_AS(zeta(in, 0.0), InputError);
}

TEST_CASE("xi and its limit") {
    CHECK(xi(CertInputs{0.2, 1.5, 0.0, 0.0}, 3.0) == doctest::Approx(2.0 * 0.2 * 1.5));
    const CertInputs in{0.01, 1.0, 0.1, 0.2};
    CHECK(xi_inf(in) == doctest::Approx(0.071).epsilon(1e-14));
    for (double eta : {0.01, 0.3, 2.0, 7.5, 40.0})
        CHECK(xi(CertInputs{0.3, 2.0, 0.7, 1.1}, eta) ==
              doctest::Approx(oracle::xi(0.3, 2.0, 0.7, 1.1, eta)).epsilon(1e-14));
    double last = xi(in, 1e-3);
    for (int k = 1; k <= 200; ++k) {
        const double v = xi(in, 1e-3 * std::pow(1e5, k / 200.0));
        CHECK(v <= last);
        last = v;
    }
    CHECK(xi(in, 60.0) == doctest::Approx(xi_inf(in)).epsilon(1e-12));
    CHECK_THROWS_AS(xi(CertInputs{0.1, 0.0, 0.1, 0.1}, 1.0), InputError);
    CHECK_THROWS_AS(xi_inf(CertInputs{0.1, 0.0, 0.1, 0.1}), InputError);
}

TEST_CASE("f_lambda landmarks") {
    for (double lambda : {0.55, 0.7, 0.9, 1.0}) {
        CHECK(f_lambda(lambda, 0.0) == 0.0);
        CHECK(std::abs(f_lambda(lambda, f_upper_zero(lambda))) < 1e-14);
        CHECK(f_max(lambda) == doctest::Approx(f_max_radical(lambda)).epsilon(1e-12));
    }
    CHECK(theta_star(1.0) == doctest::Approx(kPi / 2));
    CHECK(f_max(1.0) == doctest::Approx(1.0));
    const double ell = 2.0 * std::acos((1.0 + std::sqrt(33.0)) / 8.0);
    const double want = 0.25 * std::sqrt((69.0 - 11.0 * std::sqrt(33.0)) / 6.0);
    CHECK(f_lambda(2.0 / 3.0, ell) == doctest::Approx(want).epsilon(1e-14));
    CHECK(want == doctest::Approx(0.246006).epsilon(1e-6));
    // the maximiser is a critical point
    for (int k = 1; k < 50; ++k) {
        const double lambda = 0.5 + 0.5 * k / 50.0;
        const double ts = theta_star(lambda), h = 1e-6;
        CHECK(std::abs(f_lambda(lambda, ts + h) - f_lambda(lambda, ts - h)) / (2 * h) < 1e-8);
    }
    CHECK_THROWS_AS(theta_star(0.5), InputError);
}

TEST_CASE("phi roots") {
    for (int a = 1; a <= 20; ++a) {
        const double lambda = 0.5 + 0.5 * a / 20.0;
        const double fm = f_max(lambda), ts = theta_star(lambda), top = f_upper_zero(lambda);
        for (int b = 1; b < 20; ++b) {
            const double d = fm * b / 20.0;
            const auto r = phi_roots(lambda, d);
            REQUIRE(r);
            CHECK(r->phi1 == doctest::Approx(oracle::f_root(lambda, d, 0.0, ts)).epsilon(1e-12));
            CHECK(r->phi2 == doctest::Approx(oracle::f_root(lambda, d, ts, top)).epsilon(1e-12));
            CHECK(0.0 < r->phi1);
            CHECK(r->phi1 < ts);
            CHECK(ts < r->phi2);
            CHECK(r->phi2 < top);
            if (lambda < 1.0) CHECK(r->phi1 < 3.0 * kPi * d / (4.0 * (2.0 * lambda - 1.0)));
        }
        CHECK_FALSE(phi_roots(lambda, fm * 1.0001));
        const auto tiny = phi_roots(lambda, 1e-10);
        REQUIRE(tiny);
        CHECK(tiny->phi1 < 1e-8);
        CHECK(tiny->phi2 == doctest::Approx(top).epsilon(1e-8));
        if (lambda < 1.0)
            CHECK(f_lambda(lambda, std::acos((1.0 - lambda) / lambda)) ==
                  doctest::Approx(arrangement_threshold(lambda)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(phi_roots(0.8, 0.0), InputError);
}

TEST_CASE("framework conditions") {
    FreeParams fp{1.0, 0.9, 0.9, 1.0};
    const auto good = check_framework(CertInputs{1e-6, 1.0, 0.0, 0.0}, 1.0, fp);
    CHECK(good.pass);
    REQUIRE(good.selected);
    CHECK(good.predictions.count("tail_phi1"));

    const auto bip = check_framework(CertInputs{1e-6, 1.0, 0.0, 0.0}, 0.0, fp);
    CHECK_FALSE(bip.pass);
    REQUIRE(find(bip, "F1:R0"));
    CHECK_FALSE(find(bip, "F1:R0")->pass);

    CHECK_THROWS_AS(check_framework(CertInputs{0.1, 1.0, 0.0, 0.0}, 1.0, FreeParams{1.0, 1.2, 0.9, 1.0}), InputError);
    CHECK_THROWS_AS(check_framework(CertInputs{0.1, 1.0, 0.0, 0.0}, 1.0, FreeParams{1.0, 0.5, 0.9, 3.0}), InputError);
    CHECK_THROWS_AS(check_framework(CertInputs{0.1, 1.0, 0.0, 0.0}, 1.0, FreeParams{-1.0, 0.5, 0.9, 1.0}), InputError);

    // pass iff every listed margin is positive
    Rng rng(9);
    for (int k = 0; k < 200; ++k) {
        const CertInputs in{rng.uniform(0.0, 0.05), 1.0, rng.uniform(0.0, 0.3), rng.uniform(0.0, 0.5)};
        const double lambda = rng.uniform(0.55, 1.0);
        const FreeParams f{rng.uniform(0.2, 5.0), rng.uniform(0.05, 0.95), lambda,
                           rng.uniform(0.05, 0.99) * f_upper_zero(lambda)};
        const auto rep = check_framework(in, rng.uniform(0.2, 1.0), f);
        bool all = true;
        for (const auto& c : rep.per_condition) {
            CHECK(c.pass == (c.margin > 0.0));
            all = all && c.margin > 0.0;
        }
        CHECK(rep.pass == all);
        if (find(rep, "F3")->pass) {
            REQUIRE(rep.quantities.count("phi1"));
            CHECK(rep.quantities.at("phi1") < f.ell);
            CHECK(f.ell < rep.quantities.at("phi2"));
        }
    }
}

TEST_CASE("simple criterion on the sample triples") {
    const auto a = check_simple(scaled_inputs(0.5, 0.015, 0.12, 0.8), 0.8);
    CHECK(a.pass);
    CHECK(a.quantities.at("infimum") < 1.0);
    const auto b = check_simple(scaled_inputs(0.3, 0.05, 0.76, 0.6), 0.6);
    CHECK(b.pass);

    // the named eta values already satisfy the criterion
    CHECK(simple_objective({0.5, 0.015, 0.12}, 1.0, default_xyz_constant()) < 1.0);
    CHECK(simple_objective({0.3, 0.05, 0.76}, 3.0, default_xyz_constant()) < 1.0);

    const auto c = check_simple(scaled_inputs(2.0, 1.0, 1.0, 0.9), 0.9);
    CHECK_FALSE(c.pass);
    CHECK(c.quantities.at("infimum") >= 1.0);
    for (int k = 0; k <= 400; ++k)
        CHECK(simple_objective({2.0, 1.0, 1.0}, 1e-4 * std::pow(1e7, k / 400.0), default_xyz_constant()) > 1.0);

    CHECK(check_simple(scaled_inputs(0.5, 0.015, 0.12, 0.8), 0.0).pass == false);
    CHECK_THROWS_AS(check_simple(CertInputs{0.0, 1.0, 0.1, 0.1}, 0.5), InputError);
    CHECK(default_xyz_constant() == doctest::Approx(1.0 / 0.3259));
}

TEST_CASE("simple pass implies framework pass with the emitted parameters") {
    Rng rng(17);
    int passes = 0;
    for (int k = 0; k < 300; ++k) {
        const double R0 = rng.uniform(0.3, 1.0);
        const auto in = scaled_inputs(rng.uniform(0.0, 0.6), rng.uniform(0.0, 0.06), rng.uniform(0.0, 0.8), R0,
                                      rng.uniform(0.3, 3.0));
        const auto rep = check_simple(in, R0);
        if (!rep.pass) continue;
        ++passes;
        REQUIRE(rep.selected);
        CHECK(check_framework(in, R0, *rep.selected).pass);
        const double zt = rep.quantities.at("zeta_tilde"), xt = rep.quantities.at("xi_tilde");
        const double delta = rep.selected->delta;
        CHECK(zt <= 1.0 - delta + 1e-12);
        CHECK(xt <= 0.3259 * delta * delta + 1e-12);
    }
    CHECK(passes > 30);
}

TEST_CASE("piecewise selection is continuous at the breakpoint") {
    double l1, e1, l2, e2;
    simple_selection(0.94, l1, e1);
    simple_selection(0.94 + 1e-12, l2, e2);
    CHECK(l1 + (1 - l1) * std::cos(e1 / 2) == doctest::Approx(l2 + (1 - l2) * std::cos(e2 / 2)).epsilon(1e-10));
}

TEST_CASE("certificate verdicts are invariant under the symmetries") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        Rng rng(seed);
        auto inst = sample_instance(6, rng.uniform(0.001, 0.05), 1.0, rng.uniform(0.0, 0.4), rng.uniform(0.0, 0.6), rng);
        for (auto& t : inst.state0.theta) t *= 0.2;
        const double R0 = order_amplitude(inst.state0.theta);
        const double dw = diameter(inst.state0.omega);
        const bool base = check_simple(inst.params, R0, dw).pass;
        const auto d = dilate_transform(inst.params, inst.state0, 3.0);
        CHECK(check_simple(d.params, R0, diameter(d.state.omega)).pass == base);
        const auto r = reflect_transform(inst.params, inst.state0);
        CHECK(check_simple(r.params, order_amplitude(r.state.theta), diameter(r.state.omega)).pass == base);
        const std::vector<std::size_t> perm{5, 3, 1, 0, 2, 4};
        const auto pm = permute_transform(inst.params, inst.state0, perm);
        CHECK(check_simple(pm.params, order_amplitude(pm.state.theta), diameter(pm.state.omega)).pass == base);
    }
}

TEST_CASE("partial locking certificate") {
    const std::size_t n = 6;
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    SystemParams p{1e-6, 1.0, Vec(n, 0.3)};
    const auto rep = check_partial_locking(p, all, all, 0.0, 0.0, 0.8, 1.0, 2.0, 2e-6);
    CHECK(rep.pass);
    CHECK(rep.predictions.count("tail_phi1"));
    CHECK(rep.predictions.count("separation"));

    const std::vector<std::size_t> few{0, 1};
    CHECK_THROWS_AS(check_partial_locking(p, few, all, 0.0, 0.0, 0.8, 1.0, 2.0, 1.0), InputError);
    CHECK_THROWS_AS(check_partial_locking(p, all, all, 0.0, 0.0, 0.8, 3.0, 2.0, 1.0), InputError);
    CHECK_THROWS_AS(check_partial_locking(p, all, all, 0.0, 0.0, 0.8, 1.0, 2.0, 0.0), InputError);
    const std::vector<std::size_t> b{0, 1, 2, 3, 4};
    CHECK_THROWS_AS(check_partial_locking(p, all, b, 0.0, 0.0, 0.8, 1.0, 2.0, 1.0), InputError);
}

TEST_CASE("corollary gate on a constructed instance") {
    SystemParams p{0.01, 1.0, {0.0, 0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 2.0, -2.5, 1.5}};
    PhaseState s{0.0, {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 2.0, 3.5, 5.0}, Vec(10, 0.0)};
    std::vector<std::size_t> A{0, 1, 2, 3, 4, 5, 6};
    const auto gate = corollary_gate(p, s, A, 1.2, 3.0);
    const double a = 1.0 - std::exp(-3.0);
    CHECK(gate.value == doctest::Approx(0.3));
    CHECK(gate.bound == doctest::Approx(1.2 - 0.01 * (3.0 - a) * (0.06 + 2.0)));
    CHECK(gate.pass);
    const auto rep = check_corollary(p, s, A, A, 0.7, 1.2, 3.0);
    CHECK(rep.pass);
    CHECK(rep.predictions.at("t1") == doctest::Approx(0.03));
}

TEST_CASE("three-oscillator criterion") {
    CHECK(n3_threshold() == doctest::Approx(0.123003).epsilon(5e-6));
    CHECK(std::abs(n3_threshold() - 0.123003) < 5e-7);
    SystemParams same{0.01, 1.0, {0.2, 0.2, 0.2}};
    const auto ok = check_n3(same);
    CHECK(ok.pass);
    CHECK(ok.per_condition[0].value == doctest::Approx(0.02));
    SystemParams bad{0.1, 1.0, {0.0, 0.05, 0.02}};
    const auto no = check_n3(bad);
    CHECK_FALSE(no.pass);
    CHECK(no.per_condition[0].value == doctest::Approx(0.23));
    CHECK_THROWS_AS(check_n3(SystemParams{0.01, 1.0, Vec(5, 0.0)}), InputError);
}

TEST_CASE("first-order threshold") {
    CHECK(check_first_order(CertInputs{0.0, 0.01, 0.0, 0.0}, 0.3).pass);
    CHECK(check_first_order(CertInputs{0.0, 6.5, 1.0, 0.0}, 0.5).pass);
    CHECK_FALSE(check_first_order(CertInputs{0.0, 6.0, 1.0, 0.0}, 0.5).pass);
    CHECK_FALSE(check_first_order(CertInputs{0.0, 6.4, 1.0, 0.0}, 0.5).pass);
}

TEST_CASE("Sturm-Picone horizon") {
    CHECK(std::isinf(sturm_picone_Tstar(0.2, 1.0, 1.0)));
    CHECK(sturm_picone_Tstar(1.0, 1.0, 1.0) == doctest::Approx(4.0 * kPi / (3.0 * std::sqrt(3.0))).epsilon(1e-14));
    double last = 0.0;
    for (int k = 1; k <= 12; ++k) {
        const double c = 0.25 * (1.0 + std::pow(10.0, -k));
        const double t = sturm_picone_Tstar(1.0, 1.0, c);
        CHECK(t > last);
        last = t;
    }
    CHECK(last > 1e5);
    CHECK_THROWS_AS(sturm_picone_Tstar(0.0, 1.0, 1.0), InputError);
}

TEST_CASE("numeric lemma suite") {
    const auto rep = lemma_numeric_suite(1000);
    CHECK(rep.pass);
    for (double s : rep.min_slack) CHECK(s > 0.0);
    CHECK(rep.min_ratio[1] >= 720.0 / (47.0 * 47.0) - 1e-12);
    CHECK(rep.min_ratio[2] >= 0.729);
    CHECK(rep.equality_residual < 1e-12);
    CHECK(rep.breakpoint_gap < 1e-12);
}

TEST_CASE("framework search finds parameters for an easy instance") {
    const CertInputs in{0.001, 1.0, 0.05, 0.05};
    const auto fp = search_framework(in, 0.9);
    REQUIRE(fp);
    CHECK(check_framework(in, 0.9, *fp).pass);
    CHECK_FALSE(search_framework(CertInputs{1.0, 1.0, 3.0, 3.0}, 0.2));
}
