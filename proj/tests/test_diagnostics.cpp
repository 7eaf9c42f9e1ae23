#include <doctest.h>

#include "oracles.hpp"

#include "kuramoto/certifier.hpp"
#include "kuramoto/experiments.hpp"

#include <cmath>
#include <numbers>

using namespace kuramoto;

namespace {
constexpr double kPi = std::numbers::pi;

IntegratorConfig run(double t_end, double dt = 0.01, std::size_t stride = 1) {
    IntegratorConfig c;
    c.t_end = t_end;
    c.dt = dt;
    c.observer_stride = stride;
    return c;
}
} // namespace

TEST_CASE("order state special cases") {
    const auto eq = order_state(Vec{1.3, 1.3, 1.3});
    CHECK(eq.R == doctest::Approx(1.0));
    CHECK(eq.Delta == doctest::Approx(0.0));
    REQUIRE(eq.phi);
    CHECK(*eq.phi == doctest::Approx(1.3));

    const auto bp = order_state(Vec{0.0, kPi, 0.0, kPi});
    CHECK(bp.R < 1e-12);
    CHECK_FALSE(bp.phi);
    CHECK(bp.delta_fallback);
    CHECK(bp.Delta <= 1.0);
}

TEST_CASE("order parameter identities") {
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng.integer(0, 40);
        Vec th(n);
        for (auto& v : th) v = rng.uniform(-10.0, 10.0);
        const auto os = order_state(th);
        CHECK(std::abs(os.R - oracle::order_amplitude_pairwise(th)) < 1e-10);
        if (!os.phi) continue;
        double s = 0.0, c = 0.0;
        for (double v : th) {
            s += std::sin(v - *os.phi);
            c += std::cos(v - *os.phi);
        }
        CHECK(std::abs(s / n) < 1e-12);
        CHECK(std::abs(c / n - os.R) < 1e-12);
        CHECK(os.Delta >= 0.0);
        CHECK(os.Delta <= 1.0);
        CHECK(std::sqrt(variance(th)) <= diameter(th) / 2.0 + 1e-15);
    }
}

TEST_CASE("uniform phases give E[R^2] near 1/N") {
    Rng rng(77);
    double acc = 0.0;
    const int draws = 10000;
    Vec th(50);
    for (int k = 0; k < draws; ++k) {
        for (auto& v : th) v = 2.0 * kPi * rng.uniform01();
        const double r = order_amplitude(th);
        acc += r * r;
    }
    CHECK(acc / draws == doctest::Approx(0.02).epsilon(0.2));
}

TEST_CASE("diameters") {
    PhaseState s{0.0, {0.0, 1.0, 5.0}, {2.0, 2.0, 2.0}};
    CHECK(diameters(s).theta == 5.0);
    CHECK(diameters(s).omega == 0.0);
    const std::vector<std::size_t> sub{0, 1};
    CHECK(diameters(s, sub).theta == 1.0);
    CHECK_THROWS_AS(diameters(s, std::vector<std::size_t>{}), InputError);
    CHECK_THROWS_AS(diameters(s, std::vector<std::size_t>{7}), InputError);

    Rng rng(4);
    for (int k = 0; k < 1000; ++k) {
        Vec a(6), b(6), d(6);
        for (int i = 0; i < 6; ++i) {
            a[i] = rng.uniform(-3.0, 3.0);
            b[i] = rng.uniform(-3.0, 3.0);
            d[i] = a[i] - b[i];
        }
        CHECK(std::abs(diameter(a) - diameter(b)) <= diameter(d) + 1e-15);
    }
}

TEST_CASE("potential") {
    SystemParams p{1.0, 1.0, {0.0, 0.0}};
    CHECK(potential(p, Vec{0.4, 0.4}) == doctest::Approx(0.0));
    CHECK(potential(p, Vec{0.0, kPi}) == doctest::Approx(2.0));

    Rng rng(6);
    const auto inst = sample_instance(9, 1.0, 1.7, 1.0, 0.0, rng);
    const auto& th = inst.state0.theta;
    const double n = 9.0, R = order_amplitude(th);
    double lin = 0.0;
    for (std::size_t k = 0; k < 9; ++k) lin += inst.params.nu[k] * th[k];
    const double P = potential(inst.params, th);
    CHECK(std::abs(P - oracle::potential(inst.params.kappa, inst.params.nu, th)) < 1e-10);
    CHECK(std::abs(P - (-lin + inst.params.kappa * n * n / 2.0 * (1.0 - R * R))) < 1e-10);

    const Vec f = rhs_first_order(inst.params, th, Coupling::DirectSum);
    const double h = 1e-5;
    for (std::size_t i = 0; i < 9; ++i) {
        Vec up = th, dn = th;
        up[i] += h;
        dn[i] -= h;
        const double grad = (potential(inst.params, up) - potential(inst.params, dn)) / (2.0 * h);
        // -dP/dtheta_i = nu_i + kappa sum_j sin(theta_j - theta_i)
        const double want = inst.params.nu[i] + n * (f[i] - inst.params.nu[i]);
        CHECK(std::abs(-grad - want) < 1e-6);
    }
}

TEST_CASE("energy dissipation with identical frequencies") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        Rng rng(seed);
        auto inst = sample_instance(10, 0.6, 1.0, 0.0, 1.0, rng);
        for (auto& v : inst.params.nu) v = 0.25;
        Recorder rec;
        integrate(inst.params, inst.state0, run(20.0), rec.observer());
        const auto res = energy_dissipation_residual(inst.params, rec.snapshots);
        double worst = 0.0, rise = 0.0;
        for (std::size_t k = 0; k < res.size(); ++k) {
            worst = std::max(worst, std::abs(res[k].residual));
            if (k) rise = std::max(rise, res[k].energy - res[k - 1].energy);
        }
        CHECK(worst < 1e-3);
        CHECK(rise <= 1e-8);
    }

    SystemParams locked{0.5, 1.0, {0.0, 0.0, 0.0}};
    std::vector<PhaseState> still;
    for (int k = 0; k < 5; ++k) still.push_back({0.1 * k, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0}});
    for (const auto& r : energy_dissipation_residual(locked, still)) CHECK(r.residual == 0.0);

    SystemParams mixed{0.5, 1.0, {0.0, 0.1, 0.0}};
    CHECK_THROWS_AS(energy_dissipation_residual(mixed, still), InputError);
}

TEST_CASE("majority count rounding") {
    CHECK(majority_count(0.7, 10) == 7);
    CHECK(majority_count(0.7, 4) == 3);
    CHECK(majority_count(0.51, 2) == 2);
    CHECK(majority_count(1.0, 5) == 5);
}

TEST_CASE("majority cluster examples") {
    auto all = find_majority_cluster(Vec{2.0, 2.0, 2.0}, 1.0, 0.1);
    REQUIRE(all);
    CHECK(all->indices.size() == 3);
    CHECK(all->arc_diameter == 0.0);

    auto a = find_majority_cluster(Vec{0.0, 0.1, 0.2, kPi}, 0.7, 0.5);
    REQUIRE(a);
    CHECK(a->indices == std::vector<std::size_t>{0, 1, 2});
    CHECK(a->arc_diameter == doctest::Approx(0.2));

    const Vec th{6.2, 0.05, 0.1, 3.0};
    auto b = find_majority_cluster(th, 0.7, 0.3);
    REQUIRE(b);
    CHECK(b->indices == std::vector<std::size_t>{0, 1, 2});
    CHECK(b->translations[0] == 1);
    CHECK(b->translations[1] == 0);
    CHECK(b->arc_diameter == doctest::Approx(0.1 - (6.2 - 2.0 * kPi)));
    Vec shifted;
    for (std::size_t k = 0; k < b->indices.size(); ++k)
        shifted.push_back(th[b->indices[k]] - 2.0 * kPi * static_cast<double>(b->translations[k]));
    CHECK(diameter(shifted) == doctest::Approx(b->arc_diameter));

    CHECK_FALSE(find_majority_cluster(Vec{0.0, 2.0, 4.0}, 0.6, 0.5));
}

TEST_CASE("largest arc cluster agrees with brute force") {
    Rng rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.integer(0, 14);
        Vec th(n);
        const double spread = rng.uniform(0.2, 2.0 * kPi);
        for (auto& v : th) v = rng.uniform(0.0, spread) + 2.0 * kPi * static_cast<double>(rng.integer(0, 4)) - 4.0 * kPi;
        const double ell = rng.uniform(0.05, 3.0);
        const auto rep = largest_arc_cluster(th, ell);
        CHECK(rep.indices.size() == oracle::max_arc_count(th, ell));
        Vec shifted;
        for (std::size_t k = 0; k < rep.indices.size(); ++k)
            shifted.push_back(th[rep.indices[k]] - 2.0 * kPi * static_cast<double>(rep.translations[k]));
        CHECK(diameter(shifted) <= ell + 1e-12);
        CHECK(diameter(shifted) == doctest::Approx(rep.arc_diameter).epsilon(1e-12));
    }
}

TEST_CASE("cluster from condensation") {
    const Vec eq(6, 0.7);
    auto full = cluster_from_condensation(order_state(eq), eq, 1.0, 0.3);
    REQUIRE(full);
    CHECK(full->indices.size() == 6);

    const Vec bp{0.0, kPi, 0.0, kPi};
    CHECK_FALSE(cluster_from_condensation(order_state(bp), bp, 0.7, 0.8));
    CHECK_THROWS_AS(cluster_from_condensation(order_state(eq), eq, 0.7, 2.0), InputError);

    // Whenever a gate fires, the arc must hold ceil(lambda N) phases (the call throws otherwise).
    Rng rng(12);
    int fired = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = 20;
        Vec th(n);
        const double w = rng.uniform(0.2, 2.5);
        for (auto& v : th) v = w * (rng.uniform01() - 0.5);
        for (std::size_t k = 0; k < rng.integer(0, 5); ++k) th[k] += kPi;
        const auto os = order_state(th);
        const auto c = cluster_from_condensation(os, th, 0.7, 0.8);
        if (c) {
            ++fired;
            CHECK(c->indices.size() >= 14);
        }
    }
    CHECK(fired > 100);
}

TEST_CASE("arrangement constant exceeds one") {
    for (int a = 1; a <= 40; ++a)
        for (int b = 1; b < 40; ++b) {
            const double lambda = 0.5 + 0.5 * a / 40.0;
            const double phi1 = 0.5 * kPi * b / 40.0;
            const double denom = lambda * std::cos(phi1) - (1.0 - lambda);
            if (denom <= 0.0) continue;
            CHECK(arrangement_constant(phi1, lambda) > 1.0);
        }
}

TEST_CASE("locked pair sits inside the arrangement interval") {
    const double eps = 0.05;
    SystemParams p{0.1, 1.0, {eps, -eps}};
    PhaseState s{0.0, {0.3, 0.0}, {0.0, 0.0}};
    Recorder rec;
    integrate(p, s, run(60.0, 0.01, 10), rec.observer());
    std::vector<PhaseState> tail;
    for (const auto& snap : rec.snapshots)
        if (snap.t >= 50.0) tail.push_back(snap);
    const double dv = 2.0 * eps;
    const double level = 2.0 * p.m * dv + 4.0 * p.m * p.kappa + dv / p.kappa;
    const auto roots = phi_roots(1.0, level);
    REQUIRE(roots);
    const std::vector<std::size_t> both{0, 1};
    const auto rep = arrangement_check(tail, p, both, roots->phi1, 1.0);
    CHECK(rep.ok);
    REQUIRE(rep.pairs.size() == 1);
    CHECK(rep.pairs[0].lower == doctest::Approx(dv));
    CHECK(rep.pairs[0].gap_mean >= dv);
    CHECK(rep.pairs[0].gap_mean <= rep.c * dv);

    const auto lock = detect_locking(rec.snapshots, p.nu_c(), LockTolerances{});
    CHECK(lock.locked);

    SystemParams same{0.1, 1.0, {0.2, 0.2}};
    std::vector<PhaseState> flat{{0.0, {1.0, 1.0}, {0.2, 0.2}}, {1.0, {1.2, 1.2}, {0.2, 0.2}}};
    const auto zero = arrangement_check(flat, same, both, 0.5, 0.9);
    CHECK(zero.ok);
    CHECK(zero.pairs[0].upper == 0.0);
}

TEST_CASE("locking detection") {
    // equilibrium of the first-order model lifted to the inertial one
    SystemParams p{0.5, 2.0, {0.1, -0.1}};
    const double d = std::asin(0.2 / 2.0);
    PhaseState eq{0.0, {d, 0.0}, {0.0, 0.0}};
    Recorder rec;
    integrate(p, eq, run(20.0, 0.01, 10), rec.observer());
    const auto lr = detect_locking(rec.snapshots, p.nu_c(), LockTolerances{});
    CHECK(lr.locked);
    REQUIRE(lr.t_lock);
    CHECK(*lr.t_lock == 0.0);

    std::vector<OscillatorGroup> groups{{{0, 1}, 0.0, 0.0}, {{2, 3}, 0.5, 0.0}};
    const NonsyncExact ex(0.2, 1.0, groups, {0.0, kPi, 1.0, 1.0 + kPi});
    Recorder drift;
    integrate(ex.params(), ex.initial(), run(30.0, 0.01, 10), drift.observer());
    CHECK_FALSE(detect_locking(drift.snapshots, ex.params().nu_c(), LockTolerances{}).locked);

    std::vector<PhaseState> short_run(rec.snapshots.begin(), rec.snapshots.begin() + 5);
    CHECK_THROWS_AS(detect_locking(short_run, p.nu_c(), LockTolerances{}), InputError);

    CHECK(LockTolerances::defaults_for(5.0).eps_omega == doctest::Approx(5e-4));
    CHECK(LockTolerances::defaults_for(0.2).eps_omega == doctest::Approx(1e-4));
}

TEST_CASE("phase unwrapping keeps phi continuous") {
    PhaseUnwrapper u;
    CHECK(*u(3.1) == doctest::Approx(3.1));
    CHECK(*u(-3.1) == doctest::Approx(2.0 * kPi - 3.1));
    CHECK_FALSE(u(std::nullopt));
    CHECK(*u(-3.0) == doctest::Approx(2.0 * kPi - 3.0));
}

TEST_CASE("propagation bounds along a run") {
    Rng rng(44);
    const auto inst = sample_instance(8, 0.4, 1.5, 1.0, 3.0, rng);
    double worst = 1.0;
    integrate(inst.params, inst.state0, run(15.0), [&](const PhaseState& s) {
        worst = std::min(worst, propagation_slack(inst.params, inst.state0, s).min());
    });
    CHECK(worst >= -1e-6);
}
