#include <doctest.h>

#include "kuramoto/diagnostics.hpp"
#include "kuramoto/experiments.hpp"

#include <cmath>
#include <numbers>

using namespace kuramoto;

namespace {
constexpr double kPi = std::numbers::pi;

double max_diff(const Vec& a, const Vec& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

IntegratorConfig run(double t_end, double dt = 0.01, std::size_t stride = 1) {
    IntegratorConfig c;
    c.t_end = t_end;
    c.dt = dt;
    c.observer_stride = stride;
    return c;
}

// t - m + m e^{-t/m} = target, Newton from the large-t guess
double g_inverse(double m, double target) {
    double t = target + m;
    for (int i = 0; i < 60; ++i) {
        const double g = t - m + m * std::exp(-t / m) - target;
        t -= g / (1.0 - std::exp(-t / m));
    }
    return t;
}
} // namespace

TEST_CASE("config validation and step bookkeeping") {
    CHECK_THROWS_AS(run(1.0, 0.0).validate(), InputError);
    CHECK_THROWS_AS(run(-1.0).validate(), InputError);
    IntegratorConfig c = run(1.0);
    c.refine_tol = 0.0;
    CHECK_THROWS_AS(c.validate(), InputError);
    CHECK(run(30.0).steps() == 3000);
    CHECK(run(1.0, 0.3).steps() == 4);
    CHECK(run(1.0, 0.3).time_at(4) == 1.0);
    CHECK(run(0.0).steps() == 0);
    CHECK(run(2.0).reference().dt == doctest::Approx(0.0005));
}

TEST_CASE("uncoupled rest state stays put") {
    SystemParams p{1.0, 0.0, {0.0, 0.0, 0.0}};
    PhaseState s{0.0, {0.1, 2.0, -4.0}, {0.0, 0.0, 0.0}};
    const auto end = integrate(p, s, run(5.0));
    CHECK(end.theta == s.theta);
    CHECK(end.omega == s.omega);
    CHECK(end.t == doctest::Approx(5.0));
}

TEST_CASE("observer stride and final snapshot") {
    SystemParams p{1.0, 1.0, {0.1, -0.1}};
    PhaseState s{0.0, {0.0, 1.0}, {0.0, 0.0}};
    Recorder rec;
    integrate(p, s, run(1.0, 0.01, 10), rec.observer());
    REQUIRE(rec.snapshots.size() == 11);
    CHECK(rec.snapshots.front().t == 0.0);
    CHECK(rec.snapshots.back().t == doctest::Approx(1.0));
    CHECK(rec.snapshots[3].t == doctest::Approx(0.3));
}

TEST_CASE("fourth-order self-convergence") {
    Rng rng(5);
    const auto inst = sample_instance(5, 0.7, 1.3, 1.0, 1.0, rng);
    const auto ref = integrate(inst.params, inst.state0, run(5.0, 0.1).reference(64));
    const double e1 = max_diff(integrate(inst.params, inst.state0, run(5.0, 0.1)).theta, ref.theta);
    const double e2 = max_diff(integrate(inst.params, inst.state0, run(5.0, 0.05)).theta, ref.theta);
    const double ratio = e1 / e2;
    CHECK(ratio >= 8.0);
    CHECK(ratio <= 32.0);
}

TEST_CASE("first-order flow without coupling is exact linear drift") {
    SystemParams p{0.0, 0.0, {0.3, -1.2, 2.5}};
    const Vec th0{0.0, 1.0, -2.0};
    const auto end = integrate_first_order(p, th0, run(7.0));
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(std::abs(end.theta[i] - (th0[i] + p.nu[i] * 7.0)) < 1e-12);
}

TEST_CASE("identical frequencies in a half circle: R never decreases") {
    SystemParams p{0.0, 1.0, Vec(8, 0.4)};
    Rng rng(2);
    Vec th(8);
    for (auto& v : th) v = rng.uniform(0.0, 0.95 * kPi);
    double last = 0.0;
    bool monotone = true;
    integrate_first_order(p, th, run(20.0, 0.01, 5), [&](const PhaseState& s) {
        const double r = order_amplitude(s.theta);
        if (r < last - 1e-14) monotone = false;
        last = r;
    });
    CHECK(monotone);
}

TEST_CASE("small inertia tracks the first-order model") {
    Rng rng(8);
    const auto inst = sample_instance(5, 1e-4, 1.0, 0.5, 0.0, rng);
    PhaseState s0 = inst.state0;
    s0.omega = rhs_first_order(inst.params, s0.theta);
    std::vector<PhaseState> a, b;
    integrate(inst.params, s0, run(10.0, 2e-5, 500), [&](const PhaseState& s) { a.push_back(s); });
    integrate_first_order(inst.params, s0.theta, run(10.0, 0.01, 1), [&](const PhaseState& s) { b.push_back(s); });
    REQUIRE(a.size() == b.size());
    double err = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k].t >= 1.0) err = std::max(err, max_diff(a[k].theta, b[k].theta));
    CHECK(err < 1e-3);
}

TEST_CASE("non-finite state aborts") {
    SystemParams p{1e-4, 1.0, {0.5, -0.5}};
    PhaseState s{0.0, {0.0, 1.0}, {1.0, -1.0}};
    CHECK_THROWS_AS(integrate(p, s, run(100.0, 0.5)), NumericAbort);
}

TEST_CASE("integration is deterministic") {
    Rng rng(3);
    const auto inst = sample_instance(10, 0.5, 1.0, 1.0, 1.0, rng);
    const auto a = integrate(inst.params, inst.state0, run(10.0));
    const auto b = integrate(inst.params, inst.state0, run(10.0));
    CHECK(a.theta == b.theta);
    CHECK(a.omega == b.omega);
}

TEST_CASE("collision times of the incoherent family match the closed form") {
    const double m = 0.05;
    std::vector<OscillatorGroup> groups{{{0, 1}, 1.0, 0.0}, {{2, 3}, 2.0, 0.0}};
    const NonsyncExact ex(m, 1.0, groups, {0.0, kPi, 0.0, kPi});
    const auto events = detect_collisions(ex.params(), ex.initial(), run(30.0));
    // theta_2 - theta_0 = g(t); collisions at g = 2 pi k
    std::vector<double> pair02;
    for (const auto& e : events) {
        CHECK(e.i < e.j);
        if (e.i == 0 && e.j == 2) pair02.push_back(e.t_star);
        const auto s = ex.at(e.t_star);
        const double d = s.theta[e.i] - s.theta[e.j] - 2.0 * kPi * static_cast<double>(e.branch);
        CHECK(std::abs(d) < 1e-9);
    }
    const double g_end = 30.0 - m + m * std::exp(-30.0 / m);
    const std::size_t expected = static_cast<std::size_t>(std::floor(g_end / (2.0 * kPi)));
    REQUIRE(pair02.size() == expected);
    for (std::size_t k = 0; k < pair02.size(); ++k)
        CHECK(std::abs(pair02[k] - g_inverse(m, 2.0 * kPi * static_cast<double>(k + 1))) < 1e-8);
    // pairs inside a group never meet
    for (const auto& e : events) CHECK_FALSE((e.i == 0 && e.j == 1));
    CHECK(events.size() > 0);
}

TEST_CASE("indistinguishable oscillators are excluded") {
    SystemParams p{0.5, 1.0, {0.2, 0.2, -0.4}};
    PhaseState s{0.0, {0.3, 0.3 + 2.0 * kPi, 1.0}, {0.1, 0.1, 2.0}};
    CollisionDetector det(p, s, 1e-12);
    CHECK(det.excluded(0, 1));
    CHECK_FALSE(det.excluded(0, 2));
    const auto events = detect_collisions(p, s, run(20.0));
    for (const auto& e : events) CHECK_FALSE((e.i == 0 && e.j == 1));
}
