#include "kuramoto/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <numeric>
#include <thread>

namespace kuramoto {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Largest step <= dt_max that divides t_end into whole steps.
double fit_step(double t_end, double dt_max) {
    if (t_end <= 0.0) return dt_max;
    return t_end / std::ceil(t_end / dt_max - 1e-9);
}

std::size_t stride_for(double dt, double spacing) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(spacing / dt)));
}

Vec zeros(std::size_t n) { return Vec(n, 0.0); }
} // namespace

std::string code_version() { return KURAMOTO_VERSION; }

Instance sample_instance(std::size_t n, double m, double kappa, double D_V, double D_Omega0,
                         Rng& rng) {
    if (n == 0) throw InputError("need at least one oscillator");
    Instance inst;
    inst.params.m = m;
    inst.params.kappa = kappa;
    inst.params.nu.resize(n);
    inst.state0.theta.resize(n);
    inst.state0.omega.resize(n);
    for (auto& v : inst.params.nu) v = D_V * (rng.uniform01() - 0.5);
    for (auto& v : inst.state0.theta) v = kTwoPi * rng.uniform01();
    for (auto& v : inst.state0.omega) v = D_Omega0 * (rng.uniform01() - 0.5);
    return inst;
}

Instance generate_instance(const ScenarioConfig& cfg) {
    cfg.validate();
    if (cfg.instance) {
        Instance inst;
        inst.params = {cfg.m, cfg.kappa, cfg.instance->nu};
        inst.state0.theta = cfg.instance->theta0;
        inst.state0.omega = cfg.instance->omega0.empty() ? zeros(cfg.N) : cfg.instance->omega0;
        inst.params.validate();
        inst.state0.validate(cfg.N);
        return inst;
    }
    Rng rng(cfg.seed);
    return sample_instance(cfg.N, cfg.m, cfg.kappa, cfg.D_V, cfg.D_Omega0, rng);
}

namespace {

std::vector<std::string> applicable(const ScenarioConfig& cfg, std::size_t n) {
    if (!cfg.theorems.empty()) return cfg.theorems;
    std::vector<std::string> out;
    if (!(cfg.kappa > 0.0)) return out;
    if (cfg.first_order) {
        out.push_back("first_order");
        return out;
    }
    out.push_back("simple");
    if (n == 3) out.push_back("n3");
    return out;
}

PartialSpec resolved_partial(const ScenarioConfig& cfg, std::size_t n) {
    if (!cfg.partial) throw ConfigError("/certify/partial", "required for this certificate");
    PartialSpec ps = *cfg.partial;
    if (ps.B.empty()) {
        ps.B.resize(n);
        std::iota(ps.B.begin(), ps.B.end(), 0);
    }
    return ps;
}

} // namespace

std::vector<CertificateReport> run_certificates(const ScenarioConfig& cfg, const Instance& inst) {
    const auto& p = inst.params;
    const double R0 = order_amplitude(inst.state0.theta);
    const double dw = diameter(inst.state0.omega);
    std::vector<CertificateReport> out;
    for (const auto& name : applicable(cfg, p.size())) {
        if (name == "simple") {
            out.push_back(check_simple(p, R0, dw, SimpleOptions{cfg.xyz_constant}));
        } else if (name == "framework") {
            if (!cfg.free) throw ConfigError("/certify/free", "required for the framework check");
            out.push_back(check_framework(p, R0, dw, *cfg.free));
        } else if (name == "n3") {
            out.push_back(check_n3(p));
        } else if (name == "first_order") {
            out.push_back(check_first_order(p, R0));
        } else if (name == "partial") {
            const auto ps = resolved_partial(cfg, p.size());
            const double dwa = diameters(inst.state0, ps.A).omega;
            const double dwb = diameters(inst.state0, ps.B).omega;
            out.push_back(check_partial_locking(p, ps.A, ps.B, dwa, dwb, ps.lambda, ps.ell, ps.eta,
                                                ps.t1.value_or(ps.eta * p.m)));
        } else if (name == "corollary") {
            const auto ps = resolved_partial(cfg, p.size());
            out.push_back(check_corollary(p, inst.state0, ps.A, ps.B, ps.lambda, ps.ell, ps.eta));
        } else {
            throw ConfigError("/certify/theorems", "unknown certificate " + name);
        }
    }
    return out;
}

std::vector<CertificateReport> certify_summary(const ScenarioConfig& cfg) {
    if (!cfg.summary) throw ConfigError("/summary", "missing instance summary");
    const CertInputs in{cfg.m, cfg.kappa, cfg.summary->D_V, cfg.summary->D_Omega0};
    const double R0 = cfg.summary->R0;
    std::vector<CertificateReport> out;
    for (const auto& name : applicable(cfg, cfg.N)) {
        if (name == "simple")
            out.push_back(check_simple(in, R0, SimpleOptions{cfg.xyz_constant}));
        else if (name == "framework") {
            if (!cfg.free) throw ConfigError("/certify/free", "required for the framework check");
            out.push_back(check_framework(in, R0, *cfg.free));
        } else if (name == "n3")
            out.push_back(check_n3(in, cfg.N));
        else if (name == "first_order")
            out.push_back(check_first_order(in, R0));
        else
            throw ConfigError("/certify/theorems",
                              name + " needs the full instance, not a summary");
    }
    return out;
}

Trajectory simulate(const ScenarioConfig& cfg, const Instance& inst, bool collisions) {
    Trajectory tr;
    Observer obs = [&](const PhaseState& s) { tr.snapshots.push_back(s); };
    std::optional<CollisionDetector> det;
    StepHook hook;
    if (cfg.first_order) {
        PhaseState s0 = inst.state0;
        s0.omega = rhs_first_order(inst.params, s0.theta);
        if (collisions) {
            det.emplace(inst.params, s0, cfg.integration.refine_tol, true);
            hook = det->hook();
        }
        tr.final_state = integrate_first_order(inst.params, inst.state0.theta, cfg.integration, obs, hook);
    } else {
        if (collisions) {
            det.emplace(inst.params, inst.state0, cfg.integration.refine_tol, false);
            hook = det->hook();
        }
        tr.final_state = integrate(inst.params, inst.state0, cfg.integration, obs, hook);
    }
    if (det) tr.collisions = det->events();
    return tr;
}

namespace {
LockReport lock_or_unlocked(const std::vector<PhaseState>& snaps, double nu_c,
                            const LockTolerances& tol) {
    if (snaps.empty() || snaps.back().t - snaps.front().t < tol.window - 1e-9) return {};
    return detect_locking(snaps, nu_c, tol);
}
} // namespace

RunRecord run_scenario(const ScenarioConfig& cfg) {
    RunRecord rec;
    rec.config = cfg;
    rec.code_version = code_version();
    rec.instance = generate_instance(cfg);
    rec.R0 = order_amplitude(rec.instance.state0.theta);
    rec.D_Omega0 = diameter(rec.instance.state0.omega);
    rec.certificates = run_certificates(cfg, rec.instance);
    Trajectory tr = simulate(cfg, rec.instance, cfg.collisions);
    PhaseUnwrapper unwrap;
    rec.series.reserve(tr.snapshots.size());
    for (const auto& s : tr.snapshots) {
        DiagRow r = diag_row(rec.instance.params, s, cfg.cluster_ell);
        r.phi = unwrap(r.phi);
        rec.series.push_back(r);
    }
    rec.lock = lock_or_unlocked(tr.snapshots, rec.instance.params.nu_c(), cfg.lock_tolerances());
    rec.collisions = std::move(tr.collisions);
    rec.final_state = std::move(tr.final_state);
    return rec;
}

std::size_t worker_count() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("KURAMOTO_LOCK_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(mu);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

ScenarioConfig sweep_point(const ScenarioConfig& base, const std::string& axis, double value,
                           std::size_t index, bool fresh_samples) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw ConfigError("/sweep/values", "sweep values must be finite and > 0");
    if (base.instance) throw ConfigError("/instance", "sweeps sample their own instances");
    if (!(base.kappa > 0.0)) throw ConfigError("/params/kappa", "sweeps need kappa > 0");
    ScenarioConfig c = base;
    c.sweep.reset();
    const double mk = base.m * base.kappa;
    const double dw = base.D_Omega0 / base.kappa;
    if (axis == "Dv_over_kappa") {
        c.kappa = base.D_V / value;
        if (!(c.kappa > 0.0)) throw ConfigError("/sampler/D_V", "Dv_over_kappa sweep needs D_V > 0");
        c.m = mk / c.kappa;
        c.D_Omega0 = dw * c.kappa;
    } else if (axis == "m_kappa") {
        c.m = value / base.kappa;
    } else if (axis == "DOmega_over_kappa") {
        c.D_Omega0 = value * base.kappa;
    } else {
        throw ConfigError("/sweep/axis", "unknown axis " + axis);
    }
    c.first_order = c.m == 0.0;
    if (fresh_samples) c.seed = base.seed + index;
    return c;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) throw InputError("spearman needs two equal samples");
    auto ranks = [](const std::vector<double>& x) {
        std::vector<std::size_t> idx(x.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
        std::vector<double> r(x.size());
        for (std::size_t i = 0; i < idx.size();) {
            std::size_t j = i;
            while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
            const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const auto ra = ranks(a), rb = ranks(b);
    const double ma = mean(ra), mb = mean(rb);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

SweepResult figure_sweep(const std::string& axis, const std::vector<double>& values,
                         const ScenarioConfig& base, bool fresh_samples, double report_time) {
    SweepResult res;
    res.axis = axis;
    res.report_time = report_time;
    std::vector<ScenarioConfig> points;
    for (std::size_t i = 0; i < values.size(); ++i)
        points.push_back(sweep_point(base, axis, values[i], i, fresh_samples));
    res.records.resize(values.size());
    parallel_for(values.size(), [&](std::size_t i) { res.records[i] = run_scenario(points[i]); });
    for (std::size_t i = 0; i < values.size(); ++i) {
        const RunRecord& r = res.records[i];
        SweepRow row;
        row.value = values[i];
        row.kappa = points[i].kappa;
        row.m = points[i].m;
        row.D_Omega0 = points[i].D_Omega0;
        if (!r.series.empty()) {
            row.R_end = r.series.back().R;
            row.Delta_end = r.series.back().Delta;
            const auto it = std::min_element(
                r.series.begin(), r.series.end(), [&](const DiagRow& a, const DiagRow& b) {
                    return std::abs(a.t - report_time) < std::abs(b.t - report_time);
                });
            row.R_report = it->R;
            row.Delta_report = it->Delta;
        }
        row.locked = r.lock.locked;
        row.t_lock = r.lock.t_lock;
        const double var = r.instance.params.nu_variance();
        row.ratio = var > 0.0 ? (1.0 - row.R_report) * row.kappa * row.kappa / var : 0.0;
        res.rows.push_back(row);
    }
    std::vector<double> xs, ts;
    for (const auto& row : res.rows)
        if (row.t_lock) {
            xs.push_back(row.value);
            ts.push_back(*row.t_lock);
        }
    if (xs.size() >= 2) res.spearman_tlock = spearman(xs, ts);
    return res;
}

std::vector<FigureSpec> figure_specs(std::uint64_t seed) {
    ScenarioConfig base;
    base.N = 50;
    base.m = 1.0;
    base.kappa = 1.0;
    base.D_Omega0 = 0.5;
    base.seed = seed;
    base.integration = {0.01, 200.0, 10, 1e-12};
    base.collisions = false;
    std::vector<FigureSpec> out;
    ScenarioConfig f1 = base;
    f1.D_V = 2.0;
    out.push_back({"fig1", "Dv_over_kappa", {2.0, 0.5, 0.25, 0.125, 0.0625}, f1});
    ScenarioConfig f2 = base;
    f2.D_V = 0.25;
    out.push_back({"fig2", "m_kappa", {0.125, 0.25, 0.5, 1.0, 2.0}, f2});
    ScenarioConfig f3 = base;
    f3.D_V = 0.25;
    out.push_back({"fig3", "DOmega_over_kappa", {0.1, 1.0, 5.0, 10.0, 20.0}, f3});
    return out;
}

std::string to_string(CampaignKind k) {
    switch (k) {
    case CampaignKind::Simple: return "simple";
    case CampaignKind::N3: return "n3";
    case CampaignKind::FirstOrder: return "first_order";
    case CampaignKind::Nonsync: return "nonsync";
    case CampaignKind::Partial: return "partial";
    }
    return "unknown";
}

namespace {

Vec clustered_phases(std::size_t n, Rng& rng) {
    const double center = rng.uniform(0.0, kTwoPi);
    const double width = rng.uniform(0.5, kTwoPi);
    Vec th(n);
    for (auto& v : th) v = center + width * (rng.uniform01() - 0.5);
    return th;
}

ScenarioConfig run_config(const Instance& inst, bool first_order, double t_end, double dt_max,
                          const LockTolerances& lock) {
    ScenarioConfig c;
    c.N = inst.params.size();
    c.m = inst.params.m;
    c.kappa = inst.params.kappa;
    c.first_order = first_order;
    c.integration.t_end = t_end;
    c.integration.dt = fit_step(t_end, dt_max);
    c.integration.observer_stride = stride_for(c.integration.dt, 0.1);
    c.lock = lock;
    return c;
}

void finish_lock(CampaignEntry& e, const Trajectory& tr, const Instance& inst,
                 const LockTolerances& tol) {
    const LockReport lr = lock_or_unlocked(tr.snapshots, inst.params.nu_c(), tol);
    e.locked = lr.locked;
    e.t_lock = lr.t_lock;
    e.metrics["omega_spread_final"] = lr.omega_spread_final;
    e.metrics["phase_drift_final"] = lr.relative_phase_drift_final;
    if (lr.t_lock) e.metrics["t_lock"] = *lr.t_lock;
    e.collisions = tr.collisions.size();
    if (!lr.t_lock) return;
    // same tail as the census: trailing half of the lock window
    const double tail_start = tr.final_state.t - 0.5 * tol.window;
    std::size_t after_lock = 0;
    for (const auto& ev : tr.collisions) {
        if (ev.t_star >= *lr.t_lock) ++after_lock;
        if (ev.t_star >= tail_start) ++e.tail_collisions;
    }
    e.metrics["collisions_after_lock"] = static_cast<double>(after_lock);
}

CampaignEntry simple_entry(const CampaignSampler& s, Rng& rng, CampaignEntry e) {
    constexpr double kAnchors[2][3] = {{0.5, 0.015, 0.12}, {0.3, 0.05, 0.76}};
    for (e.attempts = 1; e.attempts <= 1000; ++e.attempts) {
        const std::size_t n = rng.integer(s.N_min, s.N_max);
        Instance inst;
        inst.state0.theta = clustered_phases(n, rng);
        const double R0 = order_amplitude(inst.state0.theta);
        const int a = rng.uniform01() < 0.5 ? 0 : 1;
        const double x = kAnchors[a][0] * rng.uniform(s.scale_min, 1.0);
        const double y = kAnchors[a][1] * rng.uniform(s.scale_min, 1.0);
        const double z = kAnchors[a][2] * rng.uniform(s.scale_min, 1.0);
        if (R0 < s.R0_min) continue;
        const double kappa = 1.0, r2 = R0 * R0;
        inst.params = {y * r2 / kappa, kappa, Vec(n)};
        for (auto& v : inst.params.nu) v = x * kappa * r2 * (rng.uniform01() - 0.5);
        inst.state0.omega.resize(n);
        for (auto& v : inst.state0.omega) v = z * kappa * r2 * (rng.uniform01() - 0.5);
        e.certificate = check_simple(inst.params, R0, diameter(inst.state0.omega));
        if (!e.certificate.pass) continue;
        e.certified = true;
        e.N = n;
        e.instance = inst;
        e.metrics["R0"] = R0;
        e.metrics["m"] = inst.params.m;
        break;
    }
    if (!e.certified) {
        e.detail = "no certified instance found";
        return e;
    }
    const auto cfg = run_config(e.instance, false, s.t_end, std::min(0.01, e.instance.params.m / 5.0), s.lock);
    const Trajectory tr = simulate(cfg, e.instance, false);
    finish_lock(e, tr, e.instance, s.lock);
    e.defect = !e.locked;
    if (e.defect) e.detail = "certified but not locked by t_end";
    return e;
}

CampaignEntry n3_entry(const CampaignSampler& s, Rng& rng, CampaignEntry e) {
    const double thr = n3_threshold();
    for (e.attempts = 1; e.attempts <= 1000; ++e.attempts) {
        const double kappa = 1.0;
        const double m = rng.uniform(0.01, 0.05) / kappa;
        const double budget = 0.95 * (thr - 2.0 * m * kappa) / (m + 0.5 / kappa);
        const double dv = budget * rng.uniform(0.05, 1.0);
        Instance inst;
        inst.params = {m, kappa, Vec(3)};
        for (auto& v : inst.params.nu) v = dv * (rng.uniform01() - 0.5);
        const double eps = 1e-3;
        Vec th(3);
        switch (e.index % 4) {
        case 0:
            for (auto& v : th) v = rng.uniform(0.0, kTwoPi);
            break;
        case 1:
            th = {0.0, std::numbers::pi, std::numbers::pi};
            break;
        case 2:
            th = {0.0, kTwoPi / 3.0, 2.0 * kTwoPi / 3.0};
            break;
        default:
            th = {0.0, 0.0, std::numbers::pi};
            break;
        }
        for (auto& v : th) v += eps * (rng.uniform01() - 0.5);
        inst.state0.theta = th;
        const double amp = rng.uniform(0.0, 10.0);
        inst.state0.omega.resize(3);
        for (auto& v : inst.state0.omega) v = amp * (rng.uniform01() - 0.5) * 2.0;
        e.certificate = check_n3(inst.params);
        if (!e.certificate.pass) continue;
        e.certified = true;
        e.N = 3;
        e.instance = inst;
        e.metrics["m_kappa"] = m * kappa;
        e.metrics["omega_amplitude"] = amp;
        e.metrics["R0"] = order_amplitude(th);
        break;
    }
    if (!e.certified) {
        e.detail = "no certified instance found";
        return e;
    }
    const auto cfg = run_config(e.instance, false, s.t_end, std::min(0.01, e.instance.params.m / 5.0), s.lock);
    const Trajectory tr = simulate(cfg, e.instance, true);
    finish_lock(e, tr, e.instance, s.lock);
    e.defect = !e.locked || e.tail_collisions > 0;
    if (e.defect) e.detail = e.locked ? "collisions after locking" : "certified but not locked";
    return e;
}

CampaignEntry first_order_entry(const CampaignSampler& s, Rng& rng, CampaignEntry e) {
    for (e.attempts = 1; e.attempts <= 1000; ++e.attempts) {
        const std::size_t n = rng.integer(s.N_min, s.N_max);
        Instance inst;
        inst.state0.theta = clustered_phases(n, rng);
        const double R0 = order_amplitude(inst.state0.theta);
        if (R0 < s.R0_min) continue;
        const double kappa = 1.0;
        const double dv = rng.uniform(s.scale_min, 0.99) * kappa * R0 * R0 / kFirstOrderFactor;
        inst.params = {0.0, kappa, Vec(n)};
        for (auto& v : inst.params.nu) v = dv * (rng.uniform01() - 0.5);
        inst.state0.omega = rhs_first_order(inst.params, inst.state0.theta);
        e.certificate = check_first_order(inst.params, R0);
        if (!e.certificate.pass) continue;
        e.certified = true;
        e.N = n;
        e.instance = inst;
        e.metrics["R0"] = R0;
        break;
    }
    if (!e.certified) {
        e.detail = "no certified instance found";
        return e;
    }
    const auto cfg = run_config(e.instance, true, s.t_end, 0.01, s.lock);
    const Trajectory tr = simulate(cfg, e.instance, false);
    finish_lock(e, tr, e.instance, s.lock);
    e.defect = !e.locked;
    if (e.defect) e.detail = "certified but not locked";
    return e;
}

CampaignEntry nonsync_entry(const CampaignSampler& s, Rng& rng, CampaignEntry e) {
    const std::size_t per = 2 + rng.integer(0, 1);
    std::vector<OscillatorGroup> groups(2);
    Vec theta0;
    const double nu1 = rng.uniform(-1.0, 1.0);
    const double gap = rng.uniform(0.5, 1.5);
    for (std::size_t g = 0; g < 2; ++g) {
        groups[g].nu = g == 0 ? nu1 : nu1 + gap;
        groups[g].omega0 = rng.uniform(-1.0, 1.0);
        const double offset = rng.uniform(0.0, kTwoPi);
        for (std::size_t k = 0; k < per; ++k) {
            groups[g].members.push_back(theta0.size());
            theta0.push_back(offset + kTwoPi * static_cast<double>(k) / static_cast<double>(per));
        }
    }
    const double m = rng.uniform(0.2, 1.0), kappa = rng.uniform(0.2, 1.0);
    NonsyncExact exact(m, kappa, groups, theta0);
    e.instance = {exact.params(), exact.initial()};
    e.N = theta0.size();
    e.attempts = 1;
    const double R0 = order_amplitude(theta0);
    e.certificate = check_simple(e.instance.params, R0, diameter(e.instance.state0.omega));
    e.certified = e.certificate.pass;
    e.metrics["R0"] = R0;
    // The incoherent state is unstable, so the horizon stays short enough for rounding not to grow.
    const double t_end = std::min(s.t_end, 30.0);
    const auto cfg = run_config(e.instance, false, t_end, std::min(0.01, m / 5.0), s.lock);
    const Trajectory tr = simulate(cfg, e.instance, false);
    finish_lock(e, tr, e.instance, s.lock);
    double rmax = 0.0;
    for (const auto& snap : tr.snapshots) rmax = std::max(rmax, order_amplitude(snap.theta));
    e.metrics["R_max"] = rmax;
    e.defect = e.certified || e.locked;
    if (e.defect) e.detail = "incoherent instance certified or locked";
    return e;
}

CampaignEntry partial_entry(const CampaignSampler& s, Rng& rng, CampaignEntry e) {
    constexpr std::size_t kN = 10, kA = 7;
    constexpr double kLambda = 0.7, kEll = 1.2, kEta = 3.0, kArc = 0.3;
    std::vector<std::size_t> A(kA), B(kN);
    std::iota(A.begin(), A.end(), 0);
    std::iota(B.begin(), B.end(), 0);
    B.resize(kA);
    for (e.attempts = 1; e.attempts <= 1000; ++e.attempts) {
        Instance inst;
        const double kappa = 1.0;
        const double m = rng.uniform(0.005, 0.02);
        const double da = rng.uniform(0.02, 0.1);
        const double ca = rng.uniform(-0.5, 0.5);
        const double ct = rng.uniform(0.0, kTwoPi);
        inst.params = {m, kappa, Vec(kN)};
        inst.state0.theta.resize(kN);
        inst.state0.omega.resize(kN);
        for (std::size_t i = 0; i < kN; ++i) {
            if (i < kA) {
                inst.params.nu[i] = ca + da * (rng.uniform01() - 0.5);
                inst.state0.theta[i] = ct + kArc * (rng.uniform01() - 0.5);
                inst.state0.omega[i] = 0.2 * (rng.uniform01() - 0.5);
            } else {
                inst.params.nu[i] = rng.uniform(-3.0, 3.0);
                inst.state0.theta[i] = rng.uniform(0.0, kTwoPi);
                inst.state0.omega[i] = rng.uniform(-1.0, 1.0);
            }
        }
        e.certificate = check_corollary(inst.params, inst.state0, A, B, kLambda, kEll, kEta);
        if (!e.certificate.pass) continue;
        e.certified = true;
        e.N = kN;
        e.instance = inst;
        break;
    }
    if (!e.certified) {
        e.detail = "no certified instance found";
        return e;
    }
    const auto& p = e.instance.params;
    const auto cfg = run_config(e.instance, false, s.t_end, std::min(0.01, p.m / 5.0), s.lock);
    const Trajectory tr = simulate(cfg, e.instance, false);
    const double t1 = kEta * p.m;
    const double phi1 = e.certificate.predictions.at("tail_phi1");
    const double tail_start = s.t_end - 20.0;
    double persist = -std::numeric_limits<double>::infinity();
    double tail = -std::numeric_limits<double>::infinity();
    std::vector<PhaseState> tail_snaps;
    for (const auto& snap : tr.snapshots) {
        if (snap.t < t1) continue;
        const double d = diameters(snap, A).theta;
        persist = std::max(persist, d - kEll);
        if (snap.t >= tail_start) {
            tail = std::max(tail, d - phi1);
            tail_snaps.push_back(snap);
        }
    }
    const auto arr = arrangement_check(tail_snaps, p, A, phi1, kLambda, 1e-3);
    e.metrics["persistence_excess"] = persist;
    e.metrics["tail_excess"] = tail;
    e.metrics["arrangement_slack"] = arr.worst_slack;
    e.metrics["phi1"] = phi1;
    e.metrics["c"] = arr.c;
    e.metrics["m"] = p.m;
    e.defect = persist > 1e-6 || tail > 1e-3 || arr.worst_slack < -1e-3;
    if (e.defect) e.detail = "partial-locking prediction violated";
    return e;
}

} // namespace

CampaignReport certify_campaign(std::size_t n_instances, const CampaignSampler& sampler,
                                CampaignKind which) {
    if (sampler.N_min == 0 || sampler.N_max < sampler.N_min)
        throw InputError("campaign sampler needs 1 <= N_min <= N_max");
    CampaignReport rep;
    rep.kind = which;
    rep.entries.resize(n_instances);
    parallel_for(n_instances, [&](std::size_t i) {
        CampaignEntry e;
        e.index = i;
        e.seed = sampler.seed + i;
        Rng rng = Rng::substream(sampler.seed, i);
        switch (which) {
        case CampaignKind::Simple: e = simple_entry(sampler, rng, e); break;
        case CampaignKind::N3: e = n3_entry(sampler, rng, e); break;
        case CampaignKind::FirstOrder: e = first_order_entry(sampler, rng, e); break;
        case CampaignKind::Nonsync: e = nonsync_entry(sampler, rng, e); break;
        case CampaignKind::Partial: e = partial_entry(sampler, rng, e); break;
        }
        rep.entries[i] = std::move(e);
    });
    for (const auto& e : rep.entries) {
        rep.certified += e.certified ? 1 : 0;
        rep.defects += e.defect ? 1 : 0;
    }
    return rep;
}

Census collision_census(const ScenarioConfig& cfg) {
    const Instance inst = generate_instance(cfg);
    Census c;
    c.m_kappa = inst.params.m * inst.params.kappa;
    const Trajectory tr = simulate(cfg, inst, true);
    const LockTolerances tol = cfg.lock_tolerances();
    c.lock = lock_or_unlocked(tr.snapshots, inst.params.nu_c(), tol);
    PhaseState s0 = inst.state0;
    if (cfg.first_order) s0.omega = rhs_first_order(inst.params, s0.theta);
    const CollisionDetector probe(inst.params, s0, cfg.integration.refine_tol, cfg.first_order);
    const std::size_t n = inst.params.size();
    std::vector<std::size_t> counts(n * n, 0);
    for (const auto& ev : tr.collisions) ++counts[ev.i * n + ev.j];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (probe.excluded(i, j)) {
                ++c.excluded_pairs;
                continue;
            }
            c.pairs.push_back({i, j, counts[i * n + j]});
        }
    c.total = tr.collisions.size();
    const double tail_start = cfg.integration.t_end - 0.5 * tol.window;
    for (const auto& ev : tr.collisions)
        if (ev.t_star >= tail_start) ++c.tail_collisions;
    c.tail_assertion_applies = c.m_kappa <= 0.25 && c.lock.locked;
    c.tail_ok = !c.tail_assertion_applies || c.tail_collisions == 0;
    c.events = tr.collisions;
    return c;
}

} // namespace kuramoto
