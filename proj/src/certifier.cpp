#include "kuramoto/certifier.hpp"

#include "kuramoto/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace kuramoto {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double one_minus_exp(double eta) { return -std::expm1(-eta); }

Condition upper(std::string name, double value, double bound, bool strict = true) {
    Condition c;
    c.name = std::move(name);
    c.value = value;
    c.bound = bound;
    c.strict = strict;
    c.margin = bound - value + (strict ? 0.0 : kNonStrictSlack);
    c.pass = c.margin > 0.0;
    return c;
}

Condition lower(std::string name, double value, double bound, bool strict = true) {
    Condition c = upper(std::move(name), -value, -bound, strict);
    c.value = value;
    c.bound = bound;
    return c;
}

bool all_pass(const std::vector<Condition>& cs) {
    return std::all_of(cs.begin(), cs.end(), [](const Condition& c) { return c.pass; });
}

void require_lambda(double lambda) {
    if (!(lambda > 0.5 && lambda <= 1.0)) throw InputError("lambda must lie in (1/2, 1]");
}

void require_kappa(double kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw InputError("certificate needs coupling kappa > 0");
}
} // namespace

CertInputs CertInputs::from(const SystemParams& p, double d_omega0) {
    return {p.m, p.kappa, p.nu_diameter(), d_omega0};
}

void FreeParams::validate() const {
    std::ostringstream err;
    if (!(eta > 0.0) || !std::isfinite(eta)) err << "eta must be > 0; ";
    if (!(delta > 0.0 && delta < 1.0)) err << "delta must lie in (0,1); ";
    if (!(lambda > 0.5 && lambda <= 1.0))
        err << "lambda must lie in (1/2,1]; ";
    else if (!(ell > 0.0 && ell < f_upper_zero(lambda)))
        err << "ell must lie in (0, 2 acos(1/lambda - 1)); ";
    if (!err.str().empty()) throw InputError(err.str());
}

double zeta(const CertInputs& in, double eta) {
    if (!(eta > 0.0)) throw InputError("eta must be > 0");
    const double a = one_minus_exp(eta);
    return 0.5 * in.m * a * (in.D_Omega0 + in.D_V * eta) +
           in.m * in.m * in.kappa * a * a * a *
               (0.75 * in.D_Omega0 + (in.D_V + 2.0 * in.kappa) * eta);
}

double zeta(const SystemParams& p, double d_omega0, double eta) {
    return zeta(CertInputs::from(p, d_omega0), eta);
}

double xi(const CertInputs& in, double eta) {
    if (!(eta > 0.0)) throw InputError("eta must be > 0");
    require_kappa(in.kappa);
    const double big = std::max(1.0, eta);
    return (in.D_V + 2.0 * in.kappa) * in.m + in.D_Omega0 * in.m * big * std::exp(-big) +
           in.D_V / (2.0 * in.kappa) + in.D_Omega0 / (2.0 * in.kappa) / std::expm1(eta);
}

double xi(const SystemParams& p, double d_omega0, double eta) {
    return xi(CertInputs::from(p, d_omega0), eta);
}

double xi_inf(const CertInputs& in) {
    require_kappa(in.kappa);
    return in.m * in.D_V + 2.0 * in.m * in.kappa + in.D_V / (2.0 * in.kappa);
}

double xi_inf(const SystemParams& p) { return xi_inf(CertInputs::from(p, 0.0)); }

double f_lambda(double lambda, double theta) {
    return lambda * std::sin(theta) - 2.0 * (1.0 - lambda) * std::sin(0.5 * theta);
}

double theta_star(double lambda) {
    require_lambda(lambda);
    const double a = 1.0 - lambda;
    return 2.0 * std::acos((a + std::sqrt(a * a + 8.0 * lambda * lambda)) / (4.0 * lambda));
}

double f_max(double lambda) { return f_lambda(lambda, theta_star(lambda)); }

double f_max_radical(double lambda) {
    require_lambda(lambda);
    const double a = 1.0 - lambda;
    const double s = std::sqrt(9.0 * lambda * lambda - 2.0 * lambda + 1.0);
    const double inner = 3.0 * lambda * lambda + 2.0 * lambda - 1.0 - a * s;
    return (-3.0 * a + s) * std::sqrt(std::max(0.0, inner)) / (4.0 * std::sqrt(2.0) * lambda);
}

double f_upper_zero(double lambda) {
    require_lambda(lambda);
    return 2.0 * std::acos((1.0 - lambda) / lambda);
}

double arrangement_threshold(double lambda) {
    require_lambda(lambda);
    return std::pow(2.0 * lambda - 1.0, 1.5) / std::sqrt(2.0 * lambda) * (2.0 - lambda) /
           (std::sqrt(0.5 * lambda) + (1.0 - lambda));
}

namespace {
// Bisection for f_lambda = target on a bracket where f - target changes sign.
double bisect_root(double lambda, double target, double lo, double hi, bool increasing) {
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double v = f_lambda(lambda, mid) - target;
        if ((v < 0.0) == increasing)
            lo = mid;
        else
            hi = mid;
    }
    const double flo = std::abs(f_lambda(lambda, lo) - target);
    const double fhi = std::abs(f_lambda(lambda, hi) - target);
    return flo <= fhi ? lo : hi;
}
} // namespace

std::optional<PhiRoots> phi_roots(double lambda, double delta_val) {
    require_lambda(lambda);
    if (!(delta_val > 0.0)) throw InputError("root level must be > 0");
    const double ts = theta_star(lambda);
    const double fm = f_lambda(lambda, ts);
    if (delta_val >= fm) return std::nullopt;
    const double z = f_upper_zero(lambda);
    PhiRoots r;
    r.phi1 = bisect_root(lambda, delta_val, 0.0, ts, true);
    r.phi2 = bisect_root(lambda, delta_val, ts, z, false);
    const double e1 = std::abs(f_lambda(lambda, r.phi1) - delta_val);
    const double e2 = std::abs(f_lambda(lambda, r.phi2) - delta_val);
    if (e1 > 1e-12 || e2 > 1e-12 || !(0.0 < r.phi1 && r.phi1 <= ts && ts <= r.phi2 && r.phi2 < z))
        throw std::runtime_error("root bisection failed to converge");
    return r;
}

std::string to_string(Theorem t) {
    switch (t) {
    case Theorem::Simple: return "simple";
    case Theorem::Framework: return "framework";
    case Theorem::PartialLock: return "partial";
    case Theorem::Corollary: return "corollary";
    case Theorem::N3: return "n3";
    case Theorem::FirstOrder: return "first_order";
    }
    return "unknown";
}

CertificateReport check_framework(const CertInputs& in, double R0, const FreeParams& fp) {
    fp.validate();
    require_kappa(in.kappa);
    CertificateReport rep;
    rep.which = Theorem::Framework;
    rep.selected = fp;
    const double z = zeta(in, fp.eta);
    const double x = xi(in, fp.eta);
    const double ch = std::cos(0.5 * fp.ell);
    const double sh = std::sin(0.5 * fp.ell);
    const double dr = fp.delta * R0;

    rep.per_condition.push_back(lower("F1:R0", R0, kPhiThreshold));
    rep.per_condition.push_back(upper("F1", z, (1.0 - fp.delta) * R0, false));

    Condition alt_a = lower("F2a", dr, fp.lambda + (1.0 - fp.lambda) * ch, false);
    Condition alt_b;
    if (dr > 0.0)
        alt_b = upper("F2b", 2.0 * fp.lambda + (x / dr) * (x / dr) / (1.0 - ch), 1.0 + dr, false);
    else
        alt_b = upper("F2b", kInf, 1.0 + dr, false);
    Condition f2 = alt_a.margin >= alt_b.margin ? alt_a : alt_b;
    f2.name = "F2";
    rep.per_condition.push_back(f2);
    rep.auxiliary.push_back(alt_a);
    rep.auxiliary.push_back(alt_b);

    const double f3_bound = sh * (fp.lambda * ch - (1.0 - fp.lambda));
    rep.per_condition.push_back(upper("F3", x, f3_bound));
    rep.auxiliary.push_back(upper("F4", in.D_V / in.kappa + 4.0 * in.m * in.kappa +
                                            2.0 * in.m * in.D_V,
                                  arrangement_threshold(fp.lambda)));
    rep.pass = all_pass(rep.per_condition);

    rep.quantities["zeta"] = z;
    rep.quantities["xi"] = x;
    rep.quantities["xi_inf"] = xi_inf(in);
    rep.quantities["f_ell"] = f_lambda(fp.lambda, fp.ell);
    rep.quantities["theta_star"] = theta_star(fp.lambda);
    rep.quantities["f_max"] = f_max(fp.lambda);
    rep.quantities["R0"] = R0;
    if (auto roots = phi_roots(fp.lambda, 2.0 * x)) {
        rep.quantities["phi1"] = roots->phi1;
        rep.quantities["phi2"] = roots->phi2;
    }
    if (rep.pass) {
        rep.predictions["initial_layer_end"] = fp.eta * in.m;
        rep.predictions["R_floor_initial_layer"] = R0 - z;
        if (rep.auxiliary.back().pass) {
            const double d = in.D_V / in.kappa + 4.0 * in.m * in.kappa + 2.0 * in.m * in.D_V;
            if (d > 0.0) {
                if (auto r = phi_roots(fp.lambda, d)) {
                    rep.predictions["tail_phi1"] = r->phi1;
                    rep.predictions["arrangement_c"] = arrangement_constant(r->phi1, fp.lambda);
                }
            }
        }
    }
    return rep;
}

CertificateReport check_framework(const SystemParams& p, double R0, double d_omega0,
                                  const FreeParams& fp) {
    return check_framework(CertInputs::from(p, d_omega0), R0, fp);
}

double default_xyz_constant() { return 1.0 / 0.3259; }

double zeta_tilde(const SimpleScaled& s, double eta) {
    const double a = one_minus_exp(eta);
    return 0.5 * a * (s.y * s.z + eta * s.x * s.y) +
           a * a * a * s.y * s.y * (0.75 * s.z + eta * s.x + 2.0 * eta);
}

double xi_tilde(const SimpleScaled& s, double eta) {
    const double big = std::max(1.0, eta);
    return s.y * (s.x + 2.0) + big * std::exp(-big) * s.y * s.z + 0.5 * s.x +
           0.5 * s.z / std::expm1(eta);
}

double simple_objective(const SimpleScaled& s, double eta, double xyz_constant) {
    return zeta_tilde(s, eta) + std::sqrt(xyz_constant * xi_tilde(s, eta));
}

EtaMinimum minimize_simple_objective(const SimpleScaled& s, double xyz_constant) {
    constexpr int kGrid = 200;
    const double lo = 1e-3, hi = 50.0;
    std::vector<double> etas(kGrid), vals(kGrid);
    std::size_t best = 0;
    for (int k = 0; k < kGrid; ++k) {
        etas[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (kGrid - 1));
        vals[k] = simple_objective(s, etas[k], xyz_constant);
        if (vals[k] < vals[best]) best = static_cast<std::size_t>(k);
    }
    double a = etas[best == 0 ? 0 : best - 1];
    double b = etas[std::min<std::size_t>(best + 1, kGrid - 1)];
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = simple_objective(s, c, xyz_constant), fd = simple_objective(s, d, xyz_constant);
    for (int it = 0; it < 200 && b - a > 1e-12 * b; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = simple_objective(s, c, xyz_constant);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = simple_objective(s, d, xyz_constant);
        }
    }
    EtaMinimum out{etas[best], vals[best]};
    const double mid = 0.5 * (a + b);
    const double fm = simple_objective(s, mid, xyz_constant);
    if (fm < out.value) out = {mid, fm};
    return out;
}

void simple_selection(double delta_r0, double& lambda, double& ell) {
    if (delta_r0 <= 0.94) {
        lambda = 0.5 + 35.0 / 94.0 * delta_r0;
        ell = 2.0 * std::acos(1.0 - 20.0 / 47.0 * delta_r0);
    } else {
        lambda = 2.5 * delta_r0 - 1.5;
        ell = 2.0 * std::acos(0.6);
    }
}

CertificateReport check_simple(const CertInputs& in, double R0, const SimpleOptions& opt) {
    require_kappa(in.kappa);
    if (!(in.m > 0.0)) throw InputError("simple criterion needs m > 0; use the first-order check");
    if (!(opt.xyz_constant > 0.0)) throw InputError("xyz constant must be > 0");
    CertificateReport rep;
    rep.which = Theorem::Simple;
    // Rounding leaves a bipolar start with R0 ~ 1e-16, so the same cutoff as for phi applies.
    if (!(R0 > kPhiThreshold)) {
        rep.per_condition.push_back(lower("F1:R0", R0, kPhiThreshold));
        rep.notes.push_back("initial order parameter vanishes; no certificate possible");
        return rep;
    }
    const double r2 = R0 * R0;
    const SimpleScaled s{in.D_V / (in.kappa * r2), in.m * in.kappa / r2,
                         in.D_Omega0 / (in.kappa * r2)};
    rep.quantities["x"] = s.x;
    rep.quantities["y"] = s.y;
    rep.quantities["z"] = s.z;
    rep.quantities["xyz_constant"] = opt.xyz_constant;
    const EtaMinimum mn = minimize_simple_objective(s, opt.xyz_constant);
    rep.quantities["eta"] = mn.eta;
    rep.quantities["infimum"] = mn.value;
    rep.per_condition.push_back(upper("xyz", mn.value, 1.0));
    if (!rep.per_condition.back().pass) {
        rep.notes.push_back("infimum over eta is not below 1");
        return rep;
    }
    const double zt = zeta_tilde(s, mn.eta);
    const double xt = xi_tilde(s, mn.eta);
    const double delta = 1.0 - zt;
    rep.quantities["zeta_tilde"] = zt;
    rep.quantities["xi_tilde"] = xt;
    rep.quantities["delta"] = delta;
    FreeParams fp;
    fp.eta = mn.eta;
    fp.delta = delta;
    simple_selection(delta * R0, fp.lambda, fp.ell);
    const CertificateReport fw = check_framework(in, R0, fp);
    for (const auto& c : fw.per_condition) rep.per_condition.push_back(c);
    rep.auxiliary = fw.auxiliary;
    for (const auto& [k, v] : fw.quantities) rep.quantities[k] = v;
    rep.predictions = fw.predictions;
    rep.selected = fp;
    rep.pass = all_pass(rep.per_condition);
    if (!fw.pass)
        rep.notes.push_back("xyz criterion held but the selected parameters miss the framework");
    return rep;
}

CertificateReport check_simple(const SystemParams& p, double R0, double d_omega0,
                               const SimpleOptions& opt) {
    return check_simple(CertInputs::from(p, d_omega0), R0, opt);
}

CertificateReport check_partial_locking(const SystemParams& p,
                                        std::span<const std::size_t> subset_a,
                                        std::span<const std::size_t> subset_b,
                                        double d_omega0_a, double d_omega0_b, double lambda,
                                        double ell, double eta, double t1) {
    (void)d_omega0_b;
    const std::size_t n = p.size();
    std::ostringstream err;
    if (!(lambda > 0.5 && lambda <= 1.0))
        err << "lambda=" << lambda << " outside (1/2,1]; ";
    else if (!(ell > 0.0 && ell < f_upper_zero(lambda)))
        err << "ell=" << ell << " outside (0, 2 acos(1/lambda - 1)); ";
    if (!(eta > 0.0)) err << "eta=" << eta << " must be > 0; ";
    if (!(t1 >= eta * p.m)) err << "t1=" << t1 << " must be >= eta m; ";
    if (!(p.kappa > 0.0)) err << "kappa must be > 0; ";
    if (subset_a.empty()) err << "subset A is empty; ";
    std::vector<bool> in_b(n, false), in_a(n, false);
    for (std::size_t i : subset_b) {
        if (i >= n) {
            err << "subset B index " << i << " out of range; ";
            continue;
        }
        in_b[i] = true;
    }
    for (std::size_t i : subset_a) {
        if (i >= n) {
            err << "subset A index " << i << " out of range; ";
            continue;
        }
        if (in_a[i]) err << "subset A repeats index " << i << "; ";
        in_a[i] = true;
        if (!in_b[i]) err << "subset A index " << i << " missing from B; ";
    }
    if (!err.str().empty()) throw InputError(err.str());
    if (subset_a.size() < majority_count(lambda, n))
        throw InputError("subset A holds fewer than ceil(lambda N) oscillators");

    const Vec nu_a = gather(p.nu, subset_a);
    const Vec nu_b = gather(p.nu, subset_b);
    const CertInputs ia{p.m, p.kappa, diameter(nu_a), d_omega0_a};
    const CertInputs ib{p.m, p.kappa, diameter(nu_b), 0.0};
    const double bound = 0.5 * lambda * std::sin(ell) - (1.0 - lambda) * std::sin(0.5 * ell);
    const double tail_a = 2.0 * p.m * ia.D_V + 4.0 * p.m * p.kappa + ia.D_V / p.kappa;
    const double tail_b = 2.0 * p.m * ib.D_V + 4.0 * p.m * p.kappa + ib.D_V / p.kappa;

    CertificateReport rep;
    rep.which = Theorem::PartialLock;
    rep.per_condition.push_back(upper("xi_partial_A", xi(ia, eta), bound));
    rep.per_condition.push_back(upper("xi_partial_B", xi_inf(ib), bound));
    rep.per_condition.push_back(upper("arrangement_A", tail_a, arrangement_threshold(lambda)));
    rep.pass = all_pass(rep.per_condition);
    rep.quantities["f_ell_half"] = bound;
    rep.quantities["tail_level_A"] = tail_a;
    rep.quantities["tail_level_B"] = tail_b;
    if (!rep.pass) return rep;

    rep.predictions["persistence_ell"] = ell;
    rep.predictions["t1"] = t1;
    if (auto r = phi_roots(lambda, tail_a)) {
        rep.predictions["tail_phi1"] = r->phi1;
        rep.predictions["arrangement_c"] = arrangement_constant(r->phi1, lambda);
    }
    rep.predictions["tail_linear_bound"] = 3.0 * kPi * tail_a / (4.0 * (2.0 * lambda - 1.0));
    if (auto r = phi_roots(lambda, tail_b)) {
        rep.predictions["max_cluster_phi1"] = r->phi1;
        rep.predictions["separation"] = r->phi2 - r->phi1;
    }
    return rep;
}

Condition corollary_gate(const SystemParams& p, const PhaseState& s0,
                         std::span<const std::size_t> subset_a, double ell, double eta) {
    const Diameters d = diameters(s0, subset_a);
    const double dv = diameter(gather(p.nu, subset_a));
    const double a = one_minus_exp(eta);
    const double rhs = ell - p.m * a * d.omega - p.m * (eta - a) * (dv + 2.0 * p.kappa);
    return upper("corollary_gate", d.theta, rhs, false);
}

CertificateReport check_corollary(const SystemParams& p, const PhaseState& s0,
                                  std::span<const std::size_t> subset_a,
                                  std::span<const std::size_t> subset_b, double lambda,
                                  double ell, double eta) {
    const double dwa = diameters(s0, subset_a).omega;
    const double dwb = diameters(s0, subset_b).omega;
    CertificateReport rep =
        check_partial_locking(p, subset_a, subset_b, dwa, dwb, lambda, ell, eta, eta * p.m);
    rep.which = Theorem::Corollary;
    rep.per_condition.push_back(corollary_gate(p, s0, subset_a, ell, eta));
    rep.pass = all_pass(rep.per_condition);
    if (!rep.pass) rep.predictions.clear();
    return rep;
}

double n3_threshold() { return std::sqrt((69.0 - 11.0 * std::sqrt(33.0)) / 6.0) / 8.0; }

CertificateReport check_n3(const CertInputs& in, std::size_t n) {
    if (n != 3) throw InputError("the three-oscillator criterion needs N = 3");
    require_kappa(in.kappa);
    CertificateReport rep;
    rep.which = Theorem::N3;
    rep.per_condition.push_back(upper("n3", xi_inf(in), n3_threshold()));
    rep.pass = all_pass(rep.per_condition);
    rep.quantities["threshold"] = n3_threshold();
    rep.quantities["m_kappa"] = in.m * in.kappa;
    return rep;
}

CertificateReport check_n3(const SystemParams& p) {
    return check_n3(CertInputs::from(p, 0.0), p.size());
}

CertificateReport check_first_order(const CertInputs& in, double R0) {
    require_kappa(in.kappa);
    CertificateReport rep;
    rep.which = Theorem::FirstOrder;
    rep.per_condition.push_back(lower("F1:R0", R0, kPhiThreshold));
    rep.per_condition.push_back(
        lower("first_order", in.kappa * R0 * R0, kFirstOrderFactor * in.D_V));
    rep.pass = all_pass(rep.per_condition);
    return rep;
}

CertificateReport check_first_order(const SystemParams& p, double R0) {
    return check_first_order(CertInputs::from(p, 0.0), R0);
}

double sturm_picone_Tstar(double a, double b, double c) {
    if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw InputError("Sturm-Picone inputs must be > 0");
    const double disc = 4.0 * a * c - b * b;
    if (disc <= 0.0) return kInf;
    const double r = std::sqrt(disc);
    return kPi * a / r + 2.0 * a / r * std::asin(b / (2.0 * std::sqrt(a * c)));
}

LemmaNumericReport lemma_numeric_suite(std::size_t grid) {
    if (grid == 0) throw InputError("grid must be nonempty");
    constexpr double kConst[3] = {0.3296, 0.3259, 0.729};
    LemmaNumericReport rep;
    rep.grid = grid;
    for (int q = 0; q < 3; ++q) {
        rep.min_slack[q] = kInf;
        rep.min_ratio[q] = kInf;
    }
    bool strict2 = true;
    for (std::size_t k = 1; k <= grid; ++k) {
        const double u = static_cast<double>(k) / static_cast<double>(grid);
        double lambda = 0.0, ell = 0.0;
        simple_selection(u, lambda, ell);
        const double ch = std::cos(0.5 * ell);
        if (u <= 0.94) {
            const double r1 = u * std::sqrt(1.0 - ch) * std::sqrt(1.0 + u - 2.0 * lambda) / (u * u);
            rep.min_ratio[0] = std::min(rep.min_ratio[0], r1);
            rep.min_slack[0] = std::min(rep.min_slack[0], r1 - kConst[0]);
        } else {
            rep.equality_residual =
                std::max(rep.equality_residual, std::abs(u - (lambda + (1.0 - lambda) * ch)));
        }
        const double r2 = std::sin(0.5 * ell) * (lambda * ch - (1.0 - lambda)) / (u * u);
        rep.min_ratio[1] = std::min(rep.min_ratio[1], r2);
        rep.min_slack[1] = std::min(rep.min_slack[1], r2 - kConst[1]);
        if (!(r2 > kConst[1])) strict2 = false;
        const double r3 = arrangement_threshold(lambda) / (u * u);
        rep.min_ratio[2] = std::min(rep.min_ratio[2], r3);
        rep.min_slack[2] = std::min(rep.min_slack[2], r3 - kConst[2]);
    }
    // Both branches of the selection evaluated at the breakpoint.
    const double u = 0.94;
    const double l1 = 0.5 + 35.0 / 94.0 * u, e1 = 2.0 * std::acos(1.0 - 20.0 / 47.0 * u);
    const double l2 = 2.5 * u - 1.5, e2 = 2.0 * std::acos(0.6);
    rep.breakpoint_gap = std::abs((l1 + (1.0 - l1) * std::cos(0.5 * e1)) -
                                  (l2 + (1.0 - l2) * std::cos(0.5 * e2)));
    rep.pass = rep.min_slack[0] >= 0.0 && strict2 && rep.min_slack[2] >= 0.0 &&
               rep.equality_residual <= 1e-12 && rep.breakpoint_gap <= 1e-12;
    return rep;
}

std::optional<FreeParams> search_framework(const CertInputs& in, double R0,
                                           std::size_t resolution) {
    require_kappa(in.kappa);
    if (!(R0 > 0.0) || resolution < 2) return std::nullopt;
    std::optional<FreeParams> best;
    double best_margin = -kInf;
    for (std::size_t a = 1; a <= resolution; ++a) {
        const double lambda = 0.5 + 0.5 * static_cast<double>(a) / resolution;
        const double zmax = f_upper_zero(lambda);
        for (std::size_t b = 1; b < resolution; ++b) {
            const double ell = zmax * static_cast<double>(b) / resolution;
            for (std::size_t c = 0; c < resolution; ++c) {
                const double eta = 1e-2 * std::pow(1e4, static_cast<double>(c) / (resolution - 1));
                // Every framework condition improves as delta grows, so take the largest.
                const double delta = std::min(1.0 - zeta(in, eta) / R0, 1.0 - 1e-9);
                if (!(delta > 0.0)) continue;
                FreeParams fp{eta, delta, lambda, ell};
                const auto rep = check_framework(in, R0, fp);
                if (!rep.pass) continue;
                double worst = kInf;
                for (const auto& cnd : rep.per_condition) worst = std::min(worst, cnd.margin);
                if (worst > best_margin) {
                    best_margin = worst;
                    best = fp;
                }
            }
        }
    }
    return best;
}

} // namespace kuramoto
