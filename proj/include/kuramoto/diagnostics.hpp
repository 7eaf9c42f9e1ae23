#pragma once

#include "kuramoto/model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace kuramoto {

// Below this amplitude the centroid phase is treated as undefined.
inline constexpr double kPhiThreshold = 1e-12;

struct OrderState {
    double R = 0.0;
    std::optional<double> phi;
    double Delta = 0.0;
    // Delta came from the grid minimum because phi is undefined.
    bool delta_fallback = false;
};

OrderState order_state(std::span<const double> theta);
double order_amplitude(std::span<const double> theta);

struct Diameters {
    double theta = 0.0;
    double omega = 0.0;
};

Diameters diameters(const PhaseState& s);
Diameters diameters(const PhaseState& s, std::span<const std::size_t> subset);

Vec gather(std::span<const double> x, std::span<const std::size_t> subset);

double potential(const SystemParams& p, std::span<const double> theta);
// kappa (1 - R^2)/2 + (m/2) Var(Omega)
double energy(const SystemParams& p, const PhaseState& s);

struct ResidualPoint {
    double t = 0.0;
    double energy = 0.0;
    double residual = 0.0;
};

std::vector<ResidualPoint> energy_dissipation_residual(const SystemParams& p,
                                                       std::span<const PhaseState> snapshots);

struct ClusterReport {
    std::vector<std::size_t> indices;
    std::vector<long> translations;
    double arc_diameter = 0.0;
    double fraction = 0.0;
};

// Largest set of phases fitting in a closed arc of length ell modulo 2 pi.
ClusterReport largest_arc_cluster(std::span<const double> theta, double ell);
std::optional<ClusterReport> find_majority_cluster(std::span<const double> theta, double lambda,
                                                   double ell);
std::optional<ClusterReport> cluster_from_condensation(const OrderState& order,
                                                       std::span<const double> theta,
                                                       double lambda, double beta);

// ceil(lambda N) robust to lambda N landing a rounding error above an integer.
std::size_t majority_count(double lambda, std::size_t n);

struct PairGap {
    std::size_t i = 0;
    std::size_t j = 0;
    double lower = 0.0;
    double upper = 0.0;
    double gap_min = 0.0;
    double gap_max = 0.0;
    double gap_mean = 0.0;
    double slack = 0.0;
};

struct ArrangementReport {
    double c = 0.0;
    std::vector<PairGap> pairs;
    double worst_slack = 0.0;
    bool ok = true;
};

double arrangement_constant(double phi1, double lambda);

ArrangementReport arrangement_check(std::span<const PhaseState> tail, const SystemParams& p,
                                    std::span<const std::size_t> subset, double phi1,
                                    double lambda, double tol = 0.0);

struct LockTolerances {
    double eps_omega = 1e-4;
    double eps_theta = 1e-3;
    double window = 10.0;

    static LockTolerances defaults_for(double kappa);
};

struct LockReport {
    bool locked = false;
    std::optional<double> t_lock;
    double omega_spread_final = 0.0;
    double relative_phase_drift_final = 0.0;
};

LockReport detect_locking(std::span<const PhaseState> snapshots, double nu_c,
                          const LockTolerances& tol);

struct DiagRow {
    double t = 0.0;
    double R = 0.0;
    std::optional<double> phi;
    double Delta = 0.0;
    double D_theta = 0.0;
    double D_omega = 0.0;
    double P = 0.0;
    double E = 0.0;
    double cluster_fraction = 0.0;
    double cluster_arc = 0.0;
};

// Keeps phi continuous along a time series by picking the branch nearest the previous value.
class PhaseUnwrapper {
public:
    std::optional<double> operator()(std::optional<double> phi);

private:
    std::optional<double> last_;
};

DiagRow diag_row(const SystemParams& p, const PhaseState& s, double cluster_ell);

// Room left in the frequency propagation bounds at state s given the initial state s0
// (individual lower/upper, pairwise, diameter). Negative entries are violations.
struct PropagationSlack {
    double omega_lower = 0.0;
    double omega_upper = 0.0;
    double pair = 0.0;
    double diameter = 0.0;

    double min() const;
};

PropagationSlack propagation_slack(const SystemParams& p, const PhaseState& s0,
                                   const PhaseState& s);

// Smallest value of dR/dt - kappa sqrt(Delta)(1 - e^{-t/m})(R sqrt(Delta) - xi_eta) over interior
// snapshots with t >= eta m, using centered differences for dR/dt.
double quasi_monotonicity_slack(const SystemParams& p, double xi_eta, double eta,
                                std::span<const PhaseState> snapshots);

// Smallest R(t) - (R0 - zeta_eta) over snapshots with t <= eta m.
double initial_layer_slack(double R0, double zeta_eta, double layer_end,
                           std::span<const PhaseState> snapshots);

} // namespace kuramoto
