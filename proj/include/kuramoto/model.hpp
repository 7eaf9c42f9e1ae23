#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kuramoto {

using Vec = std::vector<double>;

// Raised for out-of-domain inputs (bad sizes, negative inertia, malformed partitions).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

double mean(std::span<const double> x);
double diameter(std::span<const double> x);
double variance(std::span<const double> x);

struct SystemParams {
    double m = 0.0;
    double kappa = 0.0;
    Vec nu;

    std::size_t size() const { return nu.size(); }
    double nu_c() const { return mean(nu); }
    double nu_diameter() const { return diameter(nu); }
    double nu_variance() const { return variance(nu); }

    void validate() const;
};

struct PhaseState {
    double t = 0.0;
    Vec theta;
    Vec omega;

    std::size_t size() const { return theta.size(); }
    void validate(std::size_t n) const;
};

enum class Coupling { DirectSum, MeanField };

// (kappa/N) sum_j sin(theta_j - theta_i), written into out (resized to N).
void coupling_into(double kappa, std::span<const double> theta, Vec& out,
                   Coupling how = Coupling::MeanField);
Vec coupling(double kappa, std::span<const double> theta, Coupling how = Coupling::MeanField);

struct Derivative {
    Vec dtheta;
    Vec domega;
};

Derivative rhs_inertial(const SystemParams& p, const PhaseState& s,
                        Coupling how = Coupling::MeanField);
Vec rhs_first_order(const SystemParams& p, std::span<const double> theta,
                    Coupling how = Coupling::MeanField);

struct Transformed {
    SystemParams params;
    PhaseState state;
};

// Galilean shift evaluated at the state's own time t = state.t.
Transformed galilean_transform(const SystemParams& p, const PhaseState& s, double nu_shift,
                               double theta_shift, double omega_shift);
// Maps a state of the original system at time t to the dilated system at time t/alpha.
Transformed dilate_transform(const SystemParams& p, const PhaseState& s, double alpha);
Transformed reflect_transform(const SystemParams& p, const PhaseState& s);
// Oscillator i of the result is oscillator perm[i] of the input.
Transformed permute_transform(const SystemParams& p, const PhaseState& s,
                              std::span<const std::size_t> perm);

struct DimensionlessTriple {
    double m_kappa = 0.0;
    double dv_over_kappa = 0.0;
    double domega_over_kappa = 0.0;
};
DimensionlessTriple dimensionless(const SystemParams& p, double d_omega0);

class MeanTrajectory {
public:
    MeanTrajectory(double m, double theta_c0, double omega_c0, double nu_c);

    double theta_c(double t) const;
    double omega_c(double t) const;

    double m() const { return m_; }
    double theta_c0() const { return theta_c0_; }
    double omega_c0() const { return omega_c0_; }
    double nu_c() const { return nu_c_; }

private:
    double m_, theta_c0_, omega_c0_, nu_c_;
};

MeanTrajectory mean_closed_form(const SystemParams& p, const PhaseState& s0);

// t - m + m e^{-t/m}, the response of the phase to a unit constant forcing.
double drift_response(double m, double t);
// 1 - e^{-t/m}
double relaxation(double m, double t);

struct OscillatorGroup {
    std::vector<std::size_t> members;
    double nu = 0.0;
    double omega0 = 0.0;
};

// Closed-form trajectories of the incoherent family: every group starts with a
// vanishing centroid and moves rigidly, so the order parameter stays at zero.
class NonsyncExact {
public:
    NonsyncExact(double m, double kappa, std::vector<OscillatorGroup> groups, Vec theta0);

    const SystemParams& params() const { return params_; }
    PhaseState initial() const;
    PhaseState at(double t) const;
    const std::vector<OscillatorGroup>& groups() const { return groups_; }

private:
    SystemParams params_;
    std::vector<OscillatorGroup> groups_;
    Vec theta0_;
    Vec omega0_;
};

} // namespace kuramoto
