#pragma once

#include "kuramoto/model.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kuramoto {

// Scalar summary of an instance: everything the closed-form certificates depend on.
struct CertInputs {
    double m = 0.0;
    double kappa = 0.0;
    double D_V = 0.0;
    double D_Omega0 = 0.0;

    static CertInputs from(const SystemParams& p, double d_omega0);
};

struct FreeParams {
    double eta = 1.0;
    double delta = 0.5;
    double lambda = 0.75;
    double ell = 1.0;

    void validate() const;
};

double zeta(const CertInputs& in, double eta);
double zeta(const SystemParams& p, double d_omega0, double eta);
double xi(const CertInputs& in, double eta);
double xi(const SystemParams& p, double d_omega0, double eta);
double xi_inf(const CertInputs& in);
double xi_inf(const SystemParams& p);

double f_lambda(double lambda, double theta);
double theta_star(double lambda);
double f_max(double lambda);
// Radical expression for max f_lambda; agrees with f_lambda(theta_star(lambda)).
double f_max_radical(double lambda);
// Nonzero root of f_lambda, 2 acos((1 - lambda)/lambda); also the upper end of the ell range.
double f_upper_zero(double lambda);
// f_lambda(acos((1 - lambda)/lambda)) in closed form; threshold of the linear arrangement.
double arrangement_threshold(double lambda);

struct PhiRoots {
    double phi1 = 0.0;
    double phi2 = 0.0;
};

// Both roots of f_lambda = delta_val; empty when delta_val >= f_max(lambda).
std::optional<PhiRoots> phi_roots(double lambda, double delta_val);

enum class Theorem { Simple, Framework, PartialLock, Corollary, N3, FirstOrder };
std::string to_string(Theorem t);

// Non-strict inequalities are relaxed by this amount so exact equalities pass.
inline constexpr double kNonStrictSlack = 1e-12;

struct Condition {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    double margin = 0.0;
    bool strict = true;
    bool pass = false;
};

struct CertificateReport {
    Theorem which = Theorem::Framework;
    bool pass = false;
    std::vector<Condition> per_condition;
    // Reported but not part of the verdict.
    std::vector<Condition> auxiliary;
    std::optional<FreeParams> selected;
    std::map<std::string, double> quantities;
    std::map<std::string, double> predictions;
    std::vector<std::string> notes;
};

CertificateReport check_framework(const CertInputs& in, double R0, const FreeParams& fp);
CertificateReport check_framework(const SystemParams& p, double R0, double d_omega0,
                                  const FreeParams& fp);

// 1/0.3259, the constant the parameter selection actually supports.
double default_xyz_constant();
inline constexpr double kXyzConstantAlias = 3.068;

struct SimpleOptions {
    double xyz_constant = default_xyz_constant();
};

struct SimpleScaled {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

double zeta_tilde(const SimpleScaled& s, double eta);
double xi_tilde(const SimpleScaled& s, double eta);
double simple_objective(const SimpleScaled& s, double eta, double xyz_constant);

struct EtaMinimum {
    double eta = 0.0;
    double value = 0.0;
};
EtaMinimum minimize_simple_objective(const SimpleScaled& s, double xyz_constant);

// Piecewise choice of (lambda, ell) as a function of delta R0.
void simple_selection(double delta_r0, double& lambda, double& ell);

CertificateReport check_simple(const CertInputs& in, double R0, const SimpleOptions& opt = {});
CertificateReport check_simple(const SystemParams& p, double R0, double d_omega0,
                               const SimpleOptions& opt = {});

CertificateReport check_partial_locking(const SystemParams& p,
                                        std::span<const std::size_t> subset_a,
                                        std::span<const std::size_t> subset_b,
                                        double d_omega0_a, double d_omega0_b, double lambda,
                                        double ell, double eta, double t1);

// Initial-data gate under which the partial-locking conclusion holds with t1 = eta m.
Condition corollary_gate(const SystemParams& p, const PhaseState& s0,
                         std::span<const std::size_t> subset_a, double ell, double eta);

CertificateReport check_corollary(const SystemParams& p, const PhaseState& s0,
                                  std::span<const std::size_t> subset_a,
                                  std::span<const std::size_t> subset_b, double lambda,
                                  double ell, double eta);

double n3_threshold();
CertificateReport check_n3(const SystemParams& p);
CertificateReport check_n3(const CertInputs& in, std::size_t n);

inline constexpr double kFirstOrderFactor = 1.6;
CertificateReport check_first_order(const SystemParams& p, double R0);
CertificateReport check_first_order(const CertInputs& in, double R0);

double sturm_picone_Tstar(double a, double b, double c);

struct LemmaNumericReport {
    std::size_t grid = 0;
    // Minimum over the grid of (ratio - constant) for each of the three statements.
    double min_slack[3] = {0.0, 0.0, 0.0};
    double min_ratio[3] = {0.0, 0.0, 0.0};
    // Largest |delta R0 - (lambda + (1 - lambda) cos(ell/2))| on the upper branch.
    double equality_residual = 0.0;
    // Gap between the two branches of lambda + (1 - lambda) cos(ell/2) at the breakpoint.
    double breakpoint_gap = 0.0;
    bool pass = false;
};

LemmaNumericReport lemma_numeric_suite(std::size_t grid = 1000);

// Coarse search over (lambda, ell, eta, delta) for a parameter set passing the framework.
std::optional<FreeParams> search_framework(const CertInputs& in, double R0,
                                           std::size_t resolution = 24);

} // namespace kuramoto
