#pragma once

#include "kuramoto/certifier.hpp"
#include "kuramoto/config.hpp"
#include "kuramoto/diagnostics.hpp"
#include "kuramoto/integrator.hpp"
#include "kuramoto/rng.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kuramoto {

std::string code_version();

struct Instance {
    SystemParams params;
    PhaseState state0;
};

// Uniform phases on [0, 2 pi), nu on [-D_V/2, D_V/2], omega on [-D_Omega0/2, D_Omega0/2].
// The unit draws come in that order so scaling D_V or D_Omega0 keeps the same sample shape.
Instance sample_instance(std::size_t n, double m, double kappa, double D_V, double D_Omega0,
                         Rng& rng);
Instance generate_instance(const ScenarioConfig& cfg);

std::vector<CertificateReport> run_certificates(const ScenarioConfig& cfg, const Instance& inst);
// Certificates computable from (R0, D_V, D_Omega0) alone.
std::vector<CertificateReport> certify_summary(const ScenarioConfig& cfg);

struct RunRecord {
    ScenarioConfig config;
    Instance instance;
    double R0 = 0.0;
    double D_Omega0 = 0.0;
    std::vector<CertificateReport> certificates;
    std::vector<DiagRow> series;
    LockReport lock;
    std::vector<CollisionEvent> collisions;
    PhaseState final_state;
    std::string code_version;
};

struct Trajectory {
    std::vector<PhaseState> snapshots;
    std::vector<CollisionEvent> collisions;
    PhaseState final_state;
};

// Integrates the configured model and keeps every observed snapshot.
Trajectory simulate(const ScenarioConfig& cfg, const Instance& inst, bool collisions);

RunRecord run_scenario(const ScenarioConfig& cfg);

// Worker count: hardware concurrency, capped by KURAMOTO_LOCK_THREADS when set.
std::size_t worker_count();
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

struct SweepRow {
    double value = 0.0;
    double kappa = 0.0;
    double m = 0.0;
    double D_Omega0 = 0.0;
    double R_end = 0.0;
    double Delta_end = 0.0;
    bool locked = false;
    std::optional<double> t_lock;
    double R_report = 0.0;
    double Delta_report = 0.0;
    // (1 - R(report_time)) kappa^2 / Var(nu)
    double ratio = 0.0;
};

struct SweepResult {
    std::string axis;
    double report_time = 30.0;
    std::vector<SweepRow> rows;
    std::vector<RunRecord> records;
    // Rank correlation of t_lock against the swept value over locked rows.
    std::optional<double> spearman_tlock;
};

ScenarioConfig sweep_point(const ScenarioConfig& base, const std::string& axis, double value,
                           std::size_t index, bool fresh_samples);
SweepResult figure_sweep(const std::string& axis, const std::vector<double>& values,
                         const ScenarioConfig& base, bool fresh_samples = false,
                         double report_time = 30.0);

double spearman(const std::vector<double>& a, const std::vector<double>& b);

struct FigureSpec {
    std::string name;
    std::string axis;
    std::vector<double> values;
    ScenarioConfig base;
};

// The three regime sweeps: D(V)/kappa at m kappa = 1, m kappa, and D(Omega0)/kappa.
std::vector<FigureSpec> figure_specs(std::uint64_t seed);

enum class CampaignKind { Simple, N3, FirstOrder, Nonsync, Partial };
std::string to_string(CampaignKind k);

struct CampaignSampler {
    std::uint64_t seed = 1;
    std::size_t N_min = 3;
    std::size_t N_max = 12;
    double R0_min = 0.5;
    // Sampled (x, y, z) are anchor points scaled by factors drawn from [scale_min, 1].
    double scale_min = 0.5;
    double t_end = 200.0;
    LockTolerances lock{1e-4, 1e-3, 10.0};
};

struct CampaignEntry {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::size_t N = 0;
    std::size_t attempts = 0;
    bool certified = false;
    bool locked = false;
    std::optional<double> t_lock;
    std::size_t collisions = 0;
    std::size_t tail_collisions = 0;
    std::map<std::string, double> metrics;
    bool defect = false;
    std::string detail;
    Instance instance;
    CertificateReport certificate;
};

struct CampaignReport {
    CampaignKind kind = CampaignKind::Simple;
    std::vector<CampaignEntry> entries;
    std::size_t certified = 0;
    std::size_t defects = 0;
};

CampaignReport certify_campaign(std::size_t n_instances, const CampaignSampler& sampler,
                                CampaignKind which);

struct PairCount {
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t count = 0;
};

struct Census {
    std::vector<PairCount> pairs;
    std::size_t total = 0;
    std::size_t excluded_pairs = 0;
    double m_kappa = 0.0;
    LockReport lock;
    // Collisions in the trailing half of the lock window.
    std::size_t tail_collisions = 0;
    bool tail_assertion_applies = false;
    bool tail_ok = true;
    std::vector<CollisionEvent> events;
};

Census collision_census(const ScenarioConfig& cfg);

} // namespace kuramoto
