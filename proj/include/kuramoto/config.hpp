#pragma once

#include "kuramoto/certifier.hpp"
#include "kuramoto/diagnostics.hpp"
#include "kuramoto/integrator.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kuramoto {

using json = nlohmann::json;

// Config problem located at a JSON pointer inside the document.
class ConfigError : public InputError {
public:
    ConfigError(const std::string& pointer, const std::string& msg)
        : InputError(pointer.empty() ? msg : pointer + ": " + msg), pointer_(pointer) {}
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

struct ExplicitInstance {
    Vec nu;
    Vec theta0;
    Vec omega0;
};

struct InstanceSummary {
    double R0 = 0.0;
    double D_V = 0.0;
    double D_Omega0 = 0.0;
};

struct PartialSpec {
    std::vector<std::size_t> A;
    std::vector<std::size_t> B;
    double lambda = 0.7;
    double ell = 1.0;
    double eta = 1.0;
    std::optional<double> t1;
};

struct SweepSpec {
    std::string axis = "Dv_over_kappa";
    std::vector<double> values;
    bool fresh_samples = false;
    double report_time = 30.0;
};

struct ScenarioConfig {
    std::size_t N = 50;
    double m = 1.0;
    double kappa = 1.0;
    double D_V = 0.5;
    double D_Omega0 = 0.1;
    std::uint64_t seed = 1;
    bool first_order = false;
    IntegratorConfig integration{0.01, 200.0, 10, 1e-12};
    std::optional<LockTolerances> lock;
    double cluster_ell = 0.5;
    bool collisions = true;
    // Empty means every applicable certificate.
    std::vector<std::string> theorems;
    double xyz_constant = default_xyz_constant();
    std::optional<FreeParams> free;
    std::optional<PartialSpec> partial;
    std::optional<ExplicitInstance> instance;
    std::optional<InstanceSummary> summary;
    std::optional<SweepSpec> sweep;
    std::vector<std::string> warnings;

    LockTolerances lock_tolerances() const;
    void validate() const;
};

const json& scenario_schema();

// Checks doc against the supported JSON Schema subset; throws ConfigError at the first violation.
void validate_against_schema(const json& doc, const json& schema, const std::string& pointer = "");

json parse_json_text(const std::string& text);
json load_json_file(const std::string& path);

// key=value with a dotted key; the value is parsed as JSON when possible, else kept as a string.
void apply_override(json& doc, std::string_view assignment);

ScenarioConfig config_from_json(const json& doc);
json config_to_json(const ScenarioConfig& cfg);

} // namespace kuramoto
