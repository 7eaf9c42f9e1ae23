#include "kuramoto/config.hpp"

#include "kuramoto/schema_text.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace kuramoto {

const json& scenario_schema() {
    static const json schema = json::parse(generated::kScenarioSchema);
    return schema;
}

namespace {

std::string type_name(const json& v) {
    if (v.is_number_integer() || v.is_number_unsigned()) return "integer";
    if (v.is_number_float()) return "number";
    return v.type_name();
}

bool matches_type(const json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "boolean") return v.is_boolean();
    if (t == "number") return v.is_number();
    if (t == "integer") {
        if (v.is_number_integer() || v.is_number_unsigned()) return true;
        if (v.is_number_float()) {
            const double d = v.get<double>();
            return std::isfinite(d) && d == std::floor(d);
        }
        return false;
    }
    if (t == "null") return v.is_null();
    return false;
}

std::string child(const std::string& ptr, const std::string& key) {
    std::string esc;
    for (char c : key) {
        if (c == '~')
            esc += "~0";
        else if (c == '/')
            esc += "~1";
        else
            esc += c;
    }
    return ptr + "/" + esc;
}

} // namespace

void validate_against_schema(const json& doc, const json& schema, const std::string& ptr) {
    if (schema.contains("type")) {
        const std::string t = schema["type"].get<std::string>();
        if (!matches_type(doc, t)) throw ConfigError(ptr, "expected " + t + ", got " + type_name(doc));
    }
    if (schema.contains("enum")) {
        bool found = false;
        for (const auto& e : schema["enum"]) found = found || e == doc;
        if (!found) throw ConfigError(ptr, "value " + doc.dump() + " not in " + schema["enum"].dump());
    }
    if (doc.is_number()) {
        const double v = doc.get<double>();
        if (!std::isfinite(v)) throw ConfigError(ptr, "number must be finite");
        if (schema.contains("minimum") && v < schema["minimum"].get<double>())
            throw ConfigError(ptr, "must be >= " + schema["minimum"].dump());
        if (schema.contains("maximum") && v > schema["maximum"].get<double>())
            throw ConfigError(ptr, "must be <= " + schema["maximum"].dump());
        if (schema.contains("exclusiveMinimum") && v <= schema["exclusiveMinimum"].get<double>())
            throw ConfigError(ptr, "must be > " + schema["exclusiveMinimum"].dump());
    }
    if (doc.is_object()) {
        const json props = schema.value("properties", json::object());
        if (schema.contains("required"))
            for (const auto& r : schema["required"])
                if (!doc.contains(r.get<std::string>()))
                    throw ConfigError(child(ptr, r.get<std::string>()), "required field missing");
        const bool closed = schema.contains("additionalProperties") &&
                            schema["additionalProperties"].is_boolean() &&
                            !schema["additionalProperties"].get<bool>();
        for (const auto& [key, value] : doc.items()) {
            if (props.contains(key))
                validate_against_schema(value, props[key], child(ptr, key));
            else if (closed)
                throw ConfigError(child(ptr, key), "unknown field");
        }
    }
    if (doc.is_array()) {
        if (schema.contains("minItems") && doc.size() < schema["minItems"].get<std::size_t>())
            throw ConfigError(ptr, "needs at least " + schema["minItems"].dump() + " items");
        if (schema.contains("items"))
            for (std::size_t i = 0; i < doc.size(); ++i)
                validate_against_schema(doc[i], schema["items"], ptr + "/" + std::to_string(i));
    }
}

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str());
}

void apply_override(json& doc, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw ConfigError("", "override must look like key=value: " + std::string(assignment));
    const std::string key(assignment.substr(0, eq));
    const std::string raw(assignment.substr(eq + 1));
    std::string ptr;
    std::stringstream ks(key);
    std::string part;
    while (std::getline(ks, part, '.')) {
        if (part.empty()) throw ConfigError("", "empty path segment in " + key);
        ptr = child(ptr, part);
    }
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }
    doc[json::json_pointer(ptr)] = value;
}

LockTolerances ScenarioConfig::lock_tolerances() const {
    return lock ? *lock : LockTolerances::defaults_for(kappa);
}

void ScenarioConfig::validate() const {
    if (N == 0) throw ConfigError("/params/N", "need at least one oscillator");
    if (!(m >= 0.0)) throw ConfigError("/params/m", "must be >= 0");
    if (!(kappa >= 0.0)) throw ConfigError("/params/kappa", "must be >= 0");
    if (!theorems.empty() && !(kappa > 0.0))
        throw ConfigError("/params/kappa", "certificates need kappa > 0");
    if (instance) {
        if (instance->nu.size() != N)
            throw ConfigError("/instance/nu", "length must equal params.N");
        if (instance->theta0.size() != N)
            throw ConfigError("/instance/theta0", "length must equal the number of oscillators");
        if (!instance->omega0.empty() && instance->omega0.size() != N)
            throw ConfigError("/instance/omega0", "length must equal the number of oscillators");
    }
    integration.validate();
}

namespace {

template <class T>
void read(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj[key].get<T>();
}

} // namespace

ScenarioConfig config_from_json(const json& doc) {
    validate_against_schema(doc, scenario_schema());
    ScenarioConfig c;
    bool n_given = false;
    if (doc.contains("params")) {
        const auto& p = doc["params"];
        if (p.contains("N")) {
            c.N = static_cast<std::size_t>(p["N"].get<double>());
            n_given = true;
        }
        read(p, "m", c.m);
        read(p, "kappa", c.kappa);
    }
    if (doc.contains("sampler")) {
        read(doc["sampler"], "D_V", c.D_V);
        read(doc["sampler"], "D_Omega0", c.D_Omega0);
    }
    if (doc.contains("seed")) {
        const auto& s = doc["seed"];
        c.seed = s.is_number_float() ? static_cast<std::uint64_t>(s.get<double>())
                                     : s.get<std::uint64_t>();
    }
    if (doc.contains("model")) c.first_order = doc["model"].get<std::string>() == "first_order";
    if (c.m == 0.0) c.first_order = true;
    if (doc.contains("integration")) {
        const auto& g = doc["integration"];
        read(g, "dt", c.integration.dt);
        read(g, "t_end", c.integration.t_end);
        if (g.contains("stride"))
            c.integration.observer_stride = static_cast<std::size_t>(g["stride"].get<double>());
        read(g, "refine_tol", c.integration.refine_tol);
    }
    if (doc.contains("lock")) {
        LockTolerances t = LockTolerances::defaults_for(c.kappa);
        read(doc["lock"], "eps_omega", t.eps_omega);
        read(doc["lock"], "eps_theta", t.eps_theta);
        read(doc["lock"], "window", t.window);
        c.lock = t;
    }
    if (doc.contains("diagnostics")) read(doc["diagnostics"], "cluster_ell", c.cluster_ell);
    read(doc, "collisions", c.collisions);
    if (doc.contains("certify")) {
        const auto& ce = doc["certify"];
        if (ce.contains("theorems"))
            for (const auto& t : ce["theorems"]) c.theorems.push_back(t.get<std::string>());
        if (ce.contains("xyz_constant")) {
            c.xyz_constant = ce["xyz_constant"].get<double>();
            if (c.xyz_constant == kXyzConstantAlias)
                c.warnings.push_back(
                    "xyz_constant 3.068 is the rounded alias; the parameter selection is only "
                    "guaranteed for 1/0.3259");
        }
        if (ce.contains("free")) {
            const auto& f = ce["free"];
            c.free = FreeParams{f["eta"].get<double>(), f["delta"].get<double>(),
                                f["lambda"].get<double>(), f["ell"].get<double>()};
        }
        if (ce.contains("partial")) {
            const auto& f = ce["partial"];
            PartialSpec ps;
            for (const auto& i : f["A"]) ps.A.push_back(static_cast<std::size_t>(i.get<double>()));
            if (f.contains("B"))
                for (const auto& i : f["B"])
                    ps.B.push_back(static_cast<std::size_t>(i.get<double>()));
            ps.lambda = f["lambda"].get<double>();
            ps.ell = f["ell"].get<double>();
            ps.eta = f["eta"].get<double>();
            if (f.contains("t1")) ps.t1 = f["t1"].get<double>();
            c.partial = ps;
        }
    }
    if (doc.contains("instance")) {
        const auto& in = doc["instance"];
        ExplicitInstance ei;
        ei.nu = in["nu"].get<Vec>();
        ei.theta0 = in["theta0"].get<Vec>();
        if (in.contains("omega0")) ei.omega0 = in["omega0"].get<Vec>();
        if (n_given && ei.nu.size() != c.N)
            throw ConfigError("/instance/nu", "length must equal params.N");
        c.N = ei.nu.size();
        c.instance = ei;
    }
    if (doc.contains("summary")) {
        const auto& s = doc["summary"];
        c.summary = InstanceSummary{s["R0"].get<double>(), s["D_V"].get<double>(),
                                    s["D_Omega0"].get<double>()};
    }
    if (doc.contains("sweep")) {
        const auto& s = doc["sweep"];
        SweepSpec sw;
        sw.axis = s["axis"].get<std::string>();
        sw.values = s["values"].get<Vec>();
        read(s, "fresh_samples", sw.fresh_samples);
        read(s, "report_time", sw.report_time);
        c.sweep = sw;
    }
    c.validate();
    return c;
}

json config_to_json(const ScenarioConfig& c) {
    json j;
    j["params"] = {{"N", c.N}, {"m", c.m}, {"kappa", c.kappa}};
    j["sampler"] = {{"D_V", c.D_V}, {"D_Omega0", c.D_Omega0}};
    j["seed"] = c.seed;
    j["model"] = c.first_order ? "first_order" : "inertial";
    j["integration"] = {{"dt", c.integration.dt},
                        {"t_end", c.integration.t_end},
                        {"stride", c.integration.observer_stride},
                        {"refine_tol", c.integration.refine_tol}};
    const LockTolerances t = c.lock_tolerances();
    j["lock"] = {{"eps_omega", t.eps_omega}, {"eps_theta", t.eps_theta}, {"window", t.window}};
    j["diagnostics"] = {{"cluster_ell", c.cluster_ell}};
    j["collisions"] = c.collisions;
    json ce = json::object();
    if (!c.theorems.empty()) ce["theorems"] = c.theorems;
    ce["xyz_constant"] = c.xyz_constant;
    if (c.free)
        ce["free"] = {{"eta", c.free->eta},
                      {"delta", c.free->delta},
                      {"lambda", c.free->lambda},
                      {"ell", c.free->ell}};
    if (c.partial) {
        json p = {{"A", c.partial->A},
                  {"lambda", c.partial->lambda},
                  {"ell", c.partial->ell},
                  {"eta", c.partial->eta}};
        if (!c.partial->B.empty()) p["B"] = c.partial->B;
        if (c.partial->t1) p["t1"] = *c.partial->t1;
        ce["partial"] = p;
    }
    j["certify"] = ce;
    if (c.instance) {
        j["instance"] = {{"nu", c.instance->nu}, {"theta0", c.instance->theta0}};
        if (!c.instance->omega0.empty()) j["instance"]["omega0"] = c.instance->omega0;
    }
    if (c.summary)
        j["summary"] = {
            {"R0", c.summary->R0}, {"D_V", c.summary->D_V}, {"D_Omega0", c.summary->D_Omega0}};
    if (c.sweep)
        j["sweep"] = {{"axis", c.sweep->axis},
                      {"values", c.sweep->values},
                      {"fresh_samples", c.sweep->fresh_samples},
                      {"report_time", c.sweep->report_time}};
    return j;
}

} // namespace kuramoto
