#include "kuramoto/serialize.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace kuramoto {

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::string padded(std::size_t i) {
    std::ostringstream os;
    os << std::setw(4) << std::setfill('0') << i;
    return os.str();
}

} // namespace

json to_json(const SystemParams& p) {
    return {{"m", p.m}, {"kappa", p.kappa}, {"nu", p.nu}};
}

json to_json(const PhaseState& s) {
    return {{"t", s.t}, {"theta", s.theta}, {"omega", s.omega}};
}

json to_json(const Condition& c) {
    return {{"name", c.name},     {"value", c.value}, {"bound", c.bound},
            {"margin", c.margin}, {"strict", c.strict}, {"pass", c.pass}};
}

json to_json(const CertificateReport& r) {
    json j;
    j["theorem"] = to_string(r.which);
    j["pass"] = r.pass;
    j["per_condition"] = json::array();
    for (const auto& c : r.per_condition) j["per_condition"].push_back(to_json(c));
    j["auxiliary"] = json::array();
    for (const auto& c : r.auxiliary) j["auxiliary"].push_back(to_json(c));
    if (r.selected)
        j["selected"] = {{"eta", r.selected->eta},
                         {"delta", r.selected->delta},
                         {"lambda", r.selected->lambda},
                         {"ell", r.selected->ell}};
    else
        j["selected"] = nullptr;
    j["quantities"] = r.quantities;
    j["predictions"] = r.predictions;
    j["notes"] = r.notes;
    return j;
}

json to_json(const LockReport& r) {
    return {{"locked", r.locked},
            {"t_lock", opt(r.t_lock)},
            {"omega_spread_final", r.omega_spread_final},
            {"relative_phase_drift_final", r.relative_phase_drift_final}};
}

json to_json(const CollisionEvent& e) {
    return {{"i", e.i}, {"j", e.j}, {"t_star", e.t_star}, {"branch", e.branch}};
}

json to_json(const ClusterReport& c) {
    return {{"indices", c.indices},
            {"translations", c.translations},
            {"arc_diameter", c.arc_diameter},
            {"fraction", c.fraction}};
}

json to_json(const RunRecord& r, bool with_series) {
    json j;
    j["code_version"] = r.code_version;
    j["config"] = config_to_json(r.config);
    j["params"] = to_json(r.instance.params);
    j["initial_state"] = to_json(r.instance.state0);
    j["R0"] = r.R0;
    j["D_Omega0"] = r.D_Omega0;
    j["certificates"] = json::array();
    for (const auto& c : r.certificates) j["certificates"].push_back(to_json(c));
    j["lock"] = to_json(r.lock);
    j["collisions"] = json::array();
    for (const auto& e : r.collisions) j["collisions"].push_back(to_json(e));
    j["final_state"] = to_json(r.final_state);
    if (with_series) {
        json rows = json::array();
        for (const auto& d : r.series)
            rows.push_back({{"t", d.t},
                            {"R", d.R},
                            {"phi", opt(d.phi)},
                            {"Delta", d.Delta},
                            {"D_theta", d.D_theta},
                            {"D_omega", d.D_omega},
                            {"P", d.P},
                            {"E", d.E},
                            {"cluster_fraction", d.cluster_fraction},
                            {"cluster_arc", d.cluster_arc}});
        j["series"] = rows;
    }
    return j;
}

json to_json(const SweepResult& s) {
    json j;
    j["axis"] = s.axis;
    j["report_time"] = s.report_time;
    j["spearman_tlock"] = opt(s.spearman_tlock);
    j["rows"] = json::array();
    for (const auto& r : s.rows)
        j["rows"].push_back({{"value", r.value},
                             {"kappa", r.kappa},
                             {"m", r.m},
                             {"D_Omega0", r.D_Omega0},
                             {"R_end", r.R_end},
                             {"Delta_end", r.Delta_end},
                             {"locked", r.locked},
                             {"t_lock", opt(r.t_lock)},
                             {"R_report", r.R_report},
                             {"Delta_report", r.Delta_report},
                             {"ratio", r.ratio}});
    return j;
}

json to_json(const Census& c) {
    json j;
    j["total"] = c.total;
    j["excluded_pairs"] = c.excluded_pairs;
    j["m_kappa"] = c.m_kappa;
    j["lock"] = to_json(c.lock);
    j["tail_collisions"] = c.tail_collisions;
    j["tail_assertion_applies"] = c.tail_assertion_applies;
    j["tail_ok"] = c.tail_ok;
    j["pairs"] = json::array();
    for (const auto& p : c.pairs) j["pairs"].push_back({{"i", p.i}, {"j", p.j}, {"count", p.count}});
    j["events"] = json::array();
    for (const auto& e : c.events) j["events"].push_back(to_json(e));
    return j;
}

json to_json(const LemmaNumericReport& r) {
    return {{"grid", r.grid},
            {"min_slack", {r.min_slack[0], r.min_slack[1], r.min_slack[2]}},
            {"min_ratio", {r.min_ratio[0], r.min_ratio[1], r.min_ratio[2]}},
            {"equality_residual", r.equality_residual},
            {"breakpoint_gap", r.breakpoint_gap},
            {"pass", r.pass}};
}

std::string series_csv(const std::vector<DiagRow>& rows) {
    std::ostringstream os;
    os << "t,R,phi,Delta,D_theta,D_omega,P,E,cluster_fraction,cluster_arc\n";
    for (const auto& d : rows)
        os << num(d.t) << ',' << num(d.R) << ',' << num(d.phi) << ',' << num(d.Delta) << ','
           << num(d.D_theta) << ',' << num(d.D_omega) << ',' << num(d.P) << ',' << num(d.E) << ','
           << num(d.cluster_fraction) << ',' << num(d.cluster_arc) << '\n';
    return os.str();
}

std::string sweep_csv(const SweepResult& s) {
    std::ostringstream os;
    os << "axis,value,kappa,m,D_Omega0,R_end,Delta_end,locked,t_lock,R_report,Delta_report,ratio\n";
    for (const auto& r : s.rows)
        os << s.axis << ',' << num(r.value) << ',' << num(r.kappa) << ',' << num(r.m) << ','
           << num(r.D_Omega0) << ',' << num(r.R_end) << ',' << num(r.Delta_end) << ','
           << (r.locked ? 1 : 0) << ',' << num(r.t_lock) << ',' << num(r.R_report) << ','
           << num(r.Delta_report) << ',' << num(r.ratio) << '\n';
    return os.str();
}

std::string summary_csv(const std::vector<RunRecord>& records) {
    std::ostringstream os;
    os << "index,N,m,kappa,R0,D_Omega0,certificates_passed,certificates_total,locked,t_lock,"
          "collisions,R_final\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        std::size_t passed = 0;
        for (const auto& c : r.certificates) passed += c.pass ? 1 : 0;
        os << i << ',' << r.instance.params.size() << ',' << num(r.instance.params.m) << ','
           << num(r.instance.params.kappa) << ',' << num(r.R0) << ',' << num(r.D_Omega0) << ','
           << passed << ',' << r.certificates.size() << ',' << (r.lock.locked ? 1 : 0) << ','
           << num(r.lock.t_lock) << ',' << r.collisions.size() << ','
           << (r.series.empty() ? std::string() : num(r.series.back().R)) << '\n';
    }
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path);
}

void write_run_directory(const std::string& dir, const json& config,
                         const std::vector<RunRecord>& records) {
    namespace fs = std::filesystem;
    const fs::path root(dir);
    fs::create_directories(root / "records");
    fs::create_directories(root / "series");
    write_text((root / "config.json").string(), config.dump(2) + "\n");
    json files = json::array();
    for (std::size_t i = 0; i < records.size(); ++i) {
        const std::string rec = "records/" + padded(i) + ".json";
        const std::string ser = "series/" + padded(i) + ".csv";
        write_text((root / rec).string(), to_json(records[i]).dump(2) + "\n");
        write_text((root / ser).string(), series_csv(records[i].series));
        files.push_back(rec);
        files.push_back(ser);
    }
    write_text((root / "summary.csv").string(), summary_csv(records));
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream stamp;
    stamp << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    json manifest = {{"code_version", code_version()},
                     {"created_utc", stamp.str()},
                     {"records", records.size()},
                     {"files", files}};
    write_text((root / "manifest.json").string(), manifest.dump(2) + "\n");
}

} // namespace kuramoto
