#pragma once

#include "kuramoto/experiments.hpp"

#include <string>

namespace kuramoto {

json to_json(const SystemParams& p);
json to_json(const PhaseState& s);
json to_json(const Condition& c);
json to_json(const CertificateReport& r);
json to_json(const LockReport& r);
json to_json(const CollisionEvent& e);
json to_json(const ClusterReport& c);
json to_json(const RunRecord& r, bool with_series = false);
json to_json(const SweepResult& s);
json to_json(const Census& c);
json to_json(const LemmaNumericReport& r);

std::string series_csv(const std::vector<DiagRow>& rows);
std::string sweep_csv(const SweepResult& s);
std::string summary_csv(const std::vector<RunRecord>& records);

void write_text(const std::string& path, const std::string& text);

// config.json, records/NNNN.json, series/NNNN.csv, summary.csv and a manifest with timestamps.
void write_run_directory(const std::string& dir, const json& config,
                         const std::vector<RunRecord>& records);

} // namespace kuramoto
