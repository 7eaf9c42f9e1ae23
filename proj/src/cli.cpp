#include "kuramoto/cli.hpp"

#include "kuramoto/experiments.hpp"
#include "kuramoto/selftest.hpp"
#include "kuramoto/serialize.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace kuramoto {

namespace {

struct Common {
    std::string config;
    std::string out;
    bool json_out = false;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> overrides;
};

json load_document(const Common& c, std::ostream& err) {
    json doc = c.config.empty() ? json::object() : load_json_file(c.config);
    validate_against_schema(doc, scenario_schema());
    for (const auto& o : c.overrides) {
        apply_override(doc, o);
        err << "override " << o << "\n";
    }
    if (c.seed) {
        doc["seed"] = *c.seed;
        err << "override seed=" << *c.seed << "\n";
    }
    return doc;
}

ScenarioConfig load_config(const Common& c, std::ostream& err) {
    ScenarioConfig cfg = config_from_json(load_document(c, err));
    for (const auto& w : cfg.warnings) err << "warning: " << w << "\n";
    return cfg;
}

bool all_pass(const std::vector<CertificateReport>& reps) {
    return !reps.empty() &&
           std::all_of(reps.begin(), reps.end(), [](const CertificateReport& r) { return r.pass; });
}

void print_certificates(const std::vector<CertificateReport>& reps, std::ostream& out) {
    for (const auto& r : reps) {
        out << to_string(r.which) << ": " << (r.pass ? "certified" : "not certified") << "\n";
        for (const auto& c : r.per_condition)
            out << "  " << std::left << std::setw(16) << c.name << " value " << std::setw(14)
                << c.value << " bound " << std::setw(14) << c.bound << " margin " << c.margin
                << (c.pass ? "" : "  FAIL") << "\n";
        if (r.selected)
            out << "  selected eta=" << r.selected->eta << " delta=" << r.selected->delta
                << " lambda=" << r.selected->lambda << " ell=" << r.selected->ell << "\n";
        for (const auto& n : r.notes) out << "  note: " << n << "\n";
    }
}

int cmd_simulate(const Common& c, std::ostream& out, std::ostream& err) {
    const json doc = load_document(c, err);
    ScenarioConfig cfg = config_from_json(doc);
    for (const auto& w : cfg.warnings) err << "warning: " << w << "\n";
    const RunRecord rec = run_scenario(cfg);
    const std::string dir = c.out.empty() ? "run" : c.out;
    write_run_directory(dir, config_to_json(cfg), {rec});
    json brief = {{"out", dir},
                  {"R0", rec.R0},
                  {"R_final", rec.series.empty() ? 0.0 : rec.series.back().R},
                  {"lock", to_json(rec.lock)},
                  {"collisions", rec.collisions.size()},
                  {"certified", all_pass(rec.certificates)}};
    if (c.json_out)
        out << brief.dump(2) << "\n";
    else
        out << "wrote " << dir << " (locked: " << (rec.lock.locked ? "yes" : "no")
            << ", R_final " << brief["R_final"].get<double>() << ")\n";
    return 0;
}

int cmd_certify(const Common& c, std::ostream& out, std::ostream& err) {
    const ScenarioConfig cfg = load_config(c, err);
    std::vector<CertificateReport> reps;
    if (cfg.summary && !cfg.instance)
        reps = certify_summary(cfg);
    else
        reps = run_certificates(cfg, generate_instance(cfg));
    if (reps.empty()) throw InputError("no certificate applies to this configuration");
    const bool pass = all_pass(reps);
    if (c.json_out) {
        json arr = json::array();
        for (const auto& r : reps) arr.push_back(to_json(r));
        out << json{{"pass", pass}, {"certificates", arr}}.dump(2) << "\n";
    } else {
        print_certificates(reps, out);
    }
    return pass ? 0 : 2;
}

int cmd_sweep(const Common& c, std::ostream& out, std::ostream& err) {
    const ScenarioConfig cfg = load_config(c, err);
    if (!cfg.sweep) throw ConfigError("/sweep", "sweep section required");
    const auto& sw = *cfg.sweep;
    const SweepResult res = figure_sweep(sw.axis, sw.values, cfg, sw.fresh_samples, sw.report_time);
    const std::string dir = c.out.empty() ? "sweep" : c.out;
    write_run_directory(dir, config_to_json(cfg), res.records);
    write_text(dir + "/sweep.csv", sweep_csv(res));
    write_text(dir + "/sweep.json", to_json(res).dump(2) + "\n");
    if (c.json_out)
        out << to_json(res).dump(2) << "\n";
    else
        out << sweep_csv(res);
    return 0;
}

std::string svg_chart(const std::string& title, const std::string& ylabel, const SweepResult& res,
                      bool use_delta) {
    constexpr double W = 640, H = 400, L = 60, R = 150, T = 40, B = 50;
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                   "#8c564b", "#e377c2", "#17becf"};
    double tmax = 0.0, ymax = 0.0;
    for (const auto& rec : res.records)
        for (const auto& row : rec.series) {
            tmax = std::max(tmax, row.t);
            ymax = std::max(ymax, use_delta ? row.Delta : row.R);
        }
    if (tmax <= 0.0) tmax = 1.0;
    ymax = use_delta ? std::max(ymax, 1e-12) * 1.05 : 1.0;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">t (0 to "
       << tmax << ")</text>\n";
    os << "<text x=\"15\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 15 "
       << (T + H - B) / 2 << ")\" text-anchor=\"middle\">" << ylabel << " (0 to " << ymax
       << ")</text>\n";
    for (std::size_t k = 0; k < res.records.size(); ++k) {
        const char* col = colors[k % 8];
        os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.2\" points=\"";
        for (const auto& row : res.records[k].series) {
            const double y = use_delta ? row.Delta : row.R;
            os << std::fixed << std::setprecision(2) << L + (W - L - R) * row.t / tmax << ','
               << (H - B) - (H - B - T) * y / ymax << ' ';
        }
        os << std::defaultfloat << "\"/>\n";
        os << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 18 * (k + 1) << "\" fill=\"" << col
           << "\">" << res.axis << " = " << res.rows[k].value << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

int cmd_figures(const Common& c, std::ostream& out, std::ostream& err) {
    const std::string dir = c.out.empty() ? "figures" : c.out;
    std::filesystem::create_directories(dir);
    json summary = json::object();
    for (auto spec : figure_specs(c.seed.value_or(1))) {
        if (!c.overrides.empty()) {
            json doc = config_to_json(spec.base);
            for (const auto& o : c.overrides) {
                apply_override(doc, o);
                err << "override " << o << " (" << spec.name << ")\n";
            }
            spec.base = config_from_json(doc);
        }
        err << spec.name << ": sweeping " << spec.axis << "\n";
        const SweepResult res = figure_sweep(spec.axis, spec.values, spec.base, false, 30.0);
        write_text(dir + "/" + spec.name + ".csv", sweep_csv(res));
        for (std::size_t k = 0; k < res.records.size(); ++k) {
            std::ostringstream name;
            name << dir << "/" << spec.name << "_series_" << k << ".csv";
            write_text(name.str(), series_csv(res.records[k].series));
        }
        write_text(dir + "/" + spec.name + "_R.svg",
                   svg_chart(spec.name + ": R(t)", "R", res, false));
        write_text(dir + "/" + spec.name + "_Delta.svg",
                   svg_chart(spec.name + ": Delta(t)", "Delta", res, true));
        summary[spec.name] = to_json(res);
    }
    write_text(dir + "/figures.json", summary.dump(2) + "\n");
    if (c.json_out)
        out << summary.dump(2) << "\n";
    else
        out << "wrote " << dir << "\n";
    return 0;
}

int cmd_collide(const Common& c, std::ostream& out, std::ostream& err) {
    const ScenarioConfig cfg = load_config(c, err);
    const Census census = collision_census(cfg);
    const json j = to_json(census);
    if (!c.out.empty()) write_text(c.out + "/census.json", j.dump(2) + "\n");
    if (c.json_out) {
        out << j.dump(2) << "\n";
    } else {
        out << "collisions " << census.total << " over " << census.pairs.size() << " pairs ("
            << census.excluded_pairs << " indistinguishable pairs skipped)\n";
        for (const auto& p : census.pairs)
            if (p.count) out << "  (" << p.i << ", " << p.j << "): " << p.count << "\n";
        out << "locked " << (census.lock.locked ? "yes" : "no") << ", tail collisions "
            << census.tail_collisions << "\n";
    }
    return census.tail_ok ? 0 : 2;
}

int cmd_selftest(bool json_out, double perturb, std::ostream& out) {
    const auto checks = run_selftest(perturb);
    bool ok = true;
    for (const auto& ch : checks) ok = ok && ch.pass;
    if (json_out) {
        out << selftest_json(checks).dump(2) << "\n";
    } else {
        for (const auto& ch : checks)
            out << (ch.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(48) << ch.name
                << " err " << ch.error << " tol " << ch.tolerance
                << (ch.detail.empty() ? "" : "  [" + ch.detail + "]") << "\n";
        out << (ok ? "all checks passed" : "selftest FAILED") << "\n";
    }
    return ok ? 0 : 1;
}

} // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Inertial Kuramoto simulation and phase-locking certificates"};
    app.set_version_flag("--version", code_version());
    app.require_subcommand(1, 1);

    Common c;
    std::uint64_t seed = 0;
    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", c.config, "scenario JSON file");
        if (config_required) opt->required();
        sub->add_option("--out", c.out, "output directory");
        sub->add_flag("--json", c.json_out, "machine-readable output on stdout");
        sub->add_option("--seed", seed, "RNG seed (overrides the config)");
        sub->add_option("--set", c.overrides, "dotted KEY=VALUE override, repeatable");
    };
    auto* simulate = app.add_subcommand("simulate", "integrate one scenario and write a run directory");
    add_common(simulate, true);
    auto* certify = app.add_subcommand("certify", "evaluate the locking certificates");
    add_common(certify, true);
    auto* sweep = app.add_subcommand("sweep", "run a one-parameter sweep");
    add_common(sweep, true);
    auto* figures = app.add_subcommand("figures", "regenerate the three regime sweeps as CSV and SVG");
    add_common(figures, false);
    auto* collide = app.add_subcommand("collide", "collision census for one scenario");
    add_common(collide, true);
    auto* selftest = app.add_subcommand("selftest", "run the embedded invariant checks");
    bool st_json = false;
    double perturb = 0.0;
    selftest->add_flag("--json", st_json, "JSON output");
    selftest->add_option("--perturb-constant", perturb)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }
    for (auto* sub : {simulate, certify, sweep, figures, collide})
        if (sub->parsed() && sub->count("--seed")) c.seed = seed;

    try {
        if (simulate->parsed()) return cmd_simulate(c, out, err);
        if (certify->parsed()) return cmd_certify(c, out, err);
        if (sweep->parsed()) return cmd_sweep(c, out, err);
        if (figures->parsed()) return cmd_figures(c, out, err);
        if (collide->parsed()) return cmd_collide(c, out, err);
        if (selftest->parsed()) return cmd_selftest(st_json, perturb, out);
    } catch (const NumericAbort& e) {
        err << "numeric abort at t=" << e.time() << ": " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

} // namespace kuramoto
