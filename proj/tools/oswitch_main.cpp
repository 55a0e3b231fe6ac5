#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "oswitch/audit.hpp"
#include "oswitch/csvio.hpp"
#include "oswitch/log.hpp"
#include "oswitch/scenario.hpp"
#include "oswitch/sim.hpp"
#include "oswitch/tracegen.hpp"

namespace fs = std::filesystem;
using namespace oswitch;

namespace {

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& writer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cli: cannot write " + path.string());
    writer(out);
}

Scenario load_scenario_checked(const std::string& path, std::uint64_t seed_override) {
    if (!fs::exists(path)) throw std::runtime_error("scenario file not found: " + path);
    Scenario sc = Scenario::load(path);
    if (seed_override != 0) {
        // regenerate inline traces under the new seed when the scenario uses a spec
        ConfigFile cfg = ConfigFile::parse_file(path);
        if (cfg.has("traces", "generate")) {
            const fs::path base = fs::path(path).parent_path();
            TraceGenSpec spec = TraceGenSpec::load((base / cfg.get("traces", "generate")).string());
            GeneratedTraces regenerated = generate_traces(spec, seed_override);
            sc.outlet_traces = std::move(regenerated.outlets);
            sc.pv_dc_trace = std::move(regenerated.pv_dc);
            sc.seed = seed_override;
            sc.validate();
        }
    }
    return sc;
}

std::vector<double> parse_margins(const std::string& text) {
    std::vector<double> margins;
    for (const auto& token : split_csv_line(text)) {
        const double m = parse_double(token, "margin");
        if (m < 0.0 || m >= 1.0) throw CLI::ValidationError("--margins", "margins must be in [0,1)");
        margins.push_back(m);
    }
    if (margins.empty()) throw CLI::ValidationError("--margins", "at least one margin required");
    return margins;
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_dir, std::uint64_t seed) {
    Scenario sc = load_scenario_checked(scenario_path, seed);
    fs::create_directories(out_dir);

    Simulation sim(sc);
    const MetricsReport& report = sim.run();

    write_file(fs::path(out_dir) / "report.csv",
               [&](std::ostream& o) { write_report_csv(o, std::span(&report, 1)); });
    write_file(fs::path(out_dir) / "summary.txt",
               [&](std::ostream& o) { write_summary(o, report, sim.lack_events()); });
    write_file(fs::path(out_dir) / "events.csv", [&](std::ostream& o) { sim.export_bus_log(o); });
    write_file(fs::path(out_dir) / "history.csv", [&](std::ostream& o) { sim.export_history(o); });
    write_file(fs::path(out_dir) / "lacks.csv", [&](std::ostream& o) { sim.export_lacks(o); });

    log_info("cli: simulate wrote report.csv, summary.txt, events.csv, history.csv, lacks.csv to " +
             out_dir);
    std::cout << "policy " << report.policy_name << ": saving " << report.saving_percent
              << "% of consumption, " << report.error_count << " energy lacks, " << report.switch_count
              << " switches\n";
    return 0;
}

int cmd_sweep(const std::string& scenario_path, const std::string& margins_text,
              const std::string& out_dir, std::uint64_t seed) {
    Scenario sc = load_scenario_checked(scenario_path, seed);
    const std::vector<double> margins = parse_margins(margins_text);
    fs::create_directories(out_dir);

    const std::vector<MetricsReport> rows = sweep(sc, margins);
    write_file(fs::path(out_dir) / "sweep.csv", [&](std::ostream& o) { write_report_csv(o, rows); });

    for (const auto& r : rows)
        std::cout << "margin " << r.margin << ": saving " << r.saving_percent << "%, errors "
                  << r.error_count << "\n";
    return 0;
}

int cmd_gen_traces(const std::string& spec_path, std::uint64_t seed, const std::string& out_dir) {
    if (!fs::exists(spec_path)) throw std::runtime_error("trace spec file not found: " + spec_path);
    TraceGenSpec spec = TraceGenSpec::load(spec_path);
    GeneratedTraces traces = generate_traces(spec, seed);
    fs::create_directories(out_dir);

    write_file(fs::path(out_dir) / "outlets.csv",
               [&](std::ostream& o) { write_outlet_traces(o, traces.outlets); });
    write_file(fs::path(out_dir) / "pv.csv", [&](std::ostream& o) { write_pv_trace(o, traces.pv_dc); });
    std::cout << "generated " << traces.outlets.size() << " outlet traces over " << spec.days
              << " days\n";
    return 0;
}

int cmd_export_stats(const std::string& scenario_path, const std::string& out_path,
                     std::uint64_t seed) {
    Scenario sc = load_scenario_checked(scenario_path, seed);
    Simulation sim(sc);
    sim.run();
    write_file(out_path, [&](std::ostream& o) { sim.export_stats(o); });
    std::cout << "slot statistics written to " << out_path << "\n";
    return 0;
}

// trace files in the audit directory: gateway history CSVs or outlet trace
// CSVs, distinguished by header
std::map<std::string, StepSeries> load_audit_traces(const std::string& dir) {
    std::map<std::string, StepSeries> lines;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        std::ifstream in(file);
        std::string header;
        std::getline(in, header);
        in.close();
        if (header.rfind("time_s,outlet_id,watts", 0) == 0) {
            auto traces = load_outlet_traces(file.string());
            for (std::size_t o = 0; o < traces.size(); ++o) {
                if (traces[o].empty()) continue;
                lines["outlet" + std::to_string(o)] = std::move(traces[o]);
            }
        } else if (header.rfind("time_s,channel,", 0) == 0) {
            std::ifstream rows(file);
            std::string line;
            std::getline(rows, line); // header
            std::map<std::string, StepSeries> partial;
            std::size_t lineno = 1;
            while (std::getline(rows, line)) {
                ++lineno;
                if (line.empty()) continue;
                auto fields = split_csv_line(line);
                if (fields.size() != 7)
                    throw std::runtime_error("audit: bad history row at " + file.string() + ":" +
                                             std::to_string(lineno));
                partial[fields[1]].append(parse_double(fields[0], "time_s"),
                                          parse_double(fields[5], "active_w"));
            }
            for (auto& [name, series] : partial) lines[name] = std::move(series);
        } else {
            throw std::runtime_error("audit: unrecognized CSV header in " + file.string());
        }
    }
    if (lines.empty()) throw std::runtime_error("audit: no usable trace CSVs in " + dir);
    return lines;
}

int cmd_audit(const std::string& trace_dir, const std::string& registry_path,
              const std::string& schedule_path, double tariff, const std::string& out_dir) {
    if (!fs::exists(trace_dir)) throw std::runtime_error("trace directory not found: " + trace_dir);
    if (!fs::exists(registry_path)) throw std::runtime_error("registry file not found: " + registry_path);
    if (!fs::exists(schedule_path)) throw std::runtime_error("schedule file not found: " + schedule_path);

    auto lines = load_audit_traces(trace_dir);
    DeviceRegistry registry = DeviceRegistry::load_file(registry_path);
    ClosingSchedule schedule = ClosingSchedule::load_file(schedule_path);

    std::map<std::string, bool> interruptible;
    for (const auto& [name, series] : lines) {
        if (!registry.has(name))
            throw std::runtime_error("audit: line '" + name + "' is not in the registry");
        interruptible[name] = registry.lookup(name).interruptible;
    }

    AuditReport report = run_audit(lines, interruptible, schedule, tariff);
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "audit.csv", [&](std::ostream& o) { write_audit_csv(o, report); });
    write_file(fs::path(out_dir) / "audit_summary.txt",
               [&](std::ostream& o) { write_audit_summary(o, report); });

    std::cout << "baseline " << report.baseline_w << " W, closing average " << report.closing_avg_w
              << " W, reducible to " << report.reduction.reducible_to_w << " W\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Photovoltaic self-consumption simulator and office consumption analyzer"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string spec_path;
    std::string out_dir = "out";
    std::string out_path = "stats.csv";
    std::string margins_text = "0,0.1,0.2,0.3,0.4";
    std::string trace_dir;
    std::string registry_path;
    std::string schedule_path;
    double tariff = 0.20;
    std::uint64_t seed = 0;

    auto* simulate = app.add_subcommand("simulate", "Run a scenario and write its reports");
    simulate->add_option("--scenario", scenario_path, "Scenario file")->required();
    simulate->add_option("--out", out_dir, "Output directory");
    simulate->add_option("--seed", seed, "Override the scenario seed");

    auto* sweep_cmd = app.add_subcommand("sweep", "Run one scenario per safety margin");
    sweep_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
    sweep_cmd->add_option("--margins", margins_text, "Comma-separated margins in [0,1)");
    sweep_cmd->add_option("--out", out_dir, "Output directory");
    sweep_cmd->add_option("--seed", seed, "Override the scenario seed");

    auto* gen = app.add_subcommand("gen-traces", "Generate synthetic outlet and PV traces");
    gen->add_option("--spec", spec_path, "Trace spec file")->required();
    gen->add_option("--seed", seed, "Override the spec seed");
    gen->add_option("--out", out_dir, "Output directory");

    auto* stats = app.add_subcommand("export-stats", "Run a scenario and export slot statistics");
    stats->add_option("--scenario", scenario_path, "Scenario file")->required();
    stats->add_option("--out", out_path, "Output CSV path");
    stats->add_option("--seed", seed, "Override the scenario seed");

    auto* audit_cmd = app.add_subcommand("audit", "Analyze consumption traces against a schedule");
    audit_cmd->add_option("--traces", trace_dir, "Directory of trace CSVs")->required();
    audit_cmd->add_option("--registry", registry_path, "Device registry file")->required();
    audit_cmd->add_option("--schedule", schedule_path, "Opening-hours schedule file")->required();
    audit_cmd->add_option("--tariff", tariff, "Energy unit cost per kWh");
    audit_cmd->add_option("--out", out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2; // usage error
    }

    try {
        if (simulate->parsed()) return cmd_simulate(scenario_path, out_dir, seed);
        if (sweep_cmd->parsed()) return cmd_sweep(scenario_path, margins_text, out_dir, seed);
        if (gen->parsed()) return cmd_gen_traces(spec_path, seed, out_dir);
        if (stats->parsed()) return cmd_export_stats(scenario_path, out_path, seed);
        if (audit_cmd->parsed()) return cmd_audit(trace_dir, registry_path, schedule_path, tariff, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "oswitch: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
