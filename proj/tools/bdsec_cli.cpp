// bdsec: beam-domain secrecy-rate solver and experiment runner.
//
// Verbs:
//   solve        run the power-allocation solver at each SNR point
//   sweep        SNR sweep comparing MC secrecy rates with the bound
//   convergence  emit per-iteration traces for the outer/inner loops
//   verify       run the property suites, JSON report
//   bench        per-iteration wall time over a (K, M) grid
//
// Exit codes: 0 ok, 2 config error, 3 solver failure, 4 verification failure.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "bdsec/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitVerify = 4;

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;
};

bdsec::ScenarioConfig load_config(const CliOptions& opt) {
    bdsec::ScenarioConfig cfg = bdsec::scenario_from_json(bdsec::load_json_file(opt.config_path));
    if (opt.seed_set) cfg.seed = opt.seed;
    if (!opt.out_dir.empty()) cfg.outputs.dir = opt.out_dir;
    if (!opt.format.empty()) cfg.outputs.format = opt.format;
    if (opt.workers > 0) cfg.workers = opt.workers;
    cfg.validate();
    return cfg;
}

std::string out_path(const bdsec::ScenarioConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.outputs.dir);
    return (std::filesystem::path(cfg.outputs.dir) / name).string();
}

void write_sidecar(const bdsec::ScenarioConfig& cfg, const std::string& artifact,
                   bdsec::json sidecar) {
    bdsec::write_text_file(out_path(cfg, artifact + ".meta.json"), sidecar.dump(2) + "\n");
}

int cmd_solve(const bdsec::ScenarioConfig& cfg) {
    const bdsec::CouplingSet coupling = bdsec::resolve_coupling(cfg);
    bdsec::json points = bdsec::json::array();
    std::string csv = bdsec::rate_report_csv_header() + "\n";
    for (std::size_t i = 0; i < cfg.snr_db.size(); ++i) {
        const double P = std::pow(10.0, cfg.snr_db[i] / 10.0);
        bdsec::CccpResult sol = bdsec::cccp_solve(coupling.users, coupling.eve, P, cfg.solver);
        const std::uint64_t point_seed =
            bdsec::substream_seed(cfg.seed, 0x5EEDULL, static_cast<std::uint64_t>(i), 0);
        bdsec::RateReport rep = bdsec::secrecy_rates(sol.alloc, coupling.users, coupling.eve,
                                                     cfg.mc_samples, point_seed);
        points.push_back({{"snr_db", cfg.snr_db[i]},
                          {"objective_bits", sol.objective_bits},
                          {"iterations", sol.iterations},
                          {"allocation", sol.alloc.lambdas},
                          {"report", bdsec::rate_report_to_json(rep)}});
        for (const auto& row : bdsec::rate_report_csv_rows(cfg.snr_db[i], rep)) csv += row + "\n";
    }
    if (cfg.outputs.format == "json")
        bdsec::write_text_file(out_path(cfg, "solve.json"),
                               bdsec::json{{"points", points}}.dump(2) + "\n");
    else
        bdsec::write_text_file(out_path(cfg, "solve.csv"), csv);
    write_sidecar(cfg, "solve",
                  {{"artifact", "solve"},
                   {"config_hash", bdsec::config_hash(bdsec::scenario_to_json(cfg))},
                   {"seed", cfg.seed},
                   {"workers", cfg.workers}});
    return kExitOk;
}

int cmd_sweep(const bdsec::ScenarioConfig& cfg) {
    const bdsec::CouplingSet coupling = bdsec::resolve_coupling(cfg);
    bdsec::SweepArtifact art = bdsec::run_sweep(cfg, coupling);
    bdsec::write_text_file(out_path(cfg, "sweep.csv"), art.csv);
    write_sidecar(cfg, "sweep", art.sidecar);
    bool any_ok = false;
    for (const auto& row : art.rows) {
        if (row.ok)
            any_ok = true;
        else
            std::cerr << "sweep: point " << row.snr_db << " dB failed: " << row.error << "\n";
    }
    return any_ok ? kExitOk : kExitSolver;
}

int cmd_convergence(const bdsec::ScenarioConfig& cfg) {
    const bdsec::CouplingSet coupling = bdsec::resolve_coupling(cfg);
    bdsec::ConvergenceArtifact art = bdsec::run_convergence(cfg, coupling);
    bdsec::write_text_file(out_path(cfg, "convergence.csv"), art.csv);
    write_sidecar(cfg, "convergence", art.sidecar);
    bool any_ok = false;
    for (const auto& pt : art.points) {
        if (pt.ok)
            any_ok = true;
        else
            std::cerr << "convergence: point " << pt.snr_db << " dB failed: " << pt.error << "\n";
    }
    return any_ok ? kExitOk : kExitSolver;
}

int cmd_verify(const bdsec::ScenarioConfig& cfg, bool inject_fault) {
    bdsec::VerifyReport rep = bdsec::run_verify(cfg, inject_fault);
    const bdsec::json j = rep.to_json();
    const auto schema_errors = bdsec::validate_schema(j, bdsec::verify_report_schema());
    bdsec::write_text_file(out_path(cfg, "verify.json"), j.dump(2) + "\n");
    write_sidecar(cfg, "verify",
                  {{"artifact", "verify"},
                   {"config_hash", bdsec::config_hash(bdsec::scenario_to_json(cfg))},
                   {"seed", cfg.seed},
                   {"workers", cfg.workers}});
    for (const auto& s : rep.suites)
        std::cout << (s.pass ? "PASS " : "FAIL ") << s.name << "\n";
    if (!schema_errors.empty()) {
        for (const auto& e : schema_errors) std::cerr << "verify schema: " << e << "\n";
        return kExitVerify;
    }
    return rep.all_pass ? kExitOk : kExitVerify;
}

int cmd_bench(const bdsec::ScenarioConfig& cfg) {
    bdsec::BenchArtifact art = bdsec::bench_complexity(cfg);
    bdsec::write_text_file(out_path(cfg, "bench.csv"), art.csv);
    write_sidecar(cfg, "bench", art.sidecar);
    std::cout << "log-log slope: " << art.loglog_slope << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Beam-domain secrecy sum-rate solver"};
    app.require_subcommand(1);

    CliOptions opt;
    bool inject_fault = false;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "Scenario config (JSON)")->required();
        sub->add_option("--seed", opt.seed, "Override the config seed")
            ->each([&](const std::string&) { opt.seed_set = true; });
        sub->add_option("--out-dir", opt.out_dir, "Override the output directory");
        sub->add_option("--workers", opt.workers, "Worker-thread count");
        sub->add_option("--format", opt.format, "Artifact format")
            ->check(CLI::IsMember({"csv", "json"}));
    };
    CLI::App* solve = app.add_subcommand("solve", "Solve the allocation at each SNR point");
    CLI::App* sweep = app.add_subcommand("sweep", "SNR sweep with MC validation");
    CLI::App* conv = app.add_subcommand("convergence", "Per-iteration traces");
    CLI::App* verify = app.add_subcommand("verify", "Property suites");
    CLI::App* bench = app.add_subcommand("bench", "Per-iteration timing grid");
    for (CLI::App* sub : {solve, sweep, conv, verify, bench}) add_common(sub);
    verify->add_flag("--inject-fault", inject_fault,
                     "Corrupt the linearization gradient sign (failure fixture)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    bdsec::ScenarioConfig cfg;
    try {
        cfg = load_config(opt);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (solve->parsed()) return cmd_solve(cfg);
        if (sweep->parsed()) return cmd_sweep(cfg);
        if (conv->parsed()) return cmd_convergence(cfg);
        if (verify->parsed()) return cmd_verify(cfg, inject_fault);
        if (bench->parsed()) return cmd_bench(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitConfig;
}
