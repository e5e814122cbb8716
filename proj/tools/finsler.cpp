#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "finsler/report.hpp"
#include "finsler/version.hpp"

namespace {

using finsler::RunConfig;

void add_common_options(CLI::App* cmd, RunConfig& config, std::string& mode) {
    cmd->add_option("--metric", config.metric_id,
                    "catalog metric id (euclidean, minkowski_tk, bergman_ball/bergman, "
                    "fubini_study, hermitian_nonkahler, polydisk_tk)");
    cmd->add_option("--metric-file", config.metric_file,
                    "DSL file: '# n = <dim>' header line, then one F^2 expression over "
                    "z[i]/v[i], conj, re, im, abs2, sqrt, pow(e,rational), sum_i, "
                    "norm2z, norm2v, herm");
    cmd->add_option("--n", config.n, "complex dimension (catalog metrics)");
    cmd->add_option("--c", [&config](const CLI::results_t& r) {
        config.c = std::stod(r[0]);
        return true;
    }, "curvature-scale parameter (bergman_ball: c<0, fubini_study: c>0)");
    cmd->add_option("--t", [&config](const CLI::results_t& r) {
        config.t = std::stod(r[0]);
        return true;
    }, "Minkowski perturbation strength t >= 0");
    cmd->add_option("--k", [&config](const CLI::results_t& r) {
        config.k = std::stoi(r[0]);
        return true;
    }, "Minkowski exponent, integer k >= 2");
    cmd->add_option("--samples", config.samples, "sample-plan size")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", config.seed, "seed feeding all randomness in the run");
    cmd->add_option("--tol", [&config](const CLI::results_t& r) {
        const double tol = std::stod(r[0]);
        config.tolerances.jet = tol;
        config.tolerances.fd = tol;
        return true;
    }, "override the residual tolerance for the active derivative mode");
    cmd->add_option("--ode-steps", config.ode_steps, "integrator steps per unit time")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--derivative-mode", mode, "jet | fd-oracle")
        ->check(CLI::IsMember({"jet", "fd-oracle"}));
    cmd->add_option("--json", config.json_path, "write the JSON report here");
    cmd->add_option("--csv", config.csv_path, "write CSV rows here");
}

int write_outputs(const RunConfig& config, const nlohmann::json& report, const std::string& csv) {
    const std::string text = report.dump(2);
    if (config.json_path.empty()) {
        std::cout << text << '\n';
    } else {
        std::ofstream out(config.json_path);
        if (!out) {
            std::cerr << "error: cannot write " << config.json_path << '\n';
            return 3;
        }
        out << text << '\n';
    }
    if (!config.csv_path.empty()) {
        std::ofstream out(config.csv_path);
        if (!out) {
            std::cerr << "error: cannot write " << config.csv_path << '\n';
            return 3;
        }
        out << csv;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(finsler::kToolName) +
                 ": connection, curvature, and transport diagnostics for strongly convex "
                 "complex Finsler metrics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", finsler::kToolVersion);

    RunConfig config;
    std::string mode = "jet";

    auto* cmd_classify = app.add_subcommand(
        "classify", "evaluate every metric-class predicate over a sample plan");
    add_common_options(cmd_classify, config, mode);
    auto* cmd_curvature = app.add_subcommand(
        "curvature", "holomorphic sectional curvature scan (CSV: z, v, hsc rows)");
    add_common_options(cmd_curvature, config, mode);
    auto* cmd_transport = app.add_subcommand(
        "transport", "geodesic + parallel-transport diagnostics (CSV: trajectory, transport)");
    add_common_options(cmd_transport, config, mode);
    auto* cmd_verify =
        app.add_subcommand("verify", "theorem-level equivalence and identity suites");
    add_common_options(cmd_verify, config, mode);
    cmd_verify->add_option("--theorem", config.theorem, "A | B | transform | lemma-inner")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    config.mode = mode == "jet" ? finsler::DerivativeMode::jet : finsler::DerivativeMode::fd_oracle;

    const auto started = std::chrono::steady_clock::now();
    try {
        nlohmann::json report;
        std::string csv;
        if (cmd_classify->parsed()) {
            config.subcommand = "classify";
            report = finsler::run_classify(config);
        } else if (cmd_curvature->parsed()) {
            config.subcommand = "curvature";
            report = finsler::run_curvature(config, &csv);
        } else if (cmd_transport->parsed()) {
            config.subcommand = "transport";
            report = finsler::run_transport(config, &csv);
        } else {
            config.subcommand = "verify";
            report = finsler::run_verify(config);
        }
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - started)
                                 .count();
        // Wall-clock goes to stderr only: reports must be byte-identical
        // across reruns of one config.
        std::cerr << config.subcommand << " completed in " << elapsed << " ms\n";
        return write_outputs(config, report, csv);
    } catch (const finsler::SyntaxError& e) {
        std::cerr << "error (" << e.line << ":" << e.column << "): " << e.what() << '\n';
        return 2;
    } catch (const finsler::ParamError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const finsler::Error& e) {
        std::cerr << "evaluation aborted: " << e.what() << '\n';
        return 3;
    }
}
