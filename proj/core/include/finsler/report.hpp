#pragma once

#include <optional>
#include <string>

#include "finsler/classify.hpp"
#include "finsler/curvature.hpp"
#include "finsler/transport.hpp"

#include <json.hpp>

namespace finsler {

/// One CLI invocation. The seed and every tolerance are echoed into outputs.
struct RunConfig {
    std::string subcommand;
    std::string metric_id;   // catalog id, or empty when metric_file is set
    std::string metric_file; // DSL file path
    int n = 2;
    std::optional<double> c;
    std::optional<double> t;
    std::optional<int> k;
    int samples = 32;
    std::uint64_t seed = 42;
    Tolerances tolerances;
    int ode_steps = 1000;
    DerivativeMode mode = DerivativeMode::jet;
    std::string json_path;
    std::string csv_path;
    std::string theorem; // A | B | transform | lemma-inner
};

inline const char* to_string(DerivativeMode mode) {
    return mode == DerivativeMode::jet ? "jet" : "fd-oracle";
}

MetricDefinition resolve_metric(const RunConfig& config);
SamplePlan plan_from(const RunConfig& config);

nlohmann::json config_json(const RunConfig& config);
nlohmann::json classification_json(const ClassificationReport& report);
nlohmann::json equivalence_json(const EquivalenceReport& report);
nlohmann::json scan_json(const HscScan& scan);

/// Report document shell: schema_version, tool, config echo.
nlohmann::json report_shell(const RunConfig& config);

/// Runners behind the CLI subcommands. Verdicts are data in the report, not
/// exit codes; config errors throw ParamError/SyntaxError before any run.
nlohmann::json run_classify(const RunConfig& config);
nlohmann::json run_curvature(const RunConfig& config, std::string* csv);
nlohmann::json run_transport(const RunConfig& config, std::string* csv);
nlohmann::json run_verify(const RunConfig& config);

/// CSV emission (documented, stable column order).
std::string curvature_csv(const HscScan& scan, int n);
std::string trajectory_csv(const TrajectoryRecord& record);
std::string transport_csv(const TransportResult& result);

} // namespace finsler
