#include "finsler/report.hpp"

#include <sstream>

#include "finsler/chart.hpp"
#include "finsler/dsl.hpp"
#include "finsler/rng.hpp"
#include "finsler/version.hpp"

namespace finsler {

namespace {

nlohmann::json vector_json(const std::vector<double>& values) {
    nlohmann::json array = nlohmann::json::array();
    for (double v : values) {
        if (std::isnan(v))
            array.push_back(nullptr);
        else
            array.push_back(v);
    }
    return array;
}

void append_row(std::ostringstream& out, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) out << ',';
        out << v;
        first = false;
    }
    out << '\n';
}

} // namespace

MetricDefinition resolve_metric(const RunConfig& config) {
    if (!config.metric_file.empty()) {
        if (!config.metric_id.empty())
            throw ParamError("--metric and --metric-file are mutually exclusive");
        return dsl::compile_file(config.metric_file);
    }
    if (config.metric_id.empty()) throw ParamError("a metric is required (--metric or --metric-file)");
    CatalogParams params;
    params.n = config.n;
    params.c = config.c;
    params.t = config.t;
    params.k = config.k;
    return make_catalog_metric(config.metric_id, params);
}

SamplePlan plan_from(const RunConfig& config) {
    SamplePlan plan;
    plan.count = config.samples;
    plan.seed = config.seed;
    return plan;
}

nlohmann::json config_json(const RunConfig& config) {
    nlohmann::json j;
    j["subcommand"] = config.subcommand;
    if (!config.metric_id.empty()) j["metric"] = config.metric_id;
    if (!config.metric_file.empty()) j["metric_file"] = config.metric_file;
    j["n"] = config.n;
    if (config.c) j["c"] = *config.c;
    if (config.t) j["t"] = *config.t;
    if (config.k) j["k"] = *config.k;
    j["samples"] = config.samples;
    j["seed"] = config.seed;
    j["tolerances"] = {{"jet", config.tolerances.jet},
                       {"fd", config.tolerances.fd},
                       {"ode", config.tolerances.ode},
                       {"hsc", config.tolerances.hsc}};
    j["ode_steps"] = config.ode_steps;
    j["derivative_mode"] = to_string(config.mode);
    if (!config.theorem.empty()) j["theorem"] = config.theorem;
    return j;
}

nlohmann::json report_shell(const RunConfig& config) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    j["config"] = config_json(config);
    return j;
}

nlohmann::json classification_json(const ClassificationReport& report) {
    nlohmann::json j;
    j["metric"] = {{"label", report.metric_label}, {"params", report.metric_params}};
    j["plan"] = {{"samples", report.plan.count}, {"seed", report.plan.seed}};
    j["derivative_mode"] = to_string(report.mode);
    j["skipped_samples"] = report.skipped_samples;
    nlohmann::json predicates = nlohmann::json::array();
    for (const auto& p : report.predicates) {
        predicates.push_back({{"name", p.name},
                              {"max_residual", p.max_residual},
                              {"tolerance", p.tolerance},
                              {"verdict", to_string(p.verdict)},
                              {"per_sample", vector_json(p.per_sample)}});
    }
    j["predicates"] = std::move(predicates);
    nlohmann::json implications = nlohmann::json::array();
    for (const auto& check : report.implications)
        implications.push_back(
            {{"name", check.name}, {"consistent", check.consistent}, {"detail", check.detail}});
    j["implications"] = std::move(implications);
    return j;
}

nlohmann::json equivalence_json(const EquivalenceReport& report) {
    nlohmann::json j;
    j["metric"] = report.metric_label;
    j["plan"] = {{"samples", report.plan.count}, {"seed", report.plan.seed}};
    j["skipped_samples"] = report.skipped_samples;
    j["all_consistent"] = report.all_consistent;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& check : report.checks) {
        nlohmann::json legs = nlohmann::json::array();
        for (const auto& leg : check.legs)
            legs.push_back({{"name", leg.name},
                            {"applicable", leg.applicable},
                            {"value", leg.value},
                            {"residual", leg.residual}});
        checks.push_back({{"name", check.name},
                          {"legs", std::move(legs)},
                          {"consistent", check.consistent},
                          {"detail", check.detail}});
    }
    j["checks"] = std::move(checks);
    return j;
}

nlohmann::json scan_json(const HscScan& scan) {
    nlohmann::json j;
    j["per_sample"] = vector_json(scan.per_sample);
    j["min"] = scan.min;
    j["max"] = scan.max;
    j["mean"] = scan.mean;
    j["stddev"] = scan.stddev;
    j["max_imag"] = scan.max_imag;
    j["spread"] = scan.max - scan.min;
    j["tolerance"] = scan.tolerance;
    j["constant"] = scan.constant;
    j["skipped"] = scan.skipped;
    return j;
}

nlohmann::json run_classify(const RunConfig& config) {
    const MetricDefinition metric = resolve_metric(config);
    const auto report = classify(metric, plan_from(config), config.tolerances, config.mode);
    nlohmann::json j = report_shell(config);
    j["classification"] = classification_json(report);
    const auto admissibility = validate(metric, plan_from(config));
    j["admissibility"] = {{"admissible", admissibility.admissible},
                          {"min_eig_real", admissibility.min_eig_real},
                          {"min_eig_complex", admissibility.min_eig_complex},
                          {"max_condition", admissibility.max_condition},
                          {"failures", admissibility.failures}};
    return j;
}

nlohmann::json run_curvature(const RunConfig& config, std::string* csv) {
    const MetricDefinition metric = resolve_metric(config);
    const auto scan =
        constant_hsc_scan(metric, plan_from(config), config.tolerances.hsc, config.mode);
    nlohmann::json j = report_shell(config);
    j["metric"] = {{"label", metric.label}, {"params", metric.params}};
    j["curvature"] = scan_json(scan);

    // Kaehler-Einstein residual at the scan mean when the curvature is
    // constant and nonzero.
    if (scan.constant && std::abs(scan.mean) > 1e-10 && scan.skipped == 0) {
        double worst = 0.0;
        for (const PointState& p : scan.samples) {
            PointEvaluation eval(metric, p, config.mode);
            worst = std::max(worst, ricci_and_ke_residual(eval, scan.mean).ke_residual);
        }
        j["kahler_einstein"] = {{"c", scan.mean}, {"max_residual", worst}};
    }
    if (csv) *csv = curvature_csv(scan, metric.n);
    return j;
}

nlohmann::json run_transport(const RunConfig& config, std::string* csv) {
    const MetricDefinition metric = resolve_metric(config);
    const int n = metric.n;

    // Deterministic start: the origin with a unit-speed real direction when
    // admissible, otherwise the first plan sample.
    RealVector x0 = RealVector::Zero(2 * n);
    RealVector y0 = RealVector::Zero(2 * n);
    y0[0] = 1.0;
    if (metric.contains(ComplexVector::Zero(n))) {
        const PointState probe = PointState::from_real(x0, y0);
        const double f2 = evaluate_f2(metric, probe.z, probe.v);
        y0 /= std::sqrt(f2);
    } else {
        const PointState p = draw_samples(metric, plan_from(config)).front();
        x0 = p.x;
        y0 = p.y;
    }

    const auto trajectory = integrate_geodesic(metric, x0, y0, 1.0, config.ode_steps);
    const auto curve = Curve::from_trajectory(trajectory);

    Rng rng(config.seed);
    ComplexVector seed10(n);
    for (int a = 0; a < n; ++a)
        seed10[a] = std::complex<double>(rng.uniform(-1, 1), rng.uniform(-1, 1));
    RealVector real_seed(2 * n);
    for (int j = 0; j < 2 * n; ++j) real_seed[j] = rng.uniform(-1, 1);

    const double type_residual =
        type_preservation_residual(metric, *curve, seed10, config.ode_steps, config.mode);
    const double commutation =
        j_commutation_residual(metric, *curve, real_seed, config.ode_steps, config.mode);
    const auto transported =
        parallel_transport(metric, *curve, embed_type10(seed10), config.ode_steps, config.mode);

    nlohmann::json j = report_shell(config);
    j["metric"] = {{"label", metric.label}, {"params", metric.params}};
    nlohmann::json final_state = nlohmann::json::array();
    for (int i = 0; i < 2 * n; ++i) final_state.push_back(trajectory.positions.back()[i]);
    j["trajectory"] = {{"t_final", trajectory.times.back()},
                       {"steps", config.ode_steps},
                       {"x_final", std::move(final_state)},
                       {"energy_initial", trajectory.energy.front()},
                       {"energy_drift", trajectory.energy_drift}};
    j["transport"] = {{"type_preservation_residual", type_residual},
                      {"j_commutation_residual", commutation},
                      {"tolerance", config.tolerances.ode},
                      {"metric_value_initial", transported.metric_value.front()},
                      {"metric_value_final", transported.metric_value.back()}};
    if (csv) *csv = trajectory_csv(trajectory) + "\n" + transport_csv(transported);
    return j;
}

nlohmann::json run_verify(const RunConfig& config) {
    const MetricDefinition metric = resolve_metric(config);
    const SamplePlan plan = plan_from(config);
    nlohmann::json j = report_shell(config);
    j["metric"] = {{"label", metric.label}, {"params", metric.params}};

    if (config.theorem == "A" || config.theorem == "B") {
        EquivalenceOptions options;
        options.transport_steps = std::min(config.ode_steps, 400);
        const auto report = verify_equivalences(metric, plan, config.tolerances, config.mode, options);
        nlohmann::json all = equivalence_json(report);
        // Theorem A is the coincidence check, theorem B the transport one.
        const std::size_t wanted = config.theorem == "A" ? 0 : 1;
        j["verify"] = {{"theorem", config.theorem},
                       {"check", all["checks"][wanted]},
                       {"skipped_samples", report.skipped_samples}};
        return j;
    }
    if (config.theorem == "transform") {
        Eigen::MatrixXcd A(metric.n, metric.n);
        Rng rng(config.seed ^ 0xc2b2ae3d27d4eb4full);
        for (int r = 0; r < metric.n; ++r)
            for (int cidx = 0; cidx < metric.n; ++cidx)
                A(r, cidx) = std::complex<double>(rng.uniform(-1, 1), rng.uniform(-1, 1)) +
                             (r == cidx ? 2.0 : 0.0);
        const auto linear = Biholomorphism::linear_map(A);
        const auto quadratic =
            Biholomorphism::quadratic_perturbation(metric.n, 0.05, config.seed ^ 0x1234, 10.0);

        const auto samples = draw_samples(metric, plan);
        const int count = std::min<int>(8, static_cast<int>(samples.size()));
        nlohmann::json maps = nlohmann::json::array();
        for (const auto& [name, map] : {std::pair<const char*, const Biholomorphism&>{"linear", linear},
                                        {"quadratic_eps_0.05", quadratic}}) {
            double horizontal = 0.0, nonlinear = 0.0, vertical = 0.0;
            int skipped = 0;
            for (int i = 0; i < count; ++i) {
                try {
                    const auto r = transform_residuals(metric, map, samples[i], config.tolerances,
                                                       config.mode);
                    horizontal = std::max(horizontal, r.horizontal);
                    nonlinear = std::max(nonlinear, r.nonlinear);
                    vertical = std::max(vertical, r.vertical);
                } catch (const HypothesisError&) {
                    ++skipped;
                }
            }
            maps.push_back({{"map", name},
                            {"residual_horizontal", horizontal},
                            {"residual_nonlinear", nonlinear},
                            {"residual_vertical", vertical},
                            {"samples", count},
                            {"hypothesis_skipped", skipped}});
        }
        j["verify"] = {{"theorem", "transform"}, {"maps", std::move(maps)}};
        return j;
    }
    if (config.theorem == "lemma-inner") {
        const auto samples = draw_samples(metric, plan);
        Rng rng(config.seed ^ 0x94d049bb133111ebull);
        double lemma = 0.0, pairing = 0.0;
        int skipped = 0;
        for (const auto& p : samples) {
            try {
                PointEvaluation eval(metric, p, config.mode);
                for (int trial = 0; trial < 32; ++trial) {
                    ComplexVector V(metric.n), W(metric.n);
                    for (int a = 0; a < metric.n; ++a) {
                        V[a] = std::complex<double>(rng.uniform(-1, 1), rng.uniform(-1, 1));
                        W[a] = std::complex<double>(rng.uniform(-1, 1), rng.uniform(-1, 1));
                    }
                    lemma = std::max(lemma, lemma_inner_residual(eval, V, W));
                    pairing = std::max(pairing, symmetric_pairing_residual(eval, V, W));
                }
            } catch (const SingularMetricError&) {
                ++skipped;
            }
        }
        j["verify"] = {{"theorem", "lemma-inner"},
                       {"lemma_bilinear_residual", lemma},
                       {"symmetric_pairing_residual", pairing},
                       {"pairs_per_sample", 32},
                       {"skipped_samples", skipped}};
        return j;
    }
    throw ParamError("unknown --theorem (expected A, B, transform, or lemma-inner)");
}

std::string curvature_csv(const HscScan& scan, int n) {
    std::ostringstream out;
    for (int a = 0; a < n; ++a) out << "z_re_" << a + 1 << ",z_im_" << a + 1 << ",";
    for (int a = 0; a < n; ++a) out << "v_re_" << a + 1 << ",v_im_" << a + 1 << ",";
    out << "hsc\n";
    for (std::size_t i = 0; i < scan.samples.size(); ++i) {
        const auto& p = scan.samples[i];
        for (int a = 0; a < n; ++a) out << p.z[a].real() << ',' << p.z[a].imag() << ',';
        for (int a = 0; a < n; ++a) out << p.v[a].real() << ',' << p.v[a].imag() << ',';
        out << scan.per_sample[i] << '\n';
    }
    return out.str();
}

std::string trajectory_csv(const TrajectoryRecord& record) {
    std::ostringstream out;
    const int d = static_cast<int>(record.positions.front().size());
    out << "t";
    for (int i = 0; i < d; ++i) out << ",x_" << i + 1;
    for (int i = 0; i < d; ++i) out << ",y_" << i + 1;
    out << ",f2\n";
    for (std::size_t row = 0; row < record.times.size(); ++row) {
        out << record.times[row];
        for (int i = 0; i < d; ++i) out << ',' << record.positions[row][i];
        for (int i = 0; i < d; ++i) out << ',' << record.velocities[row][i];
        out << ',' << record.energy[row] << '\n';
    }
    return out.str();
}

std::string transport_csv(const TransportResult& result) {
    std::ostringstream out;
    const int d = static_cast<int>(result.vectors.front().size());
    out << "t";
    for (int i = 0; i < d; ++i) out << ",V_re_" << i + 1 << ",V_im_" << i + 1;
    out << ",type01_norm,metric_value\n";
    for (std::size_t row = 0; row < result.times.size(); ++row) {
        out << result.times[row];
        for (int i = 0; i < d; ++i)
            out << ',' << result.vectors[row][i].real() << ',' << result.vectors[row][i].imag();
        out << ',' << result.type01_norm[row] << ',' << result.metric_value[row] << '\n';
    }
    return out.str();
}

} // namespace finsler
