#include "finsler/classify.hpp"

#include <cmath>

#include "finsler/parallel.hpp"
#include "finsler/rng.hpp"
#include "finsler/transport.hpp"

namespace finsler {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

/// Largest entry deviation between two complex coefficient tensors.
double tensor_deviation(const Tensor3c& a, const Tensor3c& b) {
    double worst = 0.0;
    for (int i = 0; i < a.dim0(); ++i)
        for (int j = 0; j < a.dim1(); ++j)
            for (int k = 0; k < a.dim2(); ++k)
                worst = std::max(worst, std::abs(a(i, j, k) - b(i, j, k)));
    return worst;
}

double tensor_deviation(const Tensor3d& a, const Tensor3d& b) {
    double worst = 0.0;
    for (int i = 0; i < a.dim0(); ++i)
        for (int j = 0; j < a.dim1(); ++j)
            for (int k = 0; k < a.dim2(); ++k)
                worst = std::max(worst, std::abs(a(i, j, k) - b(i, j, k)));
    return worst;
}

/// Re-draws of the fiber vector over a fixed base point, for the sampled
/// "independence of v" routes.
std::vector<ComplexVector> fiber_redraws(int n, std::uint64_t seed, int count) {
    Rng rng(seed);
    std::vector<ComplexVector> draws;
    draws.reserve(count);
    for (int i = 0; i < count; ++i) {
        const RealVector dir = rng.sphere(2 * n);
        const double scale = rng.uniform(0.5, 1.5);
        ComplexVector v(n);
        for (int a = 0; a < n; ++a) v[a] = scale * std::complex<double>(dir[a], dir[a + n]);
        draws.push_back(std::move(v));
    }
    return draws;
}

} // namespace

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::indeterminate: return "indeterminate";
    case Verdict::fails: return "fails";
    }
    return "unknown";
}

Verdict verdict_for(double max_residual, double tolerance) {
    if (!(max_residual > tolerance)) return Verdict::holds;
    if (max_residual <= 10.0 * tolerance) return Verdict::indeterminate;
    return Verdict::fails;
}

const PredicateResult* ClassificationReport::find(const std::string& name) const {
    for (const auto& p : predicates)
        if (p.name == name) return &p;
    return nullptr;
}

double residual_kahler_finsler(PointEvaluation& eval) {
    const auto& h = eval.chern().horizontal;
    const int n = eval.n();
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int m = b; m < n; ++m) worst = std::max(worst, std::abs(h(a, b, m) - h(a, m, b)));
    return worst;
}

double residual_weakly_kahler(PointEvaluation& eval) {
    const auto& h = eval.chern().horizontal;
    const auto& G_v = eval.fundamental_complex().G_v;
    const auto& v = eval.point().v;
    const int n = eval.n();
    double worst = 0.0;
    for (int m = 0; m < n; ++m) {
        std::complex<double> acc = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) acc += G_v[a] * (h(a, b, m) - h(a, m, b)) * v[b];
        worst = std::max(worst, std::abs(acc));
    }
    return worst;
}

double residual_complex_berwald(PointEvaluation& eval) {
    const int n = eval.n();
    double worst = 0.0;
    for (int g = 0; g < n; ++g) {
        worst = std::max(worst, eval.chern_horizontal_derivative(d_v(g)).max_abs());
        worst = std::max(worst, eval.chern_horizontal_derivative(d_vbar(g)).max_abs());
    }
    return worst;
}

double residual_locally_minkowski(PointEvaluation& eval) {
    const int n = eval.n();
    double worst = 0.0;
    for (int m = 0; m < n; ++m) {
        worst = std::max(worst, eval.chern_horizontal_derivative(d_z(m)).max_abs());
        worst = std::max(worst, eval.chern_horizontal_derivative(d_zbar(m)).max_abs());
    }
    return worst;
}

double residual_landsberg(PointEvaluation& eval) { return eval.berwald().landsberg.max_abs(); }

double residual_hermitian_quadratic(PointEvaluation& eval) {
    const int n = eval.n();
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int g = 0; g < n; ++g) {
                worst = std::max(worst, std::abs(eval.partials().wirtinger({d_v(a), d_vbar(b), d_v(g)})));
                worst = std::max(worst, std::abs(eval.partials().wirtinger({d_v(a), d_vbar(b), d_vbar(g)})));
            }
    return worst;
}

double residual_J_horizontal(PointEvaluation& eval) {
    const auto& h = eval.cartan().horizontal;
    const int n = eval.n();
    double worst = 0.0;
    for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a)
            for (int j = 0; j < 2 * n; ++j) {
                worst = std::max(worst, std::abs(h(b, a + n, j) + h(b + n, a, j)));
                worst = std::max(worst, std::abs(h(b + n, a + n, j) - h(b, a, j)));
            }
    return worst;
}

double residual_J_vertical(PointEvaluation& eval) {
    const auto& t = eval.cartan().vertical;
    const int n = eval.n();
    double worst = 0.0;
    for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a)
            for (int j = 0; j < 2 * n; ++j) {
                worst = std::max(worst, std::abs(t(b, a + n, j) + t(b + n, a, j)));
                worst = std::max(worst, std::abs(t(b + n, a + n, j) - t(b, a, j)));
            }
    return worst;
}

double residual_H_J_invariance(PointEvaluation& eval) {
    const auto& nl = eval.spray().nonlinear;
    const int n = eval.n();
    double worst = 0.0;
    for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a) {
            worst = std::max(worst, std::abs(nl(b, a + n) + nl(b + n, a)));
            worst = std::max(worst, std::abs(nl(b + n, a + n) - nl(b, a)));
        }
    return worst;
}

CoincidenceResiduals residual_connection_coincidence(PointEvaluation& eval) {
    const auto& chern = eval.chern();
    const auto& ntab = eval.n_coeffs();
    CoincidenceResiduals r;
    r.horizontal = tensor_deviation(chern.horizontal, ntab.horizontal);
    r.vertical = tensor_deviation(chern.vertical, ntab.vertical);
    r.nonlinear = max_abs(chern.nonlinear - ntab.nonlinear);
    return r;
}

ClassificationReport classify(const MetricDefinition& metric, const SamplePlan& plan,
                              const Tolerances& tolerances, DerivativeMode mode) {
    const double tol = tolerances.residual(mode);
    const auto samples = draw_samples(metric, plan);
    const auto redraws = fiber_redraws(metric.n, plan.seed ^ 0x5bd1e9955bd1e995ull, 5);

    struct SampleRow {
        bool ok = false;
        std::map<std::string, double> values;
    };
    std::vector<SampleRow> rows(samples.size());

    parallel_for_index(samples.size(), [&](std::size_t i) {
        SampleRow row;
        try {
            PointEvaluation eval(metric, samples[i], mode);
            row.values["kahler_finsler"] = residual_kahler_finsler(eval);
            row.values["weakly_kahler"] = residual_weakly_kahler(eval);

            // Two independent routes for the fiber/base independence
            // predicates: derivative residuals plus re-evaluation spread.
            double berwald_dev = residual_complex_berwald(eval);
            double hermitian_dev = residual_hermitian_quadratic(eval);
            double real_berwald_dev = 0.0;
            const auto& base_chern = eval.chern().horizontal;
            const auto& base_berwald = eval.berwald().coefficients;
            const auto& base_G = eval.fundamental_complex().G;
            for (const ComplexVector& w : redraws) {
                PointEvaluation other(metric, PointState::from_complex(samples[i].z, w), mode);
                berwald_dev = std::max(berwald_dev, tensor_deviation(base_chern, other.chern().horizontal));
                real_berwald_dev =
                    std::max(real_berwald_dev,
                             tensor_deviation(base_berwald, other.berwald().coefficients));
                hermitian_dev = std::max(hermitian_dev, max_abs(base_G - other.fundamental_complex().G));
            }
            row.values["complex_berwald"] = berwald_dev;
            row.values["locally_minkowski"] = residual_locally_minkowski(eval);
            row.values["kahler_berwald"] = std::max(row.values["kahler_finsler"], berwald_dev);
            row.values["landsberg"] = residual_landsberg(eval);
            row.values["real_berwald"] = real_berwald_dev;
            row.values["hermitian_quadratic"] = hermitian_dev;
            row.values["J_horizontal_parallel"] = residual_J_horizontal(eval);
            row.values["J_vertical_parallel"] = residual_J_vertical(eval);
            row.values["H_J_invariant"] = residual_H_J_invariance(eval);
            const auto coincidence = residual_connection_coincidence(eval);
            row.values["coincidence_horizontal"] = coincidence.horizontal;
            row.values["coincidence_vertical"] = coincidence.vertical;
            row.values["coincidence_nonlinear"] = coincidence.nonlinear;
            row.ok = true;
        } catch (const SingularMetricError&) {
            row.ok = false;
        }
        rows[i] = std::move(row);
    });

    static const char* kPredicateOrder[] = {
        "kahler_finsler",     "weakly_kahler",         "complex_berwald",
        "locally_minkowski",  "kahler_berwald",        "landsberg",
        "real_berwald",       "hermitian_quadratic",   "J_horizontal_parallel",
        "J_vertical_parallel", "H_J_invariant",        "coincidence_horizontal",
        "coincidence_vertical", "coincidence_nonlinear"};

    ClassificationReport report;
    report.metric_label = metric.label;
    report.metric_params = metric.params;
    report.plan = plan;
    report.mode = mode;
    for (const char* name : kPredicateOrder) {
        PredicateResult result;
        result.name = name;
        result.tolerance = tol;
        result.per_sample.reserve(rows.size());
        for (const auto& row : rows)
            result.per_sample.push_back(row.ok ? row.values.at(name) : kNaN);
        result.max_residual = 0.0;
        for (double v : result.per_sample)
            if (!std::isnan(v)) result.max_residual = std::max(result.max_residual, v);
        result.verdict = verdict_for(result.max_residual, tol);
        report.predicates.push_back(std::move(result));
    }
    for (const auto& row : rows)
        if (!row.ok) ++report.skipped_samples;

    auto verdict_of = [&report](const std::string& name) {
        return report.find(name)->verdict;
    };
    auto implication = [&](const std::string& name, Verdict lhs, Verdict rhs, bool iff) {
        ImplicationCheck check;
        check.name = name;
        if (lhs == Verdict::indeterminate || rhs == Verdict::indeterminate) {
            check.consistent = true;
            check.detail = "skipped: verdict indeterminate near tolerance";
        } else {
            const bool l = lhs == Verdict::holds;
            const bool r = rhs == Verdict::holds;
            check.consistent = iff ? (l == r) : (!l || r);
            check.detail = check.consistent ? "consistent" : "violated";
        }
        report.implications.push_back(std::move(check));
        return report.implications.back().consistent;
    };
    implication("kahler_finsler => weakly_kahler", verdict_of("kahler_finsler"),
                verdict_of("weakly_kahler"), false);
    implication("kahler_berwald <=> J_horizontal_parallel", verdict_of("kahler_berwald"),
                verdict_of("J_horizontal_parallel"), true);
    implication("J_horizontal_parallel => H_J_invariant", verdict_of("J_horizontal_parallel"),
                verdict_of("H_J_invariant"), false);
    implication("kahler_berwald => landsberg", verdict_of("kahler_berwald"), verdict_of("landsberg"),
                false);
    {
        // Full parallelism of J against coincidence of the two connections.
        const Verdict jh = verdict_of("J_horizontal_parallel");
        const Verdict jv = verdict_of("J_vertical_parallel");
        const Verdict both = (jh == Verdict::indeterminate || jv == Verdict::indeterminate)
                                 ? Verdict::indeterminate
                                 : ((jh == Verdict::holds && jv == Verdict::holds) ? Verdict::holds
                                                                                   : Verdict::fails);
        const Verdict ch = verdict_of("coincidence_horizontal");
        const Verdict cv = verdict_of("coincidence_vertical");
        const Verdict cn = verdict_of("coincidence_nonlinear");
        Verdict coincide = Verdict::holds;
        for (Verdict v : {ch, cv, cn}) {
            if (v == Verdict::indeterminate) coincide = Verdict::indeterminate;
            if (v == Verdict::fails && coincide != Verdict::indeterminate) coincide = Verdict::fails;
        }
        implication("(J_horizontal & J_vertical) <=> connection_coincidence", both, coincide, true);
    }
    return report;
}

EquivalenceReport verify_equivalences(const MetricDefinition& metric, const SamplePlan& plan,
                                      const Tolerances& tolerances, DerivativeMode mode,
                                      const EquivalenceOptions& options) {
    const double tol = tolerances.residual(mode);
    const auto classification = classify(metric, plan, tolerances, mode);

    EquivalenceReport report;
    report.metric_label = metric.label;
    report.plan = plan;
    report.skipped_samples = classification.skipped_samples;

    auto residual_of = [&](const char* name) { return classification.find(name)->max_residual; };
    auto holds = [&](const char* name) {
        return classification.find(name)->verdict == Verdict::holds;
    };

    // Connection-coincidence characterization.
    {
        TheoremCheck check;
        check.name = "cartan_chern_coincidence";
        const bool j_parallel = holds("J_horizontal_parallel") && holds("J_vertical_parallel");
        const double j_res =
            std::max(residual_of("J_horizontal_parallel"), residual_of("J_vertical_parallel"));
        const double c_res = std::max({residual_of("coincidence_horizontal"),
                                       residual_of("coincidence_vertical"),
                                       residual_of("coincidence_nonlinear")});
        const bool coincide = c_res <= tol;
        check.legs.push_back({"J_parallel", true, j_parallel, j_res});
        check.legs.push_back({"connections_coincide", true, coincide, c_res});
        check.consistent = j_parallel == coincide;
        check.detail = check.consistent ? "both directions consistent at all samples"
                                        : "equivalence violated";
        report.checks.push_back(std::move(check));
    }

    // Transport characterization of Kaehler-Berwald metrics; the transport
    // legs apply under the weakly Kaehler hypothesis only.
    {
        TheoremCheck check;
        check.name = "kahler_berwald_transport";
        const bool weakly = holds("weakly_kahler");
        const bool kb = holds("kahler_berwald");
        const bool horizontal = holds("J_horizontal_parallel");
        check.legs.push_back({"weakly_kahler_hypothesis", true, weakly, residual_of("weakly_kahler")});
        check.legs.push_back({"kahler_berwald", true, kb, residual_of("kahler_berwald")});
        check.legs.push_back(
            {"J_horizontal_parallel", true, horizontal, residual_of("J_horizontal_parallel")});

        bool transport_ok = true;
        bool transport_ran = false;
        double type_res = 0.0, comm_res = 0.0;
        if (weakly) {
            const auto samples = draw_samples(metric, plan);
            Rng rng(plan.seed ^ 0xa076bdf3155c861full);
            const int probes = std::min<int>(options.transport_probes,
                                             static_cast<int>(samples.size()));
            for (int i = 0; i < probes; ++i) {
                const auto& p = samples[i];
                try {
                    const auto trajectory =
                        integrate_geodesic(metric, p.x, p.y, 1.0, options.transport_steps);
                    const auto curve = Curve::from_trajectory(trajectory);
                    ComplexVector seed(metric.n);
                    for (int a = 0; a < metric.n; ++a)
                        seed[a] = std::complex<double>(rng.uniform(-1, 1), rng.uniform(-1, 1));
                    type_res = std::max(type_res, type_preservation_residual(
                                                      metric, *curve, seed, options.transport_steps, mode));
                    RealVector real_seed(2 * metric.n);
                    for (int j = 0; j < 2 * metric.n; ++j) real_seed[j] = rng.uniform(-1, 1);
                    comm_res = std::max(comm_res, j_commutation_residual(
                                                      metric, *curve, real_seed, options.transport_steps, mode));
                    transport_ran = true;
                } catch (const Error&) {
                    // domain exit or stiffness on a probe: skip it
                }
            }
            transport_ok = type_res <= tolerances.ode && comm_res <= tolerances.ode;
        }
        check.legs.push_back({"type_preservation", weakly && transport_ran,
                              weakly && transport_ran && type_res <= tolerances.ode, type_res});
        check.legs.push_back({"J_commutation", weakly && transport_ran,
                              weakly && transport_ran && comm_res <= tolerances.ode, comm_res});

        if (!weakly) {
            check.consistent = true;
            check.detail = "transport legs skipped: weakly Kaehler hypothesis fails";
        } else if (!transport_ran) {
            check.consistent = kb == horizontal;
            check.detail = "transport probes unavailable (domain exits)";
        } else {
            check.consistent = (kb == horizontal) && (kb == transport_ok);
            check.detail = check.consistent ? "all legs agree in both directions"
                                            : "equivalence violated";
        }
        report.checks.push_back(std::move(check));
    }

    report.all_consistent = true;
    for (const auto& c : report.checks) report.all_consistent &= c.consistent;
    return report;
}

} // namespace finsler
