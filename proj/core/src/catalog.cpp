#include "finsler/catalog.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "finsler/derivatives.hpp"
#include "finsler/rng.hpp"

namespace finsler {

namespace {

using JetSpan = std::span<const ComplexJet>;

Jet norm2(JetSpan w) {
    Jet s;
    for (const ComplexJet& c : w) s += abs2(c);
    return s;
}

/// <z, v> = sum z^a conj(v^a).
ComplexJet hermitian_pairing(JetSpan z, JetSpan v) {
    ComplexJet s;
    for (std::size_t a = 0; a < z.size(); ++a) s += z[a] * conj(v[a]);
    return s;
}

bool ball_domain(const ComplexVector& z) { return z.squaredNorm() < 1.0 - 1e-10; }

bool polydisk_domain(const ComplexVector& z) {
    for (int a = 0; a < z.size(); ++a)
        if (std::norm(z[a]) >= 1.0 - 1e-10) return false;
    return true;
}

} // namespace

MetricDefinition make_euclidean(int n) {
    if (n < 1) throw ParamError("euclidean requires n >= 1");
    MetricDefinition m;
    m.n = n;
    m.label = "euclidean(n=" + std::to_string(n) + ")";
    m.params = {{"n", static_cast<double>(n)}};
    m.evaluate = [](JetSpan, JetSpan v) { return ComplexJet(norm2(v)); };
    m.sample_domain = {SampleDomain::Kind::all, 0.7};
    return m;
}

MetricDefinition make_minkowski_tk(int n, double t, int k) {
    if (n < 2) throw ParamError("minkowski_tk requires n >= 2");
    if (t < 0.0) throw ParamError("minkowski_tk requires t >= 0");
    if (k < 2) throw ParamError("minkowski_tk requires integer k >= 2");
    MetricDefinition m;
    m.n = n;
    m.label = "minkowski_tk(n=" + std::to_string(n) + ",t=" + std::to_string(t) +
              ",k=" + std::to_string(k) + ")";
    m.params = {{"n", static_cast<double>(n)}, {"t", t}, {"k", static_cast<double>(k)}};
    m.evaluate = [t, k](JetSpan, JetSpan v) {
        Jet f2 = norm2(v);
        if (t > 0.0) {
            Jet s;
            for (const ComplexJet& c : v) s += pow(abs2(c), Rational(k));
            f2 += t * sqrt(s);
        }
        return ComplexJet(f2);
    };
    m.sample_domain = {SampleDomain::Kind::all, 0.7};
    return m;
}

MetricDefinition make_bergman_ball(int n, double c) {
    if (n < 1) throw ParamError("bergman_ball requires n >= 1");
    if (c >= 0.0) throw ParamError("bergman_ball requires c < 0");
    MetricDefinition m;
    m.n = n;
    m.label = "bergman_ball(n=" + std::to_string(n) + ",c=" + std::to_string(c) + ")";
    m.params = {{"n", static_cast<double>(n)}, {"c", c}};
    m.evaluate = [c](JetSpan z, JetSpan v) {
        const Jet d = 1.0 - norm2(z);
        if (d.value() <= 1e-10) throw DomainError("bergman_ball: base point outside the unit ball");
        const Jet numerator = d * norm2(v) + abs2(hermitian_pairing(z, v));
        return ComplexJet((-4.0 / c) * numerator * reciprocal(d * d));
    };
    m.in_domain = ball_domain;
    m.sample_domain = {SampleDomain::Kind::ball, 0.7};
    return m;
}

MetricDefinition make_fubini_study(int n, double c) {
    if (n < 1) throw ParamError("fubini_study requires n >= 1");
    if (c <= 0.0) throw ParamError("fubini_study requires c > 0");
    MetricDefinition m;
    m.n = n;
    m.label = "fubini_study(n=" + std::to_string(n) + ",c=" + std::to_string(c) + ")";
    m.params = {{"n", static_cast<double>(n)}, {"c", c}};
    m.evaluate = [c](JetSpan z, JetSpan v) {
        const Jet d = 1.0 + norm2(z);
        const Jet numerator = d * norm2(v) - abs2(hermitian_pairing(z, v));
        return ComplexJet((4.0 / c) * numerator * reciprocal(d * d));
    };
    m.sample_domain = {SampleDomain::Kind::all, 0.7};
    return m;
}

MetricDefinition make_hermitian_nonkahler() {
    MetricDefinition m;
    m.n = 2;
    m.label = "hermitian_nonkahler(n=2)";
    m.params = {{"n", 2.0}};
    m.evaluate = [](JetSpan z, JetSpan v) {
        return ComplexJet((1.0 + abs2(z[1])) * abs2(v[0]) + abs2(v[1]));
    };
    m.sample_domain = {SampleDomain::Kind::all, 0.7};
    return m;
}

MetricDefinition make_polydisk_tk(int n, double t, int k) {
    if (n < 2) throw ParamError("polydisk_tk requires n >= 2");
    if (t < 0.0) throw ParamError("polydisk_tk requires t >= 0");
    if (k < 2) throw ParamError("polydisk_tk requires integer k >= 2");
    MetricDefinition m;
    m.n = n;
    m.label = "polydisk_tk(n=" + std::to_string(n) + ",t=" + std::to_string(t) +
              ",k=" + std::to_string(k) + ")";
    m.params = {{"n", static_cast<double>(n)}, {"t", t}, {"k", static_cast<double>(k)}};
    m.evaluate = [t, k](JetSpan z, JetSpan v) {
        Jet f2;
        Jet root_arg;
        for (std::size_t a = 0; a < z.size(); ++a) {
            const Jet d = 1.0 - abs2(z[a]);
            if (d.value() <= 1e-10) throw DomainError("polydisk_tk: base point outside the polydisk");
            const Jet w2 = abs2(v[a]) * reciprocal(d * d);
            f2 += w2;
            if (t > 0.0) root_arg += pow(w2, Rational(k));
        }
        if (t > 0.0) f2 += t * sqrt(root_arg);
        return ComplexJet(f2);
    };
    m.in_domain = polydisk_domain;
    m.sample_domain = {SampleDomain::Kind::polydisk, 0.7};
    return m;
}

std::vector<PointState> draw_samples(const MetricDefinition& metric, const SamplePlan& plan) {
    Rng rng(plan.seed);
    std::vector<PointState> samples;
    samples.reserve(plan.count);
    const int n = metric.n;
    while (static_cast<int>(samples.size()) < plan.count) {
        ComplexVector z(n);
        switch (metric.sample_domain.kind) {
        case SampleDomain::Kind::all:
        case SampleDomain::Kind::ball: z = rng.complex_ball(n, metric.sample_domain.radius); break;
        case SampleDomain::Kind::polydisk:
            z = rng.complex_polydisk(n, metric.sample_domain.radius);
            break;
        }
        const RealVector dir = rng.sphere(2 * n);
        const double scale = rng.uniform(plan.v_scale_min, plan.v_scale_max);
        ComplexVector v(n);
        for (int a = 0; a < n; ++a) v[a] = scale * std::complex<double>(dir[a], dir[a + n]);
        if (!metric.contains(z)) continue;
        samples.push_back(PointState::from_complex(z, v));
    }
    return samples;
}

AdmissibilityReport validate(const MetricDefinition& metric, const SamplePlan& plan) {
    AdmissibilityReport report;
    report.metric_label = metric.label;
    report.min_eig_real = std::numeric_limits<double>::infinity();
    report.min_eig_complex = std::numeric_limits<double>::infinity();

    const auto samples = draw_samples(metric, plan);
    Rng scale_rng(plan.seed ^ 0x9e3779b97f4a7c15ull);
    for (const PointState& p : samples) {
        AdmissibilitySample s;
        try {
            PartialTable table(metric, p);
            const int n = p.n;

            std::vector<ComplexJet> zj(n), vj(n);
            for (int a = 0; a < n; ++a) {
                zj[a] = ComplexJet(p.z[a]);
                vj[a] = ComplexJet(p.v[a]);
            }
            const ComplexJet f2 = metric.evaluate(zj, vj);
            s.f2 = f2.re.value();
            s.imag_residual = std::abs(f2.im.value());

            // Homogeneity F^2(z; lambda v) = |lambda|^2 F^2(z; v) for one real
            // and one complex scale.
            const double lr = scale_rng.uniform(0.4, 2.0);
            const double phase = scale_rng.uniform(0.0, 2.0 * M_PI);
            const std::complex<double> lc =
                scale_rng.uniform(0.4, 2.0) * std::complex<double>(std::cos(phase), std::sin(phase));
            const double base = std::abs(s.f2) > 1e-30 ? std::abs(s.f2) : 1.0;
            const double real_scaled = evaluate_f2(metric, p.z, ComplexVector(lr * p.v));
            const double complex_scaled = evaluate_f2(metric, p.z, ComplexVector(lc * p.v));
            s.homogeneity_residual =
                std::max(std::abs(real_scaled - lr * lr * s.f2), std::abs(complex_scaled - std::norm(lc) * s.f2)) /
                base;

            const int d = 2 * n;
            Eigen::MatrixXd g(d, d);
            for (int j = 0; j < d; ++j)
                for (int k = j; k < d; ++k) {
                    const int dirs[2] = {RealDir::fiber(j, n), RealDir::fiber(k, n)};
                    g(j, k) = g(k, j) = 0.5 * table.real_partial(std::span<const int>(dirs, 2));
                }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ges(g);
            const double gmin = ges.eigenvalues().minCoeff();
            const double gmax = ges.eigenvalues().cwiseAbs().maxCoeff();
            s.min_eig_real = gmin;
            s.condition_real = gmin > 0.0 ? gmax / gmin : std::numeric_limits<double>::infinity();

            Eigen::MatrixXcd G(n, n);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    const WDir dirs[2] = {d_v(a), d_vbar(b)};
                    G(a, b) = table.wirtinger(std::span<const WDir>(dirs, 2));
                }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ces(G);
            s.min_eig_complex = ces.eigenvalues().minCoeff();

            s.admissible = s.f2 > 0.0 && s.imag_residual <= 1e-10 && s.homogeneity_residual <= 1e-9 &&
                           s.min_eig_real > 0.0 && s.min_eig_complex > 0.0;
            if (!s.admissible) s.failure = "positivity/reality/homogeneity/definiteness check failed";
        } catch (const Error& err) {
            s.admissible = false;
            s.failure = err.what();
        }
        if (!s.admissible) ++report.failures;
        report.min_eig_real = std::min(report.min_eig_real, s.min_eig_real);
        report.min_eig_complex = std::min(report.min_eig_complex, s.min_eig_complex);
        report.max_condition = std::max(report.max_condition, s.condition_real);
        report.samples.push_back(std::move(s));
    }
    report.admissible = report.failures == 0;
    return report;
}

MetricDefinition make_catalog_metric(const std::string& id, const CatalogParams& params) {
    const int n = params.n.value_or(2);
    if (id == "euclidean") return make_euclidean(n);
    if (id == "minkowski_tk") return make_minkowski_tk(n, params.t.value_or(0.5), params.k.value_or(2));
    if (id == "bergman" || id == "bergman_ball") return make_bergman_ball(n, params.c.value_or(-4.0));
    if (id == "fubini_study") return make_fubini_study(n, params.c.value_or(4.0));
    if (id == "hermitian_nonkahler") return make_hermitian_nonkahler();
    if (id == "polydisk_tk") return make_polydisk_tk(n, params.t.value_or(0.5), params.k.value_or(2));
    throw ParamError("unknown catalog metric id: " + id);
}

std::vector<std::string> catalog_ids() {
    return {"euclidean", "minkowski_tk", "bergman_ball", "fubini_study", "hermitian_nonkahler",
            "polydisk_tk"};
}

} // namespace finsler
