#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "finsler/metric.hpp"

namespace finsler {

/// Euclidean metric F^2 = sum |v^a|^2.
MetricDefinition make_euclidean(int n);

/// Complex Minkowski metric f_{t,k}^2 = sum |v^a|^2 + t sqrt(sum |v^a|^2k),
/// t >= 0, integer k >= 2, n >= 2.
MetricDefinition make_minkowski_tk(int n, double t, int k);

/// Constant multiple of the Bergman metric on the unit ball, c < 0:
/// F^2 = -(4/c) [(1-|z|^2)|v|^2 + |<z,v>|^2] / (1-|z|^2)^2.
MetricDefinition make_bergman_ball(int n, double c);

/// Constant multiple of the Fubini-Study metric in the affine chart, c > 0:
/// F^2 = (4/c) [(1+|z|^2)|v|^2 - |<z,v>|^2] / (1+|z|^2)^2.
MetricDefinition make_fubini_study(int n, double c);

/// Hermitian-quadratic non-Kaehler fixture on C^2:
/// F^2 = (1+|z^2|^2)|v^1|^2 + |v^2|^2.
MetricDefinition make_hermitian_nonkahler();

/// Product-type stress case on the polydisk:
/// F^2 = sum |v^i|^2/(1-|z^i|^2)^2 + t sqrt(sum |v^i|^2k/(1-|z^i|^2)^2k).
MetricDefinition make_polydisk_tk(int n, double t, int k);

/// Sampling plan: all randomness in a run flows from the one seed.
struct SamplePlan {
    int count = 32;
    std::uint64_t seed = 42;
    double v_scale_min = 0.5;
    double v_scale_max = 1.5;
};

/// Draws `plan.count` admissible point states inside the metric's safe
/// sample domain; v uniform on the unit sphere, then rescaled.
std::vector<PointState> draw_samples(const MetricDefinition& metric, const SamplePlan& plan);

/// One positivity/reality/homogeneity/definiteness check at a sample.
struct AdmissibilitySample {
    double f2 = 0.0;
    double imag_residual = 0.0;
    double homogeneity_residual = 0.0;
    double min_eig_real = 0.0;
    double min_eig_complex = 0.0;
    double condition_real = 0.0;
    bool admissible = false;
    std::string failure;
};

struct AdmissibilityReport {
    std::string metric_label;
    bool admissible = false;
    double min_eig_real = 0.0;
    double min_eig_complex = 0.0;
    double max_condition = 0.0;
    int failures = 0;
    std::vector<AdmissibilitySample> samples;
};

/// Validates a metric over a sample plan. Mathematical failures are reported
/// as verdicts, never thrown.
AdmissibilityReport validate(const MetricDefinition& metric, const SamplePlan& plan);

/// Catalog registry for the CLI: id -> constructor over (n, c, t, k).
struct CatalogParams {
    std::optional<int> n;
    std::optional<double> c;
    std::optional<double> t;
    std::optional<int> k;
};

MetricDefinition make_catalog_metric(const std::string& id, const CatalogParams& params);
std::vector<std::string> catalog_ids();

} // namespace finsler
