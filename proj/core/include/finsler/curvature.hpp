#pragma once

#include "finsler/catalog.hpp"
#include "finsler/tables.hpp"

namespace finsler {

/// Holomorphic sectional curvature along the point's own fiber direction:
/// c = -2 G_a (d Gamma^a_{;m} / d zbar^nu) v^m conj(v^nu) / G^2.
/// The imaginary part of the contraction is a consistency diagnostic.
std::complex<double> hsc_contraction(PointEvaluation& eval);

double hsc(PointEvaluation& eval);

/// A^a_{b;m nubar} = -d Gamma^a_{b;m} / d zbar^nu (plain chart partial).
Tensor4c a_tensor(PointEvaluation& eval);

/// Ric_{m nubar} = sum_a A^a_{a;m nubar} and the Kaehler-Einstein residual
/// max | G_{m nubar} - 4/(c(n+1)) Ric_{m nubar} |.
struct RicciResult {
    Eigen::MatrixXcd ricci;
    double ke_residual = 0.0;
};

RicciResult ricci_and_ke_residual(PointEvaluation& eval, double c);

struct HscScan {
    std::vector<double> per_sample; // NaN marks a skipped sample
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
    double max_imag = 0.0;
    double tolerance = 0.0;
    bool constant = false;
    int skipped = 0;
    std::vector<PointState> samples;
};

/// Min/max/mean/stddev of hsc over the plan; "constant" when the spread
/// max - min stays within the tolerance.
HscScan constant_hsc_scan(const MetricDefinition& metric, const SamplePlan& plan, double tolerance,
                          DerivativeMode mode = DerivativeMode::jet);

} // namespace finsler
