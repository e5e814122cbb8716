#include "finsler/curvature.hpp"

#include <cmath>

#include "finsler/parallel.hpp"

namespace finsler {

std::complex<double> hsc_contraction(PointEvaluation& eval) {
    const int n = eval.n();
    const auto& fc = eval.fundamental_complex();
    const auto& v = eval.point().v;
    std::complex<double> acc = 0.0;
    for (int nu = 0; nu < n; ++nu) {
        const Eigen::MatrixXcd d_nl = eval.chern_nonlinear_derivative(d_zbar(nu));
        for (int a = 0; a < n; ++a)
            for (int m = 0; m < n; ++m) acc += fc.G_v[a] * d_nl(a, m) * v[m] * std::conj(v[nu]);
    }
    return -2.0 * acc / (fc.f2 * fc.f2);
}

double hsc(PointEvaluation& eval) { return hsc_contraction(eval).real(); }

Tensor4c a_tensor(PointEvaluation& eval) {
    const int n = eval.n();
    Tensor4c A(n, n, n, n);
    for (int nu = 0; nu < n; ++nu) {
        const Tensor3c d_h = eval.chern_horizontal_derivative(d_zbar(nu));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int m = 0; m < n; ++m) A(a, b, m, nu) = -d_h(a, b, m);
    }
    return A;
}

RicciResult ricci_and_ke_residual(PointEvaluation& eval, double c) {
    if (c == 0.0) throw ParamError("Kaehler-Einstein residual requires c != 0");
    const int n = eval.n();
    const Tensor4c A = a_tensor(eval);
    RicciResult result;
    result.ricci = Eigen::MatrixXcd::Zero(n, n);
    for (int m = 0; m < n; ++m)
        for (int nu = 0; nu < n; ++nu) {
            std::complex<double> acc = 0.0;
            for (int a = 0; a < n; ++a) acc += A(a, a, m, nu);
            result.ricci(m, nu) = acc;
        }
    const auto& G = eval.fundamental_complex().G;
    const double factor = 4.0 / (c * (n + 1));
    result.ke_residual = (G - factor * result.ricci).cwiseAbs().maxCoeff();
    return result;
}

HscScan constant_hsc_scan(const MetricDefinition& metric, const SamplePlan& plan, double tolerance,
                          DerivativeMode mode) {
    HscScan scan;
    scan.tolerance = tolerance;
    scan.samples = draw_samples(metric, plan);
    scan.per_sample.assign(scan.samples.size(), std::numeric_limits<double>::quiet_NaN());
    std::vector<double> imag(scan.samples.size(), 0.0);

    parallel_for_index(scan.samples.size(), [&](std::size_t i) {
        try {
            PointEvaluation eval(metric, scan.samples[i], mode);
            const auto value = hsc_contraction(eval);
            scan.per_sample[i] = value.real();
            imag[i] = std::abs(value.imag());
        } catch (const Error&) {
            // skipped sample, recorded as NaN
        }
    });

    scan.min = std::numeric_limits<double>::infinity();
    scan.max = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    int valid = 0;
    for (std::size_t i = 0; i < scan.per_sample.size(); ++i) {
        const double value = scan.per_sample[i];
        if (std::isnan(value)) {
            ++scan.skipped;
            continue;
        }
        scan.min = std::min(scan.min, value);
        scan.max = std::max(scan.max, value);
        scan.max_imag = std::max(scan.max_imag, imag[i]);
        sum += value;
        ++valid;
    }
    if (valid > 0) {
        scan.mean = sum / valid;
        double var = 0.0;
        for (double value : scan.per_sample)
            if (!std::isnan(value)) var += (value - scan.mean) * (value - scan.mean);
        scan.stddev = std::sqrt(var / valid);
        scan.constant = (scan.max - scan.min) <= tolerance;
    }
    return scan;
}

} // namespace finsler
