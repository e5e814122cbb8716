#pragma once

#include <complex>
#include <span>
#include <unordered_map>
#include <vector>

#include "finsler/metric.hpp"

namespace finsler {

/// How partial derivatives of F^2 are produced.
enum class DerivativeMode { jet, fd_oracle };

/// Real coordinate direction on the slit bundle: ids 0..2n-1 are base (x^j),
/// ids 2n..4n-1 are fiber (y^j).
struct RealDir {
    static int base(int j) { return j; }
    static int fiber(int j, int n) { return 2 * n + j; }
};

/// Wirtinger direction.
enum class WKind : std::uint8_t { z, zbar, v, vbar };

struct WDir {
    WKind kind;
    int index; // 0-based, < n
};

inline WDir d_z(int a) { return {WKind::z, a}; }
inline WDir d_zbar(int a) { return {WKind::zbar, a}; }
inline WDir d_v(int a) { return {WKind::v, a}; }
inline WDir d_vbar(int a) { return {WKind::vbar, a}; }

/// Central finite differences: per-order base steps (total derivative order
/// 1..4) with two Richardson extrapolation levels on top. Steps are sized so
/// that rounding noise at h/4 stays below the truncation budget.
struct FdOptions {
    double step[4] = {1e-3, 4e-3, 1.2e-2, 2.4e-2};
    bool richardson = true;
};

/// Central finite-difference estimate of a mixed real partial of F^2; used
/// by tests as an independent oracle and as the fd-oracle derivative mode.
double fd_partial(const MetricDefinition& metric, const PointState& p, std::span<const int> dirs,
                  const FdOptions& options = {});

/// Memoized table of mixed real and Wirtinger partials of F^2 at one point.
/// All requests up to total order 4; one table feeds every coefficient array
/// computed at the point.
class PartialTable {
public:
    PartialTable(const MetricDefinition& metric, const PointState& p,
                 DerivativeMode mode = DerivativeMode::jet, FdOptions fd = {});

    const PointState& point() const { return point_; }
    const MetricDefinition& metric() const { return metric_; }
    DerivativeMode mode() const { return mode_; }
    int n() const { return point_.n; }

    /// F^2 at the point.
    double f2();

    /// Mixed real partial along coordinate ids (order <= 4, order 0 = F^2).
    double real_partial(std::span<const int> dirs);
    double real_partial(std::initializer_list<int> dirs) {
        return real_partial(std::span<const int>(dirs.begin(), dirs.size()));
    }

    /// Mixed Wirtinger partial, assembled from real partials.
    std::complex<double> wirtinger(std::span<const WDir> dirs);
    std::complex<double> wirtinger(std::initializer_list<WDir> dirs) {
        return wirtinger(std::span<const WDir>(dirs.begin(), dirs.size()));
    }

private:
    double evaluate_with_seeds(std::span<const int> sorted_dirs);

    MetricDefinition metric_; // owned: evaluations stay valid for temporaries
    PointState point_;
    DerivativeMode mode_;
    FdOptions fd_;
    std::unordered_map<std::uint32_t, double> real_memo_;
    std::unordered_map<std::uint64_t, std::complex<double>> wirtinger_memo_;
};

} // namespace finsler
