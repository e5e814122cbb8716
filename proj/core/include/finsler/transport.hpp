#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "finsler/tables.hpp"

namespace finsler {

/// Smooth regular curve on the base manifold with its velocity field.
class Curve {
public:
    virtual ~Curve() = default;

    virtual double duration() const = 0;
    virtual void eval(double t, RealVector& position, RealVector& velocity) const = 0;

    /// Straight segment x0 + t * velocity on [0, T].
    static std::unique_ptr<Curve> line(const RealVector& x0, const RealVector& velocity, double T);

    /// Cubic Hermite interpolation of an integrated trajectory.
    static std::unique_ptr<Curve> from_trajectory(const struct TrajectoryRecord& record);
};

struct IntegratorOptions {
    /// When set, each step is checked against two half steps and the
    /// deviation is recorded; StiffnessError when it exceeds the bound.
    bool error_check = false;
    double error_bound = 1e-4;
};

/// Time-stamped geodesic states with per-step energy diagnostics.
struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<RealVector> positions;  // x(t)
    std::vector<RealVector> velocities; // y(t) = dx/dt
    std::vector<double> energy;         // F^2(x; y) per node
    double energy_drift = 0.0;          // max |energy - energy(0)|
    double max_step_error = 0.0;        // step-doubling estimate, if enabled
};

/// Transported vector with per-node diagnostics.
struct TransportResult {
    std::vector<double> times;
    std::vector<ComplexifiedVector> vectors;
    std::vector<double> type01_norm;   // |(0,1) part| per node
    std::vector<double> metric_value;  // Re g(V, conj V) per node
};

/// Integrates the real geodesic equation with classical RK4 on the
/// first-order system (x, y).
TrajectoryRecord integrate_geodesic(const MetricDefinition& metric, const RealVector& x0,
                                    const RealVector& y0, double T, int steps,
                                    const IntegratorOptions& options = {});

/// Parallel transport along a curve with respect to the Cartan connection:
/// dV^k/dt + V^l Gammahat^k_{l;j}(sigma; sigmadot) sigmadot^j = 0.
/// The seed may be complexified; the equation is complex-linear.
TransportResult parallel_transport(const MetricDefinition& metric, const Curve& curve,
                                   const ComplexifiedVector& seed, int steps,
                                   DerivativeMode mode = DerivativeMode::jet);

/// Max over the grid of |(0,1) part| / |seed| for a (1,0)-type seed given by
/// its holomorphic-frame coefficients.
double type_preservation_residual(const MetricDefinition& metric, const Curve& curve,
                                  const ComplexVector& seed10, int steps,
                                  DerivativeMode mode = DerivativeMode::jet);

/// Max over the grid of |transport(J V0) - J transport(V0)| / |V0|.
double j_commutation_residual(const MetricDefinition& metric, const Curve& curve,
                              const RealVector& seed, int steps,
                              DerivativeMode mode = DerivativeMode::jet);

} // namespace finsler
